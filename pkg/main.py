import argparse
import logging
from signal import SIGINT, SIGTERM, signal
from sys import argv, exit

from PyQt5.QtCore import QThreadPool

from cli.commands import cmd_benchmark, cmd_modes, cmd_simulate, cmd_sweep
from cli.config import build_config, parse_items
from cli.presets import PRESETS
from data_store import DataStore
from errors import ConfigError, NumericalGuardError
from sweep_thread import SweepRunner

log = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"


def configure_logging(verbosity=0):
    level = {-1: logging.WARNING, 0: logging.INFO}.get(verbosity, logging.DEBUG)
    logging.basicConfig(level=level, format=LOG_FORMAT)


def _key_value(text):
    key, sep, value = text.partition('=')
    if not sep:
        raise argparse.ArgumentTypeError("expected KEY=VALUE, got {!r}".format(text))
    return key.strip(), value.strip()


def build_parser():
    parser = argparse.ArgumentParser(prog='qmem', description="Cavity-oscillator quantum memory simulator")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_const', const=1, dest='verbosity', default=0)
    verbosity.add_argument('-q', '--quiet', action='store_const', const=-1, dest='verbosity')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--preset', choices=sorted(PRESETS))
    common.add_argument('--config', help="flat `key = value` scenario file")
    common.add_argument('--out', help="output path prefix")
    common.add_argument('--dt', type=float, help="integration step")
    common.add_argument('--seed', type=int)
    common.add_argument('--mc-samples', type=int, dest='mc_samples')
    common.add_argument('-s', '--set', type=_key_value, action='append', default=[], metavar='KEY=VALUE',
                        help="override any scenario key")

    commands = parser.add_subparsers(dest='command', required=True)
    commands.add_parser('simulate', parents=[common], help="write/store/read time series")
    commands.add_parser('benchmark', parents=[common], help="fidelity benchmark tables")
    commands.add_parser('sweep', parents=[common], help="efficiency and fidelity vs T or gamma")
    commands.add_parser('modes', parents=[common], help="dump input mode functions")
    return parser


class Main:
    def __init__(self, args=None):
        self.args = build_parser().parse_args(args)
        configure_logging(self.args.verbosity)
        self.threadpool = QThreadPool()
        self.datastore = DataStore()
        signal(SIGTERM, self.terminate_process)
        signal(SIGINT, self.terminate_process)

    def config(self):
        args = self.args
        overrides = parse_items(dict(args.set))
        overrides.update({key: getattr(args, key) for key in ('out', 'dt', 'seed', 'mc_samples')
                          if getattr(args, key) is not None})
        return build_config(args.preset, args.config, overrides)

    def dispatch(self, config):
        command = self.args.command
        if command == 'simulate':
            return cmd_simulate(config, self.datastore)
        if command == 'benchmark':
            return cmd_benchmark(config, self.datastore, SweepRunner(self.threadpool))
        if command == 'sweep':
            return cmd_sweep(config, self.datastore, SweepRunner(self.threadpool))
        return cmd_modes(config, self.datastore)

    def run(self):
        try:
            self.dispatch(self.config())
        except ConfigError as e:
            log.error("config: %s", e)
            return e.exit_code
        except NumericalGuardError as e:
            log.error("numerical guard: %s", e)
            return e.exit_code
        except ValueError as e:
            log.error("invalid parameters: %s", e)
            return ConfigError.exit_code
        return 0

    def at_exit(self):
        self.threadpool.clear()
        self.threadpool.waitForDone()

    def terminate_process(self, signal, _stack):
        log.warning("interrupted, dropping queued rows")
        self.at_exit()
        exit(1)


if __name__ == "__main__":
    exit(Main(argv[1:]).run())
