"""
Scenario configuration: preset, then `key = value` file, then flags.
"""

import logging
from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple, Union

import pandas as pd

from cli.presets import PRESETS
from errors import ConfigError
from fidelity import Alphabet
from protocols import build_protocol, driver_for

log = logging.getLogger(__name__)

CRITICAL = 'critical'
BENCHMARK_MODES = ('threshold', 'arbitrary', 'verdict')
SWEEP_VARIABLES = ('T', 'gamma')
MODE_KINDS = ('laguerre', 'atomic', 'critical')
HORIZON_KEYS = ('t_w', 'read_horizon')


def _float(text):
    return float(text)


def _int(text):
    value = float(text)
    if value != int(value):
        raise ValueError("not an integer")
    return int(value)


def _rate_or_critical(text):
    text = text.strip()
    return CRITICAL if text.lower() == CRITICAL else float(text)


def _floats(text):
    return tuple(float(v) for v in text.replace(',', ' ').split())


def _text(text):
    return text.strip()


CONVERTERS = {
    'strategy': _text,
    'kappa': _float,
    'kappa_s': _float,
    'g': _rate_or_critical,
    'gamma': _float,
    'delta_l': _float,
    'T': _float,
    'n_bar': _float,
    'n_m': _int,
    'dt': _float,
    't_w': _float,
    'read_horizon': _float,
    'mc_samples': _int,
    'seed': _int,
    'out': _text,
    'export_points': _int,
    'benchmark': _text,
    'eta_points': _int,
    'n_bar_min': _float,
    'n_bar_max': _float,
    'n_bar_points': _int,
    'sweep': _text,
    'values': _floats,
    'quoted': _floats,
    'mode': _text,
    'n_modes': _int,
}


@dataclass(frozen=True)
class ScenarioConfig:
    strategy: Optional[str] = None
    kappa: Optional[float] = None
    kappa_s: Optional[float] = None
    g: Union[float, str, None] = None
    gamma: Optional[float] = None
    delta_l: Optional[float] = None
    T: Optional[float] = None
    n_bar: Optional[float] = None
    n_m: Optional[int] = None

    dt: Optional[float] = None
    t_w: Optional[float] = None
    read_horizon: Optional[float] = None
    mc_samples: int = 100000
    seed: int = 0
    out: str = 'qmem'
    export_points: int = 4001

    benchmark: str = 'verdict'
    eta_points: int = 101
    n_bar_min: float = 0.1
    n_bar_max: float = 50.
    n_bar_points: int = 500

    sweep: str = 'T'
    values: Tuple[float, ...] = ()
    quoted: Tuple[float, ...] = ()

    mode: str = 'laguerre'
    n_modes: int = 4

    def __post_init__(self):
        if self.benchmark not in BENCHMARK_MODES:
            raise ConfigError("benchmark must be one of {}, got {!r}".format(
                ', '.join(BENCHMARK_MODES), self.benchmark))
        if self.sweep not in SWEEP_VARIABLES:
            raise ConfigError("sweep must be one of {}, got {!r}".format(
                ', '.join(SWEEP_VARIABLES), self.sweep))
        if self.mode not in MODE_KINDS:
            raise ConfigError("mode must be one of {}, got {!r}".format(', '.join(MODE_KINDS), self.mode))
        if self.quoted and len(self.quoted) != max(1, len(self.values)):
            raise ConfigError("{} quoted values for {} sweep values".format(len(self.quoted), len(self.values)))
        if self.mc_samples < 100:
            raise ConfigError("mc_samples must be >= 100, got {}".format(self.mc_samples))
        for key in ('export_points', 'eta_points', 'n_bar_points'):
            if getattr(self, key) < 2:
                raise ConfigError("{} must be >= 2, got {}".format(key, getattr(self, key)))
        if self.n_modes < 1:
            raise ConfigError("n_modes must be >= 1, got {}".format(self.n_modes))
        if not 0 <= self.n_bar_min < self.n_bar_max:
            raise ConfigError("need 0 <= n_bar_min < n_bar_max")
        for key in ('dt', 't_w', 'read_horizon'):
            value = getattr(self, key)
            if value is not None and value <= 0:
                raise ConfigError("{} must be > 0, got {}".format(key, value))

    def updated(self, **changes) -> 'ScenarioConfig':
        return replace(self, **changes)

    def protocol_params(self, **changes):
        """Named parameters the configured strategy takes, with overrides."""
        if not self.strategy:
            raise ConfigError("no strategy configured")
        try:
            driver = driver_for(self.strategy)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        keys = (*driver.REQUIRED, *driver.DEFAULTS, *HORIZON_KEYS)
        params = {key: getattr(self, key) for key in keys}
        params.update(changes)
        return {key: value for key, value in params.items() if value is not None}

    def protocol(self, **changes):
        params = self.protocol_params(**changes)
        try:
            return build_protocol(self.strategy, **params)
        except ValueError as e:
            raise ConfigError(str(e)) from None

    def alphabet(self) -> Alphabet:
        try:
            if self.n_bar is not None:
                return Alphabet.coherent(self.n_bar)
            if self.n_m is not None:
                return Alphabet.bounded(self.n_m)
        except ValueError as e:
            raise ConfigError(str(e)) from None
        raise ConfigError("configure n_bar (coherent alphabet) or n_m (bounded alphabet)")


def parse_items(items):
    """Typed values for raw `key -> text` pairs."""
    parsed = {}
    for key, text in items.items():
        if key not in CONVERTERS:
            raise ConfigError("unknown config key {!r}".format(key))
        try:
            parsed[key] = CONVERTERS[key](text)
        except ValueError:
            raise ConfigError("bad value for {}: {!r}".format(key, text)) from None
    return parsed


def read_config_file(file_path):
    """Raw `key -> text` pairs of a flat `key = value` file."""
    try:
        table = pd.read_csv(file_path, sep='=', comment='#', header=None, names=['key', 'value'],
                            dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        return {}
    except (OSError, pd.errors.ParserError) as e:
        raise ConfigError("cannot read config {}: {}".format(file_path, e)) from None
    items = {}
    for key, value in zip(table['key'], table['value']):
        key = str(key).strip()
        if not key:
            continue
        items[key] = '' if pd.isna(value) else str(value).strip()
    log.debug("read %d keys from %s", len(items), file_path)
    return items


def build_config(preset=None, config_path=None, overrides=None) -> ScenarioConfig:
    values = {}
    if preset:
        if preset not in PRESETS:
            raise ConfigError("unknown preset {!r}, expected one of {}".format(preset, ', '.join(PRESETS)))
        values.update(PRESETS[preset])
    if config_path:
        values.update(parse_items(read_config_file(config_path)))
    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})

    known = {f.name for f in fields(ScenarioConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError("unknown config keys: {}".format(', '.join(sorted(unknown))))
    return ScenarioConfig(**values)
