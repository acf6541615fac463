import logging

from protocols.coupling_gate import CouplingGate
from protocols.detuning_gate import DetuningGate
from protocols.qswitch import QSwitch
from protocols.strategy import Strategy

log = logging.getLogger(__name__)

DRIVERS = (QSwitch, CouplingGate, DetuningGate)


class Protocols:
    def __init__(self):
        self.drivers = {}
        self.discover()

    def list(self):
        return list(self.drivers)

    def get(self, name):
        try:
            return self.drivers[name]
        except KeyError:
            raise ValueError("unknown strategy {!r}, expected one of {}".format(
                name, ', '.join(self.drivers))) from None

    def discover(self):
        for driver in DRIVERS:
            self.drivers[driver.name] = driver()
            log.debug("registered strategy %s", driver.name)


registry = Protocols()


def driver_for(strategy) -> Strategy:
    return registry.get(strategy)


def build_protocol(strategy, **params):
    """MemoryProtocol for a strategy tag and named parameters."""
    return driver_for(strategy).build(**params)
