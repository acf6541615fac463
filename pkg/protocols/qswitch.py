"""
Q-switched empty cavity: the coupler is opened to write, nearly closed
to store and opened again to read.
"""

from math import exp

from modes import laguerre_input_mode
from protocols.strategy import Strategy
from schedule import ControlSchedule


class QSwitch(Strategy):
    name = Strategy.QSWITCH
    REQUIRED = ('kappa', 'kappa_s', 'T')
    DEFAULTS = {'gamma': 0.}

    def schedules(self, params):
        T = params['T']
        kappa, kappa_s = params['kappa'], params['kappa_s']
        return {
            'kappa': ControlSchedule.stages((0., T), (kappa, kappa_s, kappa)),
            'g': ControlSchedule.constant(0.),
            'delta_cavity': ControlSchedule.constant(0.),
            'delta_osc': ControlSchedule.constant(0.),
        }

    def write_rate(self, params):
        return params['kappa']

    def input_mode(self, protocol, grid):
        kappa, *_ = protocol.write_rates()
        return laguerre_input_mode(0, kappa, grid)

    def analytic_efficiency(self, protocol):
        return exp(-protocol.params['kappa_s'] * protocol.storage_time)
