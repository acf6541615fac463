"""
Fixed coupling, gated detuning: the oscillator is pushed to +Delta_L for
the first half of storage and to -Delta_L for the second half so the
accumulated phase cancels.
"""

import warnings

from modes import atomic_input_mode
from protocols.coupling_gate import gated_efficiency
from protocols.strategy import Strategy
from schedule import ControlSchedule


class DetuningGate(Strategy):
    name = Strategy.DETUNING_GATE
    REQUIRED = ('kappa', 'g', 'gamma', 'delta_l', 'T')

    def check(self, params):
        super().check(params)
        if params['delta_l'] <= max(params['kappa'], params['gamma']):
            warnings.warn("Delta_L = {:g} does not exceed max(kappa, gamma) = {:g}; "
                          "the oscillator stays coupled during storage".format(
                              params['delta_l'], max(params['kappa'], params['gamma'])),
                          RuntimeWarning, stacklevel=4)

    def schedules(self, params):
        T, delta_l = params['T'], params['delta_l']
        return {
            'kappa': ControlSchedule.constant(params['kappa']),
            'g': ControlSchedule.constant(params['g']),
            'delta_cavity': ControlSchedule.constant(0.),
            'delta_osc': ControlSchedule.stages((0., T / 2, T), (0., delta_l, -delta_l, 0.)),
        }

    def input_mode(self, protocol, grid):
        kappa, gamma, g, delta, _ = protocol.write_rates()
        return atomic_input_mode(kappa, gamma, g, delta, grid)

    def analytic_efficiency(self, protocol):
        # at g = (kappa - gamma)/2 the denominator is (kappa + gamma)^3 / 4
        p = protocol.params
        return gated_efficiency(p['kappa'], p['gamma'], p['g'], protocol.storage_time)
