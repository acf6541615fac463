"""
Fixed detuning, gated coupling: g is switched off for storage while the
cavity decay rate stays fixed.
"""

from math import exp

from modes import atomic_input_mode
from protocols.strategy import Strategy
from schedule import ControlSchedule


def gated_efficiency(kappa, gamma, g, T):
    """
    sqrt(eta_M) = kappa (g^2 e^{-gamma T} - gamma^2 e^{-kappa T}) / ((kappa gamma + g^2)(kappa + gamma)).

    Written without the cooperativity C = g^2/(kappa gamma) so that
    gamma = 0 stays regular.
    """
    numerator = kappa * (g ** 2 * exp(-gamma * T) - gamma ** 2 * exp(-kappa * T))
    return numerator / ((kappa * gamma + g ** 2) * (kappa + gamma))


class CouplingGate(Strategy):
    name = Strategy.COUPLING_GATE
    REQUIRED = ('kappa', 'g', 'gamma', 'T')

    def schedules(self, params):
        T = params['T']
        return {
            'kappa': ControlSchedule.constant(params['kappa']),
            'g': ControlSchedule.stages((0., T), (params['g'], 0., params['g'])),
            'delta_cavity': ControlSchedule.constant(0.),
            'delta_osc': ControlSchedule.constant(0.),
        }

    def input_mode(self, protocol, grid):
        kappa, gamma, g, delta, _ = protocol.write_rates()
        return atomic_input_mode(kappa, gamma, g, delta, grid)

    def analytic_efficiency(self, protocol):
        p = protocol.params
        return gated_efficiency(p['kappa'], p['gamma'], p['g'], protocol.storage_time)
