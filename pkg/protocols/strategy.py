import logging

import numpy as np

from modes import coupled_rates
from schedule import COUPLING_GATE, DETUNING_GATE, QSWITCH, MemoryProtocol

log = logging.getLogger(__name__)

HORIZON_DECAYS = 20.0


class Strategy:
    """
    A gating strategy: how the control schedules are laid out, which input
    envelope is matched to the write stage and what the closed-form
    efficiency is.
    """
    QSWITCH = QSWITCH
    COUPLING_GATE = COUPLING_GATE
    DETUNING_GATE = DETUNING_GATE

    name = None
    REQUIRED = ()
    DEFAULTS = {}
    RATES = ('kappa', 'kappa_s', 'g', 'gamma', 'delta_l')

    def schedules(self, params):
        """kappa, g, delta_cavity and delta_osc schedules for the params."""
        raise NotImplementedError

    def input_mode(self, protocol, grid):
        raise NotImplementedError

    def analytic_efficiency(self, protocol):
        raise NotImplementedError

    def write_rate(self, params):
        """Slowest positive decay rate of the write stage."""
        kappa_plus, _, m = coupled_rates(params['kappa'], params.get('gamma', 0.), params.get('g', 0.), 0.)
        rates = [r for r in (np.real(kappa_plus + m), np.real(kappa_plus - m)) if r > 1e-12]
        return min(rates)

    def check(self, params):
        missing = [key for key in self.REQUIRED if key not in params]
        if missing:
            raise ValueError("{} needs parameters {}".format(self.name, ', '.join(missing)))
        unknown = set(params) - set(self.REQUIRED) - set(self.DEFAULTS) - {'t_w', 'read_horizon'}
        if unknown:
            raise ValueError("{} does not take parameters {}".format(self.name, ', '.join(sorted(unknown))))
        for key in self.RATES:
            if key in params and params[key] < 0:
                raise ValueError("{} must be >= 0, got {}".format(key, params[key]))
        if params['kappa'] <= 0:
            raise ValueError("kappa must be > 0, got {}".format(params['kappa']))
        if params['T'] < 0:
            raise ValueError("storage time T must be >= 0, got {}".format(params['T']))

    def build(self, **params):
        params = dict(self.DEFAULTS, **params)
        if params.get('g') == 'critical':
            params['g'] = (params['kappa'] - params.get('gamma', 0.)) / 2
        params = {k: float(v) for k, v in params.items() if v is not None}
        self.check(params)

        t_w = params.get('t_w') or HORIZON_DECAYS / self.write_rate(params)
        read_horizon = params.get('read_horizon') or t_w
        log.debug("%s horizons: write %.6g read %.6g", self.name, t_w, read_horizon)

        return MemoryProtocol(
            strategy=self.name,
            gamma=params.get('gamma', 0.),
            storage_time=params['T'],
            write_horizon=t_w,
            read_horizon=read_horizon,
            params=params,
            **self.schedules(params),
        )
