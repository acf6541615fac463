"""
Parameter sets for the published figures. Rates are in units of the
reference inverse decay rate; `quoted` holds the published sqrt(eta_M)
values the runs are compared against.
"""

from math import pi

GATED = {
    'strategy': 'coupling_gate',
    'kappa': 4.,
    'g': 2.,
    'gamma': 0.01,
    'T': 4.,
    'n_bar': 20.,
}

PRESETS = {
    'fig3': {
        'benchmark': 'threshold',
        'n_bar_min': 0.1,
        'n_bar_max': 50.,
        'n_bar_points': 500,
    },
    'fig4': {
        'benchmark': 'arbitrary',
        'eta_points': 101,
    },
    'fig5': {
        'strategy': 'qswitch',
        'kappa': 1.,
        'kappa_s': 0.1,
        'T': 2.,
    },
    'fig6': dict(GATED, sweep='gamma', values=(0.01, 0.05), quoted=(0.95, 0.80)),
    'fig7': dict(GATED, quoted=(0.95,)),
    'fig8': dict(GATED, sweep='T', values=(4., 8., 15.), quoted=(0.95, 0.91, 0.85)),
    'fig9': {
        'strategy': 'detuning_gate',
        'kappa': 4.,
        'g': 'critical',
        'gamma': 0.01,
        'delta_l': 27 * pi,
        'T': 4.,
        'n_bar': 20.,
    },
}
