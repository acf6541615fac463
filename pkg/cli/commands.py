import logging
from math import ceil, nan

import numpy as np
import pandas as pd

from data_store import DataStore
from dynamics import analytic_efficiency, retrieve
from fidelity import (arb_avg_fidelity, benchmark, classical_bound_arbitrary, classical_bound_coherent,
                      coherent_avg_fidelity, threshold_efficiency)
from modes import TimeGrid, atomic_input_mode, critical_input_mode, gram_matrix, laguerre_input_mode
from protocols.strategy import HORIZON_DECAYS
from schedule import COUPLING_GATE

log = logging.getLogger(__name__)

QUOTE_TOLERANCE = 0.01

THRESHOLD_COLUMNS = ['n_bar', 'threshold_efficiency', 'classical_bound', 'threshold_fidelity']
ARBITRARY_COLUMNS = ['eta', 'f2', 'f3', 'bound_2', 'bound_3']
VERDICT_COLUMNS = ['eta', 'avg_fidelity', 'classical_bound', 'is_quantum', 'mc_stderr']
SWEEP_COLUMNS = ['analytic', 'measured', 'phase', 'avg_fidelity', 'classical_bound', 'is_quantum',
                 'quoted', 'note']


def _map(runner, job, items):
    if runner is None:
        return [job(item) for item in items]
    return runner.map(job, items)


def cmd_simulate(config, store=None):
    """Run one write/store/read cycle, write the time series and print the summary line."""
    if store is None:
        store = DataStore()
    protocol = config.protocol()
    retrieval = retrieve(protocol, config.dt)
    eta, phase = retrieval.beamsplitter()
    measured = retrieval.efficiency
    analytic = analytic_efficiency(protocol)

    sim = retrieval.simulation
    stride = ceil((sim.grid.n_points - 1) / (config.export_points - 1))
    path = store.write(config.out, 'simulate', sim.to_frame(stride))

    summary = {
        'strategy': protocol.strategy,
        'measured': measured,
        'analytic': analytic,
        'diff': measured - analytic,
        'phase': phase,
        'eta': eta,
        'path': path,
    }
    line = "{}: sqrt(eta_M) measured {:.6f} analytic {:.6f} diff {:+.2e} phase {:+.4f} rad eta_M {:.6f}".format(
        protocol.strategy, measured, analytic, measured - analytic, phase, eta)
    if len(config.quoted) == 1:
        summary['quoted'] = config.quoted[0]
        line += " quoted {:g}".format(config.quoted[0])
    print(line)
    return summary


def cmd_benchmark(config, store=None, runner=None):
    if store is None:
        store = DataStore()
    if config.benchmark == 'threshold':
        store.reset(THRESHOLD_COLUMNS)
        for n_bar in np.linspace(config.n_bar_min, config.n_bar_max, config.n_bar_points):
            root = threshold_efficiency(n_bar)
            store.append({
                'n_bar': n_bar,
                'threshold_efficiency': root,
                'classical_bound': classical_bound_coherent(n_bar),
                'threshold_fidelity': coherent_avg_fidelity(root ** 2, n_bar),
            })
    elif config.benchmark == 'arbitrary':
        store.reset(ARBITRARY_COLUMNS)
        for eta in np.linspace(0., 1., config.eta_points):
            store.append({
                'eta': eta,
                'f2': arb_avg_fidelity(eta, 2),
                'f3': arb_avg_fidelity(eta, 3),
                'bound_2': classical_bound_arbitrary(2),
                'bound_3': classical_bound_arbitrary(3),
            })
    else:
        alphabet = config.alphabet()
        store.reset(VERDICT_COLUMNS)
        for eta in np.linspace(0., 1., config.eta_points):
            result = benchmark(eta, alphabet, config.mc_samples, config.seed, runner)
            store.append({
                'eta': eta,
                'avg_fidelity': result.avg_fidelity,
                'classical_bound': result.classical_bound,
                'is_quantum': result.is_quantum,
                'mc_stderr': nan if result.mc_stderr is None else result.mc_stderr,
            })
    return store.write(config.out, 'benchmark')


def cmd_sweep(config, store=None, runner=None):
    """One retrieval per swept value; rows are written in sweep order."""
    if store is None:
        store = DataStore()
    variable = config.sweep
    store.reset([variable, *SWEEP_COLUMNS])
    alphabet = config.alphabet()
    quoted = config.quoted or (None,) * len(config.values)

    def sweep_row(item):
        value, quote = item
        protocol = config.protocol(**{variable: value})
        retrieval = retrieve(protocol, config.dt)
        eta, phase = retrieval.beamsplitter()
        analytic = analytic_efficiency(protocol)
        result = benchmark(eta, alphabet, config.mc_samples, config.seed)
        note = ''
        if quote is not None and abs(quote - analytic) > QUOTE_TOLERANCE:
            note = "quoted {:g} differs from analytic {:.4f}".format(quote, analytic)
            log.warning("%s = %g: %s", variable, value, note)
        return {
            variable: value,
            'analytic': analytic,
            'measured': retrieval.efficiency,
            'phase': phase,
            'avg_fidelity': result.avg_fidelity,
            'classical_bound': result.classical_bound,
            'is_quantum': result.is_quantum,
            'quoted': nan if quote is None else quote,
            'note': note,
        }

    store.extend(_map(runner, sweep_row, list(zip(config.values, quoted))))
    return store.write(config.out, 'sweep')


def _mode_columns(frame, name, mode):
    frame[name + '_re'] = mode.samples.real
    frame[name + '_im'] = mode.samples.imag


def cmd_modes(config, store=None):
    """Dump input mode functions on the write window."""
    if store is None:
        store = DataStore()
    if config.mode == 'laguerre':
        kappa = config.kappa or 1.
        t_w = config.t_w or HORIZON_DECAYS / kappa
        grid = TimeGrid(-t_w, 0., config.export_points)
        modes = [laguerre_input_mode(n, kappa, grid) for n in range(config.n_modes)]
        deviation = np.abs(gram_matrix(modes) - np.eye(len(modes))).max()
        log.info("Laguerre Gram matrix deviates from identity by %.3g", deviation)
    else:
        g = 'critical' if config.mode == 'critical' else config.g
        protocol = config.updated(strategy=COUPLING_GATE, g=g, gamma=config.gamma or 0., T=config.T or 0.).protocol()
        kappa, gamma, g, delta, _ = protocol.write_rates()
        grid = TimeGrid(protocol.t_start, 0., config.export_points)
        if config.mode == 'critical':
            modes = [critical_input_mode(kappa, gamma, grid)]
        else:
            modes = [atomic_input_mode(kappa, gamma, g, delta, grid)]

    frame = {'t': grid.times}
    for n, mode in enumerate(modes):
        _mode_columns(frame, 'u{}'.format(n), mode)
    return store.write(config.out, 'modes', pd.DataFrame(frame))
