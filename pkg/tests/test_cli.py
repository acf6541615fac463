from math import exp

import numpy as np
import pandas as pd
import pytest

import main
from cli.commands import cmd_simulate
from cli.config import ScenarioConfig, build_config, read_config_file
from cli.presets import PRESETS
from errors import ConfigError


@pytest.fixture(autouse=True)
def keep_signal_handlers(monkeypatch):
    monkeypatch.setattr(main, 'signal', lambda *args: None)


@pytest.fixture
def prefix(tmp_path):
    return str(tmp_path / 'qmem')


def run(*args):
    return main.Main(list(args)).run()


def test_presets_cover_every_figure():
    assert sorted(PRESETS) == ['fig{}'.format(n) for n in range(3, 10)]
    for name in PRESETS:
        build_config(name)


def test_threshold_table(prefix):
    assert run('benchmark', '--preset', 'fig3', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_benchmark.csv')
    assert list(table.columns) == ['n_bar', 'threshold_efficiency', 'classical_bound', 'threshold_fidelity']
    row = table.iloc[(table['n_bar'] - 20).abs().idxmin()]
    assert row['n_bar'] == pytest.approx(20.)
    assert row['threshold_efficiency'] == pytest.approx(0.782, abs=2e-3)
    assert row['classical_bound'] == pytest.approx(0.512, abs=2e-3)
    np.testing.assert_allclose(table['threshold_fidelity'], table['classical_bound'], rtol=1e-9)


def test_arbitrary_state_table(prefix):
    assert run('benchmark', '--preset', 'fig4', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_benchmark.csv')
    first, last = table.iloc[0], table.iloc[-1]
    assert (first['eta'], first['f2'], first['f3']) == (0., 0.5, pytest.approx(1 / 3))
    assert (last['eta'], last['f2'], last['f3']) == (1., 1., 1.)


def test_verdict_table_is_deterministic(tmp_path):
    outputs = []
    for name in ('a', 'b'):
        prefix = str(tmp_path / name)
        assert run('benchmark', '--set', 'benchmark=verdict', '--set', 'n_m=4', '--set', 'eta_points=3',
                   '--mc-samples', '300', '--seed', '5', '--out', prefix) == 0
        with open(prefix + '_benchmark.csv') as f:
            outputs.append(f.read())
    assert outputs[0] == outputs[1]
    table = pd.read_csv(str(tmp_path / 'a') + '_benchmark.csv')
    assert list(table['is_quantum']) == [False, True, True]


def test_simulate_qswitch(prefix, capsys):
    assert run('simulate', '--preset', 'fig5', '--out', prefix) == 0
    line = capsys.readouterr().out
    assert 'measured 0.81' in line
    assert 'analytic {:.6f}'.format(exp(-0.2)) in line
    assert 'diff' in line
    series = pd.read_csv(prefix + '_simulate.csv')
    assert series.shape[0] <= 4001
    assert {'t', 'A_in_re', 'abs_a', 'abs_b', 'A_out_re'} <= set(series.columns)


def test_simulate_summary_values(prefix):
    summary = cmd_simulate(build_config('fig5', overrides={'out': prefix}))
    assert summary['measured'] == pytest.approx(0.8187, abs=1e-3)
    assert abs(summary['diff']) < 1e-3

    summary = cmd_simulate(build_config('fig7', overrides={'out': prefix}))
    assert summary['measured'] == pytest.approx(0.949, abs=5e-3)
    assert summary['quoted'] == 0.95


def test_storage_time_sweep(prefix):
    assert run('sweep', '--preset', 'fig8', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_sweep.csv', keep_default_na=False)
    assert list(table['T']) == [4., 8., 15.]
    np.testing.assert_allclose(table['analytic'], [0.94891, 0.91170, 0.85006], atol=1e-4)
    np.testing.assert_allclose(table['measured'], table['analytic'], atol=5e-3)
    np.testing.assert_allclose(table['avg_fidelity'], [0.950, 0.865, 0.690], atol=5e-3)
    assert list(table['is_quantum']) == [True, True, True]
    assert list(table['note']) == ['', '', '']


def test_decay_sweep_flags_the_quoted_discrepancy(prefix):
    assert run('sweep', '--preset', 'fig6', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_sweep.csv', keep_default_na=False)
    np.testing.assert_allclose(table['measured'], [0.949, 0.770], atol=5e-3)
    assert list(table['quoted']) == [0.95, 0.80]
    assert table['note'][0] == ''
    assert 'differs from analytic' in table['note'][1]


def test_empty_sweep_writes_header_only(prefix):
    assert run('sweep', '--preset', 'fig8', '--set', 'values=', '--set', 'quoted=', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_sweep.csv')
    assert table.shape[0] == 0
    assert list(table.columns)[:3] == ['T', 'analytic', 'measured']


def test_sweep_respects_thread_cap(prefix, monkeypatch):
    monkeypatch.setenv('QMEM_THREADS', '1')
    assert run('sweep', '--preset', 'fig8', '--set', 'values=4, 8', '--set', 'quoted=', '--out', prefix) == 0
    assert list(pd.read_csv(prefix + '_sweep.csv')['T']) == [4., 8.]


def test_config_file_layers_under_flags(tmp_path, prefix):
    path = tmp_path / 'scenario.cfg'
    path.write_text("# coupling gate at critical damping\n"
                    "strategy = coupling_gate\n"
                    "kappa = 4\n"
                    "g = critical\n"
                    "gamma = 0.01\n"
                    "T = 4   \n"
                    "\n"
                    "values = 4, 8\n")
    assert read_config_file(str(path))['g'] == 'critical'
    config = build_config(config_path=str(path), overrides={'T': 8.})
    assert config.T == 8.
    assert config.values == (4., 8.)
    assert config.protocol().params['g'] == pytest.approx(1.995)
    assert config.protocol(gamma=0.05).params['g'] == pytest.approx(1.975)


def test_file_overrides_preset(tmp_path):
    path = tmp_path / 'slow.cfg'
    path.write_text("kappa_s = 0.2\n")
    assert build_config('fig5', str(path)).kappa_s == 0.2


def test_modes_dump(prefix):
    assert run('modes', '--set', 'n_modes=3', '--set', 'export_points=2001', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_modes.csv')
    assert list(table.columns) == ['t', 'u0_re', 'u0_im', 'u1_re', 'u1_im', 'u2_re', 'u2_im']
    assert table.shape[0] == 2001


def test_critical_mode_dump(prefix):
    assert run('modes', '--preset', 'fig7', '--set', 'mode=critical', '--out', prefix) == 0
    table = pd.read_csv(prefix + '_modes.csv')
    assert table['u0_re'].abs().max() < 1e-12
    assert (table['u0_im'].iloc[:-1] > 0).all()


@pytest.mark.parametrize("args", [
    ('simulate', '--set', 'no_such_key=1'),
    ('simulate', '--set', 'kappa=fast'),
    ('simulate', '--preset', 'fig5', '--set', 'kappa_s=-1'),
    ('simulate', '--set', 'kappa=1'),
    ('sweep', '--preset', 'fig7', '--set', 'values=4', '--set', 'quoted=0.9, 0.8'),
    ('benchmark', '--set', 'benchmark=verdict'),
])
def test_config_errors_exit_2(args, prefix):
    assert run(*args, '--out', prefix) == 2


def test_missing_config_file_exits_2(tmp_path, prefix):
    assert run('simulate', '--config', str(tmp_path / 'missing.cfg'), '--out', prefix) == 2


def test_unknown_preset_is_a_usage_error():
    with pytest.raises(SystemExit) as exit_info:
        run('simulate', '--preset', 'fig1')
    assert exit_info.value.code == 2


def test_coarse_step_exits_3(prefix):
    assert run('simulate', '--preset', 'fig5', '--dt', '0.5', '--out', prefix) == 3


def test_scenario_defaults():
    config = ScenarioConfig()
    assert config.export_points == 4001
    assert config.mc_samples == 100000
    with pytest.raises(ConfigError):
        config.alphabet()
    with pytest.raises(ConfigError):
        config.protocol()


@pytest.mark.slow
def test_simulate_detuning_gate(prefix):
    summary = cmd_simulate(build_config('fig9', overrides={'out': prefix}))
    assert summary['measured'] == pytest.approx(summary['analytic'], rel=0.05)
