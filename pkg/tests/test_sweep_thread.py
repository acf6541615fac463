import pytest

from fidelity import Alphabet, mc_avg_fidelity
from sweep_thread import SweepRunner, thread_limit


def test_results_come_back_in_item_order():
    runner = SweepRunner()
    assert runner.map(lambda x: x * x, range(20)) == [x * x for x in range(20)]


def test_empty_sweep():
    assert SweepRunner().map(lambda x: x, []) == []


def test_first_failure_is_reraised():
    def job(x):
        if x in (3, 7):
            raise ValueError("row {}".format(x))
        return x

    with pytest.raises(ValueError, match="row 3"):
        SweepRunner().map(job, range(10))


def test_thread_cap_from_environment(monkeypatch):
    monkeypatch.setenv('QMEM_THREADS', '2')
    assert thread_limit() == 2
    assert SweepRunner().threadpool.maxThreadCount() == 2


@pytest.mark.parametrize("value", ['0', 'many'])
def test_bad_thread_cap(monkeypatch, value):
    monkeypatch.setenv('QMEM_THREADS', value)
    with pytest.raises(ValueError, match='QMEM_THREADS'):
        thread_limit()


@pytest.mark.parametrize("threads", ['1', '3'])
def test_estimate_does_not_depend_on_worker_count(monkeypatch, threads):
    alphabet = Alphabet.bounded(3)
    serial = mc_avg_fidelity(0.4, alphabet, samples=1200, seed=9, shard_size=250)
    monkeypatch.setenv('QMEM_THREADS', threads)
    pooled = mc_avg_fidelity(0.4, alphabet, samples=1200, seed=9, shard_size=250, runner=SweepRunner())
    assert pooled == serial
