"""
Average-fidelity benchmarks for a memory acting as a loss channel.

Two input alphabets are supported: coherent states drawn from a Gaussian
of mean photon number n_bar, and Haar-random pure states with at most
n_m - 1 photons. Closed forms exist for the coherent alphabet and for
n_m in {2, 3}; everything else goes through the Monte Carlo estimator,
which pushes sampled states through the Fock-space loss channel.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from fockchannel import PureState, coherent_state, fidelity_pure_mixed, loss_channel

log = logging.getLogger(__name__)

COHERENT = 'coherent_gaussian'
BOUNDED = 'bounded_arbitrary'

MIN_SAMPLES = 100
SHARD_SIZE = 2000


def _check_eta(eta):
    if not 0 <= eta <= 1:
        raise ValueError("eta_M must be in [0, 1], got {}".format(eta))


def _check_n_bar(n_bar):
    if n_bar < 0:
        raise ValueError("n_bar must be >= 0, got {}".format(n_bar))


def coherent_fidelity(eta_M, alpha):
    """|<alpha|sqrt(eta) alpha>|^2 for a single coherent state."""
    _check_eta(eta_M)
    return float(np.exp(-abs(alpha) ** 2 * (1 - np.sqrt(eta_M)) ** 2))


def coherent_avg_fidelity(eta_M, n_bar):
    _check_eta(eta_M)
    _check_n_bar(n_bar)
    return 1 / (1 + n_bar * (1 - np.sqrt(eta_M)) ** 2)


def classical_bound_coherent(n_bar):
    _check_n_bar(n_bar)
    return (1 + n_bar) / (2 * n_bar + 1)


def threshold_efficiency(n_bar):
    """Smallest sqrt(eta_M) beating the classical coherent-state bound."""
    _check_n_bar(n_bar)
    return 1 - 1 / np.sqrt(n_bar + 1)


def arb_avg_fidelity(eta_M, n_m):
    _check_eta(eta_M)
    root = np.sqrt(eta_M)
    if n_m == 2:
        return (eta_M + 2 * root + 3) / 6
    if n_m == 3:
        return (eta_M ** 2 + 2 * eta_M * root + 3 * eta_M + 2 * root + 4) / 12
    raise ValueError("no closed form for n_m = {}; use mc_avg_fidelity".format(n_m))


def classical_bound_arbitrary(n_m):
    if n_m < 1:
        raise ValueError("n_m must be >= 1, got {}".format(n_m))
    return 2 / (n_m + 1)


@dataclass(frozen=True)
class Alphabet:
    kind: str
    value: float

    def __post_init__(self):
        if self.kind == COHERENT:
            _check_n_bar(self.value)
        elif self.kind == BOUNDED:
            if self.value != int(self.value) or self.value < 1:
                raise ValueError("n_m must be an integer >= 1, got {}".format(self.value))
            object.__setattr__(self, 'value', int(self.value))
        else:
            raise ValueError("unknown alphabet {!r}".format(self.kind))

    @classmethod
    def coherent(cls, n_bar):
        return cls(COHERENT, float(n_bar))

    @classmethod
    def bounded(cls, n_m):
        return cls(BOUNDED, n_m)

    @property
    def tag(self):
        return "{}({:g})".format(self.kind, self.value)

    def __str__(self):
        return self.tag

    def classical_bound(self):
        if self.kind == COHERENT:
            return classical_bound_coherent(self.value)
        return classical_bound_arbitrary(self.value)

    def draw(self, rng: np.random.Generator, count):
        """count input states from the alphabet's measure."""
        if self.kind == COHERENT:
            x, y = rng.standard_normal((2, count))
            for alpha in np.sqrt(self.value / 2) * (x + 1j * y):
                yield coherent_state(alpha)
        else:
            z = rng.standard_normal((count, self.value)) + 1j * rng.standard_normal((count, self.value))
            for row in z / np.linalg.norm(z, axis=1, keepdims=True):
                yield PureState(row)


@dataclass(frozen=True)
class BenchmarkResult:
    avg_fidelity: float
    classical_bound: float
    is_quantum: bool
    alphabet: Alphabet
    mc_stderr: Optional[float] = None

    def __post_init__(self):
        if self.is_quantum != (self.avg_fidelity > self.classical_bound):
            raise ValueError("verdict disagrees with {} vs bound {}".format(
                self.avg_fidelity, self.classical_bound))

    @classmethod
    def judge(cls, avg_fidelity, alphabet: Alphabet, mc_stderr=None):
        bound = alphabet.classical_bound()
        return cls(avg_fidelity, bound, bool(avg_fidelity > bound), alphabet, mc_stderr)


def _shard_sizes(samples, shard_size):
    full, rest = divmod(samples, shard_size)
    return [shard_size] * full + ([rest] if rest else [])


def mc_avg_fidelity(eta_M, alphabet: Alphabet, samples=100000, seed=0, runner=None,
                    shard_size=SHARD_SIZE):
    """
    Monte Carlo estimate of the alphabet-averaged fidelity.

    Samples are split into fixed-size shards with seeds spawned from
    SeedSequence(seed), so the estimate depends only on (seed, samples,
    shard_size). A SweepRunner may evaluate shards concurrently.

    Returns (mean, stderr).
    """
    _check_eta(eta_M)
    if samples < MIN_SAMPLES:
        raise ValueError("need at least {} samples, got {}".format(MIN_SAMPLES, samples))

    sizes = _shard_sizes(samples, shard_size)
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    def shard(index):
        rng = np.random.default_rng(seeds[index])
        return np.array([fidelity_pure_mixed(psi, loss_channel(psi, eta_M))
                         for psi in alphabet.draw(rng, sizes[index])])

    log.debug("%s: %d samples in %d shards at eta %.6g", alphabet, samples, len(sizes), eta_M)
    if runner is None:
        values = [shard(index) for index in range(len(sizes))]
    else:
        values = runner.map(shard, range(len(sizes)))
    values = np.concatenate(values)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(values.size))


def benchmark(eta_M, alphabet: Alphabet, samples=100000, seed=0, runner=None) -> BenchmarkResult:
    """Closed form where one exists, Monte Carlo otherwise, judged against the classical bound."""
    if alphabet.kind == COHERENT:
        return BenchmarkResult.judge(coherent_avg_fidelity(eta_M, alphabet.value), alphabet)
    if alphabet.value in (2, 3):
        return BenchmarkResult.judge(arb_avg_fidelity(eta_M, alphabet.value), alphabet)
    mean, stderr = mc_avg_fidelity(eta_M, alphabet, samples, seed, runner)
    return BenchmarkResult.judge(mean, alphabet, stderr)
