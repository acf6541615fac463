"""
Single-mode loss channel in a truncated Fock space.

A linear memory with vacuum reservoirs acts on the stored mode as a beam
splitter of transmission eta followed by a trace over the reservoir port.
Loss only lowers the photon number, so a state supported on |0>..|d-1>
stays there and the truncation is exact.
"""

from dataclasses import dataclass
from functools import lru_cache, singledispatch
from math import ceil, comb, factorial, sqrt

import numpy as np
from scipy.special import gammaln

from errors import NumericalGuardError

EXACT_BINOMIAL_MAX = 20


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).ravel()
        if amplitudes.size == 0:
            raise ValueError("a state needs at least one amplitude")
        norm = np.vdot(amplitudes, amplitudes).real
        if abs(norm - 1) > 1e-12:
            raise ValueError("state is not normalized: |psi|^2 = {!r}".format(norm))
        amplitudes.flags.writeable = False
        object.__setattr__(self, 'amplitudes', amplitudes)

    @classmethod
    def normalized(cls, amplitudes):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        return cls(amplitudes / np.linalg.norm(amplitudes))

    @classmethod
    def number(cls, n, dim=None):
        dim = dim or n + 1
        amplitudes = np.zeros(dim, dtype=complex)
        amplitudes[n] = 1
        return cls(amplitudes)

    @property
    def dim(self):
        return self.amplitudes.size

    def density(self) -> 'FockDensityMatrix':
        return FockDensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class FockDensityMatrix:
    entries: np.ndarray

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ValueError("density matrix must be square, got shape {}".format(entries.shape))
        entries.flags.writeable = False
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self):
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def validate(self, hermitian_tol=1e-12, trace_tol=1e-10, eig_tol=1e-10):
        """Raise ValueError unless rho is Hermitian, unit-trace and PSD."""
        rho = self.entries
        if np.max(np.abs(rho - rho.conj().T)) > hermitian_tol:
            raise ValueError("density matrix is not Hermitian")
        if abs(self.trace() - 1) > trace_tol:
            raise ValueError("density matrix trace is {}".format(self.trace()))
        lowest = np.linalg.eigvalsh((rho + rho.conj().T) / 2).min()
        if lowest < -eig_tol:
            raise ValueError("density matrix has eigenvalue {:.3g}".format(lowest))
        return self

    def mean_amplitude(self) -> complex:
        """<a> = Tr(rho a)."""
        n = np.arange(1, self.dim)
        return complex(np.sum(np.sqrt(n) * np.diagonal(self.entries, offset=-1)))

    def photon_number(self) -> float:
        return float(np.sum(np.arange(self.dim) * np.diagonal(self.entries).real))


def truncation_dim(alpha) -> int:
    """Fock dimension that keeps the truncated norm deficit of |alpha> below 1e-8."""
    r = abs(alpha)
    return int(ceil(r ** 2 + 8 * r + 10))


def coherent_state(alpha, dim=None) -> PureState:
    dim = dim or truncation_dim(alpha)
    factors = np.ones(dim, dtype=complex)
    factors[1:] = alpha / np.sqrt(np.arange(1, dim))
    amplitudes = np.exp(-abs(alpha) ** 2 / 2) * np.cumprod(factors)
    return PureState.normalized(amplitudes)


def binomial_row(n) -> np.ndarray:
    """C(n, k) for k = 0..n."""
    k = np.arange(n + 1)
    if n <= EXACT_BINOMIAL_MAX:
        return np.array([comb(n, j) for j in k], dtype=float)
    return np.exp(gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1))


def _check_eta(eta):
    if not 0 <= eta <= 1:
        raise ValueError("transmission must be in [0, 1], got {}".format(eta))


@lru_cache(maxsize=256)
def loss_weights(dim, eta) -> np.ndarray:
    """W[n, k] = sqrt(C(n, k) eta^(n-k) (1-eta)^k): amplitude to lose k of n photons."""
    _check_eta(eta)
    weights = np.zeros((dim, dim))
    for n in range(dim):
        k = np.arange(n + 1)
        weights[n, :n + 1] = np.sqrt(binomial_row(n) * eta ** (n - k) * (1 - eta) ** k)
    weights.flags.writeable = False
    return weights


@lru_cache(maxsize=256)
def _loss_indices(dim):
    m, k = np.meshgrid(np.arange(dim), np.arange(dim), indexing='ij')
    keep = m + k < dim
    return m[keep], k[keep], (m + k)[keep]


def kraus_operators(dim, eta) -> np.ndarray:
    """K[k, m, n] = <m|K_k|n>, nonzero only for m = n - k."""
    weights = loss_weights(dim, eta)
    kraus = np.zeros((dim, dim, dim))
    m, k, n = _loss_indices(dim)
    kraus[k, m, n] = weights[n, k]
    return kraus


@singledispatch
def loss_channel(state, eta) -> FockDensityMatrix:
    """rho = sum_k K_k rho_in K_k^dagger."""
    raise TypeError("loss_channel expects a PureState or FockDensityMatrix, got {}".format(type(state)))


@loss_channel.register
def _(state: PureState, eta) -> FockDensityMatrix:
    _check_eta(eta)
    dim = state.dim
    # column k of phi is K_k |psi>
    phi = np.zeros((dim, dim), dtype=complex)
    m, k, n = _loss_indices(dim)
    phi[m, k] = loss_weights(dim, eta)[n, k] * state.amplitudes[n]
    return FockDensityMatrix(phi @ phi.conj().T)


@loss_channel.register
def _(state: FockDensityMatrix, eta) -> FockDensityMatrix:
    _check_eta(eta)
    kraus = kraus_operators(state.dim, eta)
    return FockDensityMatrix(np.einsum('kmn,nl,kpl->mp', kraus, state.entries, kraus))


def creation_operator(dim) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), -1).astype(complex)


def beamsplitter_expansion(state: PureState, eta) -> FockDensityMatrix:
    """
    Expand sum_n psi_n/sqrt(n!) (sqrt(eta) a^dag + sqrt(1-eta) r^dag)^n |0, 0>
    on signal x reservoir and trace out the reservoir.
    """
    _check_eta(eta)
    dim = state.dim
    create = creation_operator(dim)
    identity = np.eye(dim)
    mixed = sqrt(eta) * np.kron(create, identity) + sqrt(1 - eta) * np.kron(identity, create)

    term = np.zeros(dim * dim, dtype=complex)
    term[0] = 1
    joint = state.amplitudes[0] * term
    for n in range(1, dim):
        term = mixed @ term
        joint = joint + state.amplitudes[n] / sqrt(factorial(n)) * term
    joint = joint.reshape(dim, dim)
    return FockDensityMatrix(joint @ joint.conj().T)


def fidelity_pure_mixed(psi: PureState, rho: FockDensityMatrix) -> float:
    """<psi|rho|psi>."""
    if psi.dim != rho.dim:
        raise ValueError("dimension mismatch: state {} vs density matrix {}".format(psi.dim, rho.dim))
    value = np.vdot(psi.amplitudes, rho.entries @ psi.amplitudes)
    if abs(value.imag) > 1e-12:
        raise NumericalGuardError("fidelity has imaginary part {:.3g}".format(value.imag))
    return float(value.real)
