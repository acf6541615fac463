"""
Temporal mode functions on uniform time grids.

Past-time modes live on t <= 0 (the write window), future-time modes on
t >= T. All analytic shapes are normalized numerically on the grid they
are sampled on, so quadrature and normalization share the same rule.
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.integrate import trapezoid

log = logging.getLogger(__name__)

SERIES_THRESHOLD = 1e-4


@dataclass(frozen=True)
class TimeGrid:
    t_start: float
    t_end: float
    n_points: int

    def __post_init__(self):
        if self.n_points < 2:
            raise ValueError("a time grid needs at least 2 points, got {}".format(self.n_points))
        if not self.t_end > self.t_start:
            raise ValueError("empty time grid [{}, {}]".format(self.t_start, self.t_end))

    @classmethod
    def from_step(cls, t_start, t_end, dt):
        """Grid with spacing as close to dt as the span allows."""
        n_steps = max(1, int(round((t_end - t_start) / dt)))
        return cls(float(t_start), float(t_end), n_steps + 1)

    @property
    def dt(self):
        return (self.t_end - self.t_start) / (self.n_points - 1)

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t_start, self.t_end, self.n_points)

    def same_as(self, other: 'TimeGrid', rtol=1e-12):
        scale = max(1.0, abs(self.t_start), abs(self.t_end))
        return (self.n_points == other.n_points
                and abs(self.t_start - other.t_start) <= rtol * scale
                and abs(self.t_end - other.t_end) <= rtol * scale)


@dataclass(frozen=True, eq=False)
class TemporalMode:
    grid: TimeGrid
    samples: np.ndarray

    def __post_init__(self):
        samples = np.array(self.samples, dtype=complex)
        if samples.shape != (self.grid.n_points,):
            raise ValueError("mode has {} samples for a {}-point grid".format(
                samples.shape, self.grid.n_points))
        samples.flags.writeable = False
        object.__setattr__(self, 'samples', samples)

    @property
    def times(self):
        return self.grid.times

    def norm(self) -> float:
        return float(np.sqrt(trapezoid(np.abs(self.samples) ** 2, self.times)))

    def normalize(self) -> 'TemporalMode':
        norm = self.norm()
        if norm == 0:
            raise ValueError("cannot normalize a mode that vanishes on its grid")
        return TemporalMode(self.grid, self.samples / norm)

    def sample(self, times) -> np.ndarray:
        """Linear interpolation of the envelope; zero off the grid."""
        times = np.asarray(times, dtype=float)
        tol = 1e-9 * self.grid.dt
        inside = (times >= self.grid.t_start - tol) & (times <= self.grid.t_end + tol)
        clipped = np.clip(times, self.grid.t_start, self.grid.t_end)
        grid_times = self.times
        values = (np.interp(clipped, grid_times, self.samples.real)
                  + 1j * np.interp(clipped, grid_times, self.samples.imag))
        return np.where(inside, values, 0j)


def laguerre_polynomial(n: int, z) -> np.ndarray:
    """L_n(z) by the three-term recurrence."""
    if n < 0:
        raise ValueError("Laguerre index must be >= 0, got {}".format(n))
    z = np.asarray(z, dtype=float)
    previous, current = np.zeros_like(z), np.ones_like(z)
    for k in range(n):
        previous, current = current, ((2 * k + 1 - z) * current - k * previous) / (k + 1)
    return current


def _past_times(grid: TimeGrid):
    t = grid.times
    return np.minimum(t, 0.0), t <= 0


def laguerre_input_mode(n: int, kappa: float, grid: TimeGrid, normalize=True) -> TemporalMode:
    """u_n(t) = sqrt(2 kappa) e^{kappa t} L_n(-2 kappa t) on t <= 0."""
    if n < 0:
        raise ValueError("Laguerre index must be >= 0, got {}".format(n))
    if kappa <= 0:
        raise ValueError("kappa must be > 0, got {}".format(kappa))
    t, past = _past_times(grid)
    values = np.sqrt(2 * kappa) * np.exp(kappa * t) * laguerre_polynomial(n, -2 * kappa * t)
    mode = TemporalMode(grid, np.where(past, values, 0.0))
    return mode.normalize() if normalize else mode


def sinh_over_m(m: complex, tau) -> np.ndarray:
    """sinh(m tau)/m, continuous through m = 0 and for imaginary m. Scalar tau gives a 0-d array."""
    tau = np.asarray(tau, dtype=complex)
    x = m * tau
    small = np.abs(x) < SERIES_THRESHOLD
    return np.where(small, tau * (1 + x ** 2 / 6), np.sinh(np.where(small, 0, x)) / (m if m != 0 else 1))


def cosh_m(m: complex, tau) -> np.ndarray:
    """cosh(m tau) with the same series branch as sinh_over_m."""
    tau = np.asarray(tau, dtype=complex)
    x = m * tau
    small = np.abs(x) < SERIES_THRESHOLD
    return np.where(small, 1 + x ** 2 / 2, np.cosh(np.where(small, 0, x)))


def coupled_rates(kappa, gamma, g, delta):
    """kappa_+, kappa_- and m = sqrt(kappa_-^2 - g^2) of the coupled pair."""
    kappa_plus = (kappa + gamma + 1j * delta) / 2
    kappa_minus = (kappa - gamma - 1j * delta) / 2
    m = np.sqrt(complex(kappa_minus ** 2 - g ** 2))
    return kappa_plus, kappa_minus, m


def atomic_input_mode(kappa: float, gamma: float, g: float, delta: float,
                      grid: TimeGrid) -> TemporalMode:
    """
    Input envelope matched to the oscillator write kernel.

    The stored oscillator amplitude is b(0) = sqrt(2 kappa) integral of
    e^{kappa_+ tau} (i g) sinh(m tau)/m A_in(tau); the matched envelope is
    the conjugate kernel, -i e^{kappa_+* tau} [sinh(m tau)/m]*. At delta = 0
    this is -i e^{kappa_+ tau} sinh(m tau)/m with real kappa_+.
    """
    if kappa <= 0 or gamma < 0 or g < 0:
        raise ValueError("need kappa > 0, gamma >= 0, g >= 0")
    kappa_plus, _, m = coupled_rates(kappa, gamma, g, delta)
    t, past = _past_times(grid)
    values = -1j * np.exp(np.conj(kappa_plus) * t) * np.conj(sinh_over_m(m, t))
    return TemporalMode(grid, np.where(past, values, 0.0)).normalize()


def critical_input_mode(kappa: float, gamma: float, grid: TimeGrid) -> TemporalMode:
    """The m = 0 shape -i t e^{kappa_+ t}, kappa_+ = (kappa + gamma)/2."""
    t, past = _past_times(grid)
    values = -1j * t * np.exp((kappa + gamma) / 2 * t)
    return TemporalMode(grid, np.where(past, values, 0.0)).normalize()


def gaussian_mode(center: float, width: float, grid: TimeGrid) -> TemporalMode:
    if width <= 0:
        raise ValueError("width must be > 0, got {}".format(width))
    t = grid.times
    return TemporalMode(grid, np.exp(-(t - center) ** 2 / (2 * width ** 2))).normalize()


def time_reverse(mode: TemporalMode, T: float) -> TemporalMode:
    """u_out(t) = u_in*(T - t)."""
    grid = TimeGrid(T - mode.grid.t_end, T - mode.grid.t_start, mode.grid.n_points)
    return TemporalMode(grid, np.conj(mode.samples[::-1]))


def inner_product(f: TemporalMode, h: TemporalMode) -> complex:
    """Trapezoidal integral of f*(t) h(t) over the common support."""
    if f.grid.same_as(h.grid):
        return complex(trapezoid(np.conj(f.samples) * h.samples, f.times))

    lo = max(f.grid.t_start, h.grid.t_start)
    hi = min(f.grid.t_end, h.grid.t_end)
    if hi <= lo:
        return 0j
    # the finer mode is resampled onto the coarser grid
    coarse, fine = (f, h) if f.grid.dt >= h.grid.dt else (h, f)
    tol = 1e-9 * coarse.grid.dt
    times = coarse.times
    keep = (times >= lo - tol) & (times <= hi + tol)
    if keep.sum() < 2:
        return 0j
    times = times[keep]
    coarse_values = coarse.samples[keep]
    fine_values = fine.sample(times)
    if coarse is f:
        integrand = np.conj(coarse_values) * fine_values
    else:
        integrand = np.conj(fine_values) * coarse_values
    return complex(trapezoid(integrand, times))


def gram_matrix(modes: Sequence[TemporalMode]) -> np.ndarray:
    if not modes:
        raise ValueError("need at least one mode")
    n = len(modes)
    gram = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            gram[i, j] = inner_product(modes[i], modes[j])
    return (gram + gram.conj().T) / 2


def expand(mode: TemporalMode, basis: Sequence[TemporalMode]) -> np.ndarray:
    """Coefficients c_n = <basis_n, mode>."""
    return np.array([inner_product(b, mode) for b in basis])
