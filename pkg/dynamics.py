"""
Mean-amplitude dynamics of the cavity (a) and oscillator (b) modes.

    d/dt (a, b) = -G(t) (a, b) + (sqrt(2 kappa(t)) A_in(t), 0)
    G = [[kappa + i delta, i g], [i g, gamma + i Delta]]

Vacuum baths have zero mean, so the coherent-state amplitudes carry the
whole amplitude transfer ratio of the linear memory; the operator
beam-splitter coefficient equals that ratio.
"""

import cmath
import logging
from dataclasses import dataclass
from math import ceil

import numpy as np
import pandas as pd

from errors import NumericalGuardError, ResolutionError
from modes import TemporalMode, TimeGrid, cosh_m, inner_product, sinh_over_m, time_reverse
from protocols import driver_for
from schedule import MemoryProtocol

log = logging.getLogger(__name__)

STEP_FRACTION = 1e-3
MAX_STEP_FRACTION = 0.1
EFFICIENCY_TOLERANCE = 1e-6


@dataclass(frozen=True)
class SystemState:
    a: complex
    b: complex
    t: float

    def __post_init__(self):
        if not (cmath.isfinite(self.a) and cmath.isfinite(self.b)):
            raise NumericalGuardError("non-finite state at t={}".format(self.t))


@dataclass(frozen=True, eq=False)
class PropagatorMatrix:
    matrix: np.ndarray

    @classmethod
    def identity(cls):
        return cls(np.eye(2, dtype=complex))

    def __matmul__(self, other):
        if isinstance(other, PropagatorMatrix):
            return PropagatorMatrix(self.matrix @ other.matrix)
        if isinstance(other, SystemState):
            a, b = self.matrix @ np.array([other.a, other.b])
            return SystemState(complex(a), complex(b), other.t)
        return self.matrix @ other


def generator(kappa, gamma, g, Delta, delta=0.):
    return np.array([[kappa + 1j * delta, 1j * g],
                     [1j * g, gamma + 1j * Delta]], dtype=complex)


def propagator(kappa, gamma, g, Delta, tau, delta=0.) -> PropagatorMatrix:
    """
    e^{-G tau} = e^{-kappa_+ tau} [cosh(m tau) I - sinh(m tau)/m (kappa_- sigma_z + i g sigma_x)]

    with kappa_pm = (kappa + i delta pm (gamma + i Delta))/2 and
    m = sqrt(kappa_-^2 - g^2). Both cosh and sinh/m are even in m.
    """
    if tau < 0:
        raise ValueError("propagation time must be >= 0, got {}".format(tau))
    kappa_plus = (kappa + 1j * delta + gamma + 1j * Delta) / 2
    kappa_minus = (kappa + 1j * delta - gamma - 1j * Delta) / 2
    m = cmath.sqrt(kappa_minus ** 2 - g ** 2)
    ch, sh = complex(cosh_m(m, tau)), complex(sinh_over_m(m, tau))
    decay = cmath.exp(-kappa_plus * tau)
    return PropagatorMatrix(decay * np.array([
        [ch - sh * kappa_minus, -1j * g * sh],
        [-1j * g * sh, ch + sh * kappa_minus],
    ]))


def rk4_step(f, t, y, h):
    k1 = f(t, y)
    k2 = f(t + h / 2, y + h / 2 * k1)
    k3 = f(t + h / 2, y + h / 2 * k2)
    k4 = f(t + h, y + h * k3)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def propagator_rk4(kappa, gamma, g, Delta, tau, dt, delta=0.) -> PropagatorMatrix:
    """Integrate dM/dtau = -G M from the identity."""
    G = generator(kappa, gamma, g, Delta, delta)
    n_steps = max(1, ceil(tau / dt))
    h = tau / n_steps
    M = np.eye(2, dtype=complex)
    for i in range(n_steps):
        M = rk4_step(lambda t, y: -G @ y, i * h, M, h)
    return PropagatorMatrix(M)


def _stage_matrices(G, h):
    """
    One RK4 step of y' = A y + s(t), A = -G, written as
    y_{n+1} = R y_n + P0 s(t_n) + Ph s(t_n + h/2) + h/6 s(t_n + h).
    """
    A = -h * G
    A2 = A @ A
    A3 = A2 @ A
    I = np.eye(2)
    R = I + A + A2 / 2 + A3 / 6 + A2 @ A2 / 24
    P0 = h / 6 * (I + A + A2 / 2 + A3 / 4)
    Ph = h / 6 * (4 * I + 2 * A + A2 / 2)
    return R, P0, Ph


@dataclass(frozen=True, eq=False)
class SimulationResult:
    grid: TimeGrid
    a_series: np.ndarray
    b_series: np.ndarray
    input_series: np.ndarray
    output_series: np.ndarray

    def __post_init__(self):
        for name in ('a_series', 'b_series', 'input_series', 'output_series'):
            series = np.asarray(getattr(self, name), dtype=complex)
            if series.shape != (self.grid.n_points,):
                raise ValueError("{} has {} samples for a {}-point grid".format(
                    name, series.shape, self.grid.n_points))
            series.flags.writeable = False
            object.__setattr__(self, name, series)

    @property
    def times(self):
        return self.grid.times

    def index_of(self, t):
        return int(np.clip(round((t - self.grid.t_start) / self.grid.dt), 0, self.grid.n_points - 1))

    def state_at(self, t) -> SystemState:
        i = self.index_of(t)
        return SystemState(complex(self.a_series[i]), complex(self.b_series[i]), float(self.times[i]))

    def input_mode(self) -> TemporalMode:
        return TemporalMode(self.grid, self.input_series)

    def output_mode(self) -> TemporalMode:
        return TemporalMode(self.grid, self.output_series)

    def to_frame(self, stride=1) -> pd.DataFrame:
        rows = slice(None, None, max(1, int(stride)))
        columns = {'t': self.times[rows]}
        for name, series in (('a', self.a_series), ('b', self.b_series),
                             ('A_in', self.input_series), ('A_out', self.output_series)):
            columns[name + '_re'] = series[rows].real
            columns[name + '_im'] = series[rows].imag
        columns['abs_a'] = np.abs(self.a_series[rows])
        columns['abs_b'] = np.abs(self.b_series[rows])
        return pd.DataFrame(columns)


def default_step(protocol: MemoryProtocol):
    return STEP_FRACTION / protocol.max_rate()


def snap_step(protocol: MemoryProtocol, dt=None):
    """
    Step size and grid with every switch instant on a grid point.

    The step is the largest value <= dt that divides the shortest interval
    between switch instants (t = 0 included); the horizons are rounded up
    to whole steps.
    """
    if dt is None:
        dt = default_step(protocol)
    if not dt > 0:
        raise ValueError("step must be > 0, got {}".format(dt))
    limit = MAX_STEP_FRACTION / protocol.max_rate()
    if dt > limit:
        raise ResolutionError("step {:g} exceeds {:g} = 0.1/max rate".format(dt, limit))

    points = sorted({0.} | set(protocol.breakpoints()))
    gaps = np.diff(points)
    if len(gaps):
        shortest = gaps.min()
        dt = shortest / ceil(shortest / dt * (1 - 1e-12))
    for t in points:
        if abs(t / dt - round(t / dt)) > 1e-6:
            raise ValueError("switch instant {} is not on the {:g} step grid".format(t, dt))

    n_write = ceil(protocol.write_horizon / dt - 1e-9)
    n_rest = ceil(protocol.t_end / dt - 1e-9)
    grid = TimeGrid(-n_write * dt, n_rest * dt, n_write + n_rest + 1)
    log.debug("%s: step %.6g, %d points on [%.6g, %.6g]",
              protocol.strategy, dt, grid.n_points, grid.t_start, grid.t_end)
    return dt, grid


def _step_controls(protocol, grid):
    """Control values per step, read at step midpoints."""
    t = grid.times
    mid = (t[:-1] + t[1:]) / 2
    return (protocol.kappa.sample(mid).real, protocol.g.sample(mid).real,
            protocol.delta_osc.sample(mid).real, protocol.delta_cavity.sample(mid).real)


def integrate(protocol: MemoryProtocol, input_mode: TemporalMode, alpha_in: complex = 1.,
              dt=None) -> SimulationResult:
    """
    Classical RK4 from t = -t_w (state zero) to T + read horizon.

    Steps never straddle a switch instant, so on every step G is constant
    and the four RK4 stages collapse into fixed stage matrices.
    """
    h, grid = snap_step(protocol, dt)
    t = grid.times
    n_steps = grid.n_points - 1
    kappa, g, Delta, delta = _step_controls(protocol, grid)

    tol = 1e-6 * h
    driven = (t[:-1] >= input_mode.grid.t_start - tol) & (t[1:] <= input_mode.grid.t_end + tol)
    coupler = np.sqrt(2 * kappa) * alpha_in
    drive = [np.where(driven, coupler * input_mode.sample(times), 0j)
             for times in (t[:-1], t[:-1] + h / 2, t[1:])]

    controls = np.stack([kappa, g, Delta, delta])
    changes = np.flatnonzero(np.any(np.diff(controls, axis=1) != 0, axis=0)) + 1
    starts = [0, *changes.tolist()]
    stops = [*changes.tolist(), n_steps]

    a_series = [0j] * grid.n_points
    b_series = [0j] * grid.n_points
    a = b = 0j
    for start, stop in zip(starts, stops):
        G = generator(kappa[start], protocol.gamma, g[start], Delta[start], delta[start])
        R, P0, Ph = _stage_matrices(G, h)
        r00, r01, r10, r11 = (complex(x) for x in R.ravel())
        if driven[start:stop].any():
            p0a, p0b = complex(P0[0, 0]), complex(P0[1, 0])
            pha, phb = complex(Ph[0, 0]), complex(Ph[1, 0])
            p1 = h / 6
            s0, sh, s1 = (d[start:stop].tolist() for d in drive)
            for j, i in enumerate(range(start, stop)):
                a, b = (r00 * a + r01 * b + p0a * s0[j] + pha * sh[j] + p1 * s1[j],
                        r10 * a + r11 * b + p0b * s0[j] + phb * sh[j])
                a_series[i + 1] = a
                b_series[i + 1] = b
        else:
            for i in range(start, stop):
                a, b = r00 * a + r01 * b, r10 * a + r11 * b
                a_series[i + 1] = a
                b_series[i + 1] = b

    a_series = np.array(a_series)
    if not np.all(np.isfinite(a_series)):
        raise NumericalGuardError("integration diverged")
    input_series = alpha_in * input_mode.sample(t)
    # sample points take the value of the step they open (closed-left intervals)
    kappa_at = np.append(kappa, kappa[-1])
    output_series = np.sqrt(2 * kappa_at) * a_series - input_series
    return SimulationResult(grid, a_series, np.array(b_series), input_series, output_series)


def filtered_output(sim: SimulationResult, out_mode: TemporalMode) -> complex:
    """
    a_0^out = integral of u_out*(t) A_out(t).

    The filter window opens with the right limit of A_out: an input pulse
    ending exactly at the opening instant (T = 0) does not leak into it.
    """
    output = np.array(sim.output_series)
    i = sim.index_of(out_mode.grid.t_start)
    if i + 1 < sim.grid.n_points and sim.input_series[i + 1] == 0:
        output[i] += sim.input_series[i]
    return inner_product(out_mode, TemporalMode(sim.grid, output))


@dataclass(frozen=True, eq=False)
class Retrieval:
    simulation: SimulationResult
    input_mode: TemporalMode
    output_mode: TemporalMode
    a_in: complex
    a_out: complex

    @property
    def ratio(self) -> complex:
        return self.a_out / self.a_in

    @property
    def efficiency(self) -> float:
        return abs(self.ratio)

    @property
    def phase(self) -> float:
        return cmath.phase(self.ratio)

    def beamsplitter(self):
        """(eta_M, phase) of the equivalent loss channel."""
        eta = self.efficiency ** 2
        if eta > 1 + EFFICIENCY_TOLERANCE:
            raise NumericalGuardError("eta_M = {:.9f} > 1: integration tolerance failure".format(eta))
        return min(eta, 1.), self.phase


def retrieve(protocol: MemoryProtocol, dt=None, input_mode: TemporalMode = None,
             alpha_in: complex = 1.) -> Retrieval:
    """
    Write, store and read one pulse and filter the output with the
    time-reversed optimal input mode.

    Without input_mode the strategy's matched envelope is used, sampled at
    half steps so the RK4 midpoint stages hit grid samples exactly.
    """
    h, grid = snap_step(protocol, dt)
    n_write = round(-grid.t_start / h)
    write_grid = TimeGrid(grid.t_start, 0., 2 * n_write + 1)
    optimal = driver_for(protocol.strategy).input_mode(protocol, write_grid)
    if input_mode is None:
        input_mode = optimal
    out_mode = time_reverse(optimal, protocol.storage_time)

    sim = integrate(protocol, input_mode, alpha_in, h)
    a_in = inner_product(input_mode, sim.input_mode())
    a_out = filtered_output(sim, out_mode)
    if a_in == 0:
        raise NumericalGuardError("input pulse does not overlap the write window")
    log.debug("%s: a_in=%s a_out=%s", protocol.strategy, a_in, a_out)
    return Retrieval(sim, input_mode, out_mode, a_in, a_out)


def measured_efficiency(protocol: MemoryProtocol, dt=None) -> float:
    """|a_0^out / a_0^in| for the matched input, i.e. sqrt(eta_M)."""
    return retrieve(protocol, dt).efficiency


def analytic_efficiency(protocol: MemoryProtocol) -> float:
    return driver_for(protocol.strategy).analytic_efficiency(protocol)


def effective_beamsplitter(protocol: MemoryProtocol, dt=None):
    return retrieve(protocol, dt).beamsplitter()
