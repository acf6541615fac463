"""
Piecewise-constant control functions and the memory protocol value type.

Times are in units of the reference inverse decay rate. A schedule with
breakpoints (t_1, ..., t_k) has k+1 values; interval i is
[t_i, t_{i+1}) so a switch instant belongs to the later interval.
"""

from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Mapping, Sequence, Tuple

import numpy as np

QSWITCH = 'qswitch'
COUPLING_GATE = 'coupling_gate'
DETUNING_GATE = 'detuning_gate'

STRATEGIES = (QSWITCH, COUPLING_GATE, DETUNING_GATE)


@dataclass(frozen=True)
class ControlSchedule:
    breakpoints: Tuple[float, ...]
    values: Tuple[complex, ...]

    def __post_init__(self):
        breakpoints = tuple(float(t) for t in self.breakpoints)
        values = tuple(complex(v) for v in self.values)
        if len(values) != len(breakpoints) + 1:
            raise ValueError("schedule needs {} values for {} breakpoints, got {}".format(
                len(breakpoints) + 1, len(breakpoints), len(values)))
        if any(b <= a for a, b in zip(breakpoints, breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing: {}".format(breakpoints))
        object.__setattr__(self, 'breakpoints', breakpoints)
        object.__setattr__(self, 'values', values)

    @classmethod
    def constant(cls, value):
        return cls((), (value,))

    @classmethod
    def stages(cls, switch_times: Sequence[float], values: Sequence[complex]):
        """
        Build a schedule from stage values, merging equal neighbours.

        A zero-length stage (repeated switch time) is dropped.
        """
        if len(values) != len(switch_times) + 1:
            raise ValueError("need one more stage value than switch times")
        breakpoints, merged = [], [complex(values[0])]
        for t, v in zip(switch_times, values[1:]):
            v = complex(v)
            if breakpoints and t == breakpoints[-1]:
                breakpoints.pop()
                merged.pop()
            if v != merged[-1]:
                breakpoints.append(float(t))
                merged.append(v)
        return cls(tuple(breakpoints), tuple(merged))

    def __call__(self, t):
        return evaluate(self, t)

    def sample(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        index = np.searchsorted(np.asarray(self.breakpoints), times, side='right')
        return np.asarray(self.values, dtype=complex)[index]

    def refined(self, extra: Sequence[float]) -> 'ControlSchedule':
        """The same function with additional (redundant) breakpoints."""
        points = sorted(set(self.breakpoints) | {float(t) for t in extra})
        values = [self.values[0]] + [evaluate(self, t) for t in points]
        return ControlSchedule(tuple(points), tuple(values))

    def max_abs(self):
        return max(abs(v) for v in self.values)


def evaluate(schedule: ControlSchedule, t: float) -> complex:
    """Value of the interval containing t, constant beyond both ends."""
    return schedule.values[bisect_right(schedule.breakpoints, t)]


@dataclass(frozen=True)
class MemoryProtocol:
    """
    A full write/store/read experiment.

    The write window is [-write_horizon, 0], storage is [0, T] and the
    read window is [T, T + read_horizon].
    """
    strategy: str
    kappa: ControlSchedule
    g: ControlSchedule
    delta_cavity: ControlSchedule
    delta_osc: ControlSchedule
    gamma: float
    storage_time: float
    write_horizon: float
    read_horizon: float
    params: Mapping[str, float] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ValueError("unknown strategy {!r}".format(self.strategy))
        if self.gamma < 0:
            raise ValueError("gamma must be >= 0, got {}".format(self.gamma))
        if self.storage_time < 0:
            raise ValueError("storage time must be >= 0, got {}".format(self.storage_time))
        if self.write_horizon <= 0 or self.read_horizon <= 0:
            raise ValueError("write and read horizons must be > 0")
        if any(k.real < 0 or k.imag != 0 for k in self.kappa.values):
            raise ValueError("kappa must be real and >= 0 everywhere")
        # a lossless storage stage may close the coupler, the ports may not
        if self.kappa.values[0].real <= 0 or self.kappa.values[-1].real <= 0:
            raise ValueError("kappa must be > 0 during writing and reading")
        if any(v.real < 0 or v.imag != 0 for v in self.g.values):
            raise ValueError("g must be real and >= 0 everywhere")

    @property
    def t_start(self):
        return -self.write_horizon

    @property
    def t_end(self):
        return self.storage_time + self.read_horizon

    @property
    def window(self):
        return self.t_start, self.t_end

    def breakpoints(self):
        """All switch instants inside the simulated window, sorted."""
        points = set()
        for schedule in (self.kappa, self.g, self.delta_cavity, self.delta_osc):
            points.update(schedule.breakpoints)
        return sorted(t for t in points if self.t_start < t < self.t_end)

    def rates_at(self, t):
        """(kappa, gamma, g, Delta, delta) in force at time t."""
        return (evaluate(self.kappa, t).real, self.gamma, evaluate(self.g, t).real,
                evaluate(self.delta_osc, t).real, evaluate(self.delta_cavity, t).real)

    def max_rate(self):
        return max(self.kappa.max_abs(), self.gamma, self.g.max_abs(),
                   self.delta_osc.max_abs(), self.delta_cavity.max_abs())

    def write_rates(self):
        """Rates in force during the write stage."""
        return self.rates_at(self.t_start)
