"""Problem instances, per-actuator gain profiles, schedules, cost and budget.

The instantaneous gain of actuator i is f_i(t) = ||e^{At} b_i||^2, the trace
of the rank-one Grammian integrand for that column. For a binary on/off
schedule v the Grammian trace reduces to sum_i of the integral of v_i f_i,
which is what ``trace_cost`` evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import intervals as iv
from .errors import (
    IntervalOutOfRangeError,
    NonFiniteError,
    ValidationError,
    ZeroColumnError,
)
from .linalg import as_matrix, integrate_samples, mat_exp, propagate_columns

DEFAULT_CELLS = 4096
DEFAULT_TIE_TOL = 1e-9


@dataclass(frozen=True)
class LtiSystem:
    """A continuous-time LTI instance xdot = A x + B V(t) u with a time budget.

    Parameters
    ----------
    A, B : array_like
        Dynamics (n x n) and input (n x m) matrices.
    horizon : float
        Final time T > 0; schedules live on [0, T].
    alpha : float
        Total actuation-time budget, sum_i mu{t : v_i(t) = 1} <= alpha.
    cells_per_actuator : int
        Uniform grid resolution K used for sampled profiles.
    tie_tol : float
        Relative tolerance for treating two profile values as equal.
    flat_tol : float
        Measure tolerance for classifying flat stretches; defaults to two
        grid cells, 2*horizon/cells_per_actuator.
    """

    A: np.ndarray
    B: np.ndarray
    horizon: float
    alpha: float
    cells_per_actuator: int = DEFAULT_CELLS
    tie_tol: float = DEFAULT_TIE_TOL
    flat_tol: float = field(default=0.0)

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A, name="A", square=True))
        object.__setattr__(self, "B", as_matrix(self.B, name="B"))
        if self.B.shape[0] != self.A.shape[0]:
            raise ValidationError(
                f"B has {self.B.shape[0]} rows but A is {self.A.shape[0]}x{self.A.shape[0]}")
        if not np.isfinite(self.horizon) or self.horizon <= 0:
            raise ValidationError(f"horizon must be > 0, got {self.horizon}")
        if not np.isfinite(self.alpha):
            raise ValidationError("alpha must be finite")
        if self.cells_per_actuator < 1:
            raise ValidationError("cells_per_actuator must be positive")
        if self.flat_tol == 0.0:
            object.__setattr__(
                self, "flat_tol", 2.0 * self.horizon / self.cells_per_actuator)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def m(self) -> int:
        return self.B.shape[1]

    @property
    def cell_width(self) -> float:
        return self.horizon / self.cells_per_actuator

    def zero_columns(self) -> list[int]:
        """1-based indices of identically zero input columns."""
        return [j + 1 for j in range(self.m) if not self.B[:, j].any()]

    def validate(self) -> None:
        """Enforce the full instance invariants; raises ValidationError."""
        zeros = self.zero_columns()
        if zeros:
            raise ZeroColumnError(
                f"column(s) {zeros} of B are zero; drop them or fix the input")
        if not (0.0 < self.alpha < self.m * self.horizon):
            raise ValidationError(
                f"alpha must lie in (0, m*T) = (0, {self.m * self.horizon}), "
                f"got {self.alpha}")
        if self.cells_per_actuator < 16:
            raise ValidationError("cells_per_actuator must be >= 16")
        if not (0.0 < self.tie_tol < 1e-2):
            raise ValidationError(f"tie_tol must lie in (0, 1e-2), got {self.tie_tol}")
        if self.flat_tol < 0.0:
            raise ValidationError(f"flat_tol must be >= 0, got {self.flat_tol}")

    def drop_zero_columns(self) -> tuple["LtiSystem", list[int]]:
        """Return a copy without zero columns plus the kept 1-based indices."""
        keep = [j for j in range(self.m) if self.B[:, j].any()]
        if not keep:
            raise ZeroColumnError("all columns of B are zero")
        reduced = LtiSystem(self.A, self.B[:, keep], self.horizon, self.alpha,
                            self.cells_per_actuator, self.tie_tol, self.flat_tol)
        return reduced, [j + 1 for j in keep]


@dataclass(frozen=True)
class SampledProfile:
    """A function sampled at uniform nodes of [domain_start, domain_end].

    ``cells`` optionally carries explicit per-cell values (used by the
    concatenated profile, whose cells must never mix adjacent actuators);
    otherwise cells are the means of adjacent node values.
    """

    domain_start: float
    domain_end: float
    values: np.ndarray
    actuator_index: int | None = None
    cells: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 2:
            raise ValueError("values must be a 1-D array with at least 2 nodes")
        if not np.isfinite(v).all():
            raise NonFiniteError("profile values contain non-finite entries")
        if not self.domain_end > self.domain_start:
            raise ValueError("domain_end must exceed domain_start")
        object.__setattr__(self, "values", v)
        if self.cells is not None:
            c = np.asarray(self.cells, dtype=float)
            if not np.isfinite(c).all():
                raise NonFiniteError("cell values contain non-finite entries")
            object.__setattr__(self, "cells", c)

    @property
    def span(self) -> float:
        return self.domain_end - self.domain_start

    @property
    def num_cells(self) -> int:
        return len(self.cell_values())

    @property
    def cell_width(self) -> float:
        return self.span / self.num_cells

    def cell_values(self) -> np.ndarray:
        if self.cells is not None:
            return self.cells
        return 0.5 * (self.values[:-1] + self.values[1:])

    def integral(self) -> float:
        """Trapezoidal integral over the whole domain (= total cell mass)."""
        return float(self.cell_values().sum() * self.cell_width)


@dataclass(frozen=True)
class Schedule:
    """Per-actuator finite unions of closed on-intervals within [0, horizon]."""

    horizon: float
    intervals: tuple[tuple[tuple[float, float], ...], ...]

    @staticmethod
    def from_lists(horizon: float, per_actuator) -> "Schedule":
        return Schedule(horizon, tuple(
            tuple((float(s), float(e)) for s, e in iv.normalize(acts))
            for acts in per_actuator))

    @property
    def num_actuators(self) -> int:
        return len(self.intervals)

    def actuator(self, i: int) -> list[tuple[float, float]]:
        """Intervals of actuator i (1-based)."""
        return list(self.intervals[i - 1])


def budget(schedule: Schedule) -> float:
    """Total Lebesgue measure switched on across all actuators."""
    return float(sum(iv.measure(acts) for acts in schedule.intervals))


def profile_nodes(system: LtiSystem) -> np.ndarray:
    """Node samples of every f_i on the uniform grid; shape (m, K+1).

    Zero columns yield identically zero rows; callers that must reject them
    do so explicitly (``profile`` or ``LtiSystem.validate``).
    """
    states = propagate_columns(system.A, system.B, system.horizon,
                               system.cells_per_actuator)
    return np.einsum("nmk,nmk->mk", states, states)


def profile_point(system: LtiSystem, i: int, t: float) -> float:
    """f_i(t) = ||e^{At} b_i||^2 evaluated exactly (one matrix exponential)."""
    y = mat_exp(system.A, t) @ system.B[:, i - 1]
    return float(y @ y)


def profile(system: LtiSystem, i: int) -> SampledProfile:
    """Sampled gain profile of actuator i (1-based) on [0, T].

    Raises ZeroColumnError when column i of B is zero: the profile would be
    identically zero and the instance invariant is surfaced here rather than
    silently remapping actuator indices.
    """
    if not 1 <= i <= system.m:
        raise ValueError(f"actuator index {i} outside 1..{system.m}")
    if not system.B[:, i - 1].any():
        raise ZeroColumnError(f"column {i} of B is zero")
    values = profile_nodes(system)[i - 1]
    return SampledProfile(0.0, system.horizon, values, actuator_index=i)


def concat_profile(system: LtiSystem) -> SampledProfile:
    """Profiles laid side by side on [0, mT]: F(t) = f_i(t - (i-1)T).

    Cell values are taken per actuator so no cell straddles a junction; the
    node array (used for display) takes the right-hand actuator's value at
    junctions.
    """
    return concat_from_nodes(system, profile_nodes(system))


def concat_from_nodes(system: LtiSystem, nodes: np.ndarray) -> SampledProfile:
    """Concatenated profile built from precomputed node samples."""
    m, kp1 = nodes.shape
    glued = np.empty(m * (kp1 - 1) + 1)
    for i in range(m):
        glued[i * (kp1 - 1):(i + 1) * (kp1 - 1)] = nodes[i, :-1]
    glued[-1] = nodes[-1, -1]
    cells = np.concatenate([0.5 * (row[:-1] + row[1:]) for row in nodes])
    return SampledProfile(0.0, system.m * system.horizon, glued, cells=cells)


def _interp(values: np.ndarray, h: float, t: float) -> float:
    k = min(int(t / h), len(values) - 2)
    frac = t / h - k
    return float(values[k] * (1.0 - frac) + values[k + 1] * frac)


def _integral_pl(values: np.ndarray, h: float, s: float, e: float) -> float:
    """Integral of the piecewise-linear interpolant over [s, e] (exact)."""
    if e <= s:
        return 0.0
    js = min(int(s / h), len(values) - 2)
    je = min(int(e / h), len(values) - 2)
    fs, fe = _interp(values, h, s), _interp(values, h, e)
    if js == je:
        return 0.5 * (fs + fe) * (e - s)
    total = 0.5 * (fs + values[js + 1]) * ((js + 1) * h - s)
    total += 0.5 * (values[je] + fe) * (e - je * h)
    if je > js + 1:
        mid = values[js + 1:je + 1]
        total += h * (mid.sum() - 0.5 * (mid[0] + mid[-1]))
    return float(total)


def _check_intervals(schedule: Schedule, horizon: float) -> None:
    slack = 1e-9 * horizon
    for acts in schedule.intervals:
        prev_end = None
        for s, e in acts:
            if e < s:
                raise IntervalOutOfRangeError(f"interval [{s}, {e}] is reversed")
            if s < -slack or e > horizon + slack:
                raise IntervalOutOfRangeError(
                    f"interval [{s}, {e}] exits [0, {horizon}]")
            if prev_end is not None and s < prev_end - slack:
                raise IntervalOutOfRangeError(
                    "intervals within an actuator overlap")
            prev_end = e


def trace_cost(system: LtiSystem, schedule: Schedule) -> float:
    """Grammian trace achieved by a binary schedule: sum_i int v_i f_i dt.

    Grid cells are clipped at interval endpoints with exact partial-cell
    trapezoids, so accuracy stays at quadrature order even when switching
    times are off-grid.
    """
    if schedule.num_actuators != system.m:
        raise ValueError(
            f"schedule has {schedule.num_actuators} actuators, expected {system.m}")
    _check_intervals(schedule, system.horizon)
    nodes = profile_nodes(system)
    h = system.cell_width
    total = 0.0
    for i, acts in enumerate(schedule.intervals):
        for s, e in acts:
            total += _integral_pl(nodes[i], h,
                                  max(0.0, s), min(system.horizon, e))
    return total


def gramian_trace_direct(system: LtiSystem, schedule: Schedule,
                         subcells: int = 512) -> float:
    """Tr of int e^{At} B V V^T B^T e^{A^T t} dt by direct matrix quadrature.

    Independent cross-check for ``trace_cost``: builds the rank-one Grammian
    integrand matrices on a fresh per-interval grid and traces at the end.
    """
    _check_intervals(schedule, system.horizon)
    W = np.zeros((system.n, system.n))
    for i, acts in enumerate(schedule.intervals):
        b = system.B[:, i]
        for s, e in acts:
            if e <= s:
                continue
            ts = np.linspace(s, e, subcells + 1)
            step = mat_exp(system.A, (e - s) / subcells)
            y = mat_exp(system.A, s) @ b
            contrib = np.zeros_like(W)
            weights = np.full(subcells + 1, 1.0)
            weights[0] = weights[-1] = 0.5
            for w in weights:
                contrib += w * np.outer(y, y)
                y = step @ y
            W += contrib * (ts[1] - ts[0])
    return float(np.trace(W))
