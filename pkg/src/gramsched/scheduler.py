"""Optimal actuator schedules by thresholding profiles at the budget quantile.

The relaxed scheduling problem (activation variables in [0, 1], total active
time at most alpha) is solved exactly by taking the "top slice" of the
concatenated profile F: activate the times where f_i exceeds the threshold
theta = F*(alpha). Three regimes arise at alpha:

* F* strictly decreasing on the right: the unique optimum is {f_i >= theta}.
* F* strictly decreasing from the left: the unique optimum is {f_i > theta}.
* F* flat across alpha: the optimum is non-unique; every solution activates
  {f_i > theta} plus subsets S_i of the level sets {f_i = theta} whose total
  measure is alpha - mu{F > theta}. A canonical representative fills the
  level sets left to right, lowest actuator index first.

All optima are binary, so the relaxed and the on/off problem coincide, and
every schedule produced here is a finite union of intervals per actuator
(no Zeno behavior: profiles are analytic, so off the all-constant case the
threshold is crossed finitely often).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import intervals as iv
from .errors import InsufficientLevelSetError, ValidationError
from .gramian import (
    DEFAULT_TIE_TOL,
    LtiSystem,
    SampledProfile,
    Schedule,
    budget,
    concat_from_nodes,
    profile_nodes,
    profile_point,
)
from .rearrange import Case, FlatInterval, rearrange

BISECT_TOL_FACTOR = 1e-10  # absolute switching-time tolerance, scaled by T


@dataclass(frozen=True)
class Classification:
    """Behavior of F* at the budget point, with refined level measures."""

    case: Case
    threshold: float          # F*(alpha)
    measure_above: float      # mu{F > threshold}
    measure_at_least: float   # mu{F >= threshold}
    flat: FlatInterval | None


@dataclass(frozen=True)
class FlatDegreesOfFreedom:
    """Solution-family description in the flat case."""

    level_sets: tuple[float, ...]  # per-actuator measure of {f_i = threshold}
    free_measure: float            # alpha - mu{F > threshold}


@dataclass(frozen=True)
class SolutionReport:
    case: Case
    threshold: float
    optimal_cost: float
    unique: bool
    canonical: Schedule
    flat_dof: FlatDegreesOfFreedom | None


def is_constant_profile(profile: SampledProfile,
                        tie_tol: float = DEFAULT_TIE_TOL) -> bool:
    """True iff the sampled values vary by at most tie_tol relative."""
    return _is_constant(profile.values, tie_tol)


def _is_constant(values: np.ndarray, tie_tol: float) -> bool:
    vmax = float(values.max())
    vmin = float(values.min())
    return vmax - vmin <= tie_tol * max(abs(vmax), abs(vmin))


def _pl_measure_at_least(nodes: np.ndarray, h: float, theta: float) -> float:
    """Measure of {f >= theta} for the piecewise-linear interpolant of nodes."""
    d = nodes - theta
    d0, d1 = d[..., :-1], d[..., 1:]
    pos0, pos1 = d0 >= 0.0, d1 >= 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        down = np.where(d0 != d1, d0 / (d0 - d1), 1.0)
        up = np.where(d0 != d1, d1 / (d1 - d0), 1.0)
    frac = np.where(pos0 & pos1, 1.0,
                    np.where(pos0 & ~pos1, down,
                             np.where(~pos0 & pos1, up, 0.0)))
    return float(frac.sum()) * h


def _quantile_threshold(nodes: np.ndarray, h: float, alpha: float,
                        tie_tol: float) -> float:
    """sup{theta : mu{f >= theta} >= alpha} for the interpolated profiles.

    This is the exact F*(alpha) of the interpolant: bisection on the
    monotone level-measure function, then a snap onto a nearby sampled
    value so that exactly tied levels (constants, plateaus) are recovered
    without roundoff.
    """
    lo = float(nodes.min())
    hi = float(nodes.max())
    if _pl_measure_at_least(nodes, h, hi) >= alpha:
        return hi
    span = max(hi - lo, abs(hi), 1.0)
    for _ in range(80):
        if hi - lo <= 1e-15 * span:
            break
        mid = 0.5 * (lo + hi)
        if _pl_measure_at_least(nodes, h, mid) >= alpha:
            lo = mid
        else:
            hi = mid
    theta = lo
    flat_values = np.unique(nodes)
    j = int(np.searchsorted(flat_values, theta))
    snap_tol = max(tie_tol * max(abs(theta), 1e-300), 8.0 * (hi - lo))
    best = theta
    best_gap = snap_tol
    for cand in flat_values[max(0, j - 1):j + 2]:
        gap = abs(float(cand) - theta)
        if gap <= best_gap:
            best, best_gap = float(cand), gap
    return best


def _refine_crossing(system: LtiSystem, i: int, t_lo: float, t_hi: float,
                     g_lo: float, g_hi: float, theta: float) -> float:
    """Bisect f_i - theta inside [t_lo, t_hi] down to 1e-10 * T."""
    if g_lo == 0.0:
        return t_lo
    if g_hi == 0.0:
        return t_hi
    if (g_lo < 0.0) == (g_hi < 0.0):
        # No sign change: the crossing sits at the endpoint tied with theta.
        return t_lo if abs(g_lo) <= abs(g_hi) else t_hi
    tol = BISECT_TOL_FACTOR * system.horizon
    while t_hi - t_lo > tol:
        mid = 0.5 * (t_lo + t_hi)
        g_mid = profile_point(system, i, mid) - theta
        if (g_mid < 0.0) == (g_lo < 0.0):
            t_lo, g_lo = mid, g_mid
        else:
            t_hi, g_hi = mid, g_mid
    return 0.5 * (t_lo + t_hi)


def _actuator_level_set(system: LtiSystem, i: int, values: np.ndarray,
                        theta: float, strict: bool) -> list[tuple[float, float]]:
    """{t : f_i(t) > theta} (strict) or {t : f_i(t) >= theta} as intervals.

    Grid scan for sign changes followed by bisection refinement of each
    crossing. A constant profile tied with theta yields the whole horizon
    for the non-strict set and nothing for the strict one.
    """
    T = system.horizon
    tie_tol = system.tie_tol
    if _is_constant(values, tie_tol):
        c = float(values.mean())
        if abs(c - theta) <= tie_tol * max(abs(c), abs(theta)):
            return [] if strict else [(0.0, T)]
        return [(0.0, T)] if c > theta else []

    g = values - theta
    tied = np.abs(g) <= tie_tol * np.maximum(np.abs(values), abs(theta))
    on = (g > 0.0) & ~tied if strict else (g > 0.0) | tied
    if not on.any():
        return []
    K = len(values) - 1
    h = T / K
    out: list[tuple[float, float]] = []
    k = 0
    while k <= K:
        if not on[k]:
            k += 1
            continue
        k1 = k
        while k1 + 1 <= K and on[k1 + 1]:
            k1 += 1
        start = 0.0 if k == 0 else _refine_crossing(
            system, i, (k - 1) * h, k * h, float(g[k - 1]), float(g[k]), theta)
        end = T if k1 == K else _refine_crossing(
            system, i, k1 * h, (k1 + 1) * h, float(g[k1]), float(g[k1 + 1]), theta)
        if end > start:
            out.append((start, min(end, T)))
        k = k1 + 1
    return iv.normalize(out)


def _threshold_sets(system: LtiSystem, nodes: np.ndarray, theta: float,
                    strict: bool) -> list[list[tuple[float, float]]]:
    return [_actuator_level_set(system, i + 1, nodes[i], theta, strict)
            for i in range(system.m)]


def threshold_schedule(system: LtiSystem, theta: float,
                       strict: bool = False) -> Schedule:
    """Schedule activating {f_i >= theta} (or > theta when strict)."""
    nodes = profile_nodes(system)
    return Schedule.from_lists(system.horizon,
                               _threshold_sets(system, nodes, theta, strict))


def _classify_full(system: LtiSystem, nodes: np.ndarray):
    if not (0.0 < system.alpha < system.m * system.horizon):
        raise ValidationError(
            f"alpha must lie in (0, {system.m * system.horizon}), got {system.alpha}")
    h = system.cell_width
    theta = _quantile_threshold(nodes, h, system.alpha, system.tie_tol)
    strict_sets = _threshold_sets(system, nodes, theta, strict=True)
    nonstrict_sets = _threshold_sets(system, nodes, theta, strict=False)
    l = float(sum(iv.measure(s) for s in strict_sets))
    u = float(sum(iv.measure(s) for s in nonstrict_sets))
    alpha = system.alpha
    ft = system.flat_tol
    if u - l <= ft:
        case = Case.STRICT_BOTH
    elif abs(u - alpha) <= ft and l < alpha:
        case = Case.STRICT_RIGHT
    elif abs(l - alpha) <= ft and alpha < u:
        case = Case.STRICT_LEFT
    else:
        case = Case.FLAT
    flat = FlatInterval(l, u, theta) if case is Case.FLAT else None
    cls = Classification(case, theta, l, u, flat)
    return cls, strict_sets, nonstrict_sets


def classify(system: LtiSystem) -> Classification:
    """Case split of F* at alpha, with the threshold F*(alpha).

    The threshold is refined past grid resolution (quantile bisection on the
    interpolated profiles; level measures from bisected crossings) so that
    reported budgets and costs track the stated tolerances rather than the
    cell width.
    """
    return _classify_full(system, profile_nodes(system))[0]


def _fill_level_sets(level_sets: list[list[tuple[float, float]]],
                     free_measure: float, flat_tol: float,
                     scale: float) -> list[list[tuple[float, float]]]:
    remaining = free_measure
    chosen: list[list[tuple[float, float]]] = []
    tiny = 1e-15 * scale
    for sets in level_sets:
        picks: list[tuple[float, float]] = []
        for s, e in sets:
            if remaining <= tiny:
                break
            take = min(e - s, remaining)
            picks.append((s, s + take))
            remaining -= take
        chosen.append(picks)
    if remaining > flat_tol:
        raise InsufficientLevelSetError(
            f"level sets cannot absorb free measure {free_measure} "
            f"(short by {remaining})")
    return chosen


def fill_flat(system: LtiSystem, theta: float, free_measure: float) -> Schedule:
    """Canonical flat-case schedule: strict threshold set plus a left-most
    filling of the level sets {f_i = theta} with the free measure."""
    nodes = profile_nodes(system)
    strict_sets = _threshold_sets(system, nodes, theta, strict=True)
    if free_measure <= 0.0:
        return Schedule.from_lists(system.horizon, strict_sets)
    nonstrict_sets = _threshold_sets(system, nodes, theta, strict=False)
    level_sets = [iv.difference(ns, st)
                  for ns, st in zip(nonstrict_sets, strict_sets)]
    picks = _fill_level_sets(level_sets, free_measure, system.flat_tol,
                             system.m * system.horizon)
    combined = [st + pk for st, pk in zip(strict_sets, picks)]
    return Schedule.from_lists(system.horizon, combined)


def solve(system: LtiSystem) -> SolutionReport:
    """Solve the budgeted scheduling problem exactly.

    Dispatch follows the classification: non-strict thresholding when F* is
    strictly decreasing on the right (or both sides), strict thresholding
    when only from the left, level-set filling in the flat case. The optimal
    value is the integral of F* up to alpha, and the solution is unique
    exactly when the flat case does not occur.
    """
    nodes = profile_nodes(system)
    cls, strict_sets, nonstrict_sets = _classify_full(system, nodes)
    flat_dof = None
    if cls.case is Case.FLAT:
        level_sets = [iv.difference(ns, st)
                      for ns, st in zip(nonstrict_sets, strict_sets)]
        free = system.alpha - cls.measure_above
        picks = _fill_level_sets(level_sets, free, system.flat_tol,
                                 system.m * system.horizon)
        combined = [st + pk for st, pk in zip(strict_sets, picks)]
        canonical = Schedule.from_lists(system.horizon, combined)
        flat_dof = FlatDegreesOfFreedom(
            level_sets=tuple(iv.measure(ls) for ls in level_sets),
            free_measure=free)
    elif cls.case is Case.STRICT_LEFT:
        canonical = Schedule.from_lists(system.horizon, strict_sets)
    else:
        canonical = Schedule.from_lists(system.horizon, nonstrict_sets)
    rearranged = rearrange(concat_from_nodes(system, nodes), system.tie_tol)
    optimal_cost = rearranged.integral_to(system.alpha)
    return SolutionReport(
        case=cls.case,
        threshold=cls.threshold,
        optimal_cost=optimal_cost,
        unique=cls.case is not Case.FLAT,
        canonical=canonical,
        flat_dof=flat_dof,
    )


def schedule_feasible(system: LtiSystem, schedule: Schedule,
                      slack: float | None = None) -> bool:
    """Whether the schedule spends at most alpha (within slack) on [0, T]."""
    if slack is None:
        slack = system.flat_tol
    return budget(schedule) <= system.alpha + slack
