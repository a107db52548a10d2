import numpy as np
import pytest

from gramsched import (
    Case,
    InsufficientLevelSetError,
    LtiSystem,
    budget,
    classify,
    concat_profile,
    fill_flat,
    is_constant_profile,
    profile,
    rearrange,
    solve,
    threshold_schedule,
    trace_cost,
)
from gramsched.intervals import symmetric_difference_measure
from gramsched.sampling import random_system

from conftest import make_three_state

LN6_HALF = np.log(6.0) / 2.0


def assert_intervals_close(got, expected, tol=1e-9):
    assert len(got) == len(expected), (got, expected)
    for (gs, ge), (es, ee) in zip(got, expected):
        assert abs(gs - es) <= tol and abs(ge - ee) <= tol, (got, expected)


def test_classify_dropped_constants(three_state):
    # zero gamma: the top budget-2 slice is exactly the third profile,
    # whose minimum 3 is attained at the domain edge
    cls = classify(three_state(gamma_sq=0.0))
    assert cls.case in (Case.STRICT_BOTH, Case.STRICT_RIGHT, Case.STRICT_LEFT)
    assert cls.threshold == pytest.approx(3.0, abs=1e-9)


def test_classify_flat_eight(three_state):
    cls = classify(three_state(gamma_sq=8.0))
    assert cls.case is Case.FLAT
    assert cls.threshold == pytest.approx(8.0, abs=1e-12)
    assert cls.measure_above == pytest.approx(2.0 - LN6_HALF, abs=1e-8)
    assert cls.measure_at_least == pytest.approx(6.0 - LN6_HALF, abs=1e-8)


def test_classify_transition_boundary_unique(three_state):
    # constants below the third profile's minimum keep the optimum unique
    for gamma_sq in (2.0, 2.5, 2.95):
        cls = classify(three_state(gamma_sq=gamma_sq))
        assert cls.case is not Case.FLAT, gamma_sq


def test_threshold_schedule_above_max_is_empty(three_state):
    s = three_state(gamma_sq=1.0, K=256)
    sched = threshold_schedule(s, theta=100.0)
    assert budget(sched) == 0.0


def test_threshold_schedule_golden_strict_case(three_state):
    s = three_state(gamma_sq=1.0, K=1024)
    sched = threshold_schedule(s, theta=3.0, strict=False)
    assert sched.actuator(1) == [] and sched.actuator(2) == []
    assert_intervals_close(sched.actuator(3), [(0.0, 2.0)])


def test_threshold_schedule_constants_tied_nonstrict_overshoots(three_state):
    theta = 2.0 + np.exp(2.0)
    s = three_state(gamma_sq=theta, K=1024)
    nonstrict = threshold_schedule(s, theta=theta, strict=False)
    assert_intervals_close(nonstrict.actuator(1), [(0.0, 2.0)])
    assert_intervals_close(nonstrict.actuator(2), [(0.0, 2.0)])
    assert_intervals_close(nonstrict.actuator(3), [(1.0, 2.0)], tol=1e-8)
    assert budget(nonstrict) == pytest.approx(5.0, abs=1e-8)  # needs the flat fill
    strict = threshold_schedule(s, theta=theta, strict=True)
    assert strict.actuator(1) == [] and strict.actuator(2) == []
    assert_intervals_close(strict.actuator(3), [(1.0, 2.0)], tol=1e-8)


def test_fill_flat_zero_free_measure_is_strict(three_state):
    s = three_state(gamma_sq=8.0, K=512)
    strict = threshold_schedule(s, theta=8.0, strict=True)
    filled = fill_flat(s, theta=8.0, free_measure=0.0)
    assert filled.intervals == strict.intervals


def test_fill_flat_golden_boundary(three_state):
    theta = 2.0 + np.exp(2.0)
    s = three_state(gamma_sq=theta)
    sched = fill_flat(s, theta=theta, free_measure=1.0)
    assert_intervals_close(sched.actuator(1), [(0.0, 1.0)], tol=1e-8)
    assert sched.actuator(2) == []
    assert_intervals_close(sched.actuator(3), [(1.0, 2.0)], tol=1e-8)


def test_fill_flat_golden_eight(three_state):
    s = three_state(gamma_sq=8.0)
    sched = fill_flat(s, theta=8.0, free_measure=LN6_HALF)
    assert_intervals_close(sched.actuator(1), [(0.0, LN6_HALF)], tol=1e-8)
    assert sched.actuator(2) == []
    assert_intervals_close(sched.actuator(3), [(LN6_HALF, 2.0)], tol=1e-8)


def test_fill_flat_insufficient_level_set(three_state):
    s = three_state(gamma_sq=1.0, K=256)
    with pytest.raises(InsufficientLevelSetError):
        fill_flat(s, theta=3.0, free_measure=3.0)


def test_solve_golden_unique(three_state):
    rep = solve(three_state(gamma_sq=0.0))
    assert rep.unique
    assert rep.case is not Case.FLAT
    assert rep.flat_dof is None
    assert rep.canonical.actuator(1) == [] and rep.canonical.actuator(2) == []
    assert_intervals_close(rep.canonical.actuator(3), [(0.0, 2.0)])
    exact = 4.0 + (np.exp(4.0) - 1.0) / 2.0
    assert rep.optimal_cost == pytest.approx(exact, rel=1e-6)


def test_solve_golden_flat(three_state):
    rep = solve(three_state(gamma_sq=2.0 + np.exp(2.0)))
    assert not rep.unique
    assert rep.case is Case.FLAT
    assert rep.flat_dof.free_measure == pytest.approx(1.0, abs=1e-8)
    assert rep.flat_dof.level_sets[0] == pytest.approx(2.0, abs=1e-8)
    assert rep.flat_dof.level_sets[2] == pytest.approx(0.0, abs=1e-6)


def test_solve_generic_systems_unique():
    rng = np.random.default_rng(101)
    for _ in range(25):
        rep = solve(random_system(rng, cells_per_actuator=1024))
        assert rep.unique and rep.case is not Case.FLAT


def test_is_constant_profile(three_state):
    s = three_state(gamma_sq=25.0, K=128)
    assert is_constant_profile(profile(s, 1))
    assert not is_constant_profile(profile(s, 3))
    A = np.array([[0.0, -2.0], [2.0, 0.0]])
    skew = LtiSystem(A, [[1.0], [0.5]], horizon=3.0, alpha=1.0,
                     cells_per_actuator=128)
    assert is_constant_profile(profile(skew, 1))


def test_feasibility_and_cost_identity_on_goldens(three_state):
    for gamma_sq in (0.0, 1.0, 2.0, 8.0, 2.0 + np.exp(2.0), 20.0):
        s = three_state(gamma_sq=gamma_sq)
        rep = solve(s)
        assert abs(budget(rep.canonical) - s.alpha) <= s.flat_tol
        cost = trace_cost(s, rep.canonical)
        assert cost == pytest.approx(rep.optimal_cost, rel=1e-6)


def test_cost_identity_on_random_systems():
    rng = np.random.default_rng(103)
    for _ in range(15):
        s = random_system(rng, cells_per_actuator=2048)
        rep = solve(s)
        assert abs(budget(rep.canonical) - s.alpha) <= s.flat_tol
        assert trace_cost(s, rep.canonical) == pytest.approx(
            rep.optimal_cost, rel=1e-6)


def test_optimal_cost_monotone_concave_in_alpha():
    rng = np.random.default_rng(107)
    base = random_system(rng, cells_per_actuator=1024)
    alphas = np.linspace(0.1, 0.9, 15) * base.m * base.horizon
    costs = []
    for a in alphas:
        s = LtiSystem(base.A, base.B, base.horizon, float(a),
                      cells_per_actuator=base.cells_per_actuator)
        costs.append(solve(s).optimal_cost)
    costs = np.array(costs)
    assert np.all(np.diff(costs) >= -1e-12 * costs.max())
    assert np.all(np.diff(costs, 2) <= 1e-9 * costs.max())


def test_strict_and_nonstrict_agree_at_strict_both_points():
    rng = np.random.default_rng(109)
    for _ in range(10):
        s = random_system(rng, cells_per_actuator=1024)
        cls = classify(s)
        if cls.case is not Case.STRICT_BOTH:
            continue
        loose = threshold_schedule(s, cls.threshold, strict=False)
        tight = threshold_schedule(s, cls.threshold, strict=True)
        gap = sum(
            symmetric_difference_measure(loose.actuator(i + 1), tight.actuator(i + 1))
            for i in range(s.m))
        assert gap <= s.flat_tol


def test_schedules_are_zeno_free():
    # oscillating profiles: interval count stays within the grid sign changes
    A = np.array([[-0.1, -4.0, 0.0],
                  [4.0, -0.1, 0.0],
                  [0.0, 0.0, 0.2]])
    B = np.array([[2.0, 0.3], [0.0, 0.4], [0.5, 1.0]])
    s = LtiSystem(A, B, horizon=3.0, alpha=2.0, cells_per_actuator=2048)
    rep = solve(s)
    from gramsched.gramian import profile_nodes
    nodes = profile_nodes(s)
    assert sum(len(acts) for acts in rep.canonical.intervals) > 0
    for i in range(s.m):
        crossings = int(np.sum(np.diff(np.sign(nodes[i] - rep.threshold)) != 0))
        assert len(rep.canonical.actuator(i + 1)) <= 1 + crossings


def test_uniqueness_transition_at_three(three_state):
    # the constants gamma^2 become competitive exactly at min(2+e^{2t}) = 3
    flips = []
    prev = None
    for gamma_sq in np.arange(2.5, 3.5 + 1e-9, 0.05):
        unique = solve(three_state(gamma_sq=float(gamma_sq))).unique
        if prev is not None and prev and not unique:
            flips.append(round(float(gamma_sq), 10))
        prev = unique
    assert len(flips) == 1
    assert abs(flips[0] - 3.0) <= 0.05 + 1e-9
