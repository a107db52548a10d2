"""Seeded random instances and profiles for property checks."""

from __future__ import annotations

import numpy as np

from .gramian import LtiSystem, SampledProfile


def random_system(rng: np.random.Generator, n_max: int = 6, m_max: int = 4,
                  cells_per_actuator: int = 4096,
                  spectral_abscissa: tuple[float, float] = (-1.5, 0.8),
                  flat_tol: float | None = None) -> LtiSystem:
    """Dense random instance with controlled spectral abscissa.

    The real part of the rightmost eigenvalue is drawn from
    ``spectral_abscissa``, so both stable and unstable dynamics occur while
    profile growth stays within quadrature range over the horizon.
    """
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(1, m_max + 1))
    A = rng.standard_normal((n, n)) / np.sqrt(n)
    target = rng.uniform(*spectral_abscissa)
    A += (target - np.real(np.linalg.eigvals(A)).max()) * np.eye(n)
    B = rng.standard_normal((n, m))
    horizon = float(rng.uniform(1.0, 2.0))
    alpha = float(rng.uniform(0.2, 0.8) * m * horizon)
    kwargs = {} if flat_tol is None else {"flat_tol": flat_tol}
    return LtiSystem(A, B, horizon, alpha,
                     cells_per_actuator=cells_per_actuator, **kwargs)


def random_profile(rng: np.random.Generator, num_cells: int | None = None,
                   span: float | None = None) -> SampledProfile:
    """Nonnegative sampled profile: smooth, stepped, monotone, or mixed.

    Stepped profiles repeat exact values so tie handling gets exercised.
    """
    if num_cells is None:
        num_cells = int(rng.integers(64, 513))
    if span is None:
        span = float(rng.uniform(0.5, 3.0))
    kind = rng.integers(0, 4)
    k = num_cells + 1
    if kind == 0:  # smooth bumps
        t = np.linspace(0.0, 1.0, k)
        v = np.zeros(k)
        for _ in range(int(rng.integers(1, 5))):
            c, w, a = rng.uniform(0, 1), rng.uniform(0.05, 0.4), rng.uniform(0.2, 3.0)
            v += a * np.exp(-((t - c) / w) ** 2)
    elif kind == 1:  # exact plateaus
        levels = rng.uniform(0.0, 3.0, size=int(rng.integers(2, 6)))
        blocks = rng.integers(0, levels.size, size=k)
        v = levels[blocks]
    elif kind == 2:  # monotone
        v = np.cumsum(rng.uniform(0.0, 1.0, size=k))
        if rng.integers(0, 2):
            v = v[::-1].copy()
    else:  # rough
        v = np.abs(rng.standard_normal(k)).cumsum() * 0.05 + rng.uniform(0, 2, size=k)
    v = np.maximum(v, 0.0)
    return SampledProfile(0.0, span, v)


def random_profile_pair(rng: np.random.Generator):
    """Two profiles on a shared grid."""
    f = random_profile(rng)
    g = random_profile(rng, num_cells=f.num_cells, span=f.span)
    return f, g


def dominating_profile(f: SampledProfile, g: SampledProfile) -> SampledProfile:
    """f + g on f's grid; pointwise >= f, for monotonicity checks."""
    return SampledProfile(f.domain_start, f.domain_end, f.values + g.values)
