"""Dense small-matrix primitives: matrix exponential, state propagation, quadrature."""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .errors import NonFiniteError


def as_matrix(a, name: str = "matrix", square: bool = False) -> np.ndarray:
    """Validate and return a 2-D float array with finite entries."""
    m = np.asarray(a, dtype=float)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-dimensional, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise ValueError(f"{name} must be non-empty, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise ValueError(f"{name} must be square, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise NonFiniteError(f"{name} contains non-finite entries")
    return m


def mat_exp(A, t: float = 1.0) -> np.ndarray:
    """Matrix exponential e^{A t}.

    Uses scaling-and-squaring with diagonal Pade approximants (order up to 13
    with the standard theta thresholds, as provided by scipy). The result of a
    matrix exponential is always nonsingular.
    """
    A = as_matrix(A, name="A", square=True)
    if not np.isfinite(t) or t < 0:
        raise ValueError(f"t must be finite and >= 0, got {t}")
    At = A * t
    if not np.isfinite(At).all():
        raise NonFiniteError("A*t contains non-finite entries")
    E = scipy.linalg.expm(At)
    if not np.isfinite(E).all():
        raise NonFiniteError("matrix exponential overflowed")
    return E


def propagate(A, b, horizon: float, num_cells: int) -> np.ndarray:
    """States y_k = e^{A t_k} b on the uniform grid t_k = k*horizon/num_cells.

    One exponential of the step matrix M = e^{A h} is computed, then applied
    repeatedly; O(K n^2) instead of O(K n^3) per-node exponentials.
    Returns an (n, num_cells+1) array whose columns are the states.
    """
    cols = propagate_columns(A, np.reshape(np.asarray(b, dtype=float), (-1, 1)),
                             horizon, num_cells)
    return cols[:, 0, :]


def propagate_columns(A, B, horizon: float, num_cells: int) -> np.ndarray:
    """Propagate every column of B at once; returns (n, m, num_cells+1)."""
    A = as_matrix(A, name="A", square=True)
    B = as_matrix(B, name="B")
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"B has {B.shape[0]} rows, expected {A.shape[0]}")
    if num_cells < 1:
        raise ValueError(f"num_cells must be >= 1, got {num_cells}")
    if not np.isfinite(horizon) or horizon <= 0:
        raise ValueError(f"horizon must be finite and > 0, got {horizon}")
    n, m = B.shape
    step = mat_exp(A, horizon / num_cells)
    out = np.empty((n, m, num_cells + 1))
    out[:, :, 0] = B
    cur = B
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, num_cells + 1):
            cur = step @ cur
            out[:, :, k] = cur
    if not np.isfinite(out).all():
        raise NonFiniteError("state propagation overflowed")
    return out


def integrate_samples(values, cell_width: float) -> float:
    """Composite trapezoidal integral of uniformly spaced samples."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("values must be a non-empty 1-D sequence")
    if not np.isfinite(v).all():
        raise NonFiniteError("values contain non-finite entries")
    if not np.isfinite(cell_width) or cell_width <= 0:
        raise ValueError(f"cell_width must be > 0, got {cell_width}")
    if v.size == 1:
        return 0.0
    return float(cell_width * (v.sum() - 0.5 * (v[0] + v[-1])))
