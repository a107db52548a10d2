"""Static figure rendering for solver outputs."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .gramian import LtiSystem, SampledProfile
from .rearrange import RearrangedProfile


def _staircase(r: RearrangedProfile):
    edges = np.concatenate(([0.0], r.cumulative_measure))
    return edges, r.values


def render_solution_figure(path, system: LtiSystem, nodes: np.ndarray,
                           rearranged: RearrangedProfile,
                           alpha: float, threshold: float) -> None:
    """Two panels: concatenated profile F(t) and its rearrangement F*."""
    m, kp1 = nodes.shape
    T = system.horizon
    fig, (ax_f, ax_r) = plt.subplots(2, 1, figsize=(7.0, 5.0))
    for i in range(m):
        t = (np.arange(kp1) / (kp1 - 1) + i) * T
        ax_f.plot(t, nodes[i], lw=1.2, label=f"actuator {i + 1}")
    for i in range(1, m):
        ax_f.axvline(i * T, color="0.85", lw=0.8, zorder=0)
    ax_f.set_ylabel("F(t)")
    ax_f.set_xlabel("t")
    ax_f.legend(fontsize=8, ncol=min(m, 4))

    edges, values = _staircase(rearranged)
    ax_r.stairs(values, edges, lw=1.2, color="C3")
    ax_r.axvline(alpha, color="0.4", ls="--", lw=0.9)
    ax_r.axhline(threshold, color="0.4", ls=":", lw=0.9)
    ax_r.set_ylabel("F*(x)")
    ax_r.set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_rearrangement_figure(path, profile: SampledProfile,
                                rearranged: RearrangedProfile) -> None:
    """A sampled function next to its non-increasing rearrangement."""
    fig, (ax_f, ax_r) = plt.subplots(2, 1, figsize=(7.0, 5.0))
    t = np.linspace(profile.domain_start, profile.domain_end,
                    len(profile.values))
    ax_f.plot(t, profile.values, lw=1.2)
    ax_f.set_ylabel("f(t)")
    ax_f.set_xlabel("t")
    edges, values = _staircase(rearranged)
    ax_r.stairs(values, edges + profile.domain_start, lw=1.2, color="C3")
    ax_r.set_ylabel("f*(x)")
    ax_r.set_xlabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
