"""Helpers for finite unions of closed intervals on the real line.

Interval sets are lists of (start, end) pairs with start <= end, kept sorted
and pairwise disjoint by ``normalize``.
"""

from __future__ import annotations

Interval = tuple[float, float]


def normalize(intervals, min_length: float = 0.0) -> list[Interval]:
    """Sort, merge touching/overlapping intervals, drop ones below min_length."""
    items = sorted((float(s), float(e)) for s, e in intervals if e >= s)
    merged: list[Interval] = []
    for s, e in items:
        if merged and s <= merged[-1][1]:
            if e > merged[-1][1]:
                merged[-1] = (merged[-1][0], e)
        else:
            merged.append((s, e))
    return [(s, e) for s, e in merged if e - s > min_length]


def measure(intervals) -> float:
    return float(sum(e - s for s, e in intervals))


def intersect(a, b) -> list[Interval]:
    out: list[Interval] = []
    for s1, e1 in a:
        for s2, e2 in b:
            lo, hi = max(s1, s2), min(e1, e2)
            if hi > lo:
                out.append((lo, hi))
    return normalize(out)


def difference(a, b) -> list[Interval]:
    """Points of a not in b (endpoints resolved at measure zero)."""
    out: list[Interval] = []
    for s, e in normalize(a):
        pieces = [(s, e)]
        for bs, be in normalize(b):
            nxt: list[Interval] = []
            for ps, pe in pieces:
                if be <= ps or bs >= pe:
                    nxt.append((ps, pe))
                    continue
                if bs > ps:
                    nxt.append((ps, bs))
                if be < pe:
                    nxt.append((be, pe))
            pieces = nxt
        out.extend(pieces)
    return normalize(out)


def symmetric_difference_measure(a, b) -> float:
    return measure(difference(a, b)) + measure(difference(b, a))


def clip_measure(intervals, lo: float, hi: float) -> float:
    """Measure of the interval set restricted to [lo, hi]."""
    total = 0.0
    for s, e in intervals:
        total += max(0.0, min(e, hi) - max(s, lo))
    return total
