"""Deterministic 1-D maximization: coarse grid scan plus golden-section refinement."""

import math

import numpy as np

INV_PHI = (math.sqrt(5) - 1) / 2


def golden_section_max(f, a, b, tol=1e-8):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    a, b = min(a, b), max(a, b)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def grid_then_golden(f, grid, tol=1e-8, values=None):
    """Scan ``grid`` (ascending), then refine around the best point.

    ``values`` may hold precomputed ``f(grid)``; entries set to ``nan`` are
    skipped.  Ties resolve to the smallest abscissa.  Returns ``(x*, f*)``.
    """
    grid = np.asarray(grid, dtype=float)
    if values is None:
        values = np.array([f(x) for x in grid])
    values = np.asarray(values, dtype=float)
    if np.all(np.isnan(values)):
        raise ValueError("objective undefined on the whole grid")
    k = int(np.nanargmax(values))
    best_x, best_f = grid[k], values[k]
    lo = grid[k - 1] if k > 0 and np.isfinite(values[k - 1]) else grid[k]
    hi = grid[k + 1] if k + 1 < len(grid) and np.isfinite(values[k + 1]) else grid[k]
    if hi > lo:
        x, fx = golden_section_max(f, lo, hi, tol)
        if fx > best_f:
            best_x, best_f = x, fx
    return float(best_x), float(best_f)


def first_upcrossing(values):
    """Index ``k`` of the first ``values[k] < 0 <= values[k+1]`` (nan entries skipped)."""
    prev = None
    for k, v in enumerate(values):
        if np.isnan(v):
            prev = None
            continue
        if prev is not None and values[prev] < 0 <= v:
            return prev
        prev = k
    return None
