"""Mermin-Klyshko test of three-mode states with displaced-parity observables.

For settings ``a_k, a'_k`` with outcomes +-1 the Mermin-Klyshko polynomial obeys
the recursion

    B_2 = a_1 (a_2 + a'_2) + a'_1 (a_2 - a'_2)
    B_n = (a_n + a'_n) B_{n-1} / 2 + (a_n - a'_n) B'_{n-1} / 2

with local-realistic bound 2 and quantum bound 2^((n+1)/2).  Only ``n = 3`` is
implemented here.  The displaced-parity expectation of ``N`` modes equals
``pi^N W(xi)`` (normalized Wigner function), which gives

    B_3 = pi^3 [W(0, 0, x') + W(0, x', 0) + W(x', 0, 0) - W(x', x', x')]

with ``alpha = 0`` and ``alpha' = i x``, i.e. the phase-space point ``(0, sqrt(2) x)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .ghz import photon_operated_ghz
from .phasespace import ZeroProbabilityError, apply_loss, require_positive_norm, wigner_value
from .search import grid_then_golden

LOCAL_BOUND = 2.0
QUANTUM_BOUND = 2.0 * np.sqrt(2.0)

X_MAX = 2.0
X_GRID = 401
R_RANGE = (0.005, 2.0)
R_GRID = 200

# (modes displaced to alpha', sign) for the four correlators of B_3
_CORRELATORS = (((2,), 1.0), ((1,), 1.0), ((0,), 1.0), ((0, 1, 2), -1.0))
_DIRECTIONS = np.zeros((4, 6))
for _row, (_modes, _) in enumerate(_CORRELATORS):
    _DIRECTIONS[_row, [2 * m + 1 for m in _modes]] = np.sqrt(2.0)
_SIGNS = np.array([s for _, s in _CORRELATORS])


@dataclass(frozen=True)
class MKSetting:
    """Common displacement magnitude ``x`` of the settings ``alpha = 0``, ``alpha' = i x``."""

    x: float

    def __post_init__(self):
        if not np.isfinite(self.x) or self.x < 0:
            raise ValueError(f"setting magnitude must be finite and >= 0, got {self.x}")

    def points(self):
        return self.x * _DIRECTIONS


def b3_value(state, setting):
    """``B_3`` for one setting; ``setting`` may be an :class:`MKSetting`, a float or an array."""
    if state.num_modes != 3:
        raise ValueError("B_3 needs a three-mode state")
    x = setting.x if isinstance(setting, MKSetting) else np.asarray(setting, dtype=float)
    points = np.multiply.outer(x, _DIRECTIONS)
    w = wigner_value(state, points, normalized=True)
    return np.pi**3 * np.sum(_SIGNS * w, axis=-1)


def maximize_b3(state, x_max=X_MAX, n_grid=X_GRID, tol=1e-8):
    """Maximize ``|B_3|`` over ``x in [0, x_max]``; returns ``(x*, |B_3(x*)|)``."""
    require_positive_norm(state)
    grid = np.linspace(0.0, x_max, n_grid)
    values = np.abs(b3_value(state, grid))
    return grid_then_golden(lambda x: abs(float(b3_value(state, x))), grid, tol, values)


def _scheme_states(ops, r_grid):
    states = []
    for r in r_grid:
        try:
            states.append(photon_operated_ghz(r, ops))
        except ZeroProbabilityError:
            states.append(None)
    return states


def _best_over_r(ops, eta, r_grid, states, tol):
    def at(r, state=None):
        if state is None:
            try:
                state = photon_operated_ghz(r, ops)
            except ZeroProbabilityError:
                return np.nan, np.nan
        try:
            return maximize_b3(apply_loss(state, eta), tol=tol)
        except ZeroProbabilityError:
            return np.nan, np.nan

    results = [at(r, s) if s is not None else (np.nan, np.nan) for r, s in zip(r_grid, states)]
    values = np.array([b for _, b in results])
    r_star, b_star = grid_then_golden(lambda r: at(r)[1], r_grid, tol=1e-6, values=values)
    x_star, b_check = at(r_star)
    if not np.isfinite(b_check) or b_check < b_star:
        k = int(np.nanargmax(values))
        r_star, (x_star, b_star) = float(r_grid[k]), results[k]
    return float(r_star), float(x_star), float(b_star)


def max_b3_over_r(ops, eta=1.0, r_range=R_RANGE, n_r=R_GRID, tol=1e-8):
    """Joint maximum of ``|B_3|`` over squeezing ``r`` and setting ``x`` after detector loss ``eta``.

    Returns ``(r*, x*, B_3*)``; ``r`` points with zero success probability are skipped.
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")
    r_grid = np.linspace(*r_range, n_r)
    return _best_over_r(ops, eta, r_grid, _scheme_states(ops, r_grid), tol)


class NoViolationError(ValueError):
    """The scheme never exceeds the local-realistic bound."""


def threshold_efficiency(ops, r_range=R_RANGE, n_r=R_GRID, xtol=1e-5, eta_step=0.05):
    """Smallest detector efficiency at which the optimized ``|B_3|`` reaches 2."""
    r_grid = np.linspace(*r_range, n_r)
    states = _scheme_states(ops, r_grid)

    def excess(eta):
        return _best_over_r(ops, eta, r_grid, states, tol=1e-7)[2] - LOCAL_BOUND

    hi = 1.0
    if excess(hi) <= 0:
        raise NoViolationError("scheme does not violate the MK inequality at unit efficiency")
    lo = hi - eta_step
    while excess(lo) > 0:
        hi, lo = lo, lo - eta_step
        if lo <= 0:
            raise NoViolationError("violation persists down to zero efficiency")
    return float(brentq(excess, lo, hi, xtol=xtol))


def b3_curve(ops, r_values, eta=1.0):
    """Rows ``(r, x*, |B_3*|)`` for each squeezing value (``nan`` where undefined)."""
    rows = []
    for r in r_values:
        try:
            x, b = maximize_b3(apply_loss(photon_operated_ghz(r, ops), eta))
        except ZeroProbabilityError:
            x, b = np.nan, np.nan
        rows.append((float(r), x, b))
    return rows
