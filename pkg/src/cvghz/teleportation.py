"""Three-party teleportation network: sender A, helper B, receiver C.

A coherent input is mixed with mode A on a 50:50 splitter, A measures ``x_u`` and
``p_v``, B measures ``p_2``, and C displaces by ``sqrt(2)(x_u + i p_v) + i g p_2``.
The receiver's output equals the input plus the resource noise

    X_noise = x_3 - x_1,    P_noise = p_1 + g p_2 + p_3,

so a Gaussian resource term of covariance ``V`` adds ``A V A^T`` to the input
covariance, with ``A`` the 2x6 map below.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .ghz import photon_operated_ghz
from .phasespace import (
    SINGULAR_DET,
    GaussianMixtureState,
    GaussianTerm,
    ZeroProbabilityError,
    effective_covariance,
    require_positive_norm,
    signed_exp_sum,
    wigner_value,
)
from .search import first_upcrossing, grid_then_golden

CLASSICAL_FIDELITY = 0.5
GAIN_RANGE = (0.0, 1.5)
R_RANGE = (0.001, 2.0)
R_GRID = 400


def noise_map(g):
    return np.array([[-1.0, 0.0, 0.0, 0.0, 1.0, 0.0],
                     [0.0, 1.0, 0.0, g, 0.0, 1.0]])


@dataclass(frozen=True)
class TeleportConfig:
    gain: float = 1.0
    input_alpha: complex = 0.0


@dataclass(frozen=True)
class FidelityMatrices:
    L1: np.ndarray
    L2: np.ndarray
    K: np.ndarray


def fidelity_matrices(v, g):
    v = np.asarray(v, dtype=float)
    l1 = np.zeros((8, 8))
    l1[:2, :2] = 2 * np.eye(2)
    l1[6:, 6:] = 2 * np.eye(2)
    l2 = np.zeros((8, 8))
    l2[2:, 2:] = np.linalg.inv(v)
    k = np.zeros((8, 8))
    k[2:6, 2:6] = np.eye(4)
    k[6:, :] = [[-1, 0, 1, 0, 0, 0, 1, 0],
                [0, -1, 0, -1, 0, -g, 0, 1]]
    return FidelityMatrices(l1, l2, k)


def _check_resource(v):
    v = np.asarray(v, dtype=float)
    if v.shape != (6, 6):
        raise ValueError("the resource must be a three-mode (6x6) covariance matrix")
    if abs(np.linalg.det(v)) < SINGULAR_DET:
        raise ValueError("resource covariance is singular")
    return v


def fidelity_gaussian(v, g):
    """Coherent-state fidelity ``4 / sqrt(det V det(L1 + K^T L2 K))`` for a Gaussian resource."""
    v = _check_resource(v)
    m = fidelity_matrices(v, g)
    return float(4.0 / np.sqrt(np.linalg.det(v) * np.linalg.det(m.L1 + m.K.T @ m.L2 @ m.K)))


def fidelity_two_path_check(v, g):
    """Same fidelity from the output covariance ``I/2 + A V A^T``: ``1 / sqrt(det(out + I/2))``."""
    v = _check_resource(v)
    a = noise_map(g)
    return float(1.0 / np.sqrt(np.linalg.det(np.eye(2) + a @ v @ a.T)))


def teleported_state(state, g, input_alpha=0.0):
    """Receiver's one-mode output for a coherent input, as a signed Gaussian mixture."""
    if state.num_modes != 3:
        raise ValueError("the network needs a three-mode resource")
    a = noise_map(g)
    mean = np.sqrt(2.0) * np.array([np.real(input_alpha), np.imag(input_alpha)])
    excess = a @ state.reference_cov @ a.T
    terms = tuple(
        GaussianTerm(t.sign, t.log_weight, mean + a @ t.mean, a @ t.shift @ a.T)
        for t in state.terms
    )
    return GaussianMixtureState(excess, terms)


def fidelity_state(state, g):
    """Average fidelity with a photon-operated resource (linear in the resource Wigner function)."""
    norm = require_positive_norm(state)
    if not state.has_zero_means:
        raise ValueError("fidelity_state expects zero-mean resource terms")
    a = noise_map(g)
    ref = np.eye(2) + a @ state.excess @ a.T + 0.5 * a @ a.T  # I + A V_ref A^T
    ref_inv = np.linalg.inv(ref)
    expo = []
    for t in state.terms:
        e = ref_inv @ (a @ t.shift @ a.T)
        # log det(I + e) for 2x2 e
        expo.append(t.log_weight - 0.5 * np.log1p(np.trace(e) + np.linalg.det(e)))
    total = signed_exp_sum(state.signs, np.array(expo))
    return float(total / np.sqrt(np.linalg.det(ref)) / norm)


def optimal_gain(state, gain_range=GAIN_RANGE, n_grid=31, tol=1e-8):
    """Gain maximizing the fidelity; returns ``(g*, F*)``."""
    require_positive_norm(state)
    grid = np.linspace(*gain_range, n_grid)
    return grid_then_golden(lambda g: fidelity_state(state, g), grid, tol)


def ghz_optimal_gain(r):
    """Closed-form optimal gain for the biased GHZ resource."""
    e = np.exp(4 * r)
    return (e - 1) / (e + 0.5)


def fidelity_curve(ops, r, gain="unit"):
    """``(g, F)`` at squeezing ``r``; ``gain`` is ``"unit"``, ``"optimal"`` or a number."""
    state = photon_operated_ghz(r, ops)
    if gain == "optimal":
        return optimal_gain(state)
    g = 1.0 if gain == "unit" else float(gain)
    return g, fidelity_state(state, g)


class NoCrossingError(ValueError):
    """Fidelity never crosses the classical bound from below in the scanned range."""


def threshold_squeezing(ops, gain="unit", r_range=R_RANGE, n_grid=R_GRID, xtol=1e-7):
    """Smallest ``r`` at which the fidelity reaches the classical value 1/2."""

    def excess(r):
        try:
            return fidelity_curve(ops, r, gain)[1] - CLASSICAL_FIDELITY
        except ZeroProbabilityError:
            return np.nan

    grid = np.linspace(*r_range, n_grid)
    values = np.array([excess(r) for r in grid])
    k = first_upcrossing(values)
    if k is None:
        raise NoCrossingError(f"fidelity does not cross 1/2 from below on r in {r_range}")
    return float(brentq(excess, grid[k], grid[k + 1], xtol=xtol))


def output_wigner(state, g, input_alpha, xs, ps):
    """Normalized output Wigner function on the grid ``xs x ps`` (shape ``(len(xs), len(ps))``)."""
    out = teleported_state(state, g, input_alpha)
    xx, pp = np.meshgrid(np.asarray(xs, float), np.asarray(ps, float), indexing="ij")
    return wigner_value(out, np.stack([xx, pp], axis=-1), normalized=True)


def is_split(values):
    """True if a 1-D section has a sign change or more than one local maximum."""
    values = np.asarray(values)
    if values.min() < 0 < values.max():
        return True
    inner = values[1:-1]
    peaks = (inner > values[:-2]) & (inner >= values[2:])
    return int(np.count_nonzero(peaks)) > 1


def epr_sum(state, pair=(0, 2)):
    """``<[Delta(x_i - x_j)]^2> + <(Delta sum_k p_k)^2>`` from the second moments."""
    i, j = pair
    if i == j:
        raise ValueError("EPR pair needs two distinct modes")
    v = effective_covariance(state)
    xi, xj = 2 * i, 2 * j
    var_x = v[xi, xi] + v[xj, xj] - 2 * v[xi, xj]
    p = np.arange(1, v.shape[0], 2)
    return float(var_x + v[np.ix_(p, p)].sum())
