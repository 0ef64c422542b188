"""Truncated Fock-space simulator used as a brute-force cross-check of the phase-space path.

States are amplitude tensors with one axis per mode.  A heralded state is a
mixture of pure branches (one per detected ancilla photon number), stored as a
leading branch axis; branch norms carry the branch probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm
from scipy.special import eval_genlaguerre, gammaln

from .ghz import PhotonOp
from .phasespace import ZeroProbabilityError

DEFAULT_CUTOFF = 14
ANCILLA_CUTOFF = 8
TAIL_TOL = 1e-8
BRANCH_PRUNE = 1e-30


class FockTruncationError(ValueError):
    """Too much weight sits near the truncation boundary."""


@dataclass(frozen=True)
class FockArray:
    """Pure state: complex amplitudes indexed ``[n_1, ..., n_k]``."""

    amplitudes: np.ndarray

    @property
    def num_modes(self):
        return self.amplitudes.ndim

    @property
    def cutoffs(self):
        return self.amplitudes.shape

    def norm(self):
        return float(np.sum(np.abs(self.amplitudes) ** 2))


@dataclass(frozen=True)
class FockBranchMixture:
    """Unnormalized mixture ``sum_b |psi_b><psi_b|``; ``branches[b]`` is ``psi_b``."""

    branches: np.ndarray

    @property
    def num_modes(self):
        return self.branches.ndim - 1

    @property
    def cutoffs(self):
        return self.branches.shape[1:]

    def branch_weights(self):
        axes = tuple(range(1, self.branches.ndim))
        return np.sum(np.abs(self.branches) ** 2, axis=axes)

    def norm(self):
        return float(np.sum(self.branch_weights()))


def as_mixture(state):
    if isinstance(state, FockBranchMixture):
        return state
    return FockBranchMixture(state.amplitudes[np.newaxis])


def squeezed_vacuum_fock(r, cutoff=DEFAULT_CUTOFF):
    """Squeezed vacuum with ``x``-variance ``e^{-2r}/2`` (``r < 0`` squeezes p instead)."""
    if cutoff < 8:
        raise ValueError("cutoff must be at least 8")
    amps = np.zeros(cutoff, dtype=complex)
    n = np.arange((cutoff + 1) // 2)
    log_mag = 0.5 * gammaln(2 * n + 1) - n * np.log(2.0) - gammaln(n + 1)
    th = np.tanh(r)
    with np.errstate(divide="ignore"):
        powers = np.where(n == 0, 1.0, (-th) ** n)
    amps[0::2] = powers * np.exp(log_mag) / np.sqrt(np.cosh(r))
    check_converged(FockArray(amps))
    return FockArray(amps)


def vacuum_fock(num_modes, cutoff=DEFAULT_CUTOFF):
    amps = np.zeros((cutoff,) * num_modes, dtype=complex)
    amps[(0,) * num_modes] = 1.0
    return FockArray(amps)


def tensor(*states):
    out = states[0].amplitudes
    for s in states[1:]:
        out = np.multiply.outer(out, s.amplitudes)
    return FockArray(out)


def annihilation(cutoff):
    return np.diag(np.sqrt(np.arange(1, cutoff)), 1)


def _two_mode_unitary(generator_fn, dim_i, dim_j):
    a_i = np.kron(annihilation(dim_i), np.eye(dim_j))
    a_j = np.kron(np.eye(dim_i), annihilation(dim_j))
    return expm(generator_fn(a_i, a_j)).reshape(dim_i, dim_j, dim_i, dim_j)


def _apply_two_mode(state, u, mode_i, mode_j):
    mix = as_mixture(state)
    ax_i, ax_j = mode_i + 1, mode_j + 1
    out = np.tensordot(u, mix.branches, axes=([2, 3], [ax_i, ax_j]))
    # tensordot puts the new (i, j) axes first
    out = np.moveaxis(out, [0, 1], [ax_i, ax_j])
    result = FockBranchMixture(out)
    if isinstance(state, FockArray):
        return FockArray(out[0])
    return result


def beam_splitter_fock(state, t, mode_i, mode_j):
    """Beam splitter of amplitude transmissivity ``t = cos(theta)`` (matches the phase-space sign)."""
    theta = np.arccos(np.clip(t, -1.0, 1.0))
    dims = state.cutoffs
    u = _two_mode_unitary(lambda a, b: theta * (a @ b.conj().T - a.conj().T @ b),
                          dims[mode_i], dims[mode_j])
    return _apply_two_mode(state, u, mode_i, mode_j)


def two_mode_squeezer_fock(state, s, mode_i, mode_j):
    """``exp(s (a^dag b^dag - a b))``."""
    dims = state.cutoffs
    u = _two_mode_unitary(lambda a, b: s * (a.conj().T @ b.conj().T - a @ b),
                          dims[mode_i], dims[mode_j])
    return _apply_two_mode(state, u, mode_i, mode_j)


def attach_vacuum_fock(state, cutoff=ANCILLA_CUTOFF):
    vac = np.zeros(cutoff, dtype=complex)
    vac[0] = 1.0
    if isinstance(state, FockArray):
        return FockArray(np.multiply.outer(state.amplitudes, vac))
    return FockBranchMixture(np.multiply.outer(state.branches, vac))


def condition_click_fock(state, ancilla_mode):
    """Keep every ancilla photon number ``n >= 1`` as its own branch and drop the ancilla."""
    mix = as_mixture(state)
    ax = ancilla_mode + 1
    kept = np.moveaxis(mix.branches, ax, 1)[:, 1:]
    branches = kept.reshape((-1,) + kept.shape[2:])
    weights = np.sum(np.abs(branches.reshape(len(branches), -1)) ** 2, axis=1)
    if weights.sum() <= 0:
        raise ZeroProbabilityError("detector never clicks")
    keep = weights > BRANCH_PRUNE * weights.max()
    return FockBranchMixture(branches[keep])


def check_converged(state, tol=TAIL_TOL):
    """Raise unless the weight in the top two levels of every mode is below ``tol``."""
    mix = as_mixture(state)
    total = mix.norm()
    probs = np.abs(mix.branches) ** 2
    for m, dim in enumerate(mix.cutoffs):
        axes = tuple(k for k in range(probs.ndim) if k != m + 1)
        marginal = probs.sum(axis=axes)
        tail = marginal[max(dim - 2, 0):].sum()
        if tail > tol * total:
            raise FockTruncationError(
                f"mode {m}: weight {tail / total:.2e} in the top levels of a cutoff-{dim} space"
            )
    return state


def cutoff_for(r, tol=TAIL_TOL, floor=DEFAULT_CUTOFF):
    """Smallest even cutoff whose squeezed-vacuum tail (top two levels) lies 100x below ``tol``."""
    th2 = np.tanh(abs(r)) ** 2
    n = floor // 2
    while True:
        # weight of |2n> relative to the total is ~ (1 - th2)^(1/2) th2^n / sqrt(pi n)
        if np.sqrt(1 - th2) * th2 ** (n - 1) / np.sqrt(np.pi * max(n - 1, 1)) < tol / 100:
            return 2 * n
        n += 1


def ghz_fock(r, cutoff=None):
    """Biased three-mode GHZ state, mirroring the phase-space tritter circuit."""
    if cutoff is None:
        cutoff = cutoff_for(r)
    p_squeezed = squeezed_vacuum_fock(-r, cutoff)
    x_squeezed = squeezed_vacuum_fock(r, cutoff)
    state = tensor(p_squeezed, x_squeezed, x_squeezed)
    state = beam_splitter_fock(state, 1 / np.sqrt(3), 0, 1)
    state = beam_splitter_fock(state, 1 / np.sqrt(2), 1, 2)
    return check_converged(state)


def apply_photon_op_fock(state, op, ancilla_cutoff=ANCILLA_CUTOFF):
    anc = state.num_modes
    state = attach_vacuum_fock(state, ancilla_cutoff)
    if op.kind == "sub":
        state = beam_splitter_fock(state, np.sqrt(op.coupling), op.mode, anc)
    else:
        state = two_mode_squeezer_fock(state, op.coupling, op.mode, anc)
    check_converged(state)
    return condition_click_fock(state, anc)


def apply_photon_ops_fock(state, ops, ancilla_cutoff=ANCILLA_CUTOFF):
    state = as_mixture(state)
    for op in ops:
        if not isinstance(op, PhotonOp):
            raise TypeError("ops must be PhotonOp instances")
        state = apply_photon_op_fock(state, op, ancilla_cutoff)
    return state


def _single_mode_apply(branches, op, mode):
    """Apply a matrix acting on ``mode`` (branch axis first)."""
    ax = mode + 1
    out = np.tensordot(op, branches, axes=([1], [ax]))
    return np.moveaxis(out, 0, ax)


def _pad(branches, extra):
    pad = [(0, 0)] + [(0, extra)] * (branches.ndim - 1)
    return np.pad(branches, pad)


def covariance_from_fock(state):
    """Covariance matrix (and zero-padded exact second moments) of a Fock state."""
    mix = as_mixture(state)
    total = mix.norm()
    b = _pad(mix.branches, 1)
    dim = b.shape[1:]
    vecs, means = [], []
    for m in range(mix.num_modes):
        a = annihilation(dim[m])
        x = (a + a.T) / np.sqrt(2)
        p = (a - a.T) / (1j * np.sqrt(2))
        for q in (x, p):
            qv = _single_mode_apply(b, q, m)
            vecs.append(qv)
            means.append(np.vdot(b, qv).real / total)
    n = len(vecs)
    cov = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            val = np.vdot(vecs[i], vecs[j]).real / total - means[i] * means[j]
            cov[i, j] = cov[j, i] = val
    return cov


def displacement_matrix(beta, dim):
    """``<m|D(beta)|n>`` for ``m, n < dim`` from the Laguerre closed form."""
    m = np.arange(dim)[:, None]
    n = np.arange(dim)[None, :]
    lo, hi = np.minimum(m, n), np.maximum(m, n)
    x = abs(beta) ** 2
    lag = eval_genlaguerre(lo, hi - lo, x)
    pref = np.exp(0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) - 0.5 * x)
    power = np.where(m >= n, beta ** (m - n).clip(0), (-np.conj(beta)) ** (n - m).clip(0))
    return pref * power * lag


def wigner_point_from_fock(state, point, normalized=True):
    """Wigner function at a phase-space point via ``pi^-N <prod_k D(2 alpha_k) Pi_k>``."""
    mix = as_mixture(state)
    point = np.asarray(point, dtype=float)
    if point.shape != (2 * mix.num_modes,):
        raise ValueError(f"point must have {2 * mix.num_modes} coordinates")
    b = mix.branches
    out = b
    for k, dim in enumerate(mix.cutoffs):
        alpha = (point[2 * k] + 1j * point[2 * k + 1]) / np.sqrt(2)
        if abs(alpha) ** 2 >= dim / 4:
            raise ValueError(f"point lies outside the reliable window of a cutoff-{dim} mode")
        parity = (-1.0) ** np.arange(dim)
        op = displacement_matrix(2 * alpha, dim) * parity[None, :]
        out = _single_mode_apply(out, op, k)
    value = np.vdot(b, out).real / np.pi ** mix.num_modes
    if normalized:
        value /= mix.norm()
    return float(value)


def success_probability(state):
    return as_mixture(state).norm()


def dominant_branch(state):
    """The highest-weight pure branch, normalized."""
    mix = as_mixture(state)
    k = int(np.argmax(mix.branch_weights()))
    psi = mix.branches[k]
    return psi / np.linalg.norm(psi)
