"""Signed Gaussian-mixture states in quadrature phase space.

Quadratures are ordered ``(x1, p1, ..., xN, pN)`` with ``x = (a + a^dag)/sqrt(2)``,
so the vacuum covariance is ``I/2``.

A state is a finite signed sum of Gaussian Wigner functions.  Conditioning on an
on/off detector click turns every term into a *pair* of nearly identical terms
of opposite sign, and for weak couplings (beam-splitter reflectivity ~0.1,
amplifier gain ~0.01) their difference is many orders of magnitude below the
terms themselves.  To keep that difference accurate the state stores

* one reference covariance, as its excess over the vacuum (``excess``), and
* for each term a sign, a log-weight and a covariance ``shift`` relative to the
  reference.

Every operation updates shifts and log-weights through products and ``log1p``
only, never by subtracting nearly equal covariances, and sums over terms use
``sum(sign) + sum(sign * expm1(log_weight + ...))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

VACUUM_VARIANCE = 0.5

# Norms below this fraction of the cancelling term magnitudes are treated as
# zero: past that point float64 round-off dominates the signed sum.
RELIABLE_NORM_FRACTION = 1e-10

SINGULAR_DET = 1e-300


class ZeroProbabilityError(ValueError):
    """The conditioning event has zero (or numerically unresolvable) probability."""


def symplectic_form(num_modes):
    return np.kron(np.eye(num_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _mode_slice(mode):
    return slice(2 * mode, 2 * mode + 2)


def _check_modes(num_modes, *modes):
    for m in modes:
        if not 0 <= m < num_modes:
            raise ValueError(f"mode index {m} out of range for {num_modes} modes")
    if len(set(modes)) != len(modes):
        raise ValueError(f"mode indices must be distinct, got {modes}")


@dataclass(frozen=True)
class SymplecticMatrix:
    """A symplectic matrix together with ``matrix - I`` computed without cancellation.

    ``offset`` lets :func:`apply_symplectic` update vacuum-excess covariances
    accurately when the transformation is close to the identity.
    """

    matrix: np.ndarray
    offset: np.ndarray

    @property
    def num_modes(self):
        return self.matrix.shape[0] // 2

    def is_symplectic(self, tol=1e-12):
        omega = symplectic_form(self.num_modes)
        return np.max(np.abs(self.matrix @ omega @ self.matrix.T - omega)) < tol

    def __matmul__(self, other):
        return compose(self, other)


def _embed(blocks, num_modes):
    """Identity on all modes except the 2x2 ``blocks`` given as {(i, j): offset_block}."""
    offset = np.zeros((2 * num_modes, 2 * num_modes))
    for (i, j), blk in blocks.items():
        offset[_mode_slice(i), _mode_slice(j)] = blk
    return SymplecticMatrix(np.eye(2 * num_modes) + offset, offset)


def identity(num_modes):
    return _embed({}, num_modes)


def compose(first, second):
    """``first @ second`` (``second`` acts first on the state)."""
    k1, k2 = first.offset, second.offset
    offset = k1 + k2 + k1 @ k2
    return SymplecticMatrix(first.matrix @ second.matrix, offset)


def beam_splitter(t, mode_i, mode_j, num_modes):
    """Beam splitter with amplitude transmissivity ``t`` mixing ``mode_i`` and ``mode_j``.

    Blocks ``[[t I, -r I], [r I, t I]]`` with ``r = sqrt(1 - t^2)``.
    """
    if not 0.0 < t <= 1.0:
        raise ValueError(f"transmissivity must lie in (0, 1], got {t}")
    _check_modes(num_modes, mode_i, mode_j)
    r = np.sqrt((1.0 - t) * (1.0 + t))
    tm1 = -(r * r) / (1.0 + t)
    eye = np.eye(2)
    return _embed(
        {(mode_i, mode_i): tm1 * eye, (mode_i, mode_j): -r * eye,
         (mode_j, mode_i): r * eye, (mode_j, mode_j): tm1 * eye},
        num_modes,
    )


def ndpa(s_param, mode_i, mode_j, num_modes):
    """Non-degenerate parametric amplifier (two-mode squeezer) of strength ``s_param``."""
    if s_param < 0:
        raise ValueError(f"interaction strength must be >= 0, got {s_param}")
    _check_modes(num_modes, mode_i, mode_j)
    ch_m1 = 2.0 * np.sinh(0.5 * s_param) ** 2
    sz = np.diag([1.0, -1.0]) * np.sinh(s_param)
    eye = np.eye(2)
    return _embed(
        {(mode_i, mode_i): ch_m1 * eye, (mode_i, mode_j): sz,
         (mode_j, mode_i): sz, (mode_j, mode_j): ch_m1 * eye},
        num_modes,
    )


def single_mode_squeezer(r, mode, num_modes):
    """``diag(e^r, e^-r)`` on one mode; ``r > 0`` squeezes p, ``r < 0`` squeezes x."""
    _check_modes(num_modes, mode)
    return _embed({(mode, mode): np.diag([np.expm1(r), np.expm1(-r)])}, num_modes)


def phase_rotation(theta, mode, num_modes):
    _check_modes(num_modes, mode)
    c_m1 = -2.0 * np.sin(0.5 * theta) ** 2
    s = np.sin(theta)
    return _embed({(mode, mode): np.array([[c_m1, s], [-s, c_m1]])}, num_modes)


@dataclass(frozen=True)
class GaussianTerm:
    """One signed Gaussian component.

    Its weight is ``sign * exp(log_weight)`` and its covariance is the owning
    state's reference covariance plus ``shift``.
    """

    sign: int
    log_weight: float
    mean: np.ndarray
    shift: np.ndarray

    @property
    def weight(self):
        return self.sign * np.exp(self.log_weight)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GaussianMixtureState:
    """Unnormalized multimode state ``sum_k w_k N(xi; mean_k, cov_k)``."""

    excess: np.ndarray
    terms: tuple

    def __post_init__(self):
        object.__setattr__(self, "excess", _frozen(self.excess))
        dim = self.excess.shape[0]
        if self.excess.shape != (dim, dim) or dim % 2:
            raise ValueError("reference covariance must be a square 2N x 2N matrix")
        for term in self.terms:
            if term.mean.shape != (dim,) or term.shift.shape != (dim, dim):
                raise ValueError("term dimensions do not match the state")

    @property
    def num_modes(self):
        return self.excess.shape[0] // 2

    @property
    def reference_cov(self):
        return self.excess + VACUUM_VARIANCE * np.eye(self.excess.shape[0])

    def cov(self, k):
        return self.reference_cov + self.terms[k].shift

    @property
    def covs(self):
        ref = self.reference_cov
        return [ref + t.shift for t in self.terms]

    @property
    def weights(self):
        return np.array([t.weight for t in self.terms])

    @property
    def means(self):
        return np.array([t.mean for t in self.terms])

    @property
    def signs(self):
        return np.array([t.sign for t in self.terms], dtype=float)

    @property
    def log_weights(self):
        return np.array([t.log_weight for t in self.terms])

    @property
    def has_zero_means(self):
        return all(not np.any(t.mean) for t in self.terms)

    def __len__(self):
        return len(self.terms)

    @cached_property
    def _eval_cache(self):
        ref = self.reference_cov
        chol = np.linalg.cholesky(ref)
        ref_inv = np.linalg.inv(ref)
        _, logdet_ref = np.linalg.slogdet(2 * np.pi * ref)
        inv_covs, quad, offsets = [], [], []
        for t in self.terms:
            cov = ref + t.shift
            cov_inv = np.linalg.inv(cov)
            inv_covs.append(cov_inv)
            # cov^-1 - ref^-1 = -cov^-1 shift ref^-1
            h = -cov_inv @ t.shift @ ref_inv
            quad.append(0.5 * (h + h.T))
            offsets.append(t.log_weight - 0.5 * _logdet_identity_plus(chol, t.shift))
        return {
            "ref_inv": ref_inv,
            "logdet_ref": logdet_ref,
            "inv_covs": np.array(inv_covs),
            "quad": np.array(quad),
            "offsets": np.array(offsets),
        }


def _logdet_identity_plus(chol, shift):
    """``log det(I + ref^-1 shift)`` through the symmetric form ``L^-1 shift L^-T``."""
    if not np.any(shift):
        return 0.0
    tmp = np.linalg.solve(chol, shift)
    sym = np.linalg.solve(chol, tmp.T)
    mu = np.linalg.eigvalsh(0.5 * (sym + sym.T))
    if np.any(mu <= -1.0):
        raise ValueError("term covariance is not positive definite")
    return float(np.sum(np.log1p(mu)))


def signed_exp_sum(signs, exponents, axis=-1):
    """``sum(signs * exp(exponents))`` along ``axis``, accurate under cancellation."""
    return np.sum(signs, axis=axis) + np.sum(signs * np.expm1(exponents), axis=axis)


def gaussian_state(cov, mean=None):
    """Single-term normalized Gaussian state."""
    cov = np.asarray(cov, dtype=float)
    dim = cov.shape[0]
    return _single(cov - VACUUM_VARIANCE * np.eye(dim), mean)


def gaussian_state_from_excess(excess, mean=None):
    """Like :func:`gaussian_state` but takes ``cov - I/2`` directly (kept exact)."""
    return _single(np.asarray(excess, dtype=float), mean)


def _single(excess, mean):
    dim = excess.shape[0]
    mean = np.zeros(dim) if mean is None else np.asarray(mean, dtype=float)
    term = GaussianTerm(1, 0.0, _frozen(mean), _frozen(np.zeros((dim, dim))))
    return GaussianMixtureState(excess, (term,))


def mixture_from_terms(weights, means, covs):
    """Build a state from explicit ``(weight, mean, cov)`` triples.

    The first term's covariance becomes the reference.
    """
    covs = [np.asarray(c, dtype=float) for c in covs]
    if not covs:
        raise ValueError("need at least one term")
    ref = covs[0]
    dim = ref.shape[0]
    terms = []
    for w, mu, c in zip(weights, means, covs):
        if w == 0 or not np.isfinite(w):
            raise ValueError(f"term weights must be finite and nonzero, got {w}")
        terms.append(GaussianTerm(int(np.sign(w)), float(np.log(abs(w))),
                                  _frozen(mu), _frozen(c - ref)))
    return GaussianMixtureState(ref - VACUUM_VARIANCE * np.eye(dim), tuple(terms))


def vacuum_state(num_modes):
    if num_modes < 1:
        raise ValueError("num_modes must be >= 1")
    return gaussian_state(VACUUM_VARIANCE * np.eye(2 * num_modes))


def _replace_terms(state, excess, fn):
    return GaussianMixtureState(excess, tuple(fn(t) for t in state.terms))


def apply_symplectic(state, s):
    """Evolve every term: ``mean -> S mean``, ``cov -> S cov S^T``."""
    if not isinstance(s, SymplecticMatrix):
        m = np.asarray(s, dtype=float)
        s = SymplecticMatrix(m, m - np.eye(m.shape[0]))
    if s.matrix.shape != state.excess.shape:
        raise ValueError(
            f"symplectic matrix of size {s.matrix.shape[0]} does not match "
            f"{state.num_modes}-mode state"
        )
    mat, k = s.matrix, s.offset
    vac_shift = VACUUM_VARIANCE * (k + k.T + k @ k.T)
    excess = mat @ state.excess @ mat.T + vac_shift
    return _replace_terms(
        state, excess,
        lambda t: GaussianTerm(t.sign, t.log_weight, _frozen(mat @ t.mean),
                               _frozen(mat @ t.shift @ mat.T)),
    )


def attach_vacuum(state, count=1):
    """Append ``count`` vacuum modes after the existing ones."""
    if count < 1:
        raise ValueError("count must be >= 1")
    dim = state.excess.shape[0]
    new = dim + 2 * count

    def pad_mat(a):
        out = np.zeros((new, new))
        out[:dim, :dim] = a
        return out

    def pad_vec(v):
        out = np.zeros(new)
        out[:dim] = v
        return out

    return _replace_terms(
        state, pad_mat(state.excess),
        lambda t: GaussianTerm(t.sign, t.log_weight, _frozen(pad_vec(t.mean)),
                               _frozen(pad_mat(t.shift))),
    )


def condition_on_click(state, ancilla_mode):
    """Project ``ancilla_mode`` onto the detector 'on' event ``I - |0><0|`` and trace it out.

    Each zero-mean input term ``(w, V)`` becomes ``(w, Gamma)`` and
    ``(-w / sqrt(det(Delta + I/2)), Gamma - M (Delta + I/2)^-1 M^T)`` where
    ``Gamma``, ``M`` and ``Delta`` are the system, coupling and ancilla blocks of
    ``V``.  The result is unnormalized: its norm is the click probability times the
    input norm.
    """
    n = state.num_modes
    _check_modes(n, ancilla_mode)
    if n < 2:
        raise ValueError("cannot condition the only mode of a state")
    if not state.has_zero_means:
        raise ValueError("click conditioning is only implemented for zero-mean terms")
    keep = np.array([k for m in range(n) if m != ancilla_mode for k in (2 * m, 2 * m + 1)])
    anc = np.array([2 * ancilla_mode, 2 * ancilla_mode + 1])
    x = state.excess
    x_ss, x_sa, x_aa = x[np.ix_(keep, keep)], x[np.ix_(keep, anc)], x[np.ix_(anc, anc)]
    zero = _frozen(np.zeros(len(keep)))
    terms = []
    for t in state.terms:
        d = t.shift
        d_ss = d[np.ix_(keep, keep)]
        m = x_sa + d[np.ix_(keep, anc)]
        e = x_aa + d[np.ix_(anc, anc)]  # Delta - I/2
        det_minus_1 = np.trace(e) + np.linalg.det(e)  # det(I + e) - 1
        if det_minus_1 <= -1.0 + SINGULAR_DET:
            raise ValueError("ancilla block Delta + I/2 is singular")
        a_inv = np.linalg.inv(np.eye(2) + e)
        schur = m @ a_inv @ m.T
        terms.append(GaussianTerm(t.sign, t.log_weight, zero, _frozen(d_ss)))
        terms.append(GaussianTerm(-t.sign, t.log_weight - 0.5 * np.log1p(det_minus_1),
                                  zero, _frozen(d_ss - 0.5 * (schur + schur.T))))
    return GaussianMixtureState(x_ss, tuple(terms))


def apply_loss(state, eta):
    """Pure-loss channel of efficiency ``eta`` on every mode: ``V -> eta V + (1-eta)/2 I``."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"efficiency must lie in [0, 1], got {eta}")
    se = np.sqrt(eta)
    return _replace_terms(
        state, eta * state.excess,
        lambda t: GaussianTerm(t.sign, t.log_weight, _frozen(se * t.mean),
                               _frozen(eta * t.shift)),
    )


def permute_modes(state, order):
    """Relabel modes so that new mode ``k`` is old mode ``order[k]``."""
    order = list(order)
    if sorted(order) != list(range(state.num_modes)):
        raise ValueError(f"{order} is not a permutation of the modes")
    idx = np.array([k for m in order for k in (2 * m, 2 * m + 1)])
    return _replace_terms(
        state, state.excess[np.ix_(idx, idx)],
        lambda t: GaussianTerm(t.sign, t.log_weight, _frozen(t.mean[idx]),
                               _frozen(t.shift[np.ix_(idx, idx)])),
    )


def _norm_and_scale(state):
    signs, lw = state.signs, state.log_weights
    norm = signed_exp_sum(signs, lw)
    scale = np.sum(np.abs(np.expm1(lw)))
    return norm, scale


def mixture_norm(state):
    """Total weight of the mixture, i.e. the success probability of its conditionings."""
    return float(_norm_and_scale(state)[0])


def require_positive_norm(state):
    """Return the norm, raising :class:`ZeroProbabilityError` if it is not resolvable."""
    norm, scale = _norm_and_scale(state)
    if not norm > RELIABLE_NORM_FRACTION * scale or norm <= 0:
        raise ZeroProbabilityError(
            f"zero success probability (norm {norm:.3e}, term scale {scale:.3e})"
        )
    return float(norm)


def wigner_value(state, point, normalized=False):
    """Evaluate the Wigner function at ``point`` (shape ``(..., 2N)``)."""
    point = np.asarray(point, dtype=float)
    dim = state.excess.shape[0]
    if point.shape[-1] != dim:
        raise ValueError(f"points must have {dim} coordinates")
    c = state._eval_cache
    base = -0.5 * np.einsum("...i,ij,...j->...", point, c["ref_inv"], point) - 0.5 * c["logdet_ref"]
    expo = c["offsets"] - 0.5 * np.einsum("...i,kij,...j->...k", point, c["quad"], point)
    if not state.has_zero_means:
        means = state.means
        lin = np.einsum("kij,kj->ki", c["inv_covs"], means)
        expo = expo + np.einsum("...i,ki->...k", point, lin) - 0.5 * np.einsum("ki,ki->k", means, lin)
    value = np.exp(base) * signed_exp_sum(state.signs, expo)
    if normalized:
        value = value / require_positive_norm(state)
    return value


def effective_covariance(state):
    """Second moments of the signed mixture (the covariance of the physical state)."""
    norm = require_positive_norm(state)
    signs, lw = state.signs, state.log_weights
    em1 = np.expm1(lw)
    shifts = np.array([t.shift for t in state.terms])
    coeff = signs * (1.0 + em1)
    # sum_k w_k shift_k, split so that the O(1) part of each weight cancels exactly
    mixed = np.einsum("k,kij->ij", signs, shifts) + np.einsum("k,kij->ij", signs * em1, shifts)
    cov = state.reference_cov + mixed / norm
    if not state.has_zero_means:
        means = state.means
        mbar = coeff @ means / norm
        cov = cov + np.einsum("k,ki,kj->ij", coeff, means, means) / norm - np.outer(mbar, mbar)
    return 0.5 * (cov + cov.T)


def mean_vector(state):
    norm = require_positive_norm(state)
    coeff = state.signs * np.exp(state.log_weights)
    return coeff @ state.means / norm


def uncertainty_violation(cov):
    """Most negative eigenvalue of ``cov + i Omega / 2`` (<= 0 means physical up to round-off)."""
    cov = np.asarray(cov, dtype=float)
    omega = symplectic_form(cov.shape[0] // 2)
    return float(np.linalg.eigvalsh(cov + 0.5j * omega)[0])


def is_physical(cov, tol=1e-9):
    cov = np.asarray(cov, dtype=float)
    if np.max(np.abs(cov - cov.T)) > 1e-12:
        return False
    return uncertainty_violation(cov) >= -tol
