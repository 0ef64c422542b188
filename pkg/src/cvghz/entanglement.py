"""Symplectic spectra, logarithmic negativity and the three-mode Gaussian tangle."""

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .phasespace import effective_covariance, symplectic_form

IMAG_TOL = 1e-9


@dataclass(frozen=True)
class Partition:
    """Bipartition whose ``transposed_modes`` side is partially transposed."""

    transposed_modes: tuple
    num_modes: int

    def __post_init__(self):
        modes = tuple(sorted(set(self.transposed_modes)))
        if not modes or len(modes) >= self.num_modes:
            raise ValueError("transposed side must be a nonempty proper subset of the modes")
        if modes[0] < 0 or modes[-1] >= self.num_modes:
            raise ValueError(f"modes {modes} out of range")
        object.__setattr__(self, "transposed_modes", modes)


def _check_cov(v):
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2:
        raise ValueError("covariance must be a square 2N x 2N matrix")
    if np.max(np.abs(v - v.T)) > 1e-10 * max(1.0, np.max(np.abs(v))):
        raise ValueError("covariance matrix is not symmetric")
    return v


def symplectic_eigenvalues(v):
    """Sorted symplectic eigenvalues, the square roots of the spectrum of ``-(Omega V)^2``."""
    v = _check_cov(v)
    n = v.shape[0] // 2
    ov = symplectic_form(n) @ v
    ev = np.linalg.eigvals(-ov @ ov)
    if np.max(np.abs(ev.imag)) > IMAG_TOL * max(1.0, np.max(np.abs(ev))):
        raise ValueError("symplectic spectrum has a non-negligible imaginary part")
    ev = np.sort(ev.real)
    # each eigenvalue of -(Omega V)^2 appears twice
    return np.sqrt(np.clip(0.5 * (ev[0::2] + ev[1::2]), 0.0, None))


def partial_transpose(v, modes):
    """Flip the sign of the p quadratures of ``modes``."""
    v = np.array(v, dtype=float)
    flip = np.ones(v.shape[0])
    for m in modes:
        flip[2 * m + 1] = -1.0
    return v * np.outer(flip, flip)


def reduced_covariance(v, modes):
    idx = [k for m in modes for k in (2 * m, 2 * m + 1)]
    return np.asarray(v)[np.ix_(idx, idx)]


def log_negativity(v, partition):
    """``-log2 ||rho^T||_1`` for a Gaussian covariance matrix."""
    if not isinstance(partition, Partition):
        partition = Partition(tuple(np.atleast_1d(partition)), np.asarray(v).shape[0] // 2)
    nu = symplectic_eigenvalues(partial_transpose(v, partition.transposed_modes))
    return float(np.sum(np.maximum(0.0, -np.log2(2 * nu))))


def squared_log_negativity(v, partition):
    return log_negativity(v, partition) ** 2


def tangle_residuals(v):
    """``E^{i|jk} - E^{i|j} - E^{i|k}`` for each focus mode ``i`` of a three-mode state."""
    v = _check_cov(v)
    if v.shape != (6, 6):
        raise ValueError("the Gaussian tangle is defined for three-mode states")
    out = []
    for i, j, k in permutations(range(3)):
        if j > k:
            continue
        whole = squared_log_negativity(v, Partition((i,), 3))
        ij = squared_log_negativity(reduced_covariance(v, (i, j)), Partition((0,), 2))
        ik = squared_log_negativity(reduced_covariance(v, (i, k)), Partition((0,), 2))
        out.append(whole - ij - ik)
    return np.array(out)


def gaussian_tangle(v):
    return float(np.min(tangle_residuals(v)))


def tangle_of_state(state):
    """Gaussian tangle of the state's second moments."""
    return gaussian_tangle(effective_covariance(state))
