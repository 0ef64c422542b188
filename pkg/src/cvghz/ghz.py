"""Continuous-variable GHZ states and conditional photon subtraction/addition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phasespace import (
    ZeroProbabilityError,
    apply_symplectic,
    attach_vacuum,
    beam_splitter,
    condition_on_click,
    gaussian_state_from_excess,
    ndpa,
    require_positive_norm,
    single_mode_squeezer,
    vacuum_state,
)

MODE_LABELS = "ABC"
SENDER, HELPER, RECEIVER = 0, 1, 2

DEFAULT_TRANSMITTANCE = 0.99
DEFAULT_GAIN = 0.01


@dataclass(frozen=True)
class GHZParams:
    """Squeezing of the one p-squeezed (``r1``) and ``N-1`` x-squeezed (``r2``) inputs."""

    r1: float
    r2: float
    num_modes: int = 3

    def __post_init__(self):
        if self.num_modes < 2:
            raise ValueError("a GHZ state needs at least two modes")
        if self.r1 < 0 or self.r2 < 0:
            raise ValueError("squeezing parameters must be non-negative")

    @classmethod
    def biased(cls, r, num_modes=3):
        return cls(r, r, num_modes)

    def excess_entries(self):
        """``(a - 1/2, b - 1/2, c, d)`` evaluated with ``expm1``."""
        n = self.num_modes
        u, v = np.expm1(2 * self.r1), np.expm1(-2 * self.r2)
        ui, vi = np.expm1(-2 * self.r1), np.expm1(2 * self.r2)
        return (
            (u + (n - 1) * v) / (2 * n),
            (ui + (n - 1) * vi) / (2 * n),
            (u - v) / (2 * n),
            (ui - vi) / (2 * n),
        )

    def entries(self):
        am, bm, c, d = self.excess_entries()
        return am + 0.5, bm + 0.5, c, d


def _ghz_matrix(diag_x, diag_p, off_x, off_p, n):
    v = np.zeros((2 * n, 2 * n))
    x, p = np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)
    v[np.ix_(x, x)] = off_x
    v[np.ix_(p, p)] = off_p
    v[x, x] = diag_x
    v[p, p] = diag_p
    return v


def ghz_covariance(params):
    a, b, c, d = params.entries()
    return _ghz_matrix(a, b, c, d, params.num_modes)


def ghz_state(params):
    """Single-term GHZ state built from the closed-form covariance."""
    am, bm, c, d = params.excess_entries()
    return gaussian_state_from_excess(_ghz_matrix(am, bm, c, d, params.num_modes))


def ghz_circuit(params):
    """Three-mode GHZ state from squeezed vacua sent through a tritter.

    Mode 0 is p-squeezed by ``r1``, modes 1 and 2 are x-squeezed by ``r2``; a
    ``t = 1/sqrt(3)`` splitter on (0, 1) followed by ``t = 1/sqrt(2)`` on (1, 2)
    spreads mode 0 evenly over all three outputs.
    """
    if params.num_modes != 3:
        raise ValueError("the tritter circuit is only defined for three modes")
    state = vacuum_state(3)
    state = apply_symplectic(state, single_mode_squeezer(params.r1, 0, 3))
    state = apply_symplectic(state, single_mode_squeezer(-params.r2, 1, 3))
    state = apply_symplectic(state, single_mode_squeezer(-params.r2, 2, 3))
    state = apply_symplectic(state, beam_splitter(1 / np.sqrt(3), 0, 1, 3))
    return apply_symplectic(state, beam_splitter(1 / np.sqrt(2), 1, 2, 3))


@dataclass(frozen=True)
class PhotonOp:
    """A heralded photon subtraction (``"sub"``) or addition (``"add"``) on one mode.

    ``coupling`` is the intensity transmittance ``|t|^2`` of the tapping beam
    splitter for subtraction and the amplifier strength ``s`` for addition.
    """

    kind: str
    mode: int
    coupling: float | None = None

    def __post_init__(self):
        if self.kind not in ("sub", "add"):
            raise ValueError(f"unknown photon operation {self.kind!r}")
        if self.mode not in (0, 1, 2):
            raise ValueError(f"mode must be 0, 1 or 2 (A, B, C), got {self.mode}")
        if self.coupling is None:
            default = DEFAULT_TRANSMITTANCE if self.kind == "sub" else DEFAULT_GAIN
            object.__setattr__(self, "coupling", default)
        if self.kind == "sub" and not 0.0 < self.coupling < 1.0:
            raise ValueError(f"transmittance must lie in (0, 1), got {self.coupling}")
        if self.kind == "add" and not self.coupling > 0.0:
            raise ValueError(f"amplifier strength must be positive, got {self.coupling}")

    @property
    def label(self):
        return f"{self.kind}:{MODE_LABELS[self.mode]}"

    def symplectic(self, num_modes):
        """Coupling of ``self.mode`` with an ancilla in the last mode."""
        anc = num_modes - 1
        if self.kind == "sub":
            return beam_splitter(np.sqrt(self.coupling), self.mode, anc, num_modes)
        return ndpa(self.coupling, self.mode, anc, num_modes)


def parse_scheme(text, transmittance=DEFAULT_TRANSMITTANCE, gain=DEFAULT_GAIN):
    """Parse ``"sub:A,C"``, ``"add:B"``, ``"sub:A;add:C"`` or ``"none"`` into ops."""
    text = text.strip()
    if text.lower() in ("", "none", "ghz"):
        return []
    ops = []
    for chunk in text.split(";"):
        kind, _, modes = chunk.partition(":")
        kind = kind.strip().lower()
        if kind not in ("sub", "add") or not modes:
            raise ValueError(f"bad scheme {chunk!r}; expected e.g. 'sub:A,C'")
        coupling = transmittance if kind == "sub" else gain
        for label in modes.split(","):
            label = label.strip().upper()
            if label not in MODE_LABELS:
                raise ValueError(f"unknown mode {label!r}; use A, B or C")
            ops.append(PhotonOp(kind, MODE_LABELS.index(label), coupling))
    _check_distinct(ops)
    return ops


def scheme_label(ops):
    if not ops:
        return "ghz"
    groups = {}
    for op in ops:
        groups.setdefault(op.kind, []).append(MODE_LABELS[op.mode])
    return ";".join(f"{k}:{','.join(v)}" for k, v in groups.items())


def _check_distinct(ops):
    modes = [op.mode for op in ops]
    if len(set(modes)) != len(modes):
        raise ValueError("at most one photon operation per mode is supported")


def apply_photon_op(state, op):
    """Attach a vacuum ancilla, couple it to ``op.mode``, and herald a click on it."""
    n = state.num_modes + 1
    state = attach_vacuum(state, 1)
    state = apply_symplectic(state, op.symplectic(n))
    return condition_on_click(state, n - 1)


def apply_photon_ops(state, ops):
    """Apply heralded operations in order; the result norm is the joint success probability."""
    ops = list(ops)
    _check_distinct(ops)
    for op in ops:
        state = apply_photon_op(state, op)
    if ops:
        require_positive_norm(state)
    return state


def photon_operated_ghz(r, ops):
    """Biased three-mode GHZ state of squeezing ``r`` after ``ops``."""
    return apply_photon_ops(ghz_state(GHZParams.biased(r)), ops)


__all__ = [
    "GHZParams",
    "PhotonOp",
    "ZeroProbabilityError",
    "apply_photon_op",
    "apply_photon_ops",
    "ghz_circuit",
    "ghz_covariance",
    "ghz_state",
    "parse_scheme",
    "photon_operated_ghz",
    "scheme_label",
]
