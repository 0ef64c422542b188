"""Photon-subtracted and photon-added continuous-variable GHZ states.

Signed Gaussian-mixture phase-space simulation with entanglement, Bell-type
nonlocality and teleportation figures of merit, plus a truncated-Fock oracle.
"""

from .entanglement import gaussian_tangle, log_negativity, symplectic_eigenvalues, tangle_of_state
from .ghz import GHZParams, PhotonOp, ghz_covariance, ghz_state, parse_scheme, photon_operated_ghz
from .nonlocality import b3_value, max_b3_over_r, maximize_b3, threshold_efficiency
from .phasespace import (
    GaussianMixtureState,
    ZeroProbabilityError,
    apply_loss,
    apply_symplectic,
    condition_on_click,
    effective_covariance,
    mixture_norm,
    wigner_value,
)
from .teleportation import (
    epr_sum,
    fidelity_gaussian,
    fidelity_state,
    optimal_gain,
    output_wigner,
    threshold_squeezing,
)

__version__ = "0.1.0"
