"""Brute-force check of the Gaussian-mixture results in a truncated Fock space."""

import numpy as np

from cvghz.fock import apply_photon_ops_fock, covariance_from_fock, dominant_branch, ghz_fock, wigner_point_from_fock
from cvghz.ghz import parse_scheme, photon_operated_ghz
from cvghz.phasespace import effective_covariance, mixture_norm, wigner_value

r = 0.3
ops = parse_scheme("sub:A,B")
gauss = photon_operated_ghz(r, ops)
brute = apply_photon_ops_fock(ghz_fock(r), ops)  # cutoff chosen from r (20 here)

print("success probability", mixture_norm(gauss), brute.norm())
print("covariance max diff", np.abs(effective_covariance(gauss) - covariance_from_fock(brute)).max())
point = np.array([0.2, -0.4, 0.0, 0.3, -0.1, 0.5])
print("W(point)", wigner_value(gauss, point, normalized=True), wigner_point_from_fock(brute, point))

# for weak squeezing the leading kets are easy to read off
psi = dominant_branch(apply_photon_ops_fock(ghz_fock(0.01), parse_scheme("sub:A,B,C")))
print("\nthree-mode subtraction, r = 0.01:")
for n in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]:
    print(" ", n, np.round(psi[n].real, 5))
