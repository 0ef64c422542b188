"""Build a three-mode GHZ state, subtract or add photons, and look at what changes."""

import numpy as np

from cvghz.entanglement import tangle_of_state
from cvghz.ghz import GHZParams, ghz_covariance, parse_scheme, photon_operated_ghz
from cvghz.phasespace import effective_covariance, mixture_norm

np.set_printoptions(precision=4, suppress=True)

r = 0.3
v = ghz_covariance(GHZParams.biased(r))  # one p-squeezed and two x-squeezed vacua on a tritter
print("GHZ covariance at r = 0.3 (x1, p1, x2, p2, x3, p3):")
print(v)

# a heralded operation taps one mode with a weak splitter (subtraction) or a weak
# amplifier (addition) and keeps the runs where the ancilla detector clicks.
# the state becomes a signed sum of Gaussians and its norm is the success rate
for spec in ["sub:A", "sub:A,B", "sub:A,B,C", "add:A", "add:A,B", "add:A,B,C"]:
    st = photon_operated_ghz(r, parse_scheme(spec))
    print(f"{spec:10s} terms={len(st.terms):3d}  P(success)={mixture_norm(st):.3e}  "
          f"tangle={tangle_of_state(st):.4f}")

print(f"{'ghz':10s} terms=  1  P(success)=1          tangle={tangle_of_state(photon_operated_ghz(r, [])):.4f}")

# subtraction on two modes raises the second moments' entanglement above the GHZ
# value, everything else lowers it
st = photon_operated_ghz(r, parse_scheme("sub:A,B"))
print("\nsecond moments after sub:A,B")
print(effective_covariance(st))
