"""Mermin-Klyshko test with displaced parity: how much each scheme violates, and how fragile it is."""

import numpy as np

from cvghz.ghz import parse_scheme, photon_operated_ghz
from cvghz.nonlocality import b3_value, max_b3_over_r, threshold_efficiency

# B3 as a function of the setting x for one state.  odd numbers of operations
# flip the parity, so the sign of B3 flips too; only |B3| matters
st = photon_operated_ghz(0.8, parse_scheme("sub:A,B,C"))
xs = np.linspace(0, 0.6, 7)
for x, b in zip(xs, b3_value(st, xs)):
    print(f"x={x:.2f}  B3={b:+.4f}")

# best |B3| over squeezing and setting, then the detector efficiency below which
# the violation disappears (this second part takes about a minute)
print("\nscheme      r*      x*      max|B3|   eta_th")
for spec in ["none", "sub:A", "sub:A,B", "sub:A,B,C", "add:A", "add:A,B", "add:A,B,C"]:
    ops = parse_scheme(spec)
    r, x, b = max_b3_over_r(ops)
    eta = threshold_efficiency(ops)
    print(f"{spec:10s} {r:6.3f}  {x:6.4f}  {b:8.4f}  {eta:7.4f}")
