# Truncated Laurent series: Delta, 1/Delta, j, and the logarithmic derivative.

import numpy as np

from partmod4 import Ring, delta_series, invdelta_series, j_series
from partmod4.qseries import divisor_sigma

delta = delta_series(12)
print("Delta =", delta)
print("1/Delta =", invdelta_series(6))
print("j =", j_series(3))

# q d/dq log Delta = E2 = 1 - 24 sum sigma_1(n) q^n
e2 = delta_series(201).dlog()
sig = divisor_sigma(1, 200)
print("dlog(Delta) matches 1 - 24 sigma_1 through q^200:",
      e2.coefficients(1, 200) == [-24 * int(s) for s in sig[1:]])

# modulo 4 the 744 + 196884 q + ... part of j disappears entirely
j4, inv4 = j_series(500, Ring.MOD4), invdelta_series(500, Ring.MOD4)
print("j - 1/Delta mod 4 through q^500 is zero:", j4.first_difference(inv4, 500) is None)

# precision is tracked: asking past the known order raises
try:
    delta[13]
except IndexError as exc:
    print("out of range:", exc)

print("Delta mod 2 support through q^60:", sorted(delta_series(60, Ring.MOD2).terms()))
print("odd squares:", [k * k for k in range(1, 8, 2)], "(Delta = sum q^(odd square) mod 2)")
