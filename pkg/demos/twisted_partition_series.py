# The twisted partition series P(D;q) against the logarithmic derivative L_D.
#
# L_D only needs the coefficients C_R(m mod 12; D m^2) of the vector valued
# form built from f and omega.  Both series are compared modulo 4.

import time

from partmod4 import Ring, r_components, twisted_series, verify_theorem1
from partmod4.congruence import gauss_sum_report, logderiv_series

D = 23
P = twisted_series(D, 12, Ring.INTEGERS).series
print(f"P({D};q) over Z:", P.coefficients(1, 12))
L = logderiv_series(D, 12, Ring.INTEGERS, r_components(D * 144)).series
print(f"L_{D} over Z:    ", L.coefficients(1, 12))
print("difference mod 4:", [(a - b) % 4 for a, b in zip(P.coefficients(1, 12), L.coefficients(1, 12))])

for D, N in ((23, 300), (47, 300), (95, 150), (191, 100)):
    t0 = time.perf_counter()
    rep = verify_theorem1(D, N)
    print(f"D={D:3d} through q^{N}: {rep.status} ({time.perf_counter() - t0:.1f}s)")

# the same check with f and omega taken from their definitions
print("definition-sourced, D=47 through q^60:", verify_theorem1(47, 60, source="definition").status)

g = gauss_sum_report(95)
print(f"Gauss sum D=95: |g|^2 - D = {g.norm_error:.1e}, g/(i sqrt D) = {g.sign}")
