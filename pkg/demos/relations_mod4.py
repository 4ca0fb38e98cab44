# Linear relations modulo 4 among normalized series, and the Z/4 linear algebra behind them.

import numpy as np

from partmod4 import Z4Matrix, find_relations, howell_form, kernel_mod4, sturm_bound
from partmod4 import Ring, class_number, normalized_series
from partmod4.sturm import relations_among

M = Z4Matrix([[1, 2, 3], [2, 0, 2], [3, 2, 1], [0, 0, 2]])
print("M =\n", M.data)
print("Howell form =\n", howell_form(M).data)
for v in kernel_mod4(M):
    print("kernel vector", v, "-> v.M =", M.left_multiply(v))

# normalized series for S = {23, 47}: weight 12*5+2 = 62, Sturm bound 62
S = (23, 47)
h_S = max(class_number(D) for D in S)
B = sturm_bound(h_S)
rows = {D: normalized_series(D, h_S, 10 * B).series for D in S}
print(f"h_S = {h_S}, B = {B}")
for D, s in rows.items():
    print(f"  P_hat({D}) mod 4 starts", s.coefficients(0, 15))

# add a copy scaled by 3 and a doubled sum; both dependencies are found at B
rows["3*P23"] = rows[23] * 3
rows["2(P23+P47)"] = (rows[23] + rows[47]) * 2
for r in relations_among(rows, B, 10 * B, tuple(rows)):
    print(f"  relation {r.coefficients} ({r.cls}), verified through q^{r.verified_through}: {r.verified}")

# genuine rows only: no relation among the first few qualifying D
print("relations among D = 23..143:", find_relations([23, 47, 71, 95, 119, 143], 10 * sturm_bound(10)))
