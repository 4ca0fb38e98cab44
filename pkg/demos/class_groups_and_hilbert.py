# Reduced forms, class numbers and Hilbert class polynomials for D = 23 mod 24.

from partmod4 import Ring, hilbert_poly, qualifying_discriminants, reduced_forms
from partmod4.binary_qf import class_number_bound

Ds = qualifying_discriminants(12)
print(" D    h   bound   forms")
for D in Ds:
    cg = reduced_forms(D)
    forms = " ".join(f"({Q.a},{Q.b},{Q.c})" for Q in cg.forms[:4])
    print(f"{D:4d} {cg.class_number:3d} {class_number_bound(D):7.2f}   {forms}{' ...' if cg.class_number > 4 else ''}")

# H_{-23} from the three Heegner points
H = hilbert_poly(23)
print()
print("H_-23(X) =", H)
print("computed at", H.prec, "bits; recomputing at twice that gives the same integers:",
      hilbert_poly(23, prec=2 * H.prec).coeffs == H.coeffs)
print("constant term is a cube:", round(H.coeffs[0] ** (1 / 3)) ** 3 == H.coeffs[0])

for D in (47, 71):
    P = hilbert_poly(D)
    print(f"H_-{D} mod 4 (ascending):", P.reduce(Ring.MOD4), " digits of largest coefficient:",
          len(str(max(abs(c) for c in P.coeffs))))
