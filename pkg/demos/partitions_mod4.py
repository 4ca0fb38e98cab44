# Partition numbers modulo 4 and the mock theta function f(q).
#
# p(n) comes from Euler's pentagonal recurrence; f(q) is expanded from its
# q-hypergeometric definition.  Modulo 4 the two series coincide.

from partmod4 import Ring, f_series, partition_table

N = 20_000

p = partition_table(N, Ring.MOD4)
f = f_series(N, Ring.MOD4)

print("p(n) mod 4, n = 0..20:", [p[n] for n in range(21)])
print("f(q) over Z:          ", f_series(12).coefficients(0, 12))
print("f(q) mod 4:           ", f.coefficients(0, 20))

diff = f.first_difference(p.series(), N)
print(f"first n <= {N} with f_n != p(n) mod 4:", diff)

# distribution of residues
values = p.values
for r in range(4):
    print(f"  p(n) = {r} mod 4 for {int((values == r).sum())} of {N + 1} values")
