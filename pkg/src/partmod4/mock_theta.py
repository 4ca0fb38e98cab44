"""Ramanujan's third order mock theta functions f(q), omega(q) and the
twelve-component vector R built from them.

The components are

    R_j = 0                                   j = 0, 3, 6, 9
    R_j = chi_{-12}(j) q^-1 f(q^24)           j = 1, 5, 7, 11
    R_2 =  2 q^8 (-omega(q^12) + omega(-q^12))
    R_4 = -2 q^8 ( omega(q^12) + omega(-q^12))
    R_8 =  2 q^8 ( omega(q^12) + omega(-q^12))
    R_10 = 2 q^8 ( omega(q^12) - omega(-q^12))

and C_R(j; n) denotes the coefficient of q^n in R_j.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exact_arith import Ring, chi
from .qseries import LaurentSeries, PrecisionError, binomial_divide, partition_table

# integer-ring component requests are capped; f has rapidly growing coefficients
INTEGER_ORDER_CAP = 10_000

ODD_COMPONENTS = (1, 5, 7, 11)
EVEN_COMPONENTS = (2, 4, 8, 10)
ZERO_COMPONENTS = (0, 3, 6, 9)


def f_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """f(q) = 1 + sum_{n>=1} q^{n^2} / ((1+q)^2 ... (1+q^n)^2) through q^N.

    Keeps a running inverse of the denominator and divides it by (1+q^n)^2
    at step n; only the first N - n^2 + 1 coefficients of it are ever needed.
    """
    ring = Ring.parse(ring)
    if N < 0:
        raise ValueError("N must be non-negative")
    total = ring.zeros(N + 1)
    total[0] = 1
    inv = ring.zeros(N + 1)
    inv[0] = 1
    n = 1
    while n * n <= N:
        inv = inv[: N - n * n + 1]
        inv = binomial_divide(binomial_divide(inv, n, 1, ring), n, 1, ring)
        total[n * n:] += inv
        n += 1
    return LaurentSeries(total, 0, N, ring)


def omega_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """omega(q) = sum_{n>=0} q^{2n^2+2n} / (q;q^2)_{n+1}^2 through q^N."""
    ring = Ring.parse(ring)
    if N < 0:
        raise ValueError("N must be non-negative")
    total = ring.zeros(N + 1)
    inv = ring.zeros(N + 1)
    inv[0] = 1
    n = 0
    while 2 * n * n + 2 * n <= N:
        e = 2 * n * n + 2 * n
        inv = inv[: N - e + 1]
        inv = binomial_divide(binomial_divide(inv, 2 * n + 1, -1, ring), 2 * n + 1, -1, ring)
        total[e:] += inv
        n += 1
    if ring is not Ring.INTEGERS:
        total %= ring.modulus
    return LaurentSeries(total, 0, N, ring)


@dataclass(frozen=True)
class RComponents:
    """The vector (R_0, ..., R_11) known through q^order.

    Only f and omega are stored; components are materialized on request and
    single coefficients are read straight from f and omega.  ``omega`` may be
    None over Z/4 and Z/2, where every even component vanishes identically
    (each is 2 * (omega(x) +- omega(-x)), and omega(x) +- omega(-x) has only
    even coefficients).
    """

    ring: Ring
    order: int
    f: LaurentSeries
    omega: LaurentSeries | None
    overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.omega is None and self.ring is Ring.INTEGERS:
            raise ValueError("omega is required over the integers")

    def coefficient(self, j: int, n: int) -> int:
        """C_R(j; n)."""
        j %= 12
        if n > self.order:
            raise PrecisionError(f"C_R({j}; {n}) requested, components known through q^{self.order}")
        if (j, n) in self.overrides:
            return self.overrides[(j, n)]
        if j in ZERO_COMPONENTS:
            return 0
        ring = self.ring
        if j in ODD_COMPONENTS:
            if n < -1 or (n + 1) % 24:
                return 0
            return ring.reduce(chi(-12, j) * self.f[(n + 1) // 24])
        if n < 8 or (n - 8) % 12:
            return 0
        if self.omega is None:
            return 0
        k = (n - 8) // 12
        w = self.omega[k]
        even = k % 2 == 0
        if j == 2:
            value = 0 if even else -4 * w
        elif j == 4:
            value = -4 * w if even else 0
        elif j == 8:
            value = 4 * w if even else 0
        else:
            value = 0 if even else 4 * w
        return ring.reduce(value)

    def series(self, j: int) -> LaurentSeries:
        """R_j as a series through q^order."""
        j %= 12
        ring, N = self.ring, self.order
        if j in ZERO_COMPONENTS:
            out = LaurentSeries.zero(N, ring)
        elif j in ODD_COMPONENTS:
            out = self.f.truncate((N + 1) // 24).dilate(24).shift(-1).truncate(N) * chi(-12, j)
        else:
            if self.omega is None:
                out = LaurentSeries.zero(N, ring)
            else:
                if N < 8:
                    return LaurentSeries.zero(N, ring)
                w = self.omega.truncate((N - 8) // 12)
                plus, minus = w.dilate(12), w.dilate(12, -1)
                combo = {2: minus - plus, 4: -(plus + minus), 8: plus + minus, 10: plus - minus}[j]
                out = (combo * 2).shift(8).truncate(N)
        if self.overrides:
            terms = out.terms()
            for (jj, n), v in self.overrides.items():
                if jj == j and n <= N:
                    terms[n] = v
            out = LaurentSeries.from_terms(terms, N, ring)
        return out

    def with_override(self, j: int, n: int, value: int) -> "RComponents":
        """Copy with C_R(j; n) replaced by ``value`` (used for fault injection)."""
        ov = dict(self.overrides)
        ov[(j % 12, n)] = self.ring.reduce(value)
        return RComponents(self.ring, self.order, self.f, self.omega, ov)


def _f_order(N: int) -> int:
    return (N + 1) // 24


def _omega_order(N: int) -> int:
    return max((N - 8) // 12, 0)


def r_components(N: int, ring: Ring = Ring.INTEGERS) -> RComponents:
    """All twelve components through q^N, built from the f and omega definitions."""
    ring = Ring.parse(ring)
    if N < -1:
        raise ValueError("N must be at least -1")
    if ring is Ring.INTEGERS and N > INTEGER_ORDER_CAP:
        raise ValueError(f"integer-ring components are capped at order {INTEGER_ORDER_CAP}")
    return RComponents(ring, N, f_series(_f_order(N), ring), omega_series(_omega_order(N), ring))


def r_components_fast(N: int, ring: Ring = Ring.MOD4) -> RComponents:
    """Components through q^N over Z/4 (or Z/2) with f taken from the partition table.

    Relies on f(q) = P(q) mod 4; omega is not computed since the even
    components vanish modulo 4 whatever omega is.
    """
    ring = Ring.parse(ring)
    if ring is Ring.INTEGERS:
        raise ValueError("the partition-sourced components exist only mod 4 and mod 2")
    f = partition_table(_f_order(N), ring).series()
    return RComponents(ring, N, f, None)


def c_R(j: int, n: int, components: RComponents) -> int:
    """C_R(j; n): coefficient of q^n in R_j."""
    return components.coefficient(j, n)
