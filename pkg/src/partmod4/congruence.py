"""Twisted partition series P(D;q), the logarithmic-derivative series L_D,
their holomorphic normalizations, and the mod 4 comparison between them.

For square-free D > 1 with D = 23 mod 24:

    P(D;q) = sum_{m,n>=1} chi_{-D}(n) chi_12(m) p((Dm^2+1)/24) q^{mn}
    L_D    = sum_{m>=1} C_R(m mod 12; Dm^2) m sum_{n>=1, (n,D)=1} chi_{-D}(n) q^{mn}

and the two agree coefficientwise modulo 4.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from math import gcd, isqrt

import mpmath

from .exact_arith import Ring, chi, chi_table, is_qualifying
from .hilbert import hilbert_mod
from .mock_theta import RComponents, r_components, r_components_fast
from .qseries import LaurentSeries, PartitionTable, PrecisionError, delta_series, partition_table


class NotQualifyingError(ValueError):
    """D is not a square-free integer > 1 congruent to 23 mod 24."""


def check_qualifying(D: int) -> None:
    if not is_qualifying(D):
        raise NotQualifyingError(f"D={D} must be square-free, > 1 and = 23 mod 24")


@dataclass(frozen=True)
class TwistedSeries:
    D: int
    series: LaurentSeries
    provenance: str  # "direct", "logderiv" or "normalized"
    h_S: int | None = None

    def __post_init__(self):
        check_qualifying(self.D)


def partition_index_bound(D: int, N: int) -> int:
    """Largest partition argument (Dm^2+1)/24 needed for exponents up to N."""
    return (D * N * N + 1) // 24


def _twist_accumulate(D: int, N: int, ring: Ring, weight) -> LaurentSeries:
    """sum_m weight(m) sum_n chi_{-D}(n) q^{mn} through q^N."""
    chis = chi_table(-D, N)
    if ring is Ring.INTEGERS:
        chis = chis.astype(object)
    arr = ring.zeros(N + 1)
    for m in range(1, N + 1):
        w = weight(m)
        if w == 0:
            continue
        k = N // m
        arr[m::m][:k] += w * chis[1: k + 1]
    if ring is not Ring.INTEGERS:
        arr %= ring.modulus
    return LaurentSeries(arr, 0, N, ring)


def twisted_series(D: int, N: int, ring: Ring = Ring.MOD4,
                   partitions: PartitionTable | None = None) -> TwistedSeries:
    """P(D;q) through q^N."""
    check_qualifying(D)
    ring = Ring.parse(ring)
    if N < 1:
        raise ValueError("N must be at least 1")
    if partitions is None:
        partitions = partition_table(partition_index_bound(D, N), ring)
    elif partitions.ring is not ring:
        raise ValueError("partition table is over a different ring")

    def weight(m):
        c = chi(12, m)
        if c == 0:
            return 0
        return ring.reduce(c * partitions.at_quotient(D * m * m + 1, 24))

    return TwistedSeries(D, _twist_accumulate(D, N, ring, weight), "direct")


def logderiv_series(D: int, N: int, ring: Ring, components: RComponents) -> TwistedSeries:
    """The q-expansion of L_D through q^N from the coefficients C_R(m mod 12; Dm^2)."""
    check_qualifying(D)
    ring = Ring.parse(ring)
    if components.ring is not ring:
        raise ValueError("components are over a different ring")
    if components.order < D * N * N:
        raise PrecisionError(f"components known through q^{components.order}, need q^{D * N * N}")

    def weight(m):
        # chi_{-D}(n) already vanishes when gcd(n, D) > 1
        return ring.reduce(components.coefficient(m % 12, D * m * m) * m)

    return TwistedSeries(D, _twist_accumulate(D, N, ring, weight), "logderiv")


def components_for(D: int, N: int, source: str = "fast", ring: Ring = Ring.MOD4) -> RComponents:
    """C_R data sufficient for L_D through q^N.

    ``fast`` takes f mod 4 from the partition recurrence; ``definition``
    expands f and omega from their q-hypergeometric definitions.
    """
    order = D * N * N
    if source == "fast":
        return r_components_fast(order, ring)
    if source == "definition":
        return r_components(order, ring)
    raise ValueError(f"unknown component source {source!r}")


@dataclass(frozen=True)
class Theorem1Report:
    D: int
    N: int
    ring: str
    source: str
    first_mismatch: int | None

    @property
    def status(self) -> str:
        return "ok" if self.first_mismatch is None else "mismatch"

    @property
    def checked(self) -> int:
        return self.N

    def to_json(self) -> dict:
        return {"D": self.D, "N": self.N, "ring": self.ring, "source": self.source,
                "status": self.status, "first_mismatch": self.first_mismatch}


def verify_theorem1(D: int, N: int, source: str = "fast",
                    components: RComponents | None = None) -> Theorem1Report:
    """Compare P(D;q) with L_D modulo 4 through q^N."""
    check_qualifying(D)
    ring = Ring.MOD4
    if components is None:
        components = components_for(D, N, source, ring)
    else:
        source = "supplied"
    direct = twisted_series(D, N, ring).series
    logd = logderiv_series(D, N, ring, components).series
    return Theorem1Report(D, N, ring.label, source, direct.first_difference(logd, N))


def normalized_series(D: int, h_S: int, N: int, hilbert_mod4: tuple[int, ...] | None = None,
                      twisted: LaurentSeries | None = None) -> TwistedSeries:
    """P(D;q) * Delta^h_S * H_{-D}(1/Delta) over Z/4 through q^N.

    With H_{-D}(X) = sum c_k X^k of degree h this is P * sum_k c_k Delta^(h_S-k),
    evaluated by Horner's rule in Delta and one power Delta^(h_S-h).
    """
    check_qualifying(D)
    ring = Ring.MOD4
    if hilbert_mod4 is None:
        hilbert_mod4 = hilbert_mod(D, ring)
    h = len(hilbert_mod4) - 1
    if h_S < h:
        raise ValueError(f"h_S={h_S} is smaller than h(-{D})={h}")
    if twisted is None:
        twisted = twisted_series(D, N, ring).series
    twisted = twisted.truncate(N)
    delta = delta_series(max(N, 1), ring)
    acc = LaurentSeries.monomial(0, N, ring, hilbert_mod4[0])
    for c in hilbert_mod4[1:]:
        acc = acc * delta + c
    acc = acc * delta ** (h_S - h)
    return TwistedSeries(D, (twisted * acc).truncate(N), "normalized", h_S)


# -- Gauss sums ---------------------------------------------------------------


def gauss_sum(D: int, n: int, prec: int = 128) -> mpmath.mpc:
    """sum_{b mod D} chi_{-D}(b) e^{-2 pi i b n / D}."""
    with mpmath.workprec(prec):
        total = mpmath.mpc(0)
        for b in range(1, D):
            c = chi(-D, b)
            if c:
                total += c * mpmath.expjpi(mpmath.mpf(-2 * b * n) / D)
        return total


@dataclass(frozen=True)
class GaussSumReport:
    D: int
    ok: bool
    norm_error: float
    max_identity_error: float
    max_vanishing_error: float
    sign: int  # g / (i sqrt D), rounded

    def __bool__(self):
        return self.ok


def gauss_sum_report(D: int, n_samples: int = 50, seed: int = 0, prec: int = 128) -> GaussSumReport:
    check_qualifying(D)
    tol = 1e-9 * D
    rng = random.Random(seed)
    g = gauss_sum(D, 1, prec)
    norm_error = float(abs(abs(g) ** 2 - D))
    samples = [rng.randrange(1, 20 * D) for _ in range(n_samples)]
    # make sure the vanishing case is exercised
    for p in range(2, D + 1):
        if D % p == 0 and p * p <= 20 * D:
            samples.append(p * rng.randrange(1, 20))
            break
    samples.append(D)
    ident, vanish = 0.0, 0.0
    for n in samples:
        lhs = gauss_sum(D, n, prec)
        if gcd(n, D) == 1:
            ident = max(ident, float(abs(lhs - chi(-D, n) * g)))
        else:
            vanish = max(vanish, float(abs(lhs)))
    with mpmath.workprec(prec):
        ratio = g / mpmath.mpc(0, mpmath.sqrt(D))
    sign = 1 if ratio.real > 0 else -1
    ok = norm_error < tol and ident < tol and vanish < tol
    return GaussSumReport(D, ok, norm_error, ident, vanish, sign)


def gauss_sum_check(D: int, n_samples: int = 50, seed: int = 0) -> bool:
    """Check |g|^2 = D, the twisted-sum identity and its vanishing for gcd(n, D) > 1."""
    return gauss_sum_report(D, n_samples, seed).ok


def discriminants_receiving(n0: int) -> list[int]:
    """Qualifying D for which p(n0) appears in P(D;q), i.e. 24 n0 - 1 = D m^2."""
    if n0 < 1:
        raise ValueError("n0 must be positive")
    target = 24 * n0 - 1
    out = []
    for m in range(1, isqrt(target) + 1):
        if target % (m * m) == 0 and is_qualifying(target // (m * m)):
            out.append(target // (m * m))
    return out

