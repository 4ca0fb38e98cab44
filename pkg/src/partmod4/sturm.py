"""Linear dependence of q-series modulo 4 below the Sturm bound.

Matrices over Z/N (N = 4 throughout the package) are brought to Howell form,
the canonical echelon form over Z/N: rows in echelon order, each pivot a
divisor of N, entries above a pivot reduced modulo it, and with the Howell
property that the rows whose first k entries vanish span every vector of the
row space whose first k entries vanish.  Left kernels are read off from the
Howell form of the augmented matrix [M | I].
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .exact_arith import Ring, xgcd
from .qseries import LaurentSeries


def sturm_bound(h_S: int) -> int:
    """B = [SL2(Z) : Gamma0(6)] * (12 h_S + 2) / 12 = 12 h_S + 2.

    Two weight 12 h_S + 2 forms on Gamma0(6) agreeing on the coefficients of
    q^0 .. q^B (more than B terms) agree modulo 4.
    """
    if h_S < 1:
        raise ValueError("h_S must be at least 1")
    return 12 * h_S + 2


@dataclass(frozen=True)
class Z4Matrix:
    """A rows x cols matrix over Z/modulus with optional row labels."""

    data: np.ndarray
    labels: tuple = ()
    modulus: int = 4

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.int64, ndmin=2) % self.modulus
        if arr.ndim != 2:
            raise ValueError("matrix data must be two-dimensional")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)
        labels = tuple(self.labels)
        if labels and len(labels) != arr.shape[0]:
            raise ValueError("one label per row is required")
        if len(set(labels)) != len(labels):
            raise ValueError("row labels must be unique")
        object.__setattr__(self, "labels", labels)

    @property
    def shape(self):
        return self.data.shape

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other):
        if not isinstance(other, Z4Matrix):
            return NotImplemented
        return self.modulus == other.modulus and np.array_equal(self.data, other.data)

    __hash__ = None

    def left_multiply(self, c) -> np.ndarray:
        """c . M over Z/modulus."""
        return (np.asarray(c, dtype=np.int64) @ self.data) % self.modulus


def _unit_normalizer(a: int, N: int) -> tuple[int, int]:
    """Return (u, g) with u a unit mod N and u*a = g = gcd(a, N) mod N."""
    g = gcd(a, N)
    if g == N:
        return 1, 0
    # a = g * a', with a' a unit mod N/g; lift its inverse to a unit mod N
    a1 = (a // g) % (N // g)
    inv = pow(a1, -1, N // g)
    for k in range(g):
        u = inv + k * (N // g)
        if gcd(u, N) == 1:
            return u % N, g
    raise ArithmeticError("no unit lift found")


def howell_rows(A: np.ndarray, N: int = 4) -> np.ndarray:
    """Howell form of the row span of A over Z/N, zero rows removed."""
    A = np.array(A, dtype=np.int64, ndmin=2) % N
    m, n = A.shape
    rows = [A[i].copy() for i in range(m)]
    r = 0
    for j in range(n):
        if r >= len(rows):
            break
        for i in range(r + 1, len(rows)):
            b = int(rows[i][j])
            if b == 0:
                continue
            a = int(rows[r][j])
            g, s, t = xgcd(a, b)
            u, v = a // g, b // g
            top = (s * rows[r] + t * rows[i]) % N
            bottom = (-v * rows[r] + u * rows[i]) % N
            rows[r], rows[i] = top, bottom
        a = int(rows[r][j])
        if a == 0:
            continue
        unit, g = _unit_normalizer(a, N)
        rows[r] = (unit * rows[r]) % N
        for i in range(r):
            q = int(rows[i][j]) // g
            if q:
                rows[i] = (rows[i] - q * rows[r]) % N
        if g != 1:
            rows.append((N // g) * rows[r] % N)
        r += 1
    out = [row for row in rows[:r] if row.any()]
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def howell_form(M: Z4Matrix) -> Z4Matrix:
    """Canonical Howell form of the row span of ``M`` (same modulus, no labels)."""
    H = howell_rows(M.data, M.modulus)
    if H.shape[0] == 0:
        H = np.zeros((0, M.cols), dtype=np.int64)
    return Z4Matrix(H, (), M.modulus)


def in_row_span(v, M: Z4Matrix) -> bool:
    """Decide whether v lies in the row span of M by reducing against its Howell form."""
    N = M.modulus
    H = howell_rows(M.data, N)
    v = np.array(v, dtype=np.int64) % N
    for row in H:
        j = int(np.flatnonzero(row)[0])
        piv = int(row[j])
        if v[j] % piv:
            return False
        v = (v - (v[j] // piv) * row) % N
    return not v.any()


def kernel_mod4(M: Z4Matrix) -> list[np.ndarray]:
    """Generators of the left kernel {c : c . M = 0} over Z/modulus."""
    N = M.modulus
    m, n = M.shape
    aug = np.concatenate([M.data, np.eye(m, dtype=np.int64)], axis=1)
    H = howell_rows(aug, N)
    return [row[n:].copy() for row in H if not row[:n].any()]


@dataclass(frozen=True)
class Relation:
    """A vector c with sum_D c_D * series_D = 0 modulo 4."""

    coefficients: dict
    bound_B: int
    verified_through: int
    verified: bool = True
    S: tuple = field(default=())

    @property
    def cls(self) -> str:
        return "unit" if any(c % 2 for c in self.coefficients.values()) else "doubled"

    def to_json(self) -> dict:
        return {
            "S": list(self.S),
            "coefficients": {str(k): int(v) for k, v in self.coefficients.items()},
            "class": self.cls,
            "bound_B": self.bound_B,
            "verified_through": self.verified_through,
            "verified": self.verified,
        }


def coefficient_matrix(rows: dict, B: int) -> Z4Matrix:
    """Matrix of the coefficients of q^0 .. q^B of each series (one row per label)."""
    labels = tuple(rows)
    data = np.array([rows[k].reduce(Ring.MOD4).dense(0, B) for k in labels], dtype=np.int64).reshape(len(labels), B + 1)
    return Z4Matrix(data, labels)


def combination_first_nonzero(rows: dict, coefficients: dict, through: int) -> int | None:
    """First exponent <= through where sum c_k * rows[k] is nonzero mod 4, or None."""
    total = np.zeros(through + 1, dtype=np.int64)
    for k, c in coefficients.items():
        if c % 4:
            total += c * rows[k].reduce(Ring.MOD4).dense(0, through)
    nz = np.flatnonzero(total % 4)
    return None if len(nz) == 0 else int(nz[0])


def relations_among(rows: dict, B: int, check_through: int, S: tuple = ()) -> list[Relation]:
    """Kernel of the q^0..q^B coefficient matrix, each vector re-verified through ``check_through``.

    Vectors that fail the extended check are returned with ``verified=False``
    and ``verified_through`` set to the last exponent that still agreed.
    """
    if check_through < B:
        raise ValueError("extended verification must reach at least the bound")
    M = coefficient_matrix(rows, B)
    out = []
    for vec in kernel_mod4(M):
        if not vec.any():
            continue
        if M.left_multiply(vec).any():
            raise ArithmeticError("kernel vector does not annihilate the matrix")
        coeffs = {lab: int(c) for lab, c in zip(M.labels, vec)}
        bad = combination_first_nonzero(rows, coeffs, check_through)
        if bad is None:
            out.append(Relation(coeffs, B, check_through, True, S))
        else:
            out.append(Relation(coeffs, B, bad - 1, False, S))
    return out


def find_relations(S, N_check: int, jobs: int = 1, hilbert=None, class_numbers=None,
                   series_through=None) -> list[Relation]:
    """Search for mod 4 linear relations among the normalized series for D in S.

    Rows are built through q^B first; only when the kernel is nontrivial are
    they rebuilt through q^N_check for the extended verification.
    ``hilbert`` / ``class_numbers`` may map D to precomputed H_{-D} mod 4 and
    h(-D) (the CLI passes cached values); ``series_through`` can replace the
    row builder (signature ``(D, h_S, N) -> LaurentSeries``).
    """
    from .binary_qf import class_number
    from .congruence import check_qualifying, normalized_series
    from .hilbert import hilbert_mod

    S = tuple(sorted(set(S)))
    if not S:
        raise ValueError("S must not be empty")
    for D in S:
        check_qualifying(D)
    hs = {D: (class_numbers or {}).get(D) or class_number(D) for D in S}
    h_S = max(hs.values())
    B = sturm_bound(h_S)
    if N_check <= B:
        raise ValueError(f"N_check={N_check} must exceed the Sturm bound {B}")
    hil = {D: (hilbert or {}).get(D) or hilbert_mod(D, Ring.MOD4) for D in S}

    def build(N):
        def one(D):
            if series_through is not None:
                return series_through(D, h_S, N)
            return normalized_series(D, h_S, N, hil[D]).series
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                built = list(pool.map(one, S))
        else:
            built = [one(D) for D in S]
        return dict(zip(S, built))

    rows = build(B)
    if not [v for v in kernel_mod4(coefficient_matrix(rows, B)) if v.any()]:
        return []
    rows = build(N_check)
    return relations_among(rows, B, N_check, S)
