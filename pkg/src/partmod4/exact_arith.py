"""Coefficient rings and Kronecker characters.

Everything downstream works over one of three rings: the integers, Z/2 or
Z/4.  Coefficient vectors are numpy arrays; residue rings use ``int64``
storage reduced into ``{0, .., m-1}``, the integers use ``object`` storage so
that Python's arbitrary precision integers are kept.
"""

from __future__ import annotations

import enum
from functools import lru_cache
from math import gcd, isqrt

import numpy as np


class RingMismatchError(ValueError):
    """Raised when values from two different coefficient rings are combined."""


class NotAUnitError(ArithmeticError):
    """Raised when an inverse is requested for a non-unit."""


class Ring(enum.Enum):
    INTEGERS = 0
    MOD2 = 2
    MOD4 = 4

    @property
    def modulus(self) -> int | None:
        return self.value or None

    @property
    def dtype(self):
        return object if self is Ring.INTEGERS else np.int64

    @property
    def label(self) -> str:
        return _LABELS[self]

    @classmethod
    def parse(cls, value) -> "Ring":
        """Accept a Ring, a modulus (0, 2, 4) or a label such as ``"mod4"``."""
        if isinstance(value, Ring):
            return value
        if isinstance(value, str):
            for ring, label in _LABELS.items():
                if value == label:
                    return ring
            if value.isdigit():
                value = int(value)
        if isinstance(value, int) and value in (0, 2, 4):
            return cls(value)
        raise ValueError(f"unknown coefficient ring {value!r}")

    def reduce(self, x: int) -> int:
        x = int(x)
        return x if self is Ring.INTEGERS else x % self.value

    def reduce_array(self, arr) -> np.ndarray:
        """Return a fresh array over this ring holding ``arr`` reduced."""
        if self is Ring.INTEGERS:
            out = np.empty(len(arr), dtype=object)
            out[:] = [int(x) for x in arr]
            return out
        if isinstance(arr, np.ndarray) and arr.dtype != object:
            return arr.astype(np.int64) % self.value
        return np.array([int(x) % self.value for x in arr], dtype=np.int64)

    def zeros(self, n: int) -> np.ndarray:
        if self is Ring.INTEGERS:
            out = np.empty(n, dtype=object)
            out.fill(0)
            return out
        return np.zeros(n, dtype=np.int64)

    def is_unit(self, x: int) -> bool:
        x = self.reduce(x)
        if self is Ring.INTEGERS:
            return x in (1, -1)
        return x % 2 == 1

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise NotAUnitError(f"{x} is not a unit in {self.label}")
        # every unit of Z, Z/2 and Z/4 is its own inverse
        return self.reduce(x)


_LABELS = {Ring.INTEGERS: "integers", Ring.MOD2: "mod2", Ring.MOD4: "mod4"}


def check_same_ring(*rings: Ring) -> Ring:
    first = rings[0]
    for r in rings[1:]:
        if r is not first:
            raise RingMismatchError(f"cannot combine {first.label} with {r.label}")
    return first


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n."""
    if n <= 0 or n % 2 == 0:
        raise ValueError("jacobi symbol needs an odd positive modulus")
    a %= n
    sign = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n), defined for every pair of integers.

    Conventions: (a/0) is 1 for a = +-1 and 0 otherwise; (a/-1) is -1 for
    negative a and 1 otherwise; (a/2) is 0 for even a, +1 for a = +-1 mod 8
    and -1 for a = +-3 mod 8.
    """
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * jacobi(a, n)


def chi(d: int, n: int) -> int:
    """The Kronecker character of discriminant ``d`` evaluated at ``n``.

    ``d`` is expected to be 0 or 1 mod 4; that shape is not enforced.
    """
    return kronecker(d, n)


@lru_cache(maxsize=64)
def _chi_period(d: int) -> tuple[int, ...]:
    return tuple(kronecker(d, n) for n in range(abs(d)))


def chi_table(d: int, upto: int) -> np.ndarray:
    """Values chi_d(n) for n = 0..upto as an int64 array.

    Uses periodicity, which holds for fundamental discriminants; other ``d``
    are evaluated pointwise.
    """
    if is_fundamental_discriminant(d):
        period = np.array(_chi_period(d), dtype=np.int64)
        reps = (upto + 1) // len(period) + 1
        return np.tile(period, reps)[: upto + 1]
    return np.array([kronecker(d, n) for n in range(upto + 1)], dtype=np.int64)


def is_squarefree(n: int) -> bool:
    if n == 0:
        return False
    n = abs(n)
    if n % 4 == 0:
        return False
    p = 3
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 2
    return True


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return is_squarefree(d)
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def is_qualifying(D: int) -> bool:
    """True for square-free D > 1 with D = 23 mod 24."""
    return D > 1 and D % 24 == 23 and is_squarefree(D)


def qualifying_discriminants(count: int | None = None, below: int | None = None):
    """List the qualifying D in increasing order (first ``count`` or all ``< below``)."""
    if count is None and below is None:
        raise ValueError("give count or below")
    out = []
    D = 23
    while True:
        if below is not None and D >= below:
            break
        if count is not None and len(out) >= count:
            break
        if is_squarefree(D):
            out.append(D)
        D += 24
    return out


def squarefree_part(n: int) -> tuple[int, int]:
    """Write n > 0 as d * m**2 with d square-free; returns (d, m)."""
    if n <= 0:
        raise ValueError("n must be positive")
    d, m = 1, 1
    p = 2
    while p * p <= n:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            m *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1
    return d * n, m


def is_perfect_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


__all__ = [
    "Ring",
    "RingMismatchError",
    "NotAUnitError",
    "check_same_ring",
    "jacobi",
    "kronecker",
    "chi",
    "chi_table",
    "gcd",
    "is_squarefree",
    "is_fundamental_discriminant",
    "is_qualifying",
    "qualifying_discriminants",
    "squarefree_part",
    "is_perfect_square",
    "xgcd",
]
