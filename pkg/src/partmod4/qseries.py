"""Truncated Laurent series in q over Z, Z/2 or Z/4.

A :class:`LaurentSeries` stores the coefficients of q^v .. q^N densely, where
``v`` is the valuation and ``N`` the order (the largest exponent whose
coefficient is known).  Asking for a coefficient past the order raises
:class:`PrecisionError`; nothing is ever silently truncated.

The module also builds the classical series used everywhere else: the
partition generating function, the Euler product, Delta, E4, j and 1/Delta.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .exact_arith import NotAUnitError, Ring, check_same_ring

# below this length a direct convolution beats the FFT
_FFT_CUTOFF = 256


class PrecisionError(IndexError):
    """A coefficient beyond the known order was requested."""


class Cancelled(RuntimeError):
    """A long-running builder observed its cancellation event."""


def _convolve(x: np.ndarray, y: np.ndarray, length: int, ring: Ring) -> np.ndarray:
    """First ``length`` coefficients of the product of two coefficient vectors."""
    x = x[:length]
    y = y[:length]
    if len(x) == 0 or len(y) == 0:
        return ring.zeros(length)
    if ring is Ring.INTEGERS:
        out = np.convolve(x, y)[:length]
    elif min(len(x), len(y)) <= _FFT_CUTOFF:
        out = np.convolve(x, y)[:length] % ring.modulus
    else:
        # entries are < 4, so every exact product coefficient is < 9 * len
        # and float64 FFT rounding is exact far beyond the sizes used here
        size = 1 << (len(x) + len(y) - 2).bit_length()
        prod = np.fft.irfft(np.fft.rfft(x, size) * np.fft.rfft(y, size), size)
        out = np.rint(prod[:length]).astype(np.int64) % ring.modulus
    if len(out) < length:
        out = np.concatenate([out, ring.zeros(length - len(out))])
    return out


def binomial_divide(arr: np.ndarray, n: int, c: int, ring: Ring) -> np.ndarray:
    """Divide a power series (coefficient vector from q^0) by ``1 + c*q**n``, c = +-1.

    The recurrence b[k] = a[k] - c*b[k-n] is solved blockwise: viewing the
    vector as rows of width n, it becomes a (signed) cumulative sum down the
    rows.
    """
    L = len(arr)
    rows = -(-L // n)
    padded = ring.zeros(rows * n)
    padded[:L] = arr
    block = padded.reshape(rows, n)
    if c == -1:
        out = np.cumsum(block, axis=0)
    elif c == 1:
        signs = np.where(np.arange(rows) % 2 == 0, 1, -1)
        if ring is Ring.INTEGERS:
            signs = signs.astype(object)
        signs = signs[:, None]
        out = np.cumsum(block * signs, axis=0) * signs
    else:
        raise ValueError("c must be +1 or -1")
    out = out.reshape(-1)[:L]
    if ring is not Ring.INTEGERS:
        out %= ring.modulus
    return out


class LaurentSeries:
    """An element of R((q)) known modulo q^(order+1)."""

    __slots__ = ("ring", "valuation", "order", "coeffs")

    def __init__(self, coeffs, valuation: int = 0, order: int | None = None,
                 ring: Ring = Ring.INTEGERS):
        ring = Ring.parse(ring)
        arr = ring.reduce_array(coeffs) if not _is_ring_array(coeffs, ring) else coeffs.copy()
        if order is None:
            order = valuation + len(arr) - 1
        width = order - valuation + 1
        if width < 0:
            if len(arr) and np.any(arr != 0):
                raise ValueError("coefficients given past the stated order")
            arr = ring.zeros(0)
            width = 0
        if len(arr) > width:
            arr = arr[:width]
        elif len(arr) < width:
            arr = np.concatenate([arr, ring.zeros(width - len(arr))])
        nz = np.flatnonzero(arr != 0)
        if len(nz) == 0:
            valuation, arr = order + 1, ring.zeros(0)
        elif nz[0]:
            valuation += int(nz[0])
            arr = arr[nz[0]:]
        self.ring = ring
        self.valuation = int(valuation)
        self.order = int(order)
        self.coeffs = arr
        self.coeffs.setflags(write=False)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, order: int, ring: Ring = Ring.INTEGERS) -> "LaurentSeries":
        return cls([], valuation=order + 1, order=order, ring=ring)

    @classmethod
    def monomial(cls, k: int, order: int, ring: Ring = Ring.INTEGERS, c: int = 1) -> "LaurentSeries":
        return cls([c], valuation=k, order=order, ring=ring)

    @classmethod
    def one(cls, order: int, ring: Ring = Ring.INTEGERS) -> "LaurentSeries":
        return cls.monomial(0, order, ring)

    @classmethod
    def from_terms(cls, terms: dict, order: int, ring: Ring = Ring.INTEGERS) -> "LaurentSeries":
        """Build from a sparse ``{exponent: coefficient}`` mapping."""
        if not terms:
            return cls.zero(order, ring)
        lo = min(terms)
        arr = [0] * (order - lo + 1)
        for k, c in terms.items():
            if k > order:
                continue
            arr[k - lo] += c
        return cls(arr, valuation=lo, order=order, ring=ring)

    # -- access -------------------------------------------------------------

    def is_zero(self) -> bool:
        return len(self.coeffs) == 0

    @property
    def lead(self) -> int:
        if self.is_zero():
            raise ValueError("zero series has no leading coefficient")
        return int(self.coeffs[0])

    def __getitem__(self, k: int) -> int:
        if k > self.order:
            raise PrecisionError(f"coefficient of q^{k} requested, series known through q^{self.order}")
        if k < self.valuation:
            return 0
        return int(self.coeffs[k - self.valuation])

    def dense(self, start: int, stop: int | None = None) -> np.ndarray:
        """Coefficients of q^start .. q^stop (inclusive) as a ring array."""
        if stop is None:
            stop = self.order
        if stop > self.order:
            raise PrecisionError(f"coefficients through q^{stop} requested, known through q^{self.order}")
        out = self.ring.zeros(max(stop - start + 1, 0))
        lo = max(start, self.valuation)
        if lo <= stop:
            out[lo - start: stop - start + 1] = self.coeffs[lo - self.valuation: stop - self.valuation + 1]
        return out

    def coefficients(self, start: int = 0, stop: int | None = None) -> list[int]:
        return [int(x) for x in self.dense(start, stop)]

    def terms(self) -> dict[int, int]:
        """Nonzero coefficients as ``{exponent: coefficient}``."""
        return {self.valuation + int(i): int(self.coeffs[i]) for i in np.flatnonzero(self.coeffs != 0)}

    @property
    def relative_precision(self) -> int:
        return self.order - self.valuation + 1

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            check_same_ring(self.ring, other.ring)
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentSeries.monomial(0, self.order, self.ring, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        order = min(self.order, other.order)
        start = min(self.valuation, other.valuation, order + 1)
        total = self.dense(start, order) + other.dense(start, order)
        return LaurentSeries(total, start, order, self.ring)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries(-self.coeffs, self.valuation, self.order, self.ring)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return LaurentSeries(self.coeffs * int(other), self.valuation, self.order, self.ring)
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        check_same_ring(self.ring, other.ring)
        length = min(self.relative_precision, other.relative_precision)
        v = self.valuation + other.valuation
        prod = _convolve(self.coeffs, other.coeffs, length, self.ring)
        return LaurentSeries(prod, v, v + length - 1, self.ring)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        """Multiplicative inverse; the leading coefficient must be a unit."""
        if self.is_zero() or not self.ring.is_unit(self.lead):
            raise NotAUnitError("leading coefficient is not a unit")
        n = self.relative_precision
        u = self.coeffs
        g = self.ring.zeros(1)
        g[0] = self.ring.inverse(self.lead)
        prec = 1
        while prec < n:
            prec = min(2 * prec, n)
            # Newton step g <- g + g*(1 - u*g)
            ug = _convolve(u, g, prec, self.ring)
            err = -ug
            err[0] += 1
            g = np.concatenate([g, self.ring.zeros(prec - len(g))])
            g = g + _convolve(g, err, prec, self.ring)
            if self.ring is not Ring.INTEGERS:
                g %= self.ring.modulus
        return LaurentSeries(g, -self.valuation, n - 1 - self.valuation, self.ring)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __pow__(self, k: int) -> "LaurentSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = LaurentSeries.one(self.relative_precision - 1, self.ring)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self) -> "LaurentSeries":
        """Apply q d/dq."""
        exps = np.arange(self.valuation, self.valuation + len(self.coeffs))
        if self.ring is Ring.INTEGERS:
            exps = exps.astype(object)
        return LaurentSeries(self.coeffs * exps, self.valuation, self.order, self.ring)

    def dlog(self) -> "LaurentSeries":
        """Logarithmic derivative (q d/dq a) / a over the integers."""
        if self.ring is not Ring.INTEGERS:
            raise ValueError("dlog is only defined over the integers")
        return self.derivative() * self.inverse()

    # -- substitutions ------------------------------------------------------

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by q^k."""
        return LaurentSeries(self.coeffs, self.valuation + k, self.order + k, self.ring)

    def dilate(self, k: int, sign: int = 1) -> "LaurentSeries":
        """Substitute q -> sign * q^k (k >= 1, sign = +-1)."""
        if k < 1 or sign not in (1, -1):
            raise ValueError("need k >= 1 and sign = +-1")
        v = self.valuation
        coeffs = self.coeffs
        if sign == -1 and len(coeffs):
            flip = np.where((np.arange(v, v + len(coeffs)) % 2) == 1, -1, 1)
            if self.ring is Ring.INTEGERS:
                flip = flip.astype(object)
            coeffs = coeffs * flip
        spread = self.ring.zeros(max((len(coeffs) - 1) * k + 1, 0))
        spread[::k] = coeffs
        return LaurentSeries(spread, v * k, (self.order + 1) * k - 1, self.ring)

    def truncate(self, order: int) -> "LaurentSeries":
        if order > self.order:
            raise PrecisionError(f"cannot extend a series known through q^{self.order} to q^{order}")
        return LaurentSeries(self.coeffs, self.valuation, order, self.ring)

    def reduce(self, ring: Ring) -> "LaurentSeries":
        ring = Ring.parse(ring)
        if ring is self.ring:
            return self
        if ring is Ring.INTEGERS or (self.ring is Ring.MOD2 and ring is Ring.MOD4):
            raise ValueError(f"cannot lift {self.ring.label} to {ring.label}")
        return LaurentSeries(np.array([int(x) % ring.modulus for x in self.coeffs], dtype=np.int64),
                             self.valuation, self.order, ring)

    # -- comparison / io ----------------------------------------------------

    def first_difference(self, other: "LaurentSeries", through: int | None = None) -> int | None:
        """Smallest exponent where the two series differ, or None."""
        check_same_ring(self.ring, other.ring)
        top = min(self.order, other.order) if through is None else through
        lo = min(self.valuation, other.valuation, top + 1)
        diff = np.flatnonzero(self.dense(lo, top) != other.dense(lo, top))
        return None if len(diff) == 0 else lo + int(diff[0])

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.ring is other.ring and self.valuation == other.valuation
                and self.order == other.order and np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None

    def to_json(self) -> dict:
        return {
            "ring": self.ring.label,
            "valuation": self.valuation,
            "order": self.order,
            "coeffs": [str(int(x)) for x in self.coeffs],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LaurentSeries":
        ring = Ring.parse(obj["ring"])
        return cls([int(x) for x in obj["coeffs"]], obj["valuation"], obj["order"], ring)

    def __repr__(self):
        shown = []
        for k, c in list(self.terms().items())[:8]:
            mono = "" if k == 0 else ("q" if k == 1 else f"q^{k}")
            if mono and c == 1:
                shown.append(mono)
            elif mono and c == -1:
                shown.append(f"-{mono}")
            else:
                shown.append(f"{c}{'*' if mono else ''}{mono}")
        body = " + ".join(shown) or "0"
        return f"{body} + O(q^{self.order + 1}) [{self.ring.label}]"


def _is_ring_array(arr, ring: Ring) -> bool:
    if not isinstance(arr, np.ndarray):
        return False
    if ring is Ring.INTEGERS:
        return arr.dtype == object
    return arr.dtype == np.int64 and (len(arr) == 0 or (arr.min() >= 0 and arr.max() < ring.modulus))


TruncatedLaurentSeries = LaurentSeries


# -- partitions ---------------------------------------------------------------


def pentagonal_offsets(N: int) -> tuple[np.ndarray, np.ndarray]:
    """Generalized pentagonal numbers k(3k-1)/2 <= N (k = 1, -1, 2, -2, ...) and their signs."""
    offs, signs = [], []
    k = 1
    while k * (3 * k - 1) // 2 <= N:
        s = 1 if k % 2 else -1
        offs.append(k * (3 * k - 1) // 2)
        signs.append(s)
        if k * (3 * k + 1) // 2 <= N:
            offs.append(k * (3 * k + 1) // 2)
            signs.append(s)
        k += 1
    return np.array(offs, dtype=np.int64), np.array(signs, dtype=np.int64)


@dataclass(frozen=True)
class PartitionTable:
    """p(0), ..., p(N) over a coefficient ring."""

    ring: Ring
    values: np.ndarray

    @property
    def N(self) -> int:
        return len(self.values) - 1

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int) -> int:
        if n < 0:
            return 0
        if n > self.N:
            raise PrecisionError(f"p({n}) requested, table stops at {self.N}")
        return int(self.values[n])

    def at_quotient(self, num: int, den: int) -> int:
        """p(num/den), with p of a non-integer equal to 0."""
        q, r = divmod(num, den)
        return 0 if r else self[q]

    def series(self) -> LaurentSeries:
        return LaurentSeries(self.values, 0, self.N, self.ring)


_partition_memo: dict[Ring, np.ndarray] = {}
_memo_lock = threading.Lock()


def partition_table(N: int, ring: Ring = Ring.INTEGERS, cancel: threading.Event | None = None) -> PartitionTable:
    """p(n) for n <= N from Euler's pentagonal recurrence.

    Results are memoized per ring (the largest table computed so far is kept
    and sliced).  ``cancel`` is polled every 10**4 values.
    """
    ring = Ring.parse(ring)
    if N < 0:
        raise ValueError("N must be non-negative")
    with _memo_lock:
        known = _partition_memo.get(ring)
    if known is not None and len(known) > N:
        return PartitionTable(ring, known[: N + 1])

    offs, signs = pentagonal_offsets(N)
    counts = np.searchsorted(offs, np.arange(N + 1), side="right")
    p = ring.zeros(N + 1)
    start = 0
    if known is not None:
        p[: len(known)] = known
        start = len(known)
    else:
        p[0] = 1
        start = 1
    if ring is Ring.INTEGERS:
        signs = signs.astype(object)
        for n in range(start, N + 1):
            if cancel is not None and n % 10_000 == 0 and cancel.is_set():
                raise Cancelled("partition table interrupted")
            c = counts[n]
            p[n] = (p[n - offs[:c]] * signs[:c]).sum()
    else:
        m = ring.modulus
        pos = offs[signs == 1]
        neg = offs[signs == -1]
        cpos = np.searchsorted(pos, np.arange(N + 1), side="right")
        cneg = np.searchsorted(neg, np.arange(N + 1), side="right")
        for n in range(start, N + 1):
            if cancel is not None and n % 10_000 == 0 and cancel.is_set():
                raise Cancelled("partition table interrupted")
            p[n] = (p[n - pos[: cpos[n]]].sum() - p[n - neg[: cneg[n]]].sum()) % m
    p.setflags(write=False)
    with _memo_lock:
        cur = _partition_memo.get(ring)
        if cur is None or len(cur) < len(p):
            _partition_memo[ring] = p
    return PartitionTable(ring, p)


def partition_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    return partition_table(N, ring).series()


# -- classical series ---------------------------------------------------------


def euler_product(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """prod_{n>=1} (1 - q^n) through q^N, by multiplying out the factors."""
    ring = Ring.parse(ring)
    arr = ring.zeros(N + 1)
    arr[0] = 1
    for n in range(1, N + 1):
        arr[n:] = arr[n:] - arr[:-n]
        if ring is not Ring.INTEGERS:
            arr %= ring.modulus
    return LaurentSeries(arr, 0, N, ring)


def divisor_sigma(k: int, N: int, ring: Ring = Ring.INTEGERS) -> np.ndarray:
    """sigma_k(n) for n = 0..N (sigma_k(0) set to 0), reduced into ``ring``."""
    ring = Ring.parse(ring)
    sig = ring.zeros(N + 1)
    for d in range(1, N + 1):
        sig[d::d] += ring.reduce(d**k)
    if ring is not Ring.INTEGERS:
        sig %= ring.modulus
    return sig


def delta_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """Delta = q prod (1 - q^n)^24 through q^N."""
    if N < 1:
        raise ValueError("N must be at least 1")
    return (euler_product(N - 1, ring) ** 24).shift(1)


def e4_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """E4 = 1 + 240 sum sigma_3(n) q^n through q^N."""
    ring = Ring.parse(ring)
    arr = divisor_sigma(3, N, ring) * 240
    arr[0] = 1
    return LaurentSeries(arr, 0, N, ring)


def e6_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """E6 = 1 - 504 sum sigma_5(n) q^n through q^N."""
    ring = Ring.parse(ring)
    arr = divisor_sigma(5, N, ring) * -504
    arr[0] = 1
    return LaurentSeries(arr, 0, N, ring)


def invdelta_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """1/Delta = q^-1 + 24 + 324 q + ... through q^N."""
    return delta_series(N + 2, ring).inverse()


def j_series(N: int, ring: Ring = Ring.INTEGERS) -> LaurentSeries:
    """j = E4^3 / Delta = q^-1 + 744 + 196884 q + ... through q^N."""
    if N < -1:
        raise ValueError("N must be at least -1")
    return (e4_series(N + 1, ring) ** 3) * invdelta_series(N, ring)


def seed_partition_table(table: PartitionTable) -> None:
    """Make a precomputed table (e.g. loaded from disk) available to partition_table."""
    values = np.array(table.values, dtype=table.ring.dtype)
    values.setflags(write=False)
    with _memo_lock:
        cur = _partition_memo.get(table.ring)
        if cur is None or len(cur) < len(values):
            _partition_memo[table.ring] = values


def clear_partition_cache() -> None:
    """Drop every memoized partition table."""
    with _memo_lock:
        _partition_memo.clear()
