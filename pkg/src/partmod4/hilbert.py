"""Hilbert class polynomials H_{-D}(X) by evaluating j at Heegner points.

j(tau) is summed from the q-expansions of E4 and Delta in multiprecision
complex arithmetic (mpmath), the roots are multiplied out, and the product is
rounded to integers.  Rounding is accepted only if every coefficient lies
within 1/4 of an integer with imaginary part below 1/4; otherwise the
precision is doubled and the computation repeated.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import mpmath

from .binary_qf import ClassGroupData, QuadForm, reduced_forms
from .exact_arith import Ring

MAX_PREC = 1 << 16
GUARD_BITS = 32


class PrecisionExhausted(ArithmeticError):
    """Certified rounding did not succeed within the precision budget."""


BigComplex = mpmath.mpc


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial, coefficients in ascending degree."""

    coeffs: tuple[int, ...]
    prec: int | None = field(default=None, compare=False)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def reduce(self, ring: Ring) -> tuple[int, ...]:
        ring = Ring.parse(ring)
        return tuple(ring.reduce(c) for c in self.coeffs)

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self):
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            coef = "" if (c == 1 and mono) else str(c)
            parts.append(f"{coef}{mono}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


def _terms_needed(abs_q, prec: int) -> int:
    """Smallest M with |q|^M * M^8 < 2^(-prec-8)."""
    target = -(prec + 8) * math.log(2)
    log_q = float(mpmath.log(abs_q))
    M = 1
    while M * log_q + 8 * math.log(M) >= target:
        M += 1
    return M


def j_eval(tau, prec: int = 128) -> mpmath.mpc:
    """j(tau) for Im(tau) >= sqrt(3)/2, accurate to roughly ``prec`` bits."""
    if prec > MAX_PREC:
        raise PrecisionExhausted(f"requested precision {prec} exceeds {MAX_PREC} bits")
    with mpmath.workprec(prec + GUARD_BITS):
        tau = mpmath.mpc(tau)
        if tau.imag < mpmath.sqrt(3) / 2 - mpmath.mpf(2) ** (-prec // 2):
            raise ValueError("j_eval needs Im(tau) >= sqrt(3)/2")
        q = mpmath.exp(2j * mpmath.pi * tau)
        M = _terms_needed(abs(q), prec)
        # E4 = 1 + 240 sum sigma_3(n) q^n
        sigma3 = [0] * (M + 1)
        for d in range(1, M + 1):
            d3 = d**3
            for k in range(d, M + 1, d):
                sigma3[k] += d3
        e4 = mpmath.mpf(1)
        qn = mpmath.mpc(1)
        for n in range(1, M + 1):
            qn *= q
            e4 += 240 * sigma3[n] * qn
        # prod (1 - q^n) via Euler's pentagonal number theorem
        eta = mpmath.mpc(1)
        k = 1
        while k * (3 * k - 1) // 2 <= M:
            s = -1 if k % 2 else 1
            eta += s * (q ** (k * (3 * k - 1) // 2) + q ** (k * (3 * k + 1) // 2))
            k += 1
        delta = q * eta**24
        return e4**3 / delta


def _j_at_form(args) -> mpmath.mpc:
    a, b, c, prec = args
    return j_eval(QuadForm(a, b, c).heegner_point(prec + GUARD_BITS), prec)


def heegner_j_values(classgroup: ClassGroupData, prec: int, jobs: int = 1) -> list:
    """j(tau_Q) for every reduced form Q, in the order of ``classgroup.forms``."""
    tasks = [(Q.a, Q.b, Q.c, prec) for Q in classgroup.forms]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_j_at_form, tasks))
    return [_j_at_form(t) for t in tasks]


def initial_precision(classgroup: ClassGroupData) -> int:
    """Bits from the size bound pi sqrt(D) sum 1/a on H_{-D}, plus 64 guard bits."""
    size = math.pi * math.sqrt(classgroup.D) * sum(1 / Q.a for Q in classgroup.forms)
    return math.ceil(size / math.log(2)) + 64


def _expand_roots(roots, prec: int) -> list:
    with mpmath.workprec(prec + GUARD_BITS):
        poly = [mpmath.mpc(1)]
        for r in roots:
            nxt = [mpmath.mpc(0)] * (len(poly) + 1)
            for i, c in enumerate(poly):
                nxt[i + 1] += c
                nxt[i] -= r * c
            poly = nxt
        return poly


def _round_certified(poly, prec: int) -> tuple[int, ...] | None:
    out = []
    with mpmath.workprec(prec + GUARD_BITS):
        quarter = mpmath.mpf(1) / 4
        for c in poly:
            n = int(mpmath.nint(c.real))
            if abs(c.imag) >= quarter or abs(c.real - n) >= quarter:
                return None
            out.append(n)
    return tuple(out)


def hilbert_poly(D: int, classgroup: ClassGroupData | None = None, prec: int | None = None,
                 max_retries: int = 6, jobs: int = 1) -> IntPolynomial:
    """H_{-D}(X) = prod_Q (X - j(tau_Q)), monic of degree h(-D)."""
    if classgroup is None:
        classgroup = reduced_forms(D)
    elif classgroup.D != D:
        raise ValueError("class group data belongs to a different discriminant")
    bits = initial_precision(classgroup) if prec is None else prec
    for _ in range(max_retries + 1):
        if bits > MAX_PREC:
            break
        roots = heegner_j_values(classgroup, bits, jobs)
        coeffs = _round_certified(_expand_roots(roots, bits), bits)
        if coeffs is not None:
            return IntPolynomial(coeffs, prec=bits)
        bits *= 2
    raise PrecisionExhausted(f"could not certify H_-{D} within {max_retries} precision doublings")


def root_residuals(poly: IntPolynomial, classgroup: ClassGroupData, prec: int) -> list:
    """Relative residuals |H(r)| / sum_k |c_k| |r|^k at every root r = j(tau_Q), at ``prec`` bits.

    The denominator is the size of the terms summed when evaluating H at r,
    which is the scale that rounding errors in r are measured against.
    """
    roots = heegner_j_values(classgroup, prec)
    with mpmath.workprec(prec + GUARD_BITS):
        out = []
        for r in roots:
            scale = sum(abs(c) * abs(r) ** k for k, c in enumerate(poly.coeffs))
            out.append(abs(poly(r)) / scale)
        return out


def hilbert_mod(D: int, ring: Ring = Ring.MOD4, poly: IntPolynomial | None = None) -> tuple[int, ...]:
    """Coefficients of H_{-D} reduced into ``ring``, ascending degree."""
    if poly is None:
        poly = hilbert_poly(D)
    return poly.reduce(ring)
