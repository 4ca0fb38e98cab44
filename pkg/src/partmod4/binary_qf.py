"""Positive definite binary quadratic forms of fundamental discriminant -D.

Only D = 3 mod 4 square-free is supported, which covers every D = 23 mod 24
used elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd

import mpmath

from .exact_arith import chi, is_squarefree


class DiscriminantError(ValueError):
    """The discriminant is outside the supported family."""


@dataclass(frozen=True, order=True)
class QuadForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a <= 0 or self.discriminant >= 0:
            raise ValueError(f"{self} is not positive definite")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def heegner_point(self, prec: int = 128) -> mpmath.mpc:
        """tau_Q = (-b + sqrt(-D)) / (2a), computed at ``prec`` bits."""
        with mpmath.workprec(prec):
            D = -self.discriminant
            return mpmath.mpc(-self.b, mpmath.sqrt(D)) / (2 * self.a)

    def __iter__(self):
        yield from (self.a, self.b, self.c)


@dataclass(frozen=True)
class ClassGroupData:
    D: int
    forms: tuple[QuadForm, ...]

    @property
    def class_number(self) -> int:
        return len(self.forms)

    h = class_number

    def to_json(self) -> dict:
        return {"D": self.D, "h": self.class_number, "forms": [list(f) for f in self.forms]}

    @classmethod
    def from_json(cls, obj: dict) -> "ClassGroupData":
        data = cls(obj["D"], tuple(QuadForm(*f) for f in obj["forms"]))
        if data.class_number != obj["h"]:
            raise ValueError("class number does not match the stored forms")
        return data


def check_discriminant(D: int) -> None:
    if D <= 0 or D % 4 != 3 or not is_squarefree(D):
        raise DiscriminantError(f"-{D} is not a supported fundamental discriminant (need D > 0 square-free, D = 3 mod 4)")


def reduced_forms(D: int) -> ClassGroupData:
    """All reduced primitive forms (a, b, c) with b^2 - 4ac = -D."""
    check_discriminant(D)
    forms = []
    a = 1
    while 3 * a * a <= D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b + D
            if num % (4 * a):
                continue
            Q = QuadForm(a, b, num // (4 * a))
            if Q.is_reduced() and Q.is_primitive():
                forms.append(Q)
        a += 1
    return ClassGroupData(D, tuple(forms))


def class_number(D: int) -> int:
    return reduced_forms(D).class_number


def class_number_dirichlet(D: int) -> int:
    """h(-D) from the class number formula h = -(w / 2D) sum_{n<D} chi_{-D}(n) n."""
    check_discriminant(D)
    w = 6 if D == 3 else 2
    s = sum(chi(-D, n) * n for n in range(1, D))
    h, r = divmod(-w * s, 2 * D)
    if r:
        raise ArithmeticError("class number formula did not give an integer")
    return h


def class_number_bound(D: int) -> float:
    return math.sqrt(D) * (math.log(D) + 2) / math.pi


def class_number_bound_check(D: int) -> bool:
    """True iff h(-D) <= sqrt(D)(log D + 2)/pi."""
    return class_number(D) <= class_number_bound(D)


def heegner_point(Q: QuadForm, prec: int = 128) -> mpmath.mpc:
    return Q.heegner_point(prec)

