"""Exact numbers of the form a + b*sqrt(D) with rational a, b and squarefree D."""

from __future__ import annotations

import math
from fractions import Fraction


def squarefree_split(m: int) -> tuple[int, int]:
    """Write a positive integer m as k*k*s with s squarefree; return (k, s)."""
    if m <= 0:
        raise ValueError("expected a positive integer")
    k, s = 1, 1
    p = 2
    while p * p <= m:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        k *= p ** (e // 2)
        if e % 2:
            s *= p
        p += 1
    return k, s * m


class Surd:
    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D: int = 1):
        if type(a) is not Fraction:
            a = Fraction(a)
        if type(b) is not Fraction:
            b = Fraction(b)
        if D == 1:
            a, b = a + b, Fraction(0)
        if b == 0:
            D = 1
        self.a, self.b, self.D = a, b, D

    @classmethod
    def sqrt(cls, x) -> "Surd":
        """Square root of a nonnegative rational."""
        x = Fraction(x)
        if x < 0:
            raise ValueError("square root of a negative number")
        if x == 0:
            return cls(0)
        num = x.numerator * x.denominator
        k, s = squarefree_split(num)
        return cls(0, Fraction(k, x.denominator), s)

    def _coerce(self, other) -> "Surd":
        if isinstance(other, Surd):
            if other.D != 1 and self.D != 1 and other.D != self.D:
                raise ValueError("surds with different radicands")
            return other
        return Surd(other)

    def _radicand(self, other: "Surd") -> int:
        return self.D if self.D != 1 else other.D

    def __add__(self, other):
        o = self._coerce(other)
        return Surd(self.a + o.a, self.b + o.b, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        D = self._radicand(o)
        return Surd(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self) -> "Surd":
        nrm = self.norm()
        if nrm == 0:
            raise ZeroDivisionError("surd is zero")
        return Surd(self.a / nrm, -self.b / nrm, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return Surd(other) * self.inverse()

    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b:
            raise ValueError(f"{self} is irrational")
        return self.a

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Surd(other)
        if not isinstance(other, Surd):
            return NotImplemented
        return (self.a, self.b, self.D) == (other.a, other.b, other.D)

    def __hash__(self):
        return hash((self.a, self.b, self.D))

    def sign(self) -> int:
        """Exact sign, comparing squares when the two parts disagree."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0 or sa == sb:
            return sa or sb
        if sa == 0:
            return sb
        big = self.a * self.a - self.b * self.b * self.D
        return sa if big > 0 else (sb if big < 0 else 0)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __repr__(self):
        if not self.b:
            return str(self.a)
        root = f"sqrt({self.D})" if abs(self.b) == 1 else f"{abs(self.b)}*sqrt({self.D})"
        if not self.a:
            return root if self.b > 0 else f"-{root}"
        return f"{self.a} {'+' if self.b > 0 else '-'} {root}"

    def to_json(self):
        if not self.b:
            return str(self.a)
        return {"a": str(self.a), "b": str(self.b), "sqrt": self.D}
