"""Exact arithmetic in a real quadratic extension Q(sqrt(D)).

Used wherever a closed-form check involves a single square root (values like
3^(n^2/2) or 5 + 4*sqrt(2)), so identity tests can assert exact zero instead
of a floating tolerance.  Elements are a + b*sqrt(D) with Fraction a, b and a
fixed positive non-square integer D.
"""

from __future__ import annotations

import math
from fractions import Fraction


class Quad:
    __slots__ = ("a", "b", "D")

    def __init__(self, a, b=0, D: int = 2):
        self.a = Fraction(a)
        self.b = Fraction(b)
        self.D = D

    @staticmethod
    def root(D: int) -> "Quad":
        return Quad(0, 1, D)

    def _coerce(self, other) -> "Quad":
        if isinstance(other, Quad):
            if other.D != self.D:
                raise ValueError("mixed quadratic extensions")
            return other
        return Quad(other, 0, self.D)

    def __add__(self, other):
        o = self._coerce(other)
        return Quad(self.a + o.a, self.b + o.b, self.D)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return Quad(self.a * o.a + self.D * self.b * o.b,
                    self.a * o.b + self.b * o.a, self.D)

    __rmul__ = __mul__

    def inverse(self) -> "Quad":
        n = self.a * self.a - self.D * self.b * self.b
        if n == 0:
            raise ZeroDivisionError("zero norm in quadratic field")
        return Quad(self.a / n, -self.b / n, self.D)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = Quad(1, 0, self.D)
        base = self
        while n:
            if n & 1:
                result = result * base
            if n > 1:
                base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Quad):
            return self.D == other.D and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.D)) if self.b else hash(self.a)

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __float__(self):
        return float(self.a) + float(self.b) * math.sqrt(self.D)

    def __gt__(self, other):
        return float(self) > float(self._coerce(other))

    def __lt__(self, other):
        return float(self) < float(self._coerce(other))

    def sqrt(self) -> "Quad":
        """Exact square root if it lies in Q(sqrt(D)); raises ValueError otherwise.

        Solves (x + y*sqrt(D))^2 = a + b*sqrt(D): x^2 + D y^2 = a, 2xy = b.
        """
        if self.b == 0:
            r = _frac_sqrt(self.a)
            if r is not None:
                return Quad(r, 0, self.D)
            r = _frac_sqrt(self.a / self.D)
            if r is not None:
                return Quad(0, r, self.D)
            raise ValueError(f"no exact square root of {self} in Q(sqrt{self.D})")
        # x^2 solves t^2 - a t + D b^2/4 = 0
        disc = self.a * self.a - self.D * self.b * self.b
        rd = _frac_sqrt(disc)
        if rd is None:
            raise ValueError(f"no exact square root of {self} in Q(sqrt{self.D})")
        for t in ((self.a + rd) / 2, (self.a - rd) / 2):
            x = _frac_sqrt(t)
            if x is not None and x != 0:
                y = self.b / (2 * x)
                cand = Quad(x, y, self.D)
                if cand * cand == self and float(cand) >= 0:
                    return cand
                cand = -cand
                if cand * cand == self and float(cand) >= 0:
                    return cand
        raise ValueError(f"no exact square root of {self} in Q(sqrt{self.D})")

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a}+{self.b}*sqrt({self.D})"

    __repr__ = __str__


def _frac_sqrt(x: Fraction) -> Fraction | None:
    """Exact rational square root, or None."""
    if x < 0:
        return None
    pn = math.isqrt(x.numerator)
    pd = math.isqrt(x.denominator)
    if pn * pn == x.numerator and pd * pd == x.denominator:
        return Fraction(pn, pd)
    return None


def sqrt_exact_or_quad(x, D: int):
    """sqrt of a Fraction/int as Fraction if perfect, else as Quad(0,*,D) if exact there."""
    f = Fraction(x) if not isinstance(x, Quad) else None
    if f is not None:
        r = _frac_sqrt(f)
        if r is not None:
            return r
        return Quad(f, 0, D).sqrt()
    return x.sqrt()
