"""Exact scalars: rationals and elements of a real quadratic field Q(sqrt(m)).

All exact coefficients in the package are either plain `fractions.Fraction`
or :class:`QuadScalar` values a + b*sqrt(m) with a, b rational and m a
square-free integer.  A QuadScalar with b == 0 is normalized to m == 1, so
pure rationals always compare and hash consistently.  Values from different
quadratic fields never mix: arithmetic between sqrt(2)- and sqrt(5)-valued
scalars raises :class:`DiscriminantMismatch` instead of silently lifting to
a composite field.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Union

Rational = Fraction

ScalarLike = Union["QuadScalar", Fraction, int]


class DiscriminantMismatch(ValueError):
    """Arithmetic between incompatible quadratic fields."""


def _square_free(m: int) -> bool:
    if m == 0:
        return False
    m = abs(m)
    d = 2
    while d * d <= m:
        if m % (d * d) == 0:
            return False
        d += 1
    return True


class QuadScalar:
    """a + b*sqrt(m) with a, b in Q and m a square-free integer.

    m == 1 encodes a pure rational (b is forced to 0).
    """

    __slots__ = ("a", "b", "m")

    def __init__(self, a: ScalarLike = 0, b: ScalarLike = 0, m: int = 1):
        if isinstance(a, QuadScalar):
            if b != 0 or (m != 1 and m != a.m):
                raise ValueError("cannot re-wrap a QuadScalar with extra parts")
            a, b, m = a.a, a.b, a.m
        a = Fraction(a)
        b = Fraction(b)
        m = int(m)
        if b == 0:
            m = 1
        elif m == 1:
            a, b = a + b, Fraction(0)
            m = 1
        if not _square_free(m):
            raise ValueError(f"discriminant {m} is not square-free")
        self.a, self.b, self.m = a, b, m

    # -- helpers -------------------------------------------------------
    @staticmethod
    def coerce(x: ScalarLike) -> "QuadScalar":
        if isinstance(x, QuadScalar):
            return x
        return QuadScalar(Fraction(x))

    def is_rational(self) -> bool:
        return self.b == 0

    def _join(self, other: "QuadScalar") -> int:
        """Common discriminant, or raise."""
        if self.m == other.m:
            return self.m
        if self.is_rational():
            return other.m
        if other.is_rational():
            return self.m
        raise DiscriminantMismatch(f"sqrt({self.m}) vs sqrt({other.m})")

    # -- ring operations -----------------------------------------------
    def __add__(self, other):
        other = QuadScalar.coerce(other)
        m = self._join(other)
        return QuadScalar(self.a + other.a, self.b + other.b, m)

    __radd__ = __add__

    def __neg__(self):
        return QuadScalar(-self.a, -self.b, self.m)

    def __sub__(self, other):
        return self + (-QuadScalar.coerce(other))

    def __rsub__(self, other):
        return QuadScalar.coerce(other) + (-self)

    def __mul__(self, other):
        other = QuadScalar.coerce(other)
        m = self._join(other)
        a = self.a * other.a + self.b * other.b * m
        b = self.a * other.b + self.b * other.a
        return QuadScalar(a, b, m)

    __rmul__ = __mul__

    def inverse(self) -> "QuadScalar":
        n = self.a * self.a - self.b * self.b * self.m
        if n == 0:
            raise ZeroDivisionError("QuadScalar is zero or a zero divisor")
        return QuadScalar(self.a / n, -self.b / n, self.m)

    def __truediv__(self, other):
        return self * QuadScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return QuadScalar.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadScalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- predicates ------------------------------------------------------
    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __eq__(self, other):
        try:
            other = QuadScalar.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        if self.is_rational() and other.is_rational():
            return self.a == other.a
        return self.a == other.a and self.b == other.b and self.m == other.m

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def lex_nonneg(self) -> bool:
        """(a, b) >= (0, 0) lexicographically; sign-quotient normal forms use this."""
        if self.a != 0:
            return self.a > 0
        return self.b >= 0

    # -- conversions -----------------------------------------------------
    def __float__(self):
        if self.m < 0:
            raise ValueError("negative discriminant has no real value")
        return float(self.a) + float(self.b) * float(abs(self.m)) ** 0.5

    def __complex__(self):
        root = complex(abs(self.m)) ** 0.5
        if self.m < 0:
            root = root * 1j
        return complex(self.a) + complex(self.b) * root

    def __repr__(self):
        return f"QuadScalar({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        s = "" if self.a == 0 else str(self.a)
        bpart = f"{self.b}√{self.m}"
        if self.b > 0 and s:
            return f"{s}+{bpart}"
        return f"{s}{bpart}"


_ROOT_RE = re.compile(r"(?:√|sqrt)\s*\(?\s*(-?\d+)\s*\)?\s*$")


def parse_quad(text: str) -> QuadScalar:
    """Parse "a", "a+b√m", "b√m" (also 'sqrt' spelled out)."""
    text = text.strip()
    root = _ROOT_RE.search(text)
    if root is None:
        return QuadScalar(Fraction(text))
    m = int(root.group(1))
    head = text[: root.start()].strip()
    # split head into rational part `a` and coefficient `b` of the root
    head = head.rstrip("*").strip()
    if not head or head in "+-":
        a, b = Fraction(0), Fraction((head or "") + "1")
    elif head[-1] in "+-":
        a, b = Fraction(head[:-1]), Fraction(head[-1] + "1")
    else:
        mobj = re.search(r"([+-]?\d+(?:/\d+)?)$", head.replace(" ", ""))
        if mobj is None:
            raise ValueError(f"cannot parse quadratic scalar: {text!r}")
        b = Fraction(mobj.group(1))
        rest = head.replace(" ", "")[: mobj.start()]
        a = Fraction(rest) if rest else Fraction(0)
    return QuadScalar(a, b, m)


ZERO = QuadScalar(0)
ONE = QuadScalar(1)
