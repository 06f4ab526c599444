"""Exact arithmetic in the quadratic fields Q(sqrt(d)).

An element is stored as a pair of Fractions (re, im) meaning re + im*sqrt(d).
The rational field is d = 0; the imaginary parts are then always zero.
"""

from fractions import Fraction
from math import isqrt
from typing import Optional, Union


class FieldError(ValueError):
    pass


def _is_squarefree(d: int) -> bool:
    if d in (0, 1):
        return d == 0
    n = abs(d)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def check_descriptor(d: int) -> int:
    if not isinstance(d, int) or not _is_squarefree(d):
        raise FieldError(f"unsupported field descriptor d={d!r}; need 0 or a squarefree integer != 1")
    return d


Scalar = Union[int, Fraction, "QuadFieldElement"]


class QuadFieldElement:
    """re + im*sqrt(d) with rational re, im."""

    __slots__ = ("re", "im", "d")

    def __init__(self, re=0, im=0, d: int = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)
        self.d = d
        if d == 0 and self.im:
            raise FieldError("rational field element with a nonzero sqrt part")

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> Optional["QuadFieldElement"]:
        if isinstance(other, QuadFieldElement):
            if other.d == self.d:
                return other
            # rationals embed in every field
            if other.d == 0:
                return QuadFieldElement(other.re, 0, self.d)
            if self.d == 0 and not self.im:
                return other
            raise FieldError(f"field mismatch: Q(sqrt({self.d})) vs Q(sqrt({other.d}))")
        if isinstance(other, (int, Fraction)):
            return QuadFieldElement(other, 0, self.d)
        return None

    def _join(self, other):
        o = self._coerce(other)
        if o is None:
            return None, None
        d = self.d if self.d != 0 else o.d
        return d, o

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        d, o = self._join(other)
        if o is None:
            return NotImplemented
        return QuadFieldElement(self.re + o.re, self.im + o.im, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadFieldElement(-self.re, -self.im, self.d)

    def __sub__(self, other):
        d, o = self._join(other)
        if o is None:
            return NotImplemented
        return QuadFieldElement(self.re - o.re, self.im - o.im, d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        d, o = self._join(other)
        if o is None:
            return NotImplemented
        if not self.im and not o.im:
            return QuadFieldElement(self.re * o.re, 0, d)
        return QuadFieldElement(self.re * o.re + d * self.im * o.im,
                                self.re * o.im + self.im * o.re, d)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.re * self.re - self.d * self.im * self.im

    def conjugate(self) -> "QuadFieldElement":
        return QuadFieldElement(self.re, -self.im, self.d)

    def inverse(self) -> "QuadFieldElement":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt(%d))" % self.d)
        return QuadFieldElement(self.re / n, -self.im / n, self.d)

    def __truediv__(self, other):
        d, o = self._join(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result = QuadFieldElement(1, 0, self.d)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, QuadFieldElement):
            if self.im or other.im:
                return self.d == other.d and self.re == other.re and self.im == other.im
            return self.re == other.re
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im, self.d))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def is_rational(self) -> bool:
        return not self.im

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"QuadFieldElement({self.re}, {self.im}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


def unit_name(d: int) -> str:
    return {-1: "i", -3: "w"}.get(d, f"sqrt({d})")


def format_scalar(c: QuadFieldElement) -> str:
    """Text form that the polynomial parser reads back."""
    if not c.im:
        return str(c.re)
    u = unit_name(c.d)
    im = "" if c.im == 1 else "-" if c.im == -1 else f"{c.im}*"
    if not c.re:
        return f"{im}{u}"
    sign = "+" if c.im > 0 else "-"
    mag = abs(c.im)
    im = "" if mag == 1 else f"{mag}*"
    return f"({c.re} {sign} {im}{u})"


def F(re=0, im=0, d: int = 0) -> QuadFieldElement:
    return QuadFieldElement(re, im, d)


def sqrt_unit(d: int) -> QuadFieldElement:
    """The adjoined square root, i.e. i for d=-1 and w = sqrt(-3) for d=-3."""
    if d == 0:
        raise FieldError("the rational field has no adjoined square root")
    return QuadFieldElement(0, 1, d)


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    n, m = q.numerator, q.denominator
    rn, rm = isqrt(n), isqrt(m)
    if rn * rn == n and rm * rm == m:
        return Fraction(rn, rm)
    return None


def field_sqrt(x: QuadFieldElement) -> Optional[QuadFieldElement]:
    """A square root of x inside its own field, or None if x is not a square there."""
    d = x.d
    if not x:
        return QuadFieldElement(0, 0, d)
    if not x.im:
        r = _rational_sqrt(x.re)
        if r is not None:
            return QuadFieldElement(r, 0, d)
        if d == 0:
            return None
        # (v*sqrt(d))^2 = d*v^2
        v = _rational_sqrt(x.re / d)
        if v is not None:
            return QuadFieldElement(0, v, d)
        return None
    # (u + v sqrt d)^2 = x forces u^2 = (re +- sqrt(norm)) / 2
    n = _rational_sqrt(x.norm())
    if n is None:
        return None
    for cand in ((x.re + n) / 2, (x.re - n) / 2):
        u = _rational_sqrt(cand)
        if u:
            y = QuadFieldElement(u, x.im / (2 * u), d)
            if y * y == x:
                return y
    return None
