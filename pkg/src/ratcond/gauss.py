"""Gaussian integers Z[i] and Gaussian rationals Q[i].

Rationals over Q are plain :class:`fractions.Fraction` (exported as
``ExactRational``); it already keeps lowest terms with a positive denominator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

ExactRational = Fraction


@dataclass(frozen=True, slots=True)
class GaussInteger:
    re: int = 0
    im: int = 0

    @classmethod
    def of(cls, x) -> "GaussInteger":
        if isinstance(x, GaussInteger):
            return x
        if isinstance(x, complex):
            if x.real != int(x.real) or x.imag != int(x.imag):
                raise ValueError(f"{x} is not a Gaussian integer")
            return cls(int(x.real), int(x.imag))
        if isinstance(x, tuple):
            return cls(int(x[0]), int(x[1]))
        return cls(int(x), 0)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def conjugate(self) -> "GaussInteger":
        return GaussInteger(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_unit(self) -> bool:
        return self.norm() == 1

    def __add__(self, o):
        o = GaussInteger.of(o)
        return GaussInteger(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussInteger.of(o)
        return GaussInteger(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussInteger.of(o) - self

    def __neg__(self):
        return GaussInteger(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussInteger.of(o)
        return GaussInteger(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def divmod(self, o: "GaussInteger") -> tuple["GaussInteger", "GaussInteger"]:
        """Euclidean division with N(remainder) <= N(o)/2 (nearest-integer quotient)."""
        o = GaussInteger.of(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Z[i]")
        num = self * o.conjugate()
        q = GaussInteger(_round_div(num.re, n), _round_div(num.im, n))
        return q, self - q * o

    def __floordiv__(self, o):
        return self.divmod(o)[0]

    def __mod__(self, o):
        return self.divmod(o)[1]

    def divides(self, o) -> bool:
        if self.is_zero():
            return GaussInteger.of(o).is_zero()
        return GaussInteger.of(o).divmod(self)[1].is_zero()

    def __complex__(self):
        return complex(self.re, self.im)

    def __str__(self):
        return format_gauss(Fraction(self.re), Fraction(self.im))


UNITS = (GaussInteger(1, 0), GaussInteger(0, 1), GaussInteger(-1, 0), GaussInteger(0, -1))


def _round_div(a: int, n: int) -> int:
    """Nearest integer to a/n for n > 0, ties rounded up."""
    return (2 * a + n) // (2 * n)


def gauss_gcd(a, b) -> GaussInteger:
    """gcd in Z[i] by the Euclidean algorithm, normalised to the first quadrant."""
    a, b = GaussInteger.of(a), GaussInteger.of(b)
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return unit_normalize(a)


def gauss_gcd_many(values: Iterable) -> GaussInteger:
    return reduce(gauss_gcd, values, GaussInteger(0, 0))


def unit_normalize(z: GaussInteger) -> GaussInteger:
    """Associate of z with re > 0 and im >= 0 (z itself if zero).

    Every nonzero Gaussian integer has exactly one associate in this half-open
    quadrant, so the choice is unique.
    """
    if z.is_zero():
        return z
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.im >= 0:
            return w
    raise AssertionError("unreachable")


def normalizing_unit(z: GaussInteger) -> GaussInteger:
    """The unit u with z*u = unit_normalize(z)."""
    for u in UNITS:
        w = z * u
        if w.re > 0 and w.im >= 0:
            return u
    raise ValueError("zero has no normalizing unit")


# vectorised gcd over numpy arrays --------------------------------------------


def gauss_gcd_arrays(ar, ai, br, bi):
    """Elementwise Z[i] gcd of int64 arrays (a = ar + i ai, b = br + i bi).

    Returns (gr, gi) up to a unit. Inputs must be small enough that products of
    two entries fit in int64.
    """
    ar, ai, br, bi = (np.array(x, dtype=np.int64, copy=True) for x in (ar, ai, br, bi))
    active = (br != 0) | (bi != 0)
    while active.any():
        n = br * br + bi * bi
        n_safe = np.where(active, n, 1)
        # a * conj(b)
        pr = ar * br + ai * bi
        pi = ai * br - ar * bi
        qr = np.floor_divide(2 * pr + n_safe, 2 * n_safe)
        qi = np.floor_divide(2 * pi + n_safe, 2 * n_safe)
        rr = ar - (qr * br - qi * bi)
        ri = ai - (qr * bi + qi * br)
        ar = np.where(active, br, ar)
        ai = np.where(active, bi, ai)
        br = np.where(active, rr, br)
        bi = np.where(active, ri, bi)
        active = (br != 0) | (bi != 0)
    return ar, ai


# Gaussian rationals ------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class GaussRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x) -> "GaussRational":
        if isinstance(x, GaussRational):
            return x
        if isinstance(x, GaussInteger):
            return cls(Fraction(x.re), Fraction(x.im))
        if isinstance(x, complex):
            return cls(Fraction(repr(x.real)), Fraction(repr(x.imag)))
        if isinstance(x, tuple):
            return cls(Fraction(x[0]), Fraction(x[1]))
        if isinstance(x, str):
            return parse_gauss_rational(x)
        return cls(Fraction(x), Fraction(0))

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def conjugate(self):
        return GaussRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def denominator(self) -> int:
        """Least positive q with q*self in Z[i]."""
        return math.lcm(self.re.denominator, self.im.denominator)

    def __add__(self, o):
        o = GaussRational.of(o)
        return GaussRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = GaussRational.of(o)
        return GaussRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, o):
        return GaussRational.of(o) - self

    def __neg__(self):
        return GaussRational(-self.re, -self.im)

    def __mul__(self, o):
        o = GaussRational.of(o)
        return GaussRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussRational.of(o)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q[i]")
        p = self * o.conjugate()
        return GaussRational(p.re / n, p.im / n)

    def __rtruediv__(self, o):
        return GaussRational.of(o) / self

    def __pow__(self, k: int):
        out = GaussRational(1)
        base = self
        if k < 0:
            base, k = GaussRational(1) / base, -k
        for _ in range(k):
            out = out * base
        return out

    def __eq__(self, o):
        try:
            o = GaussRational.of(o)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        return format_gauss(self.re, self.im)


def format_gauss(re: Fraction, im: Fraction) -> str:
    if im == 0:
        return str(re)
    if re == 0:
        return f"{im} i"
    sign = "+" if im > 0 else "-"
    return f"{re}{sign}{abs(im)} i"


def parse_gauss_rational(text: str) -> GaussRational:
    """Parse ``p/q``, ``r/s i``, ``p/q+r/s i`` (spaces optional; ``i`` alone means 1)."""
    t = text.replace(" ", "").replace("*", "")
    if t.startswith("(") and t.endswith(")"):
        t = t[1:-1]
    if not t:
        raise ValueError("empty Gaussian rational")
    if not t.endswith("i"):
        return GaussRational(Fraction(t), 0)
    body = t[:-1]
    # split at the last sign that is not the leading one
    cut = max(body.rfind("+"), body.rfind("-"))
    if cut <= 0:
        re_part, im_part = "", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im = Fraction(1)
    elif im_part == "-":
        im = Fraction(-1)
    else:
        im = Fraction(im_part)
    return GaussRational(Fraction(re_part) if re_part else Fraction(0), im)


def common_denominator(values: Sequence[GaussRational]) -> int:
    return reduce(math.lcm, (GaussRational.of(v).denominator for v in values), 1)
