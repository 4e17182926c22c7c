"""Exact and interval-enclosed scalars: Moebius, zeta, ball volumes, bound constants.

Transcendental quantities are returned as :class:`BoundValue` enclosures computed
with ``mpmath.iv`` at a caller-selected working precision. Integer-valued
constants (``T_n``, the Milnor-Thom style exponent towers) stay exact ints.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

import mpmath
from mpmath import iv, mp

DEFAULT_PREC = 128

# ---------------------------------------------------------------------------
# BoundValue
# ---------------------------------------------------------------------------


@contextmanager
def ivprec(bits: int):
    """Temporarily set the working precision of the interval context."""
    old = iv.prec
    iv.prec = bits
    try:
        yield
    finally:
        iv.prec = old


def _lo(x) -> mpmath.mpf:
    return mp.make_mpf(x._mpi_[0])


def _hi(x) -> mpmath.mpf:
    return mp.make_mpf(x._mpi_[1])


def _to_iv(x):
    """Outward-rounded interval for ints, Fractions, mpf, floats and BoundValues."""
    if isinstance(x, BoundValue):
        return iv.mpf([x.lower, x.upper])
    if isinstance(x, bool):
        return iv.mpf(int(x))
    if isinstance(x, int):
        return iv.mpf(x)
    if isinstance(x, Rational):
        return iv.mpf(int(x.numerator)) / iv.mpf(int(x.denominator))
    if isinstance(x, float):
        return iv.mpf(x)
    if isinstance(x, mpmath.mpf):
        return iv.mpf([x, x])
    if isinstance(x, str):
        return _to_iv(Fraction(x))
    return iv.mpf(x)


@dataclass(frozen=True)
class BoundValue:
    """Closed real interval ``[lower, upper]`` certified to contain a value.

    Arithmetic is outward rounded at ``prec`` bits. Infinite bounds are allowed
    (the condition number of a singular matrix is ``BoundValue.infinite()``).
    """

    lower: mpmath.mpf
    upper: mpmath.mpf
    prec: int = DEFAULT_PREC

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty enclosure [{self.lower}, {self.upper}]")

    # construction ---------------------------------------------------------

    @classmethod
    def from_iv(cls, x, prec: int = DEFAULT_PREC) -> "BoundValue":
        return cls(_lo(x), _hi(x), prec)

    @classmethod
    def exact(cls, x, prec: int = DEFAULT_PREC) -> "BoundValue":
        """Tightest enclosure of an int, Fraction or decimal string."""
        with ivprec(prec):
            return cls.from_iv(_to_iv(x), prec)

    @classmethod
    def around(cls, center, radius, prec: int = DEFAULT_PREC) -> "BoundValue":
        with ivprec(prec):
            c = _to_iv(center)
            r = abs(_to_iv(radius))
            return cls(_lo(c - r), _hi(c + r), prec)

    @classmethod
    def infinite(cls, prec: int = DEFAULT_PREC) -> "BoundValue":
        inf = mpmath.mpf("inf")
        return cls(inf, inf, prec)

    @classmethod
    def hull(cls, values: Iterable["BoundValue"]) -> "BoundValue":
        values = list(values)
        return cls(min(v.lower for v in values), max(v.upper for v in values),
                   max(v.prec for v in values))

    # views ----------------------------------------------------------------

    @property
    def iv(self):
        with ivprec(self.prec):
            return iv.mpf([self.lower, self.upper])

    @property
    def mid(self) -> mpmath.mpf:
        if self.is_infinite:
            return self.upper
        with mp.workprec(self.prec + 4):
            return (self.lower + self.upper) / 2

    @property
    def width(self) -> mpmath.mpf:
        with mp.workprec(self.prec + 4):
            return self.upper - self.lower

    @property
    def is_infinite(self) -> bool:
        return mpmath.isinf(self.upper)

    def __float__(self) -> float:
        return float(self.mid)

    def contains(self, x) -> bool:
        """True iff the exact value ``x`` (or every point of enclosure ``x``) lies inside."""
        if isinstance(x, BoundValue):
            return self.lower <= x.lower and x.upper <= self.upper
        if isinstance(x, Rational) and not isinstance(x, int):
            # compare exactly: lower <= p/q  <=>  lower*q <= p
            q, p = int(x.denominator), int(x.numerator)
            with mp.workprec(self.prec + q.bit_length() + 8):
                return self.lower * q <= p and p <= self.upper * q
        return self.lower <= x <= self.upper

    def certainly_le(self, other) -> bool:
        o = other if isinstance(other, BoundValue) else BoundValue.exact(other, self.prec)
        return self.upper <= o.lower

    def certainly_lt(self, other) -> bool:
        o = other if isinstance(other, BoundValue) else BoundValue.exact(other, self.prec)
        return self.upper < o.lower

    def certainly_gt(self, other) -> bool:
        o = other if isinstance(other, BoundValue) else BoundValue.exact(other, self.prec)
        return self.lower > o.upper

    def certainly_ge(self, other) -> bool:
        o = other if isinstance(other, BoundValue) else BoundValue.exact(other, self.prec)
        return self.lower >= o.upper

    def overlaps(self, other: "BoundValue") -> bool:
        return not (self.upper < other.lower or other.upper < self.lower)

    # arithmetic -----------------------------------------------------------

    def _binop(self, other, op) -> "BoundValue":
        prec = max(self.prec, other.prec) if isinstance(other, BoundValue) else self.prec
        with ivprec(prec):
            return BoundValue.from_iv(op(_to_iv(self), _to_iv(other)), prec)

    def __add__(self, other):
        return self._binop(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binop(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binop(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binop(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binop(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binop(other, lambda a, b: b / a)

    def __neg__(self):
        return BoundValue(-self.upper, -self.lower, self.prec)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported; use exp/log")
        with ivprec(self.prec):
            return BoundValue.from_iv(_to_iv(self) ** k, self.prec)

    def sqrt(self) -> "BoundValue":
        if self.upper < 0:
            raise ValueError("sqrt of a negative enclosure")
        lo = max(self.lower, mpmath.mpf(0))
        with ivprec(self.prec):
            return BoundValue.from_iv(iv.sqrt(iv.mpf([lo, self.upper])), self.prec)

    def log2(self) -> "BoundValue":
        with ivprec(self.prec):
            return BoundValue.from_iv(iv.log(self.iv) / iv.log(2), self.prec)

    def __repr__(self) -> str:
        if self.is_infinite:
            return "BoundValue(+inf)"
        return f"BoundValue([{mpmath.nstr(self.lower, 20)}, {mpmath.nstr(self.upper, 20)}])"


def _apply(fn, *args, prec: int = DEFAULT_PREC) -> BoundValue:
    with ivprec(prec):
        return BoundValue.from_iv(fn(*[_to_iv(a) for a in args]), prec)


def pi_bound(prec: int = DEFAULT_PREC) -> BoundValue:
    with ivprec(prec):
        return BoundValue.from_iv(iv.pi, prec)


def e_bound(prec: int = DEFAULT_PREC) -> BoundValue:
    with ivprec(prec):
        return BoundValue.from_iv(iv.e, prec)


def newton_threshold(prec: int = DEFAULT_PREC) -> BoundValue:
    """Enclosure of (3 - sqrt 7)/2, the gamma-theorem radius constant."""
    return _apply(lambda s: (3 - iv.sqrt(s)) / 2, 7, prec=prec)


# ---------------------------------------------------------------------------
# Number theory
# ---------------------------------------------------------------------------


def factorize(m: int) -> dict[int, int]:
    """Prime factorisation by trial division (desk-scale arguments only)."""
    if m < 1:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def mobius(m: int) -> int:
    if m < 1:
        raise ValueError("mobius is defined for m >= 1")
    f = factorize(m)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@lru_cache(maxsize=32)
def mobius_table(limit: int) -> tuple[int, ...]:
    """``mu(0..limit)`` by a linear sieve; entry 0 is 0."""
    mu = [1] * (limit + 1)
    if limit >= 0:
        mu[0] = 0
    is_comp = bytearray(limit + 1)
    primes: list[int] = []
    for i in range(2, limit + 1):
        if not is_comp[i]:
            primes.append(i)
            mu[i] = -1
        for p in primes:
            ip = i * p
            if ip > limit:
                break
            is_comp[ip] = 1
            if i % p == 0:
                mu[ip] = 0
                break
            mu[ip] = -mu[i]
    return tuple(mu)


@lru_cache(maxsize=32)
def gauss_norm_counts(limit: int) -> tuple[int, ...]:
    """``r2(m)/4`` for m = 0..limit: Gaussian integers of norm m up to units.

    Entry 0 is 0 (the zero element is excluded).
    """
    r2 = [0] * (limit + 1)
    a = 0
    while a * a <= limit:
        b = 0
        while a * a + b * b <= limit:
            r2[a * a + b * b] += (1 if a == 0 else 2) * (1 if b == 0 else 2)
            b += 1
        a += 1
    r2[0] = 0
    return tuple(v // 4 for v in r2)


def dirichlet_inverse(a: Sequence[int]) -> list[int]:
    """Dirichlet inverse of an arithmetic function with ``a[1] == 1`` (index 0 unused)."""
    n = len(a) - 1
    if n >= 1 and a[1] != 1:
        raise ValueError("a(1) must be 1")
    b = [0] * (n + 1)
    if n >= 1:
        b[1] = 1
    for m in range(2, n + 1):
        s = 0
        d = 1
        while d * d <= m:
            if m % d == 0:
                e = m // d
                if d < m:
                    s += a[e] * b[d]
                if e != d and e < m:
                    s += a[d] * b[e]
            d += 1
        b[m] = -s
    return b


# ---------------------------------------------------------------------------
# zeta
# ---------------------------------------------------------------------------


def _rising(s: int, k: int) -> int:
    out = 1
    for j in range(k):
        out *= s + j
    return out


@lru_cache(maxsize=128)
def zeta(s: int, precision: int = DEFAULT_PREC) -> BoundValue:
    """Enclosure of zeta(s) for integer s >= 2.

    Partial sum up to M - 1, then the tail sum_{m >= M} m^-s is enclosed twice:
    by the integral bracket [int_M^inf, M^-s + int_M^inf] and by an
    Euler-Maclaurin expansion whose remainder is bounded by twice the first
    omitted term. The intersection is returned.
    """
    if not isinstance(s, int) or s < 2:
        raise ValueError("zeta is only provided for integers s >= 2")
    wp = precision + 24
    M = max(16, precision // 2)
    target = mpmath.mpf(2) ** (-(precision + 8))
    with ivprec(wp):
        S = iv.mpf(0)
        for m in range(1, M):
            S += iv.mpf(1) / iv.mpf(m) ** s
        Mi = iv.mpf(M)
        integral = Mi ** (1 - s) / (s - 1)
        head = iv.mpf(1) / Mi ** s
        crude = iv.mpf([_lo(integral), _hi(integral + head)])

        em = integral + head / 2
        j = 1
        while True:
            p, q = mp.bernfrac(2 * j)
            term = (iv.mpf(int(p)) / iv.mpf(int(q))) / math.factorial(2 * j) \
                * _rising(s, 2 * j - 1) / Mi ** (s + 2 * j - 1)
            if _hi(abs(term)) < target or j > 400:
                r = 2 * abs(term)
                em = em + iv.mpf([-_hi(r), _hi(r)])
                break
            em = em + term
            j += 1
        lo = max(_lo(crude), _lo(em))
        hi = min(_hi(crude), _hi(em))
        tail = iv.mpf([lo, hi])
        return BoundValue.from_iv(S + tail, precision)


# ---------------------------------------------------------------------------
# ball volumes and the sum-of-projections constant
# ---------------------------------------------------------------------------


def gamma_half_integer(ell: int) -> tuple[Fraction, int]:
    """Gamma(ell/2) = c * sqrt(pi)**k with exact rational c and k in {0, 1}."""
    if ell < 1:
        raise ValueError("ell must be positive")
    if ell % 2 == 0:
        return Fraction(math.factorial(ell // 2 - 1)), 0
    k = (ell - 1) // 2  # Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    return Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), 1


def ball_volume_coefficient(ell: int) -> tuple[Fraction, int]:
    """K_ell = c * pi**k exactly; returns (c, k)."""
    if ell < 0:
        raise ValueError("ell must be non-negative")
    if ell == 0:
        return Fraction(1), 0
    g, half = gamma_half_integer(ell)
    # 2 pi^(ell/2) / (ell * Gamma(ell/2)); pi^(ell/2) / sqrt(pi)^half is an integer power of pi
    return Fraction(2) / (ell * g), (ell - half) // 2


@lru_cache(maxsize=512)
def ball_volume_K(ell: int, prec: int = DEFAULT_PREC) -> BoundValue:
    """Volume K_ell of the unit ball of R^ell, with K_0 = 1."""
    c, k = ball_volume_coefficient(ell)
    with ivprec(prec):
        return BoundValue.from_iv(_to_iv(c) * iv.pi ** k, prec)


def sphere_area(m: int, prec: int = DEFAULT_PREC) -> BoundValue:
    """Vol_S(S^m) = (m + 1) K_{m+1}."""
    return ball_volume_K(m + 1, prec) * (m + 1)


@lru_cache(maxsize=512)
def sigma_constant(m: int, prec: int = DEFAULT_PREC) -> BoundValue:
    """sum_{l < m} C(m, l) K_l."""
    if m < 1:
        raise ValueError("m must be positive")
    total = BoundValue.exact(0, prec)
    for ell in range(m):
        total = total + ball_volume_K(ell, prec) * math.comb(m, ell)
    return total


def artin_estimate_check(m_max: int, prec: int = DEFAULT_PREC) -> bool:
    """Certify sigma_constant(m) <= (1 + sqrt(2 e pi))^m / sqrt(pi) for 1 <= m <= m_max."""
    if m_max < 1:
        raise ValueError("m_max must be positive")
    with ivprec(prec):
        base = 1 + iv.sqrt(2 * iv.e * iv.pi)
        spi = iv.sqrt(iv.pi)
        for m in range(1, m_max + 1):
            rhs = BoundValue.from_iv(base ** m / spi, prec)
            if not sigma_constant(m, prec).certainly_le(rhs):
                return False
    return True


def artin_ratio_report(m_max: int, prec: int = DEFAULT_PREC) -> list[dict]:
    """Evaluate sigma(m)/K_m against two groupings of exp(2/3) m^(m/2) exp(m/12).

    Reading ``a`` is exp(2/3) * m^(m/2) * exp(m/12); reading ``b`` is
    (exp(2/3) m)^(m/2) * exp(m/12). Rows are reported, never asserted.
    """
    rows = []
    with ivprec(prec):
        for m in range(1, m_max + 1):
            ratio = sigma_constant(m, prec) / ball_volume_K(m, prec)
            a = BoundValue.from_iv(iv.exp(iv.mpf(2) / 3) * iv.mpf(m) ** (iv.mpf(m) / 2)
                                   * iv.exp(iv.mpf(m) / 12), prec)
            b = BoundValue.from_iv((iv.exp(iv.mpf(2) / 3) * m) ** (iv.mpf(m) / 2)
                                   * iv.exp(iv.mpf(m) / 12), prec)
            rows.append({"m": m, "ratio": ratio, "reading_a": a, "reading_b": b,
                         "holds_a": ratio.certainly_le(a), "holds_b": ratio.certainly_le(b)})
    return rows


# ---------------------------------------------------------------------------
# constants of the distribution bounds
# ---------------------------------------------------------------------------


def as_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, decimal string or float (via its repr)."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(repr(x))
    return Fraction(str(x))


def milnor_thom_linear(n: int) -> int:
    """(2 max{4, n})^(2 n^4 + 4 n^2), exact."""
    return (2 * max(4, n)) ** (2 * n ** 4 + 4 * n ** 2)


@dataclass(frozen=True)
class LinearConstants:
    n: int
    epsilon: Fraction
    T: int
    sigma: BoundValue          # sigma_constant(n^2)
    K: BoundValue              # K_{n^2}
    zeta_dim: BoundValue       # zeta(n^2)
    zeta_dim_minus_1: BoundValue
    B: BoundValue
    C: BoundValue
    L1: BoundValue             # L(1, n)
    L_prime: BoundValue        # L'(eps, n)
    lead: BoundValue           # eps n^(5/2)

    def tail_bound(self, H) -> BoundValue:
        """eps n^(5/2) + B / (H - C); infinite when H does not exceed C."""
        Hb = BoundValue.exact(as_fraction(H), self.B.prec)
        denom = Hb - self.C
        if denom.lower <= 0:
            return BoundValue.infinite(self.B.prec)
        return self.lead + self.B / denom


def linear_bound_constants(n: int, epsilon, prec: int = DEFAULT_PREC) -> LinearConstants:
    if n < 2:
        raise ValueError("n must be at least 2")
    eps = as_fraction(epsilon)
    if eps < 0:
        raise ValueError("epsilon must be non-negative")
    dim = n * n
    T = milnor_thom_linear(n)
    S = sigma_constant(dim, prec)
    K = ball_volume_K(dim, prec)
    z = zeta(dim, prec)
    z1 = zeta(dim - 1, prec)
    with ivprec(prec):
        n52 = BoundValue.from_iv(iv.mpf(n) ** 2 * iv.sqrt(n), prec)
    lead = n52 * eps
    B = z * ((lead + T) * S / (K * z1) + lead * 2 + 2 / K)
    C = z * (S / (K * z1) + 1 + 1 / K)
    L1 = S / (z1 * 2) + K / 2
    Lp = S * T / (z1 * 2) + lead * K / 2
    return LinearConstants(n, eps, T, S, K, z, z1, B, C, L1, Lp, lead)


def milnor_thom_nonlinear(N: int, n: int, D: int) -> int:
    """max{8, 4(D + 1)}^(4[N^2 + 3(n + 2)^2 (N + 1)]), exact."""
    return max(8, 4 * (D + 1)) ** (4 * (N * N + 3 * (n + 2) ** 2 * (N + 1)))


def multinomial(exps: Sequence[int]) -> int:
    out = math.factorial(sum(exps))
    for e in exps:
        out //= math.factorial(e)
    return out


def _compositions(total: int, parts: int):
    """Exponent vectors of length ``parts`` summing to ``total``, lex descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def delta_det_squared(degrees: Sequence[int]) -> Fraction:
    """det(Delta_(d))^2 = prod over all monomials of 1/multinomial, exact."""
    n = len(degrees)
    out = Fraction(1)
    for d in degrees:
        for mu in _compositions(d, n + 1):
            out /= multinomial(mu)
    return out


@dataclass(frozen=True)
class NonlinearConstants:
    degrees: tuple[int, ...]
    epsilon: Fraction
    n: int
    N: int
    bezout: int
    D: int
    frak_C: int
    det_delta_sq: Fraction
    det_delta: BoundValue
    T_bar: int
    sigma: BoundValue          # sigma_constant(2N + 2)
    K: BoundValue              # K_{2N+2}
    zeta_top: BoundValue       # zeta(2N + 2)
    zeta_sub: BoundValue       # zeta(2N + 1)
    frak_D: BoundValue
    G: BoundValue
    F: BoundValue
    L1_bar: BoundValue
    L_prime_bar: BoundValue
    lead: BoundValue           # eps^4 C[(d)]

    def tail_bound(self, H) -> BoundValue:
        Hb = BoundValue.exact(as_fraction(H), self.F.prec)
        denom = Hb / self.zeta_top - self.G
        if denom.lower <= 0:
            return BoundValue.infinite(self.F.prec)
        return self.lead + self.F / denom


def nonlinear_bound_constants(degrees: Sequence[int], epsilon,
                              prec: int = DEFAULT_PREC) -> NonlinearConstants:
    degrees = tuple(int(d) for d in degrees)
    if not degrees or any(d < 1 for d in degrees):
        raise ValueError("degrees must be a non-empty list of positive integers")
    eps = as_fraction(epsilon)
    n = len(degrees)
    N = sum(math.comb(d + n, n) for d in degrees) - 1
    bezout = math.prod(degrees)
    D = max(degrees)
    frak_C = n ** 3 * (n + 1) * N * (N - 1) * bezout
    dd2 = delta_det_squared(degrees)
    det = BoundValue.exact(dd2, prec).sqrt()
    T_bar = milnor_thom_nonlinear(N, n, D)
    S = sigma_constant(2 * N + 2, prec)
    K = ball_volume_K(2 * N + 2, prec)
    zt = zeta(2 * N + 2, prec)
    zs = zeta(2 * N + 1, prec)
    lead = BoundValue.exact(eps ** 4 * frak_C, prec)
    frak_D = K / det * frak_C
    base = S / (det * zs * K)
    G = base + 1 / K + 2
    F = base * (lead + T_bar) + (lead + 1) / K + lead * 4
    L1 = S / (BoundValue.exact(4 * dd2, prec) * zs) + K / (det * 2)
    Lp = S * T_bar / (BoundValue.exact(4 * dd2, prec) * zs) + frak_D * eps ** 4 / 2
    return NonlinearConstants(degrees, eps, n, N, bezout, D, frak_C, dd2, det, T_bar, S, K,
                              zt, zs, frak_D, G, F, L1, Lp, lead)
