"""Condition numbers k, mu and the distance to singular matrices for rational matrices.

Singular values are certified through exact positive-definiteness tests of
``M^T M - x I`` at rational x (leading principal minors), so every comparison
of the form ``sigma_min <= eps ||M||_F`` is decided in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .exact import DEFAULT_PREC, BoundValue, as_fraction


def parse_matrix(text: str) -> "SquareMatrix":
    """``1,2;3,4`` -> SquareMatrix; entries may be ``p/q``."""
    rows = [r for r in text.strip().split(";") if r.strip()]
    return SquareMatrix.of([[Fraction(x.strip()) for x in r.split(",")] for r in rows])


@dataclass(frozen=True)
class SquareMatrix:
    entries: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in r) for r in self.entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def of(cls, rows) -> "SquareMatrix":
        if isinstance(rows, SquareMatrix):
            return rows
        if isinstance(rows, str):
            return parse_matrix(rows)
        return cls(tuple(tuple(as_fraction(x) if not isinstance(x, (int, Fraction)) else Fraction(x)
                               for x in r) for r in np.asarray(rows, dtype=object).tolist()))

    @property
    def n(self) -> int:
        return len(self.entries)

    def scale(self, lam) -> "SquareMatrix":
        lam = Fraction(lam)
        return SquareMatrix(tuple(tuple(x * lam for x in r) for r in self.entries))

    def gram(self) -> list[list[Fraction]]:
        """M^T M, exact."""
        n = self.n
        E = self.entries
        return [[sum(E[k][i] * E[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in r] for r in self.entries])

    def __str__(self):
        return ";".join(",".join(str(x) for x in r) for r in self.entries)


@dataclass(frozen=True)
class ConditionRecord:
    sigma_min: BoundValue
    sigma_max: BoundValue
    frobenius: BoundValue
    k: BoundValue
    mu: BoundValue


# ---------------------------------------------------------------------------
# exact linear algebra helpers
# ---------------------------------------------------------------------------


def det_exact(A: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-free Bareiss elimination (exact)."""
    M = [[Fraction(x) for x in r] for r in A]
    n = len(M)
    sign, prev = 1, Fraction(1)
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) / prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1] if n else Fraction(1)


def is_positive_definite(A: Sequence[Sequence]) -> bool:
    """Sylvester's criterion on a symmetric rational matrix."""
    n = len(A)
    return all(det_exact([r[:k] for r in A[:k]]) > 0 for k in range(1, n + 1))


def _shift(G, x) -> list[list[Fraction]]:
    return [[G[i][j] - (x if i == j else 0) for j in range(len(G))] for i in range(len(G))]


def frobenius_sq(M) -> Fraction:
    M = SquareMatrix.of(M)
    return sum((x * x for r in M.entries for x in r), Fraction(0))


def frobenius_norm(M, prec: int = DEFAULT_PREC) -> BoundValue:
    return BoundValue.exact(frobenius_sq(M), prec).sqrt()


def _bisect_eig(G, lo: Fraction, hi: Fraction, below, steps: int) -> tuple[Fraction, Fraction]:
    """Shrink [lo, hi] keeping ``below(lo)`` true and ``below(hi)`` false."""
    for _ in range(steps):
        mid = (lo + hi) / 2
        if below(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _limit_denominator_down(x: float) -> Fraction:
    return Fraction(x).limit_denominator(1 << 40)


def eig_extremes_exact(M, bits: int = 100) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """Rational brackets of lambda_min and lambda_max of M^T M, width <= 2^-bits * scale.

    The float estimate seeds the brackets, which are then verified and shrunk
    using exact PD tests only.
    """
    M = SquareMatrix.of(M)
    G = M.gram()
    F2 = frobenius_sq(M)
    if F2 == 0:
        z = (Fraction(0), Fraction(0))
        return z, z
    n = M.n
    ev = np.linalg.eigvalsh(np.array([[float(x) for x in r] for r in G]))
    scale = F2
    tol = scale * Fraction(1, 1 << bits)

    # lambda_min: below(x) := "M^T M - x I is PD" (x < lambda_min)
    def below_min(x):
        return is_positive_definite(_shift(G, x))

    if det_exact(G) == 0:
        lmin = (Fraction(0), Fraction(0))
    else:
        guess = max(_limit_denominator_down(float(ev[0])), Fraction(0))
        pad = max(abs(guess), scale) * Fraction(1, 1 << 30)
        lo, hi = max(guess - pad, Fraction(0)), guess + pad
        while not below_min(lo):
            lo = lo / 2 if lo > 0 else Fraction(0)
            if lo == 0:
                break
        while below_min(hi):
            hi = hi * 2 + 1
        steps = max(0, math.ceil(math.log2(max(float(hi - lo), 1e-300) / float(tol)))) if hi > lo else 0
        lmin = _bisect_eig(G, lo, hi, below_min, min(steps, 4 * bits))

    # lambda_max: above(x) := "x I - M^T M is PD" (x > lambda_max)
    def below_max(x):
        return not is_positive_definite([[(x if i == j else 0) - G[i][j] for j in range(n)] for i in range(n)])

    guess = _limit_denominator_down(float(ev[-1]))
    pad = max(abs(guess), scale) * Fraction(1, 1 << 30)
    lo, hi = max(guess - pad, Fraction(0)), guess + pad
    while not below_max(lo):
        lo = lo / 2
    while below_max(hi):
        hi = hi * 2 + 1
    steps = max(0, math.ceil(math.log2(max(float(hi - lo), 1e-300) / float(tol))))
    lmax = _bisect_eig(G, lo, hi, below_max, min(steps, 4 * bits))
    return lmin, lmax


def singular_extremes(M, prec: int = DEFAULT_PREC) -> tuple[BoundValue, BoundValue]:
    """Enclosures of (sigma_min, sigma_max); a singular M gives sigma_min = [0, 0]."""
    (a, b), (c, d) = eig_extremes_exact(M, bits=prec)
    smin = BoundValue(BoundValue.exact(a, prec + 8).lower, BoundValue.exact(b, prec + 8).upper, prec + 8).sqrt()
    smax = BoundValue(BoundValue.exact(c, prec + 8).lower, BoundValue.exact(d, prec + 8).upper, prec + 8).sqrt()
    return BoundValue(smin.lower, smin.upper, prec), BoundValue(smax.lower, smax.upper, prec)


def condition_record(M, prec: int = DEFAULT_PREC) -> ConditionRecord:
    smin, smax = singular_extremes(M, prec)
    fro = frobenius_norm(M, prec)
    if smin.upper == 0:
        inf = BoundValue.infinite(prec)
        return ConditionRecord(smin, smax, fro, inf, inf)
    return ConditionRecord(smin, smax, fro, smax / smin, fro / smin)


def condition_k(M, prec: int = DEFAULT_PREC) -> BoundValue:
    """k(M) = ||M|| ||M^-1||; infinite for singular M."""
    return condition_record(M, prec).k


def condition_mu(M, prec: int = DEFAULT_PREC) -> BoundValue:
    """mu(M) = ||M||_F ||M^-1||; infinite for singular M."""
    return condition_record(M, prec).mu


def fs_distance_to_singular(M, prec: int = DEFAULT_PREC) -> BoundValue:
    """rho = sigma_min / ||M||_F, the projective distance to the singular matrices."""
    M = SquareMatrix.of(M)
    if frobenius_sq(M) == 0:
        raise ValueError("the zero matrix is not a projective point")
    smin, _ = singular_extremes(M, prec)
    return smin / frobenius_norm(M, prec)


# ---------------------------------------------------------------------------
# tube membership
# ---------------------------------------------------------------------------


def in_tube(M, eps) -> bool:
    """Exact test of sigma_min(M) <= eps ||M||_F (Sylvester form).

    Equivalent to q^2 M^T M - p^2 ||M||_F^2 I not being positive definite,
    with eps = p/q. The zero matrix counts as inside.
    """
    M = SquareMatrix.of(M)
    eps = as_fraction(eps)
    G = M.gram()
    return not is_positive_definite(_shift(G, eps * eps * frobenius_sq(M)))


def charpoly(A: Sequence[Sequence]) -> list[Fraction]:
    """Characteristic polynomial det(x I - A) by Faddeev-LeVerrier, leading coefficient first."""
    n = len(A)
    A = [[Fraction(x) for x in r] for r in A]
    coeffs = [Fraction(1)]
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k)/k
        prod = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        Mk = [[prod[i][j] + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        AM = [[sum(A[i][t] * Mk[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(AM[i][i] for i in range(n)) / k)
    return coeffs


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and a:
        if a[0] == 0:
            a.pop(0)
            continue
        c = a[0] / b[0]
        for i in range(len(b)):
            a[i] -= c * b[i]
        a.pop(0)
    while a and a[0] == 0:
        a.pop(0)
    return a


def _polyval(p: list, x: Fraction) -> Fraction:
    out = Fraction(0)
    for c in p:
        out = out * x + c
    return out


def sturm_count(p: list, a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots of p in (a, b] (coefficients leading first)."""
    seq = [p, [c * (len(p) - 1 - i) for i, c in enumerate(p[:-1])]]
    while True:
        r = _poly_rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-c for c in r])

    def changes(x):
        vals = [v for v in (_polyval(q, x) for q in seq) if v != 0]
        return sum(1 for u, v in zip(vals, vals[1:]) if (u < 0) != (v < 0))

    return changes(a) - changes(b)


def in_tube_sturm(M, eps) -> bool:
    """Oracle for :func:`in_tube`: does det(M^T M - x I) vanish on [0, eps^2 ||M||_F^2]?"""
    M = SquareMatrix.of(M)
    eps = as_fraction(eps)
    t = eps * eps * frobenius_sq(M)
    p = charpoly(M.gram())
    if _polyval(p, Fraction(0)) == 0:
        return True
    return sturm_count(p, Fraction(0), t) > 0


def _int64_safe(bound: int) -> bool:
    return bound < (1 << 62)


def tube_mask(mats: np.ndarray, eps) -> np.ndarray:
    """Vectorised exact :func:`in_tube` over integer matrices of shape (K, n, n), n in {2, 3}."""
    eps = as_fraction(eps)
    p, q = eps.numerator, eps.denominator
    K, n, _ = mats.shape
    maxabs = int(np.abs(mats).max()) if K else 0
    f2max = n * n * maxabs * maxabs
    X = (q * q + p * p) * f2max
    safe = _int64_safe(math.factorial(n) * max(X, 1) ** n * 4)
    A = mats.astype(np.int64 if safe else object)
    G = np.einsum("kti,ktj->kij", A, A) if safe else _gram_object(A)
    F2 = np.einsum("kij,kij->k", A, A) if safe else (A * A).sum(axis=(1, 2))
    B = G * (q * q)
    for i in range(n):
        B[:, i, i] = B[:, i, i] - (p * p) * F2
    m1 = B[:, 0, 0]
    m2 = B[:, 0, 0] * B[:, 1, 1] - B[:, 0, 1] * B[:, 1, 0]
    pd = (m1 > 0) & (m2 > 0)
    if n == 3:
        m3 = (B[:, 0, 0] * (B[:, 1, 1] * B[:, 2, 2] - B[:, 1, 2] * B[:, 2, 1])
              - B[:, 0, 1] * (B[:, 1, 0] * B[:, 2, 2] - B[:, 1, 2] * B[:, 2, 0])
              + B[:, 0, 2] * (B[:, 1, 0] * B[:, 2, 1] - B[:, 1, 1] * B[:, 2, 0]))
        pd = pd & (m3 > 0)
    elif n != 2:
        raise ValueError("vectorised tube test supports n in {2, 3}")
    return ~np.asarray(pd, dtype=bool)


def _gram_object(A: np.ndarray) -> np.ndarray:
    K, n, _ = A.shape
    G = np.empty((K, n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            G[:, i, j] = (A[:, :, i] * A[:, :, j]).sum(axis=1)
    return G


def nearest_singular(M) -> np.ndarray:
    """Eckart-Young minimiser: M with its smallest singular value zeroed (float)."""
    A = SquareMatrix.of(M).to_float() if not isinstance(M, np.ndarray) else M
    U, s, Vt = np.linalg.svd(A)
    s[-1] = 0.0
    return (U * s) @ Vt
