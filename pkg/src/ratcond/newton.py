"""Affine Newton operator, Smale's gamma, certified approximate zeros and their precision.

Affine systems ``f_i in C[X_1..X_n]`` with ``deg f_i <= d_i`` are held as sparse
``{exponent tuple: coefficient}`` dicts. With Gauss-rational coefficients and a
Gauss-rational point every Newton step is exact; otherwise the step runs in
mpmath at the requested working precision.

gamma(F, zeta) = max_{2<=k<=D} ||DF(zeta)^{-1} D^kF(zeta)/k!||^{1/(k-1)}. The
multilinear operator norm is bounded above by the Frobenius norm of the
symmetric tensor, which is exact for a single variable.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np
from mpmath import iv, mp

from .exact import (DEFAULT_PREC, BoundValue, _apply, ball_volume_K, ivprec,
                    newton_threshold)
from .gauss import GaussInteger, GaussRational, common_denominator
from .polysys import PolySystem, _is_exact_scalar, monomials, mu_norm_at, to_mpc

# ---------------------------------------------------------------------------
# affine systems
# ---------------------------------------------------------------------------


def _as_point(z) -> tuple:
    if isinstance(z, (list, tuple)):
        return tuple(z)
    if isinstance(z, np.ndarray):
        return tuple(z.tolist())
    return (z,)


def _point_is_exact(z: Sequence) -> bool:
    return all(_is_exact_scalar(c) for c in z)


@dataclass(frozen=True)
class AffineSystem:
    """n equations in n unknowns; ``polys[i]`` maps exponent tuples to coefficients."""

    degrees: tuple[int, ...]
    polys: tuple[dict, ...]
    exact: bool = field(default=False, compare=False)

    def __post_init__(self):
        degrees = tuple(int(d) for d in self.degrees)
        if not degrees or any(d < 1 for d in degrees):
            raise ValueError("degrees must be positive")
        n = len(degrees)
        if len(self.polys) != n:
            raise ValueError(f"expected {n} equations, got {len(self.polys)}")
        exact = True
        polys = []
        for i, p in enumerate(self.polys):
            q = {}
            for mu, c in p.items():
                mu = tuple(int(e) for e in mu)
                if len(mu) != n or min(mu) < 0:
                    raise ValueError(f"bad exponent {mu} for {n} variables")
                if sum(mu) > degrees[i]:
                    raise ValueError(f"equation {i}: monomial {mu} exceeds degree {degrees[i]}")
                if _is_exact_scalar(c):
                    c = GaussRational.of(c)
                    if c.is_zero():
                        continue
                else:
                    exact = False
                    c = to_mpc(c)
                q[mu] = q.get(mu, 0) + c
            polys.append(q)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "polys", tuple(polys))
        object.__setattr__(self, "exact", exact)

    @classmethod
    def univariate(cls, coeffs: Sequence, degree: int | None = None) -> "AffineSystem":
        """f(x) = sum_k coeffs[k] x^k (ascending powers)."""
        d = len(coeffs) - 1 if degree is None else degree
        return cls((d,), ({(k,): c for k, c in enumerate(coeffs)},))

    @classmethod
    def dehomogenize(cls, F: PolySystem) -> "AffineSystem":
        """Set X_0 = 1."""
        polys = []
        for i in range(F.n):
            polys.append({mu[1:]: c for mu, c in F.terms(i).items()})
        return cls(F.degrees, tuple(polys))

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def D(self) -> int:
        return max(self.degrees)

    def homogenize(self) -> PolySystem:
        rows = []
        for i, d in enumerate(self.degrees):
            p = self.polys[i]
            rows.append(tuple(p.get(mu[1:], 0) for mu in monomials(d, self.n)))
        return PolySystem(self.degrees, tuple(rows))

    def scale(self, lam) -> "AffineSystem":
        return AffineSystem(self.degrees, tuple({mu: c * lam for mu, c in p.items()} for p in self.polys))

    def _scalars(self, z):
        """Point coordinates in the arithmetic this system evaluates in."""
        z = _as_point(z)
        if len(z) != self.n:
            raise ValueError(f"point has {len(z)} coordinates, system has {self.n} unknowns")
        if self.exact and _point_is_exact(z):
            return [GaussRational.of(c) for c in z], True
        return [to_mpc(c) for c in z], False

    def taylor(self, z, k: int) -> list[dict]:
        """Taylor coefficients of order k at z: {beta: d^beta f_i(z) / beta!} per equation."""
        x, exact = self._scalars(z)
        zero = GaussRational(0) if exact else mpmath.mpc(0)
        out = []
        for p in self.polys:
            row = {}
            for beta in _multi_indices(k, self.n):
                s = zero
                for mu, c in p.items():
                    if any(b > e for b, e in zip(beta, mu)):
                        continue
                    term = c if exact else to_mpc(c)
                    for xj, e, b in zip(x, mu, beta):
                        if b:
                            term = term * math.comb(e, b)
                        if e - b:
                            term = term * xj ** (e - b)
                    s = s + term
                row[beta] = s
            out.append(row)
        return out

    def evaluate(self, z) -> list:
        return [row[(0,) * self.n] for row in self.taylor(z, 0)]

    def jacobian(self, z) -> list[list]:
        t = self.taylor(z, 1)
        units = [tuple(1 if k == j else 0 for k in range(self.n)) for j in range(self.n)]
        return [[row[u] for u in units] for row in t]


def _multi_indices(k: int, n: int) -> list[tuple[int, ...]]:
    return [mu for mu in monomials(k, n - 1)] if n > 1 else [(k,)]


# ---------------------------------------------------------------------------
# linear algebra helpers
# ---------------------------------------------------------------------------


class SingularJacobian(ArithmeticError):
    pass


def _solve_exact(A: list[list[GaussRational]], b: list[GaussRational]) -> list[GaussRational]:
    n = len(A)
    M = [list(A[i]) + [b[i]] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if not M[r][c].is_zero()), None)
        if piv is None:
            raise SingularJacobian("Jacobian is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = GaussRational(1) / M[c][c]
        M[c] = [v * inv for v in M[c]]
        for r in range(n):
            if r != c and not M[r][c].is_zero():
                f = M[r][c]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[c])]
    return [M[i][n] for i in range(n)]


def _solve_numeric(A: list[list], b: list) -> list:
    Am = mpmath.matrix([[to_mpc(v) for v in row] for row in A])
    bm = mpmath.matrix([to_mpc(v) for v in b])
    try:
        x = mpmath.lu_solve(Am, bm)
    except ZeroDivisionError as exc:
        raise SingularJacobian("Jacobian is numerically singular") from exc
    if any(mpmath.isnan(v.real) or mpmath.isinf(v.real) for v in x):
        raise SingularJacobian("Jacobian is numerically singular")
    return [x[i] for i in range(len(b))]


def _norm_sq(v, exact: bool):
    if exact:
        return sum((c.norm() for c in v), Fraction(0))
    return sum(abs(c) ** 2 for c in v)


def _enclose(x, exact: bool, prec: int, rel_slack: int | None = None) -> BoundValue:
    """Enclosure of a non-negative real; exact Fractions are enclosed tightly.

    Numeric values are widened by a relative 2^(-rel_slack), which covers the
    rounding of a working precision of prec + 32 bits on short computations.
    """
    if exact:
        return BoundValue.exact(Fraction(x), prec)
    slack = rel_slack if rel_slack is not None else prec - 8
    x = mpmath.mpf(x)
    r = abs(x) * mpmath.mpf(2) ** (-slack) + mpmath.mpf(2) ** (-2 * prec)
    return BoundValue(max(x - r, mpmath.mpf(0)), x + r, prec)


# ---------------------------------------------------------------------------
# Newton step and gamma
# ---------------------------------------------------------------------------


def newton_step(F: AffineSystem, z, prec: int = DEFAULT_PREC) -> tuple:
    """N_F(z) = z - DF(z)^{-1} F(z); exact for Gauss-rational F and z."""
    with mp.workprec(prec + 32):
        x, exact = F._scalars(z)
        J = F.jacobian(x)
        r = F.evaluate(x)
        delta = _solve_exact(J, r) if exact else _solve_numeric(J, r)
        return tuple(a - b for a, b in zip(x, delta))


def _root(x: BoundValue, k: int) -> BoundValue:
    """x^(1/k) for a non-negative enclosure."""
    if k == 1:
        return x
    if x.upper == 0:
        return x
    lo = max(x.lower, mpmath.mpf(0))
    with ivprec(x.prec):
        hi = iv.exp(iv.log(iv.mpf(x.upper)) / k)
        low = iv.exp(iv.log(iv.mpf(lo)) / k) if lo > 0 else iv.mpf(0)
        return BoundValue(mp.make_mpf(low._mpi_[0]), mp.make_mpf(hi._mpi_[1]), x.prec)


def gamma_terms(F: AffineSystem, zeta, prec: int = DEFAULT_PREC) -> dict[int, BoundValue]:
    """Per-order enclosures of ||DF^{-1} D^kF/k!||_F^{1/(k-1)}, k = 2..D."""
    with mp.workprec(prec + 32):
        x, exact = F._scalars(zeta)
        J = F.jacobian(x)
        solve = _solve_exact if exact else _solve_numeric
        out = {}
        for k in range(2, F.D + 1):
            rows = F.taylor(x, k)
            total = Fraction(0) if exact else mpmath.mpf(0)
            for beta in _multi_indices(k, F.n):
                v = solve(J, [row[beta] for row in rows])
                # entries of the symmetric tensor repeat k!/beta! times with value c_beta beta!/k!
                w = Fraction(math.prod(math.factorial(b) for b in beta), math.factorial(k))
                total = total + _norm_sq(v, exact) * (w if exact else mpmath.mpf(w.numerator) / w.denominator)
            out[k] = _root(_enclose(total, exact, prec), 2 * (k - 1))
        return out


def gamma_quantity(F: AffineSystem, zeta, prec: int = DEFAULT_PREC) -> BoundValue:
    """Upper-bound enclosure of gamma(F, zeta); zero for affine-linear systems."""
    terms = gamma_terms(F, zeta, prec)
    if not terms:
        return BoundValue.exact(0, prec)
    return BoundValue(max(t.lower for t in terms.values()), max(t.upper for t in terms.values()), prec)


def _gamma_sq_exact(F: AffineSystem, zeta) -> Fraction | None:
    """gamma^2 as a Fraction when it is rational by construction (D = 2, exact data)."""
    if F.D != 2 or not (F.exact and _point_is_exact(_as_point(zeta))):
        return None
    x, _ = F._scalars(zeta)
    J = F.jacobian(x)
    rows = F.taylor(x, 2)
    total = Fraction(0)
    for beta in _multi_indices(2, F.n):
        v = _solve_exact(J, [row[beta] for row in rows])
        w = Fraction(math.prod(math.factorial(b) for b in beta), 2)
        total += _norm_sq(v, True) * w
    return total


def distance(z, zeta, prec: int = DEFAULT_PREC) -> BoundValue:
    """Enclosure of the Hermitian distance ||z - zeta||."""
    z, zeta = _as_point(z), _as_point(zeta)
    if _point_is_exact(z) and _point_is_exact(zeta):
        d2 = sum(((GaussRational.of(a) - GaussRational.of(b)).norm() for a, b in zip(z, zeta)), Fraction(0))
        return BoundValue.exact(d2, prec).sqrt()
    with mp.workprec(prec + 32):
        d2 = sum(abs(to_mpc(a) - to_mpc(b)) ** 2 for a, b in zip(z, zeta))
        return _enclose(d2, False, prec).sqrt()


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------


@dataclass
class IterateRecord:
    k: int
    point: tuple
    residual: float
    distance: BoundValue
    bound: BoundValue
    ok: bool


@dataclass
class CertResult:
    gamma_upper: BoundValue
    radius: BoundValue
    distance: BoundValue
    certified: bool
    iterates: list[IterateRecord] = field(default_factory=list)
    convergence_ok: bool | None = None
    diagnostic: str = ""

    def to_dict(self) -> dict:
        def bv(b):
            return None if b is None else {"lower": mpmath.nstr(b.lower, 17), "upper": mpmath.nstr(b.upper, 17)}
        return {
            "gamma_upper": bv(self.gamma_upper),
            "radius": bv(self.radius),
            "distance": bv(self.distance),
            "certified": self.certified,
            "convergence_ok": self.convergence_ok,
            "diagnostic": self.diagnostic,
            "iterates": [
                {"k": it.k, "point": [_fmt_scalar(c) for c in it.point], "residual": it.residual,
                 "distance_upper": mpmath.nstr(it.distance.upper, 17),
                 "bound_lower": mpmath.nstr(it.bound.lower, 17), "ok": it.ok}
                for it in self.iterates
            ],
        }


def _fmt_scalar(c) -> str:
    if isinstance(c, GaussRational):
        return str(c)
    return mpmath.nstr(to_mpc(c), 20)


def certification_radius(gamma: BoundValue, prec: int = DEFAULT_PREC) -> BoundValue:
    """(3 - sqrt 7) / (2 gamma); infinite when gamma = 0."""
    if gamma.upper == 0:
        return BoundValue.infinite(prec)
    thr = newton_threshold(prec)
    if gamma.lower <= 0:
        return BoundValue(thr.lower / gamma.upper, mpmath.mpf("inf"), prec)
    return thr / gamma


def certify_approx_zero(F: AffineSystem, zeta, z, iterations: int = 5,
                        prec: int = DEFAULT_PREC, gamma: BoundValue | None = None) -> CertResult:
    """Check ||zeta - z|| gamma(F, zeta) <= (3 - sqrt 7)/2 and, if so, trace Newton iterates.

    The k-th iterate is checked against (1/2)^(2^k - 1) ||z - zeta||, comparing
    the upper enclosure of the left side with the lower enclosure of the right.
    A failed threshold comparison says nothing about whether z converges.
    """
    zeta, z = _as_point(zeta), _as_point(z)
    g = gamma if gamma is not None else gamma_quantity(F, zeta, prec)
    d0 = distance(z, zeta, prec)
    radius = certification_radius(g, prec)
    thr = newton_threshold(prec)
    certified = g.upper == 0 or (d0 * g).certainly_le(thr)
    res = CertResult(gamma_upper=g, radius=radius, distance=d0, certified=certified)
    if not certified:
        res.diagnostic = "distance times gamma exceeds (3 - sqrt 7)/2"
        return res
    cur = z
    ok = True
    for k in range(1, iterations + 1):
        try:
            cur = newton_step(F, cur, prec)
        except SingularJacobian as exc:
            res.diagnostic = f"iterate {k}: {exc}"
            ok = False
            break
        dk = distance(cur, zeta, prec)
        bound = d0 * BoundValue.exact(Fraction(1, 2 ** (2 ** k - 1)), prec)
        good = dk.upper <= bound.lower or dk.upper == 0
        with mp.workprec(prec + 32):
            r = math.sqrt(float(sum(abs(to_mpc(v)) ** 2 for v in F.evaluate(cur))))
        res.iterates.append(IterateRecord(k, cur, r, dk, bound, good))
        ok = ok and good
    res.convergence_ok = ok
    return res


def gamma_vs_mu_bound_check(F: AffineSystem, zeta, prec: int = DEFAULT_PREC) -> bool:
    """gamma(F, zeta) <= D^{3/2} mu_norm(F, (1:zeta)) / 2, upper gamma against lower mu."""
    g = gamma_quantity(F, zeta, prec)
    if g.upper == 0:
        return True
    H = F.homogenize()
    zt = (GaussRational(1),) + _as_point(zeta) if _point_is_exact(_as_point(zeta)) else \
        (mpmath.mpc(1),) + tuple(to_mpc(c) for c in _as_point(zeta))
    mu = mu_norm_at(H, list(zt), prec)
    if mu.is_infinite:
        return True
    with ivprec(prec):
        D = F.D
        factor = BoundValue.from_iv(iv.mpf(D) * iv.sqrt(iv.mpf(D)) / 2, prec)
    return g.certainly_le(mu * factor)


# ---------------------------------------------------------------------------
# precision
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PrecisionValue:
    q: int
    pr: float

    @property
    def bits(self) -> int:
        """Integer bit count of q (ceil of pr for q > 1)."""
        return (self.q - 1).bit_length()


def precision_of(z) -> PrecisionValue:
    """Least common denominator q of a Gauss-rational point and Pr = max(0, log2 q)."""
    pts = [GaussRational.of(c) for c in _as_point(z)]
    q = common_denominator(pts)
    return PrecisionValue(q, max(0.0, math.log2(q)))


# ---------------------------------------------------------------------------
# approximate-zero census
# ---------------------------------------------------------------------------


@dataclass
class DenominatorRow:
    m: int
    radius: BoundValue
    lattice_count: int
    exact_count: int
    uncertain: int
    points: tuple = ()

    @property
    def N_m(self) -> int:
        """Points of denominator exactly m."""
        return self.exact_count


@dataclass
class ApproxZeroCensus:
    gamma: BoundValue
    zeta: tuple
    n: int
    rows: list[DenominatorRow]

    def row(self, m: int) -> DenominatorRow:
        return self.rows[m - 1]


def _radius_test_factory(gamma: BoundValue, gsq: Fraction | None, prec: int):
    """Return a predicate deciding d2 <= r_m^2 for exact d2 (Fraction) and m."""
    thr = newton_threshold(prec)

    def exact_le(d2: Fraction, m: int) -> bool | None:
        if gsq is not None:
            # r_m^2 = m^2 (4 - 3 sqrt(7)/2) / gamma^2 ; d2 <= r^2  <=>  3 sqrt7 / 2 <= 4 - x
            x = d2 * gsq / (m * m)
            rhs = 4 - x
            return rhs >= 0 and Fraction(63, 4) <= rhs * rhs
        lhs = BoundValue.exact(d2, prec)
        r2 = (thr * m / gamma) ** 2
        if lhs.certainly_le(r2):
            return True
        if lhs.certainly_gt(r2):
            return False
        return None

    return exact_le


def approx_zero_census(F: AffineSystem, zeta, m_max: int, prec: int = DEFAULT_PREC,
                       gamma: BoundValue | None = None, store_limit: int = 16,
                       cap: int = 10 ** 7) -> ApproxZeroCensus:
    """Count Z[i]^n points w with ||w - m zeta|| <= m (3 - sqrt 7)/(2 gamma) for m = 1..m_max.

    ``lattice_count`` counts every such w (denominator of w/m divides m);
    ``exact_count`` keeps those with gcd(m, all real and imaginary parts) = 1,
    i.e. w/m has denominator exactly m. Candidates are screened in floating
    point and every comparison within a relative 1e-9 of the boundary is
    redone exactly (or with enclosures when gamma is irrational).
    """
    zeta = _as_point(zeta)
    n = len(zeta)
    g = gamma if gamma is not None else gamma_quantity(F, zeta, prec)
    if g.upper == 0:
        raise ValueError("gamma = 0: every point is an approximate zero, the census is unbounded")
    gsq = _gamma_sq_exact(F, zeta) if gamma is None else None
    exact_zeta = _point_is_exact(zeta)
    decide = _radius_test_factory(g, gsq, prec)
    thr_f = float(newton_threshold(prec).mid)
    g_f = float(g.upper)
    zc = [complex(to_mpc(c)) for c in zeta]
    zq = [GaussRational.of(c) for c in zeta] if exact_zeta else None
    rows = []
    for m in range(1, m_max + 1):
        r = thr_f * m / g_f
        r2 = r * r
        centre = np.array([v for c in zc for v in (c.real * m, c.imag * m)])
        lo = np.floor(centre - r - 1).astype(np.int64)
        hi = np.ceil(centre + r + 1).astype(np.int64)
        size = int(np.prod(hi - lo + 1))
        if size > cap:
            raise MemoryError(f"m={m}: box of {size} candidates exceeds cap {cap}")
        axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2 * n)
        d2 = ((grid - centre) ** 2).sum(axis=1)
        tol = 1e-9 * max(1.0, r2)
        inside = d2 <= r2 - tol
        close = np.abs(d2 - r2) <= tol
        lattice = exact = unc = 0
        pts = []
        cand = np.nonzero(inside | close)[0]
        for idx in cand:
            w = [int(v) for v in grid[idx]]
            if close[idx]:
                if exact_zeta:
                    d2q = sum(((GaussRational(w[2 * j], w[2 * j + 1]) - zq[j] * m).norm() for j in range(n)),
                              Fraction(0))
                    verdict = decide(d2q, m)
                else:
                    with mp.workprec(prec + 32):
                        d2m = sum(abs(mpmath.mpc(w[2 * j], w[2 * j + 1]) - to_mpc(zeta[j]) * m) ** 2
                                  for j in range(n))
                    e = _enclose(d2m, False, prec)
                    r2b = (newton_threshold(prec) * m / g) ** 2
                    verdict = True if e.certainly_le(r2b) else (False if e.certainly_gt(r2b) else None)
                if verdict is None:
                    unc += 1
                    continue
                if not verdict:
                    continue
            lattice += 1
            if math.gcd(m, *w) == 1:
                exact += 1
            if len(pts) < store_limit:
                pts.append(tuple(GaussInteger(w[2 * j], w[2 * j + 1]) for j in range(n)))
        rad = certification_radius(g, prec) * m
        rows.append(DenominatorRow(m, rad, lattice, exact, unc, tuple(pts)))
    return ApproxZeroCensus(g, zeta, n, rows)


# ---------------------------------------------------------------------------
# structural checks on the census
# ---------------------------------------------------------------------------


@dataclass
class DenominatorStructureReport:
    H1: BoundValue
    H2: BoundValue
    item_i: bool
    item_i_range: tuple[int, int]
    item_ii: bool
    item_ii_range: tuple[int, int]
    item_iii: bool
    item_iii_failures: list[int]
    item_iii_literal: bool
    uncertain: int

    @property
    def passed(self) -> bool:
        return self.item_i and self.item_ii and self.item_iii and self.uncertain == 0


def sandwich_bounds(m: int, gamma: BoundValue, n: int, prec: int = DEFAULT_PREC,
                    literal: bool = False) -> tuple[BoundValue, BoundValue]:
    """Lower and upper volume estimates for the number of Z[i]^n points in the m-th disc.

    The disc lives in R^{2n}, so the volume factor is K_{2n} and the lower
    radius is clipped at zero. ``literal=True`` uses K_n without clipping.
    """
    thr = newton_threshold(prec)
    r = thr * m / gamma
    with ivprec(prec):
        s = BoundValue.from_iv(iv.sqrt(iv.mpf(2 * n)), prec)
    K = ball_volume_K(n if literal else 2 * n, prec)
    low_r = r - s
    if not literal:
        low_r = BoundValue(max(low_r.lower, mpmath.mpf(0)), max(low_r.upper, mpmath.mpf(0)), prec)
    lower = K * low_r ** (2 * n)
    upper = K * (r + s / 2) ** (2 * n)
    return lower, upper


def denominator_structure_check(census: ApproxZeroCensus, prec: int = DEFAULT_PREC) -> DenominatorStructureReport:
    g = census.gamma
    thr = newton_threshold(prec)
    H2 = g / (2 * thr)
    H1 = H2.sqrt()
    m_max = len(census.rows)
    # (i): all H with H < H1 for certain; sums of exact-denominator counts stay <= 1
    i_ok, total, i_hi = True, 0, 0
    for H in range(1, m_max + 1):
        if not BoundValue.exact(H, prec).certainly_lt(H1):
            break
        total += census.row(H).exact_count
        i_hi = H
        i_ok = i_ok and total <= 1
    # (ii): H1 <= m <= H2 certainly; at most one point with denominator dividing m
    ii_ok, ii_lo, ii_hi = True, 0, 0
    for m in range(1, m_max + 1):
        mb = BoundValue.exact(m, prec)
        if H1.certainly_le(mb) and mb.certainly_le(H2):
            ii_lo = ii_lo or m
            ii_hi = m
            ii_ok = ii_ok and census.row(m).lattice_count <= 1
    fails, lit_ok = [], True
    for row in census.rows:
        lo, hi = sandwich_bounds(row.m, g, census.n, prec)
        if not (lo.upper <= row.lattice_count <= hi.lower):
            fails.append(row.m)
        llo, lhi = sandwich_bounds(row.m, g, census.n, prec, literal=True)
        if not (llo.upper <= row.lattice_count <= lhi.lower):
            lit_ok = False
    unc = sum(r.uncertain for r in census.rows)
    return DenominatorStructureReport(H1, H2, i_ok, (1, i_hi), ii_ok, (ii_lo, ii_hi), not fails, fails, lit_ok, unc)


def gap_principle_check(census: ApproxZeroCensus) -> bool:
    """Distinct stored points with a common denominator m are at distance >= 1/m.

    The points are w/m with w integral, so ||w/m - w'/m||^2 = ||w - w'||^2 / m^2
    and the check is an integer comparison.
    """
    for row in census.rows:
        pts = row.points
        for a, b in itertools.combinations(pts, 2):
            if sum((x - y).norm() for x, y in zip(a, b)) < 1:
                return False
    return True


# ---------------------------------------------------------------------------
# precision threshold with a constructive witness
# ---------------------------------------------------------------------------


@dataclass
class PrecisionWitness:
    p: int
    threshold: BoundValue
    denominator: int
    point: tuple
    cert: CertResult
    base: float

    @property
    def certified(self) -> bool:
        return self.cert.certified


def _round_to_grid(zeta: tuple, q: int) -> tuple:
    out = []
    for c in zeta:
        v = to_mpc(c)
        out.append(GaussRational(Fraction(int(mpmath.nint(v.real * q)), q), Fraction(int(mpmath.nint(v.imag * q)), q)))
    return tuple(out)


def corollary41_precision(F: AffineSystem, zeta, base: float | str = 2, prec: int = DEFAULT_PREC) -> PrecisionWitness:
    """Smallest p >= log gamma + log(K_n^{-1/(2n)} + sqrt(2n)) + 1, then round zeta and certify.

    The logarithm base defaults to 2; ``base="e"`` selects natural logs. The
    rounding grid has denominator ceil(base^p).
    """
    zeta = _as_point(zeta)
    n = len(zeta)
    g = gamma_quantity(F, zeta, prec)
    b = math.e if base == "e" else float(base)
    if g.upper == 0:
        thr_val = BoundValue(mpmath.mpf("-inf"), mpmath.mpf("-inf"), prec)
        p = 0
    else:
        with ivprec(prec):
            K = ball_volume_K(n, prec).iv
            inner = iv.exp(-iv.log(K) / (2 * n)) + iv.sqrt(iv.mpf(2 * n))
            lb = iv.log(iv.mpf(b))
            val = iv.log(iv.mpf(g.upper)) / lb + iv.log(inner) / lb + 1
            thr_val = BoundValue.from_iv(val, prec)
        p = max(0, int(mpmath.ceil(thr_val.upper)))
    q = 2 ** p if b == 2 else int(math.ceil(b ** p))
    z = _round_to_grid(zeta, q)
    cert = certify_approx_zero(F, zeta, z, prec=prec, gamma=g)
    return PrecisionWitness(p, thr_val, q, z, cert, b)
