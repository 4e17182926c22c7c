"""Exhaustive census of rational inputs of bounded height inside condition tubes.

Linear case: integer n x n matrices with ||M||_F <= H; tube membership
sigma_min <= eps ||M||_F is decided exactly. Nonlinear case: binary forms
(n = 1) with Z[i] coefficients and ||F||_Delta <= H; rho(F) <= eps is exact for
degrees 1 and 2 and certified-with-band for degree 3.

Projective counts use halving/quartering of the visible counts:
each point of P(Q) of height <= H has exactly two visible representatives, each
point of P(Q[i]) exactly four C-visible ones.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .exact import (DEFAULT_PREC, BoundValue, as_fraction, ball_volume_K, linear_bound_constants,
                    nonlinear_bound_constants, sigma_constant, zeta)
from .gauss import GaussInteger
from .lattice import (DEFAULT_CAP, BallShape, MobiusResult, check_cap, delta_shape, euclidean_shape,
                      gauss_gcd_norm_rows, integer_gcd_rows, mobius_inversion_gauss,
                      mobius_inversion_linear, slab, slab_range, weighted_sq)
from .linear import tube_mask
from .polysys import PolySystem, delta_weights, rho_binary_decide

# ---------------------------------------------------------------------------
# spec and report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusSpec:
    kind: str                       # "linear" or "nonlinear"
    H: Fraction
    epsilons: tuple[Fraction, ...]
    n: int | None = None            # linear: matrix size
    degrees: tuple[int, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "H", as_fraction(self.H))
        eps = tuple(as_fraction(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        if self.kind not in ("linear", "nonlinear"):
            raise ValueError(f"unknown census kind {self.kind!r}")
        if not eps:
            raise ValueError("epsilon list is empty")
        if any(e <= 0 for e in eps):
            raise ValueError("epsilons must be positive")
        if list(eps) != sorted(eps):
            raise ValueError("epsilons must be sorted ascending")
        if self.H < 1:
            raise ValueError("H must be at least 1")
        if self.kind == "linear":
            if self.n not in (2, 3):
                raise ValueError("linear census supports n in {2, 3}")
        else:
            if self.degrees is None:
                raise ValueError("nonlinear census needs a degree list")
            object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
            if len(self.degrees) != 1 or not 1 <= self.degrees[0] <= 3:
                raise ValueError("nonlinear census supports a single binary form of degree 1..3")

    @classmethod
    def linear(cls, n: int, H, epsilons) -> "CensusSpec":
        return cls("linear", H, tuple(epsilons), n=n)

    @classmethod
    def nonlinear(cls, degrees, H, epsilons) -> "CensusSpec":
        return cls("nonlinear", H, tuple(epsilons), degrees=tuple(degrees))

    def with_unit_eps(self) -> tuple[Fraction, ...]:
        """Requested epsilons plus 1 (needed for the denominator of the tail)."""
        return tuple(sorted(set(self.epsilons) | {Fraction(1)}))

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "H": str(self.H), "epsilons": [str(e) for e in self.epsilons]}
        if self.kind == "linear":
            d["n"] = self.n
        else:
            d["degrees"] = list(self.degrees)
        return d


@dataclass
class CensusSamples:
    """Per-point data of the nonzero enumerated points (kept for re-slicing by height)."""

    sq_scaled: np.ndarray           # scale * ||X||^2, exact integers
    scale: int
    gcd: np.ndarray                 # integer gcd (linear) or N(Z[i] gcd) (nonlinear)
    inside: dict                    # eps -> bool mask (certain members)
    uncertain: dict                 # eps -> bool mask (enclosure straddles eps)

    def restrict(self, H) -> "CensusSamples":
        H = as_fraction(H)
        keep = self.sq_scaled <= math.floor(H * H * self.scale)
        return CensusSamples(self.sq_scaled[keep], self.scale, self.gcd[keep],
                             {e: m[keep] for e, m in self.inside.items()},
                             {e: m[keep] for e, m in self.uncertain.items()})


@dataclass
class CensusReport:
    spec: CensusSpec
    N: dict                         # eps -> raw lattice count in the tube (zero point included)
    Ncal: dict                      # eps -> projective count of height <= H in the tube
    uncertain: dict                 # eps -> projective points whose membership is undecided
    total_points: int               # all lattice points in the ball, zero included
    visible_points: int
    bounds: dict                    # eps -> BoundValue of the distribution bound
    wall_time: float = 0.0
    samples: CensusSamples | None = field(default=None, repr=False)

    @property
    def H(self) -> Fraction:
        return self.spec.H

    @property
    def N1(self) -> int:
        return self.N[Fraction(1)]

    @property
    def Ncal1(self) -> int:
        return self.Ncal[Fraction(1)]

    @property
    def multiplicity(self) -> int:
        return 2 if self.spec.kind == "linear" else 4

    def tail(self, eps) -> Fraction:
        eps = as_fraction(eps)
        if self.Ncal1 == 0:
            raise ZeroDivisionError("no projective points of height <= H")
        return Fraction(self.Ncal[eps], self.Ncal1)

    def at_height(self, H) -> "CensusReport":
        """Report for a smaller height cap computed from the stored samples."""
        if self.samples is None:
            raise ValueError("samples were not kept")
        H = as_fraction(H)
        if H > self.H:
            raise ValueError("can only restrict to a smaller height")
        spec = replace(self.spec, H=H)
        return _assemble(spec, self.samples.restrict(H), None, self.wall_time)


def _bound_for(spec: CensusSpec, eps: Fraction, prec: int = DEFAULT_PREC) -> BoundValue:
    if spec.kind == "linear":
        return linear_bound_constants(spec.n, eps, prec).tail_bound(spec.H)
    return nonlinear_bound_constants(spec.degrees, eps, prec).tail_bound(spec.H)


def _assemble(spec: CensusSpec, s: CensusSamples, total: int | None, wall: float) -> CensusReport:
    mult = 2 if spec.kind == "linear" else 4
    vis = s.gcd == 1
    N, Ncal, unc, bounds = {}, {}, {}, {}
    for e in spec.with_unit_eps():
        inside = s.inside[e]
        N[e] = int(np.count_nonzero(inside)) + 1          # + zero point
        nv = int(np.count_nonzero(inside & vis))
        nu = int(np.count_nonzero(s.uncertain[e] & vis))
        if nv % mult or nu % mult:
            raise ArithmeticError("visible count is not a multiple of the unit group order")
        Ncal[e] = nv // mult
        unc[e] = nu // mult
        bounds[e] = _bound_for(spec, e)
    tot = len(s.sq_scaled) + 1 if total is None else total
    return CensusReport(spec, N, Ncal, unc, tot, int(np.count_nonzero(vis)), bounds, wall, s)


# ---------------------------------------------------------------------------
# linear census
# ---------------------------------------------------------------------------


def _linear_slab(args):
    n, bound, x0, eps_list = args
    shape = BallShape((1,) * (n * n), bound)
    P = slab(shape, x0)
    sq = weighted_sq(P, shape.weights)
    nz = sq > 0
    P, sq = P[nz], sq[nz]
    g = integer_gcd_rows(P)
    mats = P.reshape(-1, n, n)
    inside = {e: tube_mask(mats, e) for e in eps_list}
    return sq, g, inside


def _run_slabs(fn, tasks, jobs: int):
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, tasks))
    return [fn(t) for t in tasks]


def _merge(parts, eps_list, scale: int) -> CensusSamples:
    sq = np.concatenate([p[0] for p in parts]) if parts else np.empty(0, np.int64)
    g = np.concatenate([p[1] for p in parts]) if parts else np.empty(0, np.int64)
    inside = {e: np.concatenate([p[2][e] for p in parts]) if parts else np.empty(0, bool) for e in eps_list}
    if len(parts) and len(parts[0]) > 3:
        unc = {e: np.concatenate([p[3][e] for p in parts]) for e in eps_list}
    else:
        unc = {e: np.zeros(len(sq), dtype=bool) for e in eps_list}
    return CensusSamples(sq, scale, g, inside, unc)


def census_linear(spec: CensusSpec, jobs: int = 1, cap: int = DEFAULT_CAP) -> CensusReport:
    if spec.kind != "linear":
        raise ValueError("census_linear needs a linear spec")
    t0 = time.perf_counter()
    shape = euclidean_shape(spec.n * spec.n, spec.H)
    check_cap(shape, cap)
    eps_list = spec.with_unit_eps()
    tasks = [(spec.n, shape.bound, x0, eps_list) for x0 in slab_range(shape)]
    parts = _run_slabs(_linear_slab, tasks, jobs)
    samples = _merge(parts, eps_list, 1)
    return _assemble(spec, samples, None, time.perf_counter() - t0)


# ---------------------------------------------------------------------------
# binary forms: rho membership
# ---------------------------------------------------------------------------


def _cmul(ar, ai, br, bi):
    return ar * br - ai * bi, ar * bi + ai * br


def binary_discriminant(C: np.ndarray, d: int):
    """Exact homogeneous discriminant (re, im) of binary forms of degree 2 or 3.

    ``C`` has shape (K, d+1, 2) with integer (re, im) parts of c_0..c_d, where
    c_j multiplies X_0^(d-j) X_1^j.
    """
    C = C.astype(object) if np.abs(C).max(initial=0) > 1000 else C.astype(np.int64)
    c = [(C[:, j, 0], C[:, j, 1]) for j in range(d + 1)]

    def mul(*xs):
        r, i = xs[0]
        for x in xs[1:]:
            r, i = _cmul(r, i, x[0], x[1])
        return r, i

    if d == 2:
        b2 = mul(c[1], c[1])
        ac = mul(c[0], c[2])
        return b2[0] - 4 * ac[0], b2[1] - 4 * ac[1]
    if d == 3:
        t1 = mul(c[1], c[1], c[2], c[2])
        t2 = mul(c[0], c[2], c[2], c[2])
        t3 = mul(c[1], c[1], c[1], c[3])
        t4 = mul(c[0], c[0], c[3], c[3])
        t5 = mul(c[0], c[1], c[2], c[3])
        re = t1[0] - 4 * t2[0] - 4 * t3[0] - 27 * t4[0] + 18 * t5[0]
        im = t1[1] - 4 * t2[1] - 4 * t3[1] - 27 * t4[1] + 18 * t5[1]
        return re, im
    raise ValueError("discriminant implemented for degrees 2 and 3")


def rho_sq_float_binary(C: np.ndarray, d: int) -> np.ndarray:
    """Floating rho(F)^2 for binary forms, min over roots (rows with distinct roots).

    At a root t of p(t) = F(1, t): rho^2 = |p'(t)|^2 (1 + |t|^2)^(2 - d) / (d W);
    a simple root at infinity contributes |c_{d-1}|^2 / (d W).
    """
    z = C[:, :, 0].astype(float) + 1j * C[:, :, 1].astype(float)
    K = len(z)
    binom = np.array([math.comb(d, j) for j in range(d + 1)], dtype=float)
    W = (np.abs(z) ** 2 / binom).sum(axis=1)
    out = np.full(K, np.inf)
    # root at infinity when c_d == 0
    inf_rows = z[:, d] == 0
    out[inf_rows] = np.abs(z[inf_rows, d - 1]) ** 2 / (d * W[inf_rows])
    # effective degree of p
    eff = np.full(K, d)
    for j in range(d, 0, -1):
        eff = np.where((eff == j) & (z[:, j] == 0), j - 1, eff)
    for e in range(1, d + 1):
        rows = np.nonzero(eff == e)[0]
        if len(rows) == 0:
            continue
        zc = z[rows, : e + 1]
        if e == 1:
            roots = (-zc[:, 0] / zc[:, 1])[:, None]
        else:
            comp = np.zeros((len(rows), e, e), dtype=complex)
            comp[:, 1:, :-1] = np.eye(e - 1)
            comp[:, :, -1] = -zc[:, :e] / zc[:, e:e + 1]
            roots = np.linalg.eigvals(comp)
        dp = np.zeros_like(roots)
        for j in range(1, e + 1):
            dp += j * zc[:, j:j + 1] * roots ** (j - 1)
        val = np.abs(dp) ** 2 * (1 + np.abs(roots) ** 2) ** (2 - d) / (d * W[rows, None])
        out[rows] = np.minimum(out[rows], val.min(axis=1))
    return out


def binary_rho_masks(C: np.ndarray, d: int, eps_list, margin: float = 1e-6, prec: int = DEFAULT_PREC):
    """Membership masks rho(F) <= eps for binary forms: (inside, uncertain) per eps.

    Degree 1: rho = 1. Degree 2: exact test N(b^2 - 4ac) <= 4 W^2 eps^4.
    Degree 3: exact discriminant for rho = 0, floating rho elsewhere, with rows
    within ``margin`` of eps re-decided by :func:`rho_binary_decide` (exact on
    rational zeros, enclosures otherwise); rows still straddling eps are
    reported as uncertain.
    """
    K = len(C)
    inside, unc = {}, {}
    if d == 1:
        for e in eps_list:
            inside[e] = np.full(K, e >= 1)
            unc[e] = np.zeros(K, dtype=bool)
        return inside, unc
    if d == 2:
        Ci = C.astype(np.int64)
        S = (2 * (Ci[:, 0] ** 2).sum(1) + (Ci[:, 1] ** 2).sum(1) + 2 * (Ci[:, 2] ** 2).sum(1))  # = 2W
        dr, di = binary_discriminant(C, 2)
        nd = dr * dr + di * di
        for e in eps_list:
            p, q = e.numerator, e.denominator
            big = int(np.max(nd, initial=0)) * q ** 4 >= (1 << 62) or int(np.max(S, initial=0)) ** 2 * p ** 4 >= (1 << 62)
            if big:
                lhs = nd.astype(object) * q ** 4
                rhs = (S.astype(object) ** 2) * p ** 4
            else:
                lhs = nd * q ** 4
                rhs = S * S * p ** 4
            # N(disc) <= 4 W^2 eps^4 = S^2 eps^4
            inside[e] = np.asarray(lhs <= rhs, dtype=bool)
            unc[e] = np.zeros(K, dtype=bool)
        return inside, unc
    if d == 3:
        dr, di = binary_discriminant(C, 3)
        multiple = (dr == 0) & (di == 0)
        rho = np.sqrt(np.where(multiple, 0.0, rho_sq_float_binary(C, 3)))
        rho[multiple] = 0.0
        for e in eps_list:
            ef = float(e)
            ins = rho <= ef
            close = (~multiple) & (np.abs(rho - ef) <= margin)
            u = np.zeros(K, dtype=bool)
            for k in np.nonzero(close)[0]:
                F = PolySystem.binary([GaussInteger(int(C[k, j, 0]), int(C[k, j, 1])) for j in range(4)])
                verdict = rho_binary_decide(F, e, prec)
                ins[k] = verdict is True
                u[k] = verdict is None
            inside[e] = ins
            unc[e] = u
        return inside, unc
    raise ValueError("binary forms of degree 1..3 only")


def _nonlinear_slab(args):
    degrees, weights, bound, scale, x0, eps_list = args
    shape = BallShape(weights, bound, scale)
    P = slab(shape, x0)
    sq = weighted_sq(P, weights)
    nz = sq > 0
    P, sq = P[nz], sq[nz]
    gn = gauss_gcd_norm_rows(P)
    d = degrees[0]
    C = P.reshape(-1, d + 1, 2)
    inside, unc = binary_rho_masks(C, d, eps_list)
    return sq, gn, inside, unc


def census_nonlinear(spec: CensusSpec, jobs: int = 1, cap: int = DEFAULT_CAP) -> CensusReport:
    if spec.kind != "nonlinear":
        raise ValueError("census_nonlinear needs a nonlinear spec")
    t0 = time.perf_counter()
    shape = delta_shape(spec.degrees, spec.H)
    check_cap(shape, cap)
    eps_list = spec.with_unit_eps()
    tasks = [(spec.degrees, shape.weights, shape.bound, shape.scale, x0, eps_list) for x0 in slab_range(shape)]
    parts = _run_slabs(_nonlinear_slab, tasks, jobs)
    samples = _merge(parts, eps_list, shape.scale)
    return _assemble(spec, samples, None, time.perf_counter() - t0)


def run_census(spec: CensusSpec, jobs: int = 1, cap: int = DEFAULT_CAP) -> CensusReport:
    return census_linear(spec, jobs, cap) if spec.kind == "linear" else census_nonlinear(spec, jobs, cap)


# ---------------------------------------------------------------------------
# derived checks
# ---------------------------------------------------------------------------


def mobius_inversion_check(report: CensusReport, eps=1) -> MobiusResult:
    """Exact Moebius identities on the census data restricted to the eps tube."""
    if report.samples is None:
        raise ValueError("samples were not kept")
    eps = as_fraction(eps)
    s = report.samples
    mask = s.inside[eps]
    if np.any(s.uncertain[eps]):
        raise ValueError("tube membership has an uncertainty band; identities are not decidable")
    if report.spec.kind == "linear":
        return mobius_inversion_linear(s.sq_scaled[mask], (s.gcd == 1)[mask], report.H)
    return mobius_inversion_gauss(s.sq_scaled[mask], s.gcd[mask], report.H, s.scale)


def tail_probability(report: CensusReport) -> list[dict]:
    """Rows (eps, empirical tail, theorem bound, vacuous flag) for the requested epsilons."""
    if report.Ncal1 == 0:
        raise ZeroDivisionError("no projective points of height <= H")
    rows = []
    for e in report.spec.epsilons:
        b = report.bounds[e]
        rows.append({
            "epsilon": e,
            "N": report.N[e],
            "Ncal": report.Ncal[e],
            "uncertain": report.uncertain[e],
            "empirical_tail": report.tail(e),
            "bound": b,
            "vacuous": b.is_infinite or b.lower >= 1,
        })
    return rows


@dataclass
class InequalityCheck:
    name: str
    H: Fraction
    lhs: BoundValue
    rhs: BoundValue

    @property
    def passed(self) -> bool:
        return self.lhs.certainly_le(self.rhs)

    @property
    def margin(self) -> BoundValue:
        return self.rhs - self.lhs


def _abs_bound(x: BoundValue) -> BoundValue:
    hi = max(abs(x.lower), abs(x.upper))
    lo = mpmath.mpf(0) if x.lower <= 0 <= x.upper else min(abs(x.lower), abs(x.upper))
    return BoundValue(lo, hi, x.prec)


def count_volume_check(report: CensusReport, prec: int = DEFAULT_PREC) -> InequalityCheck:
    """|N(1, H) - K_{n^2} H^{n^2}| <= H^{n^2 - 1} S^(n^2)."""
    n = report.spec.n
    m = n * n
    Hb = BoundValue.exact(report.H, prec)
    lhs = _abs_bound(BoundValue.exact(report.N1, prec) - ball_volume_K(m, prec) * Hb ** m)
    rhs = Hb ** (m - 1) * sigma_constant(m, prec)
    return InequalityCheck("count_vs_volume", report.H, lhs, rhs)


def projective_count_check(report: CensusReport, prec: int = DEFAULT_PREC) -> InequalityCheck:
    """|Ncal(1, H) - K_{n^2} H^{n^2} / (2 zeta(n^2))| <= L(1, n) H^{n^2 - 1} + H/2."""
    n = report.spec.n
    m = n * n
    Hb = BoundValue.exact(report.H, prec)
    main = ball_volume_K(m, prec) * Hb ** m / (zeta(m, prec) * 2)
    lhs = _abs_bound(BoundValue.exact(report.Ncal1, prec) - main)
    L1 = linear_bound_constants(n, 1, prec).L1
    rhs = L1 * Hb ** (m - 1) + Hb / 2
    return InequalityCheck("projective_count", report.H, lhs, rhs)


def delta_ball_volume(degrees: Sequence[int], H, prec: int = DEFAULT_PREC) -> BoundValue:
    """Vol(B_Delta(0, H)) = K_{2N+2} H^{2N+2} / det(Delta)^2 in C^{N+1} = R^{2N+2}."""
    dw = delta_weights(tuple(degrees))
    m = 2 * len(dw.flat_sq())
    return ball_volume_K(m, prec) * BoundValue.exact(as_fraction(H), prec) ** m / BoundValue.exact(dw.det_squared, prec)


def delta_count_check(report: CensusReport, prec: int = DEFAULT_PREC) -> InequalityCheck:
    """|Ncal(1, H) - Vol(B_Delta(0, H)) / (4 zeta(2N+2))| <= Lbar(1, N) H^{2N+1} + H/4."""
    c = nonlinear_bound_constants(report.spec.degrees, 1, prec)
    Hb = BoundValue.exact(report.H, prec)
    main = delta_ball_volume(report.spec.degrees, report.H, prec) / (c.zeta_top * 4)
    lhs = _abs_bound(BoundValue.exact(report.Ncal1, prec) - main)
    rhs = c.L1_bar * Hb ** (2 * c.N + 1) + Hb / 4
    return InequalityCheck("delta_count_vs_volume", report.H, lhs, rhs)


def visible_fraction(report: CensusReport) -> Fraction:
    """Share of visible points among the nonzero lattice points of the ball."""
    return Fraction(report.visible_points, report.total_points - 1)
