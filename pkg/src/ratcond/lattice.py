"""Lattice points in weighted balls, visibility, Moebius identities, Davenport's bound.

Points are enumerated as integer vectors x with ``sum_j w_j x_j^2 <= R`` for
positive integer weights, in lexicographic order, one slab per value of the
first coordinate. Euclidean balls use unit weights and R = floor(H^2); the
Delta ball over Z[i] is enumerated in real coordinates (re z_0, im z_0, re z_1,
...) with weights ``L / multinomial`` and R = floor(L H^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence

import numpy as np

from .exact import (DEFAULT_PREC, BoundValue, as_fraction, ball_volume_K, dirichlet_inverse,
                    gauss_norm_counts, mobius_table)
from .gauss import gauss_gcd_arrays
from .polysys import delta_weights

DEFAULT_CAP = 10 ** 8


class ResourceCapExceeded(RuntimeError):
    """Raised when the predicted number of lattice points exceeds the configured cap."""


@dataclass(frozen=True)
class BallShape:
    """Integer description ``sum_j weights[j] * x_j^2 <= bound`` of a ball."""

    weights: tuple[int, ...]
    bound: int
    scale: int = 1      # squared norm = (weighted sum) / scale

    @property
    def dim(self) -> int:
        return len(self.weights)

    def predicted_count(self) -> float:
        m = self.dim
        if self.bound < 0:
            return 0.0
        vol = float(ball_volume_K(m, 64).mid) * self.bound ** (m / 2)
        for w in self.weights:
            vol /= math.sqrt(w)
        return vol + 1.0


def euclidean_shape(m: int, H) -> BallShape:
    H = as_fraction(H)
    if H < 0:
        return BallShape((1,) * m, -1)
    return BallShape((1,) * m, math.floor(H * H))


def delta_shape(degrees: Sequence[int], H) -> BallShape:
    """Delta ball of radius H over Z[i], as 2(N+1) real coordinates."""
    dw = delta_weights(tuple(degrees))
    L = math.lcm(*[w.denominator for w in dw.flat_sq()])
    ws = []
    for w in dw.flat_sq():
        ws += [int(w * L)] * 2
    H = as_fraction(H)
    bound = math.floor(L * H * H) if H >= 0 else -1
    return BallShape(tuple(ws), bound, L)


def _isqrt_floor_div(budget: np.ndarray, w: int) -> np.ndarray:
    """Largest x >= 0 with w x^2 <= budget, elementwise (budget >= 0)."""
    x = np.floor(np.sqrt(budget / w)).astype(np.int64)
    x = np.maximum(x, 0)
    while True:
        up = w * (x + 1) ** 2 <= budget
        if not up.any():
            break
        x = x + up
    while True:
        down = w * x ** 2 > budget
        if not down.any():
            break
        x = x - down
    return x


def _extend(prefix: np.ndarray, budget: np.ndarray, w: int):
    xmax = _isqrt_floor_div(budget, w)
    counts = 2 * xmax + 1
    total = int(counts.sum())
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    x = np.arange(total, dtype=np.int64) - starts - np.repeat(xmax, counts)
    newp = np.empty((total, prefix.shape[1] + 1), dtype=np.int32)
    newp[:, :-1] = np.repeat(prefix, counts, axis=0)
    newp[:, -1] = x
    return newp, np.repeat(budget, counts) - w * x * x


def slab(shape: BallShape, x0: int) -> np.ndarray:
    """All points of the ball whose first coordinate equals x0, lexicographic."""
    w = shape.weights
    rem = shape.bound - w[0] * x0 * x0
    if rem < 0:
        return np.empty((0, shape.dim), dtype=np.int32)
    prefix = np.array([[x0]], dtype=np.int32)
    budget = np.array([rem], dtype=np.int64)
    for wj in w[1:]:
        prefix, budget = _extend(prefix, budget, wj)
    return prefix


def slab_range(shape: BallShape) -> range:
    if shape.bound < 0:
        return range(0)
    r = math.isqrt(shape.bound // shape.weights[0])
    return range(-r, r + 1)


def check_cap(shape: BallShape, cap: int = DEFAULT_CAP):
    pred = shape.predicted_count()
    if pred > cap:
        raise ResourceCapExceeded(f"predicted {pred:.3g} lattice points exceeds cap {cap:.3g}")


def enumerate_ball(m: int, H, norm="euclidean", cap: int = DEFAULT_CAP) -> Iterator[np.ndarray]:
    """Stream the lattice points of a ball, slab by slab, in lexicographic order.

    ``norm`` is ``"euclidean"`` (Z^m) or a degree list, for the Delta ball over
    Z[i] (then m must equal the number of coefficients N + 1 and rows hold
    interleaved real and imaginary parts).
    """
    if norm == "euclidean":
        shape = euclidean_shape(m, H)
    else:
        shape = delta_shape(norm, H)
        if shape.dim != 2 * m:
            raise ValueError(f"degree list {tuple(norm)} has {shape.dim // 2} coefficients, not {m}")
    check_cap(shape, cap)
    for x0 in slab_range(shape):
        yield slab(shape, x0)


def ball_points(m: int, H, norm="euclidean", cap: int = DEFAULT_CAP) -> np.ndarray:
    parts = list(enumerate_ball(m, H, norm, cap))
    if not parts:
        d = m if norm == "euclidean" else 2 * m
        return np.empty((0, d), dtype=np.int32)
    return np.concatenate(parts)


def weighted_sq(points: np.ndarray, weights: Sequence[int]) -> np.ndarray:
    P = points.astype(np.int64)
    return (P * P) @ np.asarray(weights, dtype=np.int64)


# ---------------------------------------------------------------------------
# visibility
# ---------------------------------------------------------------------------


def integer_gcd_rows(points: np.ndarray) -> np.ndarray:
    return np.gcd.reduce(np.abs(points.astype(np.int64)), axis=1)


def visible_mask(points: np.ndarray) -> np.ndarray:
    return integer_gcd_rows(points) == 1


def gauss_gcd_norm_rows(points: np.ndarray) -> np.ndarray:
    """N(gcd over Z[i]) of each row of interleaved (re, im) coordinates."""
    P = points.astype(np.int64)
    gr = np.zeros(len(P), dtype=np.int64)
    gi = np.zeros(len(P), dtype=np.int64)
    for k in range(P.shape[1] // 2):
        gr, gi = gauss_gcd_arrays(gr, gi, P[:, 2 * k], P[:, 2 * k + 1])
    return gr * gr + gi * gi


def c_visible_mask(points: np.ndarray) -> np.ndarray:
    return gauss_gcd_norm_rows(points) == 1


# ---------------------------------------------------------------------------
# Moebius inversion
# ---------------------------------------------------------------------------


@dataclass
class MobiusResult:
    ok: bool
    radii_checked: int
    first_failure: dict | None = None
    details: list = field(default_factory=list)


def _count_le(sorted_sq: np.ndarray, bound: int) -> int:
    return int(np.searchsorted(sorted_sq, bound, side="right"))


def mobius_inversion_linear(sq: np.ndarray, visible: np.ndarray, H) -> MobiusResult:
    """Check g(r) = sum_k f(r/k) and f(r) = sum_k mu(k) g(r/k) for r = H.

    ``sq`` are squared norms of all nonzero points of a cone inside B(0, H),
    ``visible`` marks gcd-visible ones. g counts every point, f visible ones;
    ||X||/k <= r is decided as k^2 ||X||^2 <= r^2 exactly.
    """
    H = as_fraction(H)
    H2 = H * H
    all_sq = np.sort(sq)
    vis_sq = np.sort(sq[visible])
    kmax = max(1, math.floor(H))
    mu = mobius_table(kmax)

    def g(k):
        return _count_le(all_sq, math.floor(H2 / (k * k)))

    def f(k):
        return _count_le(vis_sq, math.floor(H2 / (k * k)))

    details = []
    ok = True
    first = None
    # identities at every radius H/j, j = 1..kmax (all derived radii are sub-balls)
    for j in range(1, kmax + 1):
        lhs_g = g(j)
        rhs_g = sum(f(j * k) for k in range(1, kmax // j + 1))
        lhs_f = f(j)
        rhs_f = sum(mu[k] * g(j * k) for k in range(1, kmax // j + 1))
        row = {"radius_divisor": j, "g": lhs_g, "sum_f": rhs_g, "f": lhs_f, "sum_mu_g": rhs_f}
        details.append(row)
        if (lhs_g != rhs_g or lhs_f != rhs_f) and ok:
            ok = False
            first = row
    return MobiusResult(ok, kmax, first, details)


def mobius_inversion_gauss(sq_scaled: np.ndarray, gcd_norm: np.ndarray, H, scale: int = 1) -> MobiusResult:
    """Z[i] analogue: g(r) = sum_m a(m) f(r / sqrt m), a(m) = r2(m)/4, and its inverse.

    ``sq_scaled`` holds ``scale * ||Z||_Delta^2`` (integers) for every nonzero
    point of a complex cone; ``gcd_norm`` the norm of each point's Z[i] gcd.
    Also checks that the classes Omega(m) = {N(gcd) = m} are disjoint, exhaust
    the points and have the predicted sizes a(m) f(H / sqrt m).
    """
    H = as_fraction(H)
    R = H * H * scale
    # visible points may have Delta norm below 1, so gcd norms reach R / min(sq)
    mmax = max(1, math.floor(R / int(sq_scaled.min()))) if len(sq_scaled) else 1
    a = gauss_norm_counts(mmax)
    b = dirichlet_inverse(list(a))
    all_sq = np.sort(sq_scaled)
    vis_sq = np.sort(sq_scaled[gcd_norm == 1])

    def g(m):
        return _count_le(all_sq, math.floor(R / m))

    def f(m):
        return _count_le(vis_sq, math.floor(R / m))

    details = []
    ok = True
    first = None
    for j in range(1, mmax + 1):
        lhs_g = g(j)
        rhs_g = sum(a[k] * f(j * k) for k in range(1, mmax // j + 1))
        lhs_f = f(j)
        rhs_f = sum(b[k] * g(j * k) for k in range(1, mmax // j + 1))
        row = {"radius_divisor_sq": j, "g": lhs_g, "sum_a_f": rhs_g, "f": lhs_f, "sum_b_g": rhs_f}
        details.append(row)
        if (lhs_g != rhs_g or lhs_f != rhs_f) and ok:
            ok = False
            first = row
    # Omega(m) classes at the full radius
    inside = sq_scaled <= math.floor(R)
    classes = np.bincount(gcd_norm[inside], minlength=mmax + 1)
    if classes[0] != 0 or int(classes.sum()) != int(inside.sum()):
        ok = False
        first = first or {"omega": "classes do not partition the points"}
    for m in range(1, mmax + 1):
        pred = a[m] * f(m)
        if int(classes[m]) != pred:
            ok = False
            first = first or {"omega_m": m, "count": int(classes[m]), "predicted": pred}
    return MobiusResult(ok, mmax, first, details)


# ---------------------------------------------------------------------------
# Davenport
# ---------------------------------------------------------------------------


@dataclass
class RegionOracle:
    """Bounded region of R^m: vectorised membership over integer points plus a box hull."""

    dim: int
    contains: Callable[[np.ndarray], np.ndarray]
    hull: tuple[tuple[int, int], ...]
    volume: BoundValue
    name: str = "region"

    def count(self, cap: int = DEFAULT_CAP) -> int:
        if any(lo > hi for lo, hi in self.hull):
            return 0
        size = math.prod(hi - lo + 1 for lo, hi in self.hull)
        if size > cap:
            raise ResourceCapExceeded(f"hull has {size} points")
        total = 0
        first = range(self.hull[0][0], self.hull[0][1] + 1)
        rest = [np.arange(lo, hi + 1) for lo, hi in self.hull[1:]]
        grid = np.stack(np.meshgrid(*rest, indexing="ij"), -1).reshape(-1, self.dim - 1) if rest else None
        for x0 in first:
            if grid is None:
                pts = np.array([[x0]])
            else:
                pts = np.concatenate([np.full((len(grid), 1), x0), grid], axis=1)
            total += int(np.count_nonzero(self.contains(pts)))
        return total


def ball_region(m: int, H, prec: int = DEFAULT_PREC) -> RegionOracle:
    H = as_fraction(H)
    r = math.floor(H)
    H2 = H * H

    def contains(p):
        s = (p.astype(object if H2.denominator != 1 else np.int64) ** 2).sum(axis=1)
        return np.array([Fraction(int(v)) <= H2 for v in s]) if H2.denominator != 1 else s <= int(H2)

    vol = ball_volume_K(m, prec) * BoundValue.exact(H, prec) ** m
    return RegionOracle(m, contains, tuple((-r, r) for _ in range(m)), vol, f"ball(m={m}, H={H})")


def ball_projection_volumes(m: int, H, prec: int = DEFAULT_PREC) -> list[BoundValue]:
    """V(R, l) = C(m, l) K_l H^l for the ball of radius H in R^m, l = 0..m-1."""
    Hb = BoundValue.exact(as_fraction(H), prec)
    return [ball_volume_K(l, prec) * math.comb(m, l) * Hb ** l for l in range(m)]


def empty_region(m: int, prec: int = DEFAULT_PREC) -> RegionOracle:
    return RegionOracle(m, lambda p: np.zeros(len(p), dtype=bool), tuple((1, 0) for _ in range(m)),
                        BoundValue.exact(0, prec), "empty")


@dataclass
class DavenportResult:
    count: int
    volume: BoundValue
    bound: BoundValue
    passed: bool
    name: str = ""


def davenport_check(region: RegionOracle, h_R: int, projections: Sequence,
                    count: int | None = None) -> DavenportResult:
    """|N(R) - Vol(R)| <= sum_l h_R^(m - l) V(R, l), decided on enclosures."""
    m = region.dim
    if len(projections) != m:
        raise ValueError("need V(R, l) for l = 0..m-1")
    if any(not (math.isfinite(lo) and math.isfinite(hi)) for lo, hi in region.hull):
        raise ValueError("region must be bounded")
    prec = region.volume.prec
    bound = BoundValue.exact(0, prec)
    for l, v in enumerate(projections):
        v = v if isinstance(v, BoundValue) else BoundValue.exact(as_fraction(v), prec)
        bound = bound + v * (h_R ** (m - l))
    N = region.count() if count is None else count
    diff = BoundValue.exact(N, prec) - region.volume
    absdiff_upper = max(abs(diff.lower), abs(diff.upper))
    return DavenportResult(N, region.volume, bound, bool(absdiff_upper <= bound.lower), region.name)


def ball_count(m: int, H, cap: int = DEFAULT_CAP) -> int:
    shape = euclidean_shape(m, H)
    check_cap(shape, cap)
    return sum(len(slab(shape, x0)) for x0 in slab_range(shape))


def davenport_ball(m: int, H, prec: int = DEFAULT_PREC) -> DavenportResult:
    """Built-in instance: ball of radius H in R^m with h = 1."""
    region = ball_region(m, H, prec)
    return davenport_check(region, 1, ball_projection_volumes(m, H, prec), count=ball_count(m, H))
