"""Projective points over Q and Q[i], visibility, canonical representatives, heights.

The non-archimedean factor of both heights is 1 on a visible (resp. C-visible)
integer representative, so heights are evaluated as plain norms of that
representative and stored squared, exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Sequence

from .gauss import (GaussInteger, GaussRational, common_denominator, gauss_gcd_many,
                    normalizing_unit)
from .polysys import PolySystem, delta_weights


@dataclass(frozen=True)
class HeightRecord:
    height_squared: Fraction

    @property
    def height(self) -> float:
        return math.sqrt(self.height_squared)

    @property
    def bit_length(self) -> float:
        """log2 of the height (the artifact uses base 2 throughout)."""
        return 0.5 * (math.log2(self.height_squared.numerator) - math.log2(self.height_squared.denominator))


@dataclass(frozen=True)
class ProjectivePointQ:
    """Point of P_m(Q) held as its visible integer representative, first nonzero entry > 0."""

    coords: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coords)
        object.__setattr__(self, "coords", c)
        if not any(c):
            raise ValueError("the zero vector is not a projective point")
        if math.gcd(*c) != 1 or next(x for x in c if x) < 0:
            raise ValueError(f"{c} is not a canonical representative")

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __str__(self):
        return ":".join(str(x) for x in self.coords)


@dataclass(frozen=True)
class ProjectivePointQi:
    """Point of P(H_(d)(Q[i])) held as its C-visible Z[i] representative.

    Among the four associates {G, -G, iG, -iG} the stored one has its first
    nonzero coordinate in the half-open quadrant re > 0, im >= 0.
    """

    coords: tuple[GaussInteger, ...]

    def __post_init__(self):
        c = tuple(GaussInteger.of(x) for x in self.coords)
        object.__setattr__(self, "coords", c)
        if all(z.is_zero() for z in c):
            raise ValueError("the zero vector is not a projective point")
        if not gauss_gcd_many(c).is_unit():
            raise ValueError("representative is not C-visible")
        first = next(z for z in c if not z.is_zero())
        if not (first.re > 0 and first.im >= 0):
            raise ValueError("representative is not unit-normalised")

    def as_system(self, degrees: Sequence[int]) -> PolySystem:
        dl = delta_weights(tuple(degrees))
        out, k = [], 0
        for row in dl.weights_sq:
            out.append(tuple(GaussRational.of(z) for z in self.coords[k:k + len(row)]))
            k += len(row)
        if k != len(self.coords):
            raise ValueError("coordinate count does not match the degree list")
        return PolySystem(tuple(degrees), tuple(out))


def _check_nonzero(X):
    if not any(X):
        raise ValueError("zero vector rejected")


def is_visible(X: Sequence[int]) -> bool:
    X = [int(x) for x in X]
    _check_nonzero(X)
    return math.gcd(*X) == 1


def is_c_visible(Z: Sequence) -> bool:
    Z = [GaussInteger.of(z) for z in Z]
    if all(z.is_zero() for z in Z):
        raise ValueError("zero vector rejected")
    return gauss_gcd_many(Z).is_unit()


def canonical_representative(X: Sequence) -> ProjectivePointQ:
    """Visible integer representative of the rational point X, sign-normalised."""
    X = [Fraction(x) for x in X]
    if not any(X):
        raise ValueError("zero vector rejected")
    L = reduce(math.lcm, (x.denominator for x in X), 1)
    ints = [int(x * L) for x in X]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    if next(v for v in ints if v) < 0:
        ints = [-v for v in ints]
    return ProjectivePointQ(tuple(ints))


def canonical_representative_qi(Z: Sequence) -> ProjectivePointQi:
    """C-visible Z[i] representative of a Q[i] point, unit-normalised."""
    Z = [GaussRational.of(z) for z in Z]
    if all(z.is_zero() for z in Z):
        raise ValueError("zero vector rejected")
    L = common_denominator(Z)
    ints = [GaussInteger(int(z.re * L), int(z.im * L)) for z in Z]
    g = gauss_gcd_many(ints)
    ints = [z // g for z in ints]
    u = normalizing_unit(next(z for z in ints if not z.is_zero()))
    return ProjectivePointQi(tuple(z * u for z in ints))


def ns_height(P: ProjectivePointQ | Sequence) -> HeightRecord:
    """Northcott-Schmidt height: Euclidean norm of the visible representative."""
    if not isinstance(P, ProjectivePointQ):
        P = canonical_representative(P)
    return HeightRecord(Fraction(sum(x * x for x in P.coords)))


def naive_height(P: ProjectivePointQi) -> HeightRecord:
    """Plain Hermitian norm of the C-visible representative (no Delta weights)."""
    return HeightRecord(Fraction(sum(z.norm() for z in P.coords)))


def ui_height(F: ProjectivePointQi, degrees: Sequence[int]) -> HeightRecord:
    """Unitarily invariant height ||F||_Delta of the C-visible representative."""
    w = delta_weights(tuple(degrees)).flat_sq()
    if len(w) != len(F.coords):
        raise ValueError(f"expected {len(w)} coordinates for degrees {tuple(degrees)}, got {len(F.coords)}")
    return HeightRecord(sum((wk * z.norm() for wk, z in zip(w, F.coords)), Fraction(0)))


def bit_length(P) -> float:
    return ns_height(P).bit_length


def ui_bit_length(F: ProjectivePointQi, degrees: Sequence[int]) -> float:
    return ui_height(F, degrees).bit_length
