import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ratcond.gauss import (UNITS, GaussInteger, GaussRational, gauss_gcd, gauss_gcd_arrays,
                           parse_gauss_rational, unit_normalize)
from ratcond.heights import (ProjectivePointQ, ProjectivePointQi, bit_length, canonical_representative,
                             canonical_representative_qi, is_c_visible, is_visible, naive_height,
                             ns_height, ui_bit_length, ui_height)

G = GaussInteger


def _descent_gcd(a: GaussInteger, b: GaussInteger) -> GaussInteger:
    """Norm-descent Euclid: try the four lattice neighbours of a/b, keep the smallest remainder."""
    while not b.is_zero():
        n = b.norm()
        num = a * b.conjugate()
        fr, fi = math.floor(num.re / n), math.floor(num.im / n)
        best = None
        for dr in (0, 1):
            for di in (0, 1):
                q = G(fr + dr, fi + di)
                r = a - q * b
                if best is None or r.norm() < best.norm():
                    best = r
        assert best.norm() < n
        a, b = b, best
    return a


def _associates(x, y) -> bool:
    return any(x * u == y for u in UNITS)


def test_gcd_matches_descent_oracle(rng):
    for _ in range(10 ** 4):
        a = G(*map(int, rng.integers(-60, 61, 2)))
        b = G(*map(int, rng.integers(-60, 61, 2)))
        if a.is_zero() and b.is_zero():
            continue
        g = gauss_gcd(a, b)
        assert _associates(g, _descent_gcd(a, b))
        assert g.divides(a) and g.divides(b)


def test_gcd_brute_force_small():
    vals = [G(a, b) for a in range(-4, 5) for b in range(-4, 5)]
    cands = [G(a, b) for a in range(-6, 7) for b in range(-6, 7) if (a, b) != (0, 0)]
    for x in vals[::3]:
        for y in vals[::5]:
            if x.is_zero() and y.is_zero():
                continue
            common = [c for c in cands if c.divides(x) and c.divides(y)]
            assert gauss_gcd(x, y).norm() == max(c.norm() for c in common)


def test_gcd_arrays_agree(rng):
    ar, ai, br, bi = (rng.integers(-200, 201, 500) for _ in range(4))
    gr, gi = gauss_gcd_arrays(ar, ai, br, bi)
    for k in range(500):
        if ar[k] == ai[k] == br[k] == bi[k] == 0:
            continue
        ref = gauss_gcd(G(int(ar[k]), int(ai[k])), G(int(br[k]), int(bi[k])))
        assert _associates(G(int(gr[k]), int(gi[k])), ref)


def test_unit_normalisation_is_unique():
    for a in range(-5, 6):
        for b in range(-5, 6):
            z = G(a, b)
            if z.is_zero():
                continue
            reps = {unit_normalize(z * u) for u in UNITS}
            assert len(reps) == 1
            r = reps.pop()
            assert r.re > 0 and r.im >= 0


@pytest.mark.parametrize("text, value", [
    ("3/4", GaussRational(Fraction(3, 4))),
    ("1/2+3 i", GaussRational(Fraction(1, 2), 3)),
    ("-i", GaussRational(0, -1)),
    ("(2-1/3 i)", GaussRational(2, Fraction(-1, 3))),
])
def test_parse_gauss_rational(text, value):
    assert parse_gauss_rational(text) == value


@settings(max_examples=100, deadline=None)
@given(st.fractions(max_denominator=50), st.fractions(max_denominator=50))
def test_gauss_rational_format_roundtrip(re, im):
    z = GaussRational(re, im)
    assert parse_gauss_rational(str(z)) == z


# --- visibility and heights --------------------------------------------------


def test_visibility_examples():
    assert is_visible((1, 2, 3, 4))
    assert not is_visible((2, 4, 6, 8))
    assert not is_visible((0, 0, 5))
    with pytest.raises(ValueError):
        is_visible((0, 0))


def test_c_visibility_examples():
    assert is_c_visible((G(1, 0), G(0, 1)))
    assert not is_c_visible((G(2, 0), G(2, 2)))
    assert not is_c_visible((G(1, 1), G(1, -1)))
    with pytest.raises(ValueError):
        is_c_visible((G(0, 0),))


def test_canonical_representative_examples():
    assert canonical_representative((Fraction(1, 2), Fraction(1, 3))).coords == (3, 2)
    assert canonical_representative((2, 4)).coords == (1, 2)
    assert canonical_representative((-1, 0)).coords == (1, 0)
    with pytest.raises(ValueError):
        canonical_representative((0, 0))


@settings(max_examples=150, deadline=None)
@given(st.lists(st.fractions(max_denominator=30, min_value=-20, max_value=20), min_size=2, max_size=4),
       st.fractions(max_denominator=20, min_value=-10, max_value=10))
def test_canonical_is_projective_and_idempotent(x, lam):
    if not any(x) or lam == 0:
        return
    p = canonical_representative(x)
    assert canonical_representative([lam * v for v in x]) == p
    assert canonical_representative(p.coords) == p


def test_ns_height_examples():
    assert ns_height((3, 2)).height_squared == 13
    assert ns_height((1, 0, 0, 0)).height == 1
    assert ns_height((1, 2, 2)).height == 3


def test_ns_height_is_minimal_over_multiples(rng):
    for _ in range(200):
        x = [int(v) for v in rng.integers(-9, 10, 3)]
        if not any(x):
            continue
        p = canonical_representative(x)
        best = min(sum((k * c) ** 2 for c in p.coords) for k in range(1, 11))
        # every integer representative is k * p for a nonzero integer k
        assert ns_height(p).height_squared == best


def test_bit_length_examples():
    assert bit_length((1, 0)) == 0
    assert abs(bit_length((3, 2)) - 0.5 * math.log2(13)) < 1e-15
    assert abs(bit_length((3, 2)) - 1.85) < 0.01


def test_ui_height_examples():
    assert ui_height(ProjectivePointQi((G(1, 0), G(0, 0), G(0, 0))), (2,)).height_squared == 1
    assert ui_height(ProjectivePointQi((G(0, 0), G(1, 0), G(0, 0))), (2,)).height_squared == Fraction(1, 2)
    with pytest.raises(ValueError):
        ui_height(ProjectivePointQi((G(1, 0), G(0, 0))), (2,))


def _random_qi(rng, size):
    while True:
        c = [G(int(a), int(b)) for a, b in rng.integers(-5, 6, (size, 2))]
        if any(not z.is_zero() for z in c):
            return canonical_representative_qi(c)


def test_ui_height_sandwich_and_unit_invariance(rng):
    for degrees, size in (((2,), 3), ((3,), 4), ((1, 1), 6), ((2, 1), 9)):
        D = max(degrees)
        for _ in range(100):
            P = _random_qi(rng, size)
            hd = ui_height(P, degrees).height_squared
            h = naive_height(P).height_squared
            assert h / math.factorial(D) <= hd <= h
            bl = naive_height(P).bit_length
            assert bl - D * math.log2(D) <= ui_bit_length(P, degrees) + 1e-12 <= bl + 2e-12
            for u in UNITS:
                raw = [z * u for z in P.coords]
                assert ui_height(canonical_representative_qi(raw), degrees).height_squared == hd


def test_projective_point_validation():
    with pytest.raises(ValueError):
        ProjectivePointQ((2, 4))
    with pytest.raises(ValueError):
        ProjectivePointQ((-1, 2))
    with pytest.raises(ValueError):
        ProjectivePointQi((G(0, 1), G(1, 0)))   # not unit-normalised
    assert canonical_representative_qi((GaussRational(0, Fraction(1, 2)), 1)).coords == (G(1, 0), G(0, -2))
