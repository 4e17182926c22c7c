import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from mpmath import mp

from ratcond.gauss import GaussRational
from ratcond.newton import (AffineSystem, SingularJacobian, approx_zero_census, certification_radius,
                            certify_approx_zero, corollary41_precision, distance, gamma_quantity,
                            gamma_vs_mu_bound_check, gap_principle_check, newton_step, precision_of,
                            denominator_structure_check, sandwich_bounds)
from ratcond.polysys import PolySystem

Q = GaussRational


def _enc(b, f):
    with mp.workprec(256):
        return b.contains(f())


def _gamma_oracle(coeffs, zeta):
    """Univariate gamma from plain mpmath polynomial derivatives (ascending coefficients)."""
    with mp.workprec(256):
        c = [mpmath.mpc(complex(x)) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
             for x in coeffs]
        z = mpmath.mpf(zeta.numerator) / zeta.denominator if isinstance(zeta, Fraction) else zeta
        d = len(c) - 1
        der = [mpmath.polyval(list(reversed([c[j] * mpmath.ff(j, k) for j in range(k, d + 1)])), z)
               for k in range(d + 1)]
        best = mpmath.mpf(0)
        for k in range(2, d + 1):
            best = max(best, abs(der[k] / (mpmath.factorial(k) * der[1])) ** (mpmath.mpf(1) / (k - 1)))
        return best


def test_newton_step_examples():
    f = AffineSystem.univariate([-2, 0, 1])
    z1 = newton_step(f, [1])
    assert z1 == (Q(Fraction(3, 2)),)
    assert newton_step(f, z1) == (Q(Fraction(17, 12)),)
    with pytest.raises(SingularJacobian):
        newton_step(f, [0])


def test_linear_system_solved_in_one_step():
    F = AffineSystem((1, 1), ({(1, 0): 2, (0, 1): 1, (0, 0): -3}, {(1, 0): 1, (0, 1): -1, (0, 0): Q(0, 1)}))
    z = newton_step(F, [Q(7), Q(-5, 2)])
    assert all(v.is_zero() for v in F.evaluate(z))
    assert gamma_quantity(F, z).upper == 0
    cert = certify_approx_zero(F, z, [Q(100), Q(-100)])
    assert cert.certified and cert.convergence_ok


def test_gamma_examples():
    assert gamma_quantity(AffineSystem.univariate([-1, 0, 1]), [1]).contains(Fraction(1, 2))
    with mp.workprec(256):
        r2 = mpmath.sqrt(2)
    g = gamma_quantity(AffineSystem.univariate([-2, 0, 1]), [r2])
    assert _enc(g, lambda: 1 / (2 * mpmath.sqrt(2)))


def test_gamma_against_oracle(rng):
    for _ in range(40):
        r = [Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 6))) for _ in range(3)]
        if len(set(r)) < 3:
            continue
        # (x - r0)(x - r1)(x - r2) in ascending coefficients
        e1, e2, e3 = sum(r), r[0] * r[1] + r[0] * r[2] + r[1] * r[2], r[0] * r[1] * r[2]
        coeffs = [-e3, e2, -e1, Fraction(1)]
        g = gamma_quantity(AffineSystem.univariate(coeffs), [r[0]])
        ref = _gamma_oracle(coeffs, r[0])
        with mp.workprec(256):
            assert g.lower - mpmath.mpf(2) ** -100 <= ref <= g.upper + mpmath.mpf(2) ** -100


def test_gamma_scale_invariance(rng):
    F = AffineSystem((2, 2), ({(2, 0): 1, (0, 0): -1}, {(0, 2): 1, (1, 0): -1}))
    zeta = [Q(1), Q(1)]
    g = gamma_quantity(F, zeta)
    for lam in (Q(3), Q(0, -2), Q(1, 7)):
        assert gamma_quantity(F.scale(lam), zeta).overlaps(g)


def test_certify_examples():
    f = AffineSystem.univariate([-1, 0, 1])
    ok = certify_approx_zero(f, [1], [Q(Fraction(11, 10))])
    assert ok.certified and ok.convergence_ok and len(ok.iterates) == 5
    bad = certify_approx_zero(f, [1], [Q(2)])
    assert not bad.certified
    r = certification_radius(gamma_quantity(f, [1]))
    assert _enc(r, lambda: (3 - mpmath.sqrt(7)))
    assert set(ok.to_dict()) >= {"gamma_upper", "radius", "distance", "certified", "iterates"}


def test_distance_exact():
    d = distance([Q(1), Q(0, 1)], [Q(4), Q(0, 5)])
    assert d.contains(5)


def test_precision_examples():
    assert precision_of([Q(Fraction(1, 4))]).q == 4 and precision_of([Q(Fraction(1, 4))]).pr == 2
    assert precision_of([Q(3)]).pr == 0
    p = precision_of([Q(Fraction(1, 3)), Q(0, Fraction(1, 2))])
    assert p.q == 6 and abs(p.pr - math.log2(6)) < 1e-15 and p.bits == 3


def test_homogenize_round_trip():
    F = AffineSystem((2, 1), ({(2, 0): Q(1, 2), (1, 1): -3, (0, 0): 5}, {(0, 1): 1, (0, 0): Q(0, 1)}))
    H = F.homogenize()
    assert isinstance(H, PolySystem) and H.degrees == (2, 1)
    assert AffineSystem.dehomogenize(H) == F


def test_gamma_vs_mu_random(rng):
    for d in (2, 3):
        done = 0
        while done < 25:
            roots = [Fraction(int(rng.integers(-6, 7)), int(rng.integers(1, 4))) for _ in range(d)]
            if len(set(roots)) < d:
                continue
            coeffs = [Fraction(1)]
            for r in roots:
                coeffs = [(coeffs[k - 1] if k else 0) - r * (coeffs[k] if k < len(coeffs) else 0)
                          for k in range(len(coeffs) + 1)]
            assert gamma_vs_mu_bound_check(AffineSystem.univariate(coeffs), [roots[0]])
            done += 1
    F = AffineSystem((2, 2), ({(2, 0): 1, (0, 0): -1}, {(0, 2): 1, (1, 0): -1}))
    assert gamma_vs_mu_bound_check(F, [Q(1), Q(1)])


def test_precision_witness_random_quadratics(rng):
    done = 0
    while done < 20:
        r0 = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8)))
        r1 = Fraction(int(rng.integers(-20, 21)), int(rng.integers(1, 8)))
        if r0 == r1:
            continue
        f = AffineSystem.univariate([r0 * r1, -(r0 + r1), 1])
        w = corollary41_precision(f, [r0])
        assert w.certified
        assert w.denominator == 2 ** w.p
        done += 1
    we = corollary41_precision(AffineSystem.univariate([-1, 0, 1]), [1], base="e")
    assert we.certified and abs(we.base - math.e) < 1e-15


def test_precision_witness_example():
    w = corollary41_precision(AffineSystem.univariate([-1, 0, 1]), [1])
    assert w.p == 2 and w.certified
    assert abs(float(w.threshold.mid) - 1.085) < 1e-3


@pytest.fixture(scope="module")
def unit_census():
    return approx_zero_census(AffineSystem.univariate([-1, 0, 1]), [1], m_max=60)


def test_census_rows_and_gap(unit_census):
    c = unit_census
    assert c.row(1).lattice_count == 1 and c.row(1).exact_count == 1
    assert all(r.uncertain == 0 for r in c.rows)
    assert gap_principle_check(c)
    for r in c.rows:
        assert r.exact_count <= r.lattice_count


def test_census_against_brute_force(unit_census):
    # count w in Z[i] with |w - m|^2 <= m^2 (3 - sqrt7)^2, decided with 256-bit mpmath
    with mp.workprec(256):
        t = 3 - mpmath.sqrt(7)
        for m in (1, 7, 23, 60):
            R = m * t
            cnt = 0
            for a in range(int(m - R) - 1, int(m + R) + 2):
                for b in range(-int(R) - 1, int(R) + 2):
                    if (a - m) ** 2 + b ** 2 <= R * R:
                        cnt += 1
            assert unit_census.row(m).lattice_count == cnt


def test_denominator_structure_on_unit_root(unit_census):
    rep = denominator_structure_check(unit_census)
    assert rep.passed
    # gamma = 1/2: H1 ~ 1.19 and H2 ~ 1.41, so no integer m lies in [H1, H2]
    assert rep.item_ii_range == (0, 0) and rep.item_i_range == (1, 1)


def test_denominator_structure_close_roots():
    f = AffineSystem.univariate([Fraction(51, 50), Fraction(-101, 50), 1])
    c = approx_zero_census(f, [1], m_max=150)
    assert c.gamma.contains(50)
    rep = denominator_structure_check(c)
    assert rep.item_i and rep.item_ii and rep.item_iii and rep.passed
    assert rep.item_i_range == (1, 11) and rep.item_ii_range == (12, 141)


@pytest.mark.xfail(strict=True, reason="the K_n volume form without clipping is not a valid sandwich")
def test_denominator_structure_literal_volume_form(unit_census):
    assert denominator_structure_check(unit_census).item_iii_literal


def test_sandwich_bounds_order():
    g = gamma_quantity(AffineSystem.univariate([-1, 0, 1]), [1])
    for m in (1, 10, 100):
        lo, hi = sandwich_bounds(m, g, 1)
        assert lo.upper <= hi.lower


def test_census_rejects_linear():
    with pytest.raises(ValueError):
        approx_zero_census(AffineSystem.univariate([-1, 1]), [1], m_max=3)
