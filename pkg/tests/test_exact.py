import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from ratcond.exact import (BoundValue, artin_estimate_check, artin_ratio_report, ball_volume_K,
                           dirichlet_inverse, gauss_norm_counts, linear_bound_constants, milnor_thom_linear,
                           milnor_thom_nonlinear, mobius, mobius_table, newton_threshold,
                           nonlinear_bound_constants, pi_bound, sigma_constant, zeta)


def test_mobius_examples():
    assert [mobius(1), mobius(6), mobius(12)] == [1, 1, 0]
    assert [mobius(k) for k in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_mobius_rejects_zero():
    with pytest.raises(ValueError):
        mobius(0)


def test_mobius_multiplicative_on_coprime():
    for a in range(1, 201):
        for b in range(1, 201):
            if math.gcd(a, b) == 1:
                assert mobius(a * b) == mobius(a) * mobius(b)


def test_mobius_divisor_sum():
    table = mobius_table(10 ** 4)
    sums = [0] * (10 ** 4 + 1)
    for d in range(1, 10 ** 4 + 1):
        for k in range(d, 10 ** 4 + 1, d):
            sums[k] += table[d]
    assert sums[1] == 1 and all(s == 0 for s in sums[2:])


def test_table_matches_pointwise():
    t = mobius_table(500)
    assert all(t[k] == mobius(k) for k in range(1, 501))


def _ref(expr):
    with mp.workprec(256):
        return expr()


@pytest.mark.parametrize("s, ref", [(2, lambda: mpmath.pi ** 2 / 6), (4, lambda: mpmath.pi ** 4 / 90)])
def test_zeta_encloses_closed_form(s, ref):
    z = zeta(s)
    assert z.contains(_ref(ref))
    assert z.width < mpmath.mpf(2) ** -100


def test_zeta_against_partial_sum_oracle():
    # independent bracket: sum_{m <= M} m^-2 < zeta(2) < same + 1/M
    M = 10 ** 6
    import numpy as np
    part = float(np.sum(1.0 / np.arange(1, M + 1, dtype=np.float64) ** 2))
    z = zeta(2)
    assert part - 1e-12 <= float(z.lower) and float(z.upper) <= part + 1.0 / M + 1e-12


def test_zeta_rejects_small_s():
    with pytest.raises(ValueError):
        zeta(1)


def test_zeta_width_shrinks_with_precision():
    assert zeta(3, 64).width >= zeta(3, 128).width >= zeta(3, 256).width


@pytest.mark.parametrize("s", [2, 3, 4])
def test_mobius_series_converges_to_reciprocal_zeta(s):
    M = 3000
    mu = mobius_table(M)
    with mp.workprec(128):
        partial = mpmath.fsum(mpmath.mpf(mu[m]) / mpmath.mpf(m) ** s for m in range(1, M + 1))
        tail = mpmath.zeta(s, M + 1)  # sum_{m > M} m^-s
        z = zeta(s)
        inv = (1 / z.upper, 1 / z.lower)
        assert abs(partial - inv[0]) <= tail + inv[1] - inv[0]


def test_ball_volume_examples():
    assert ball_volume_K(0).contains(1)
    assert ball_volume_K(1).contains(2)
    with mp.workprec(256):
        assert ball_volume_K(2).contains(+mpmath.pi)
        assert ball_volume_K(3).contains(4 * mpmath.pi / 3)


def test_ball_volume_recurrence():
    two_pi = pi_bound() * 2
    for ell in range(2, 61):
        rec = ball_volume_K(ell - 2) * two_pi / ell
        assert rec.overlaps(ball_volume_K(ell))


def test_sigma_constant_examples():
    assert sigma_constant(1).contains(1)
    assert sigma_constant(2).contains(5)
    with mp.workprec(256):
        assert sigma_constant(4).contains(9 + 6 * mpmath.pi + 16 * mpmath.pi / 3)
    assert abs(float(sigma_constant(4)) - 44.6047167407) < 1e-9


def test_artin_estimate():
    assert artin_estimate_check(1)
    assert artin_estimate_check(10)
    assert artin_estimate_check(50)


def test_artin_companion_is_reported():
    rows = artin_ratio_report(12)
    assert len(rows) == 12 and all("m" in r for r in rows)


def test_newton_threshold():
    with mp.workprec(256):
        assert newton_threshold().contains((3 - mpmath.sqrt(7)) / 2)
    assert abs(float(newton_threshold()) - 0.1771243444677) < 1e-12


# --- linear bound constants -------------------------------------------------


def test_T2_exact():
    c = linear_bound_constants(2, Fraction(1, 20))
    assert c.T == 8 ** 48 == milnor_thom_linear(2)
    assert isinstance(c.T, int)


def _oracle_linear(n, eps, bits=512):
    """Term-by-term re-evaluation with plain mpmath at high precision."""
    with mp.workprec(bits):
        eps = mpmath.mpf(eps.numerator) / eps.denominator
        m = n * n
        K = lambda l: 2 * mpmath.pi ** (mpmath.mpf(l) / 2) / (l * mpmath.gamma(mpmath.mpf(l) / 2)) if l else 1
        S = mpmath.fsum(math.comb(m, l) * K(l) for l in range(m))
        T = mpmath.mpf(2 * max(4, n)) ** (2 * n ** 4 + 4 * n ** 2)
        lead = eps * mpmath.mpf(n) ** 2.5
        zm, zm1 = mpmath.zeta(m), mpmath.zeta(m - 1)
        B = zm * ((lead + T) * S / (K(m) * zm1) + 2 * lead + 2 / K(m))
        C = zm * (S / (K(m) * zm1) + 1 + 1 / K(m))
        L1 = S / (2 * zm1) + K(m) / 2
        return B, C, L1


@pytest.mark.parametrize("n, eps", [(2, Fraction(0)), (2, Fraction(1, 100)), (2, Fraction(1, 20)), (3, Fraction(1, 10))])
def test_linear_constants_against_reimplementation(n, eps):
    B, C, L1 = _oracle_linear(n, eps)
    c = linear_bound_constants(n, eps)
    with mp.workprec(512):
        assert c.B.contains(B) and c.C.contains(C) and c.L1.contains(L1)


def test_linear_constants_frozen():
    # frozen from the high-precision re-implementation above
    c = linear_bound_constants(2, Fraction(1, 20))
    assert abs(float(c.B) / 1.81494039214274822e44 - 1) < 1e-15
    assert abs(float(c.C) - 9.4401219658798543719) < 1e-12
    assert abs(float(c.L1) - 21.020897454497036197) < 1e-12


def test_tail_bound_infinite_below_C():
    c = linear_bound_constants(2, Fraction(1, 20))
    assert c.tail_bound(5).is_infinite
    assert not c.tail_bound(25).is_infinite


# --- nonlinear bound constants ----------------------------------------------


def test_nonlinear_constants_quadratic():
    c = nonlinear_bound_constants((2,), Fraction(3, 10))
    assert (c.N, c.frak_C, c.D, c.bezout) == (2, 8, 2, 2)
    assert c.T_bar == 12 ** 340 == milnor_thom_nonlinear(2, 1, 2)
    assert c.det_delta_sq == Fraction(1, 2)


def test_linear_systems_bezout_one():
    for n in (1, 2, 3):
        c = nonlinear_bound_constants((1,) * n, Fraction(1, 2))
        assert c.bezout == 1
        assert c.N == n * (n + 1) - 1


def test_nonlinear_tail_lead_term():
    c = nonlinear_bound_constants((2,), Fraction(3, 10))
    assert c.lead.contains(Fraction(3, 10) ** 4 * 8)


def test_nonlinear_constants_frozen():
    c = nonlinear_bound_constants((2,), 1)
    assert abs(float(c.G) - 68.04) < 0.01
    assert abs(float(c.L1_bar) - 123.96) < 0.01


# --- BoundValue plumbing ----------------------------------------------------


@settings(max_examples=60, deadline=None)
@given(st.fractions(min_value=-1000, max_value=1000), st.fractions(min_value=-1000, max_value=1000))
def test_boundvalue_arithmetic_contains_exact(a, b):
    A, B = BoundValue.exact(a), BoundValue.exact(b)
    assert (A + B).contains(a + b)
    assert (A * B).contains(a * b)
    assert (A - B).contains(a - b)
    if b != 0:
        assert (A / B).contains(a / b)


def test_boundvalue_rejects_empty():
    with pytest.raises(ValueError):
        BoundValue(mpmath.mpf(2), mpmath.mpf(1))


def test_gauss_norm_counts_and_inverse():
    a = gauss_norm_counts(50)
    assert a[1] == 1 and a[2] == 1 and a[5] == 2 and a[3] == 0
    b = dirichlet_inverse(a)
    # (a * b)(k) = [k = 1]
    for k in range(1, 51):
        s = sum(a[d] * b[k // d] for d in range(1, k + 1) if k % d == 0)
        assert s == (1 if k == 1 else 0)
