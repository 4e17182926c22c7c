from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp

from ratcond.linear import (SquareMatrix, condition_k, condition_mu, condition_record, frobenius_norm,
                            frobenius_sq, fs_distance_to_singular, in_tube, in_tube_sturm, nearest_singular,
                            parse_matrix, singular_extremes, tube_mask)


def _enc(b, ref):
    """Check containment of a reference evaluated at 256 bits."""
    with mp.workprec(256):
        return b.contains(ref())


def test_frobenius_examples():
    assert _enc(frobenius_norm([[1, 0], [0, 1]]), lambda: mpmath.sqrt(2))
    assert frobenius_norm([[3, 0], [0, 4]]).contains(5)
    assert frobenius_norm([[0, 0], [0, 0]]).contains(0)
    assert frobenius_sq([[1, 2], [3, 4]]) == 30


def test_singular_extremes_examples():
    lo, hi = singular_extremes([[3, 0], [0, 4]])
    assert lo.contains(3) and hi.contains(4)
    lo, hi = singular_extremes([[1, 0], [0, 0]])
    assert lo.contains(0) and hi.contains(1)


def test_condition_examples():
    assert condition_k([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).contains(1)
    assert condition_k([[2, 0], [0, 1]]).contains(2)
    assert condition_k([[1000, 0], [0, 1]]).contains(1000)
    with mp.workprec(256):
        assert condition_mu([[1, 0], [0, 1]]).contains(mpmath.sqrt(2))
        assert condition_mu([[2, 0], [0, 1]]).contains(mpmath.sqrt(5))
        assert fs_distance_to_singular([[1, 0], [0, 1]]).contains(1 / mpmath.sqrt(2))
        assert fs_distance_to_singular([[2, 0], [0, 1]]).contains(1 / mpmath.sqrt(5))
    assert fs_distance_to_singular([[1, 2], [2, 4]]).contains(0)


def test_singular_condition_is_infinite():
    assert condition_k([[1, 2], [2, 4]]).is_infinite
    assert condition_mu([[0, 0], [0, 0]]).is_infinite


def _det3(A):
    return (A[0][0] * (A[1][1] * A[2][2] - A[1][2] * A[2][1])
            - A[0][1] * (A[1][0] * A[2][2] - A[1][2] * A[2][0])
            + A[0][2] * (A[1][0] * A[2][1] - A[1][1] * A[2][0]))


def _charpoly_roots_oracle(M, iters=80):
    """Eigenvalues of M^T M by rational bisection on det(G - x I), bracketed by float estimates."""
    n = len(M)
    G = [[sum(Fraction(M[k][i]) * M[k][j] for k in range(n)) for j in range(n)] for i in range(n)]

    def f(x):
        return _det3([[G[i][j] - (x if i == j else 0) for j in range(n)] for i in range(n)])

    est = sorted(np.linalg.eigvalsh(np.array(G, dtype=float)))
    out = []
    for e in est:
        d = max(1e-6, 1e-6 * abs(e))
        a, b = Fraction(e - d), Fraction(e + d)
        fa, fb = f(a), f(b)
        if fa == 0 or fb == 0 or (fa > 0) == (fb > 0):
            out.append(Fraction(e))          # cluster: keep the float estimate
            continue
        for _ in range(iters):
            c = (a + b) / 2
            fc = f(c)
            if (fc > 0) == (fa > 0):
                a, fa = c, fc
            else:
                b = c
        out.append((a + b) / 2)
    return out


def test_singular_values_match_charpoly_oracle(rng):
    for _ in range(40):
        M = [[Fraction(int(rng.integers(-30, 31)), int(rng.integers(1, 8))) for _ in range(3)] for _ in range(3)]
        roots = _charpoly_roots_oracle(M)
        lo, hi = singular_extremes(M)
        smin = float(mpmath.sqrt(max(roots[0], 0))) if roots[0] > 0 else 0.0
        smax = float(mpmath.sqrt(roots[-1]))
        assert abs(float(lo.mid) - smin) <= 1e-12 * max(1, smax)
        assert abs(float(hi.mid) - smax) <= 1e-12 * max(1, smax)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=4, max_size=4), st.fractions(min_value=-5, max_value=5, max_denominator=7))
def test_scale_invariance(entries, lam):
    if lam == 0:
        return
    M = SquareMatrix.of([entries[:2], entries[2:]])
    k1, k2 = condition_k(M), condition_k(M.scale(lam))
    m1, m2 = condition_mu(M), condition_mu(M.scale(lam))
    if k1.is_infinite:
        assert k2.is_infinite and m2.is_infinite
        return
    assert k1.overlaps(k2) and m1.overlaps(m2)


def test_k_le_mu_and_record_invariants(rng):
    for n in (2, 3):
        for _ in range(60):
            M = rng.integers(-6, 7, (n, n)).tolist()
            r = condition_record(M)
            assert r.sigma_min.lower <= r.sigma_max.upper
            assert r.frobenius.upper >= r.sigma_max.lower
            if not r.k.is_infinite:
                assert r.k.lower <= r.mu.upper


def test_det_sandwich_n2(rng):
    for _ in range(100):
        M = rng.integers(-9, 10, (2, 2))
        lo, hi = singular_extremes(M.tolist())
        det = abs(int(round(np.linalg.det(M))))
        assert float(lo.lower) * float(hi.lower) <= det + 1e-9
        assert det <= float(hi.upper) ** 2 + 1e-9


def test_eckart_young_cross_check(rng):
    """Sampled singular matrices never beat rho; the truncated-SVD matrix attains it."""
    for n in (2, 3):
        for _ in range(100):
            M = rng.integers(-9, 10, (n, n)).astype(float)
            if abs(np.linalg.det(M)) < 1e-9:
                continue
            rho = float(fs_distance_to_singular(M.astype(int).tolist()).mid)
            A = M / np.linalg.norm(M)
            # random singular matrices: random rank n-1 products, plus perturbations of the minimiser
            U = rng.standard_normal((10 ** 5, n, n - 1))
            V = rng.standard_normal((10 ** 5, n - 1, n))
            S = U @ V
            best = nearest_singular(A)
            near = best + 1e-3 * (rng.standard_normal((2000, n, 1)) @ rng.standard_normal((1, n)))[:, :, :]
            u, s, vt = np.linalg.svd(near)
            s[:, -1] = 0
            near = u @ (s[:, :, None] * vt)
            dists = np.linalg.norm((S - A).reshape(10 ** 5, -1), axis=1)
            dists2 = np.linalg.norm((near - A).reshape(2000, -1), axis=1)
            assert dists.min() >= rho - 1e-12 and dists2.min() >= rho - 1e-12
            assert abs(np.linalg.matrix_rank(best, tol=1e-9) - (n - 1)) == 0
            assert np.linalg.norm(best - A) <= rho * 1.05


def test_tube_matches_sturm_oracle(rng):
    for n in (2, 3):
        for _ in range(150):
            M = rng.integers(-5, 6, (n, n)).tolist()
            for eps in (Fraction(1, 20), Fraction(3, 10), Fraction(1)):
                assert in_tube(M, eps) == in_tube_sturm(M, eps)


def test_tube_mask_vectorised(rng):
    for n in (2, 3):
        mats = rng.integers(-7, 8, (300, n, n))
        for eps in (Fraction(1, 50), Fraction(1, 7), Fraction(1, 2)):
            mask = tube_mask(mats, eps)
            assert mask.tolist() == [in_tube(m.tolist(), eps) for m in mats]


def test_tube_boundary_is_exact():
    # rho(diag(3, 4)) = 3/5 exactly: the boundary point belongs to the closed tube
    M = [[3, 0], [0, 4]]
    assert in_tube(M, Fraction(3, 5)) and in_tube_sturm(M, Fraction(3, 5))
    assert not in_tube(M, Fraction(3, 5) - Fraction(1, 10 ** 30))
    assert in_tube([[2, 0], [0, 1]], Fraction(1, 2)) and not in_tube([[2, 0], [0, 1]], Fraction(2, 5))


def test_parse_matrix():
    M = parse_matrix("1,2/3;-4,5")
    assert M.entries == ((1, Fraction(2, 3)), (-4, 5))
    assert str(M) == "1,2/3;-4,5"
    with pytest.raises(ValueError):
        parse_matrix("1,2;3")
