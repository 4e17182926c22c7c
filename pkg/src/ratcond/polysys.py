"""Homogeneous polynomial systems with the Delta-weighted (Bombieri-Weyl) product.

A :class:`PolySystem` stores, for each equation ``f_i`` of degree ``d_i`` in the
variables ``X_0..X_n``, a dense coefficient vector indexed by :func:`monomials`
(lexicographic descending on the exponent of ``X_0``, then ``X_1``, ...). All
monomials of an equation share the same total degree, so this is also the
graded lexicographic order.

Coefficients are either exact :class:`GaussRational` values or numeric
(``complex`` / ``mpmath.mpc``). Numeric paths run in mpmath at a caller-chosen
working precision; the singular-value enclosures carry an explicit residual
bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath
import numpy as np
from mpmath import mp

from .exact import DEFAULT_PREC, BoundValue, _compositions, multinomial
from .gauss import GaussInteger, GaussRational

# ---------------------------------------------------------------------------
# monomials and weights
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def monomials(d: int, n: int) -> tuple[tuple[int, ...], ...]:
    """Exponent vectors of degree d in X_0..X_n, in the fixed storage order."""
    return tuple(_compositions(d, n + 1))


@dataclass(frozen=True)
class DegreeList:
    degrees: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(d) for d in self.degrees))
        if not self.degrees or any(d < 1 for d in self.degrees):
            raise ValueError("degrees must be positive integers")

    @property
    def n(self) -> int:
        return len(self.degrees)

    def N_d(self, i: int) -> int:
        return math.comb(self.degrees[i] + self.n, self.n)

    @property
    def N(self) -> int:
        """Complex dimension of the projective space of systems."""
        return sum(self.N_d(i) for i in range(self.n)) - 1

    @property
    def D(self) -> int:
        return max(self.degrees)

    @property
    def bezout(self) -> int:
        return math.prod(self.degrees)

    def monomials(self, i: int):
        return monomials(self.degrees[i], self.n)

    def flat_monomials(self) -> list[tuple[int, tuple[int, ...]]]:
        return [(i, mu) for i in range(self.n) for mu in self.monomials(i)]


@dataclass(frozen=True)
class DeltaWeights:
    """Squared Delta weights 1/multinomial per monomial, exact."""

    degrees: tuple[int, ...]
    weights_sq: tuple[tuple[Fraction, ...], ...]
    det_squared: Fraction

    @property
    def weights(self) -> list[float]:
        return [math.sqrt(w) for row in self.weights_sq for w in row]

    def flat_sq(self) -> list[Fraction]:
        return [w for row in self.weights_sq for w in row]

    def det(self, prec: int = DEFAULT_PREC) -> BoundValue:
        return BoundValue.exact(self.det_squared, prec).sqrt()

    def lcm_scale(self) -> list[int]:
        """Integer weights c*w^2 with c the lcm of all multinomials (for exact integer norms)."""
        L = math.lcm(*[w.denominator for w in self.flat_sq()])
        return [int(w * L) for w in self.flat_sq()]


@lru_cache(maxsize=128)
def delta_weights(degrees: tuple[int, ...]) -> DeltaWeights:
    degrees = DegreeList(tuple(degrees)).degrees
    n = len(degrees)
    rows = []
    det_sq = Fraction(1)
    for d in degrees:
        row = tuple(Fraction(1, multinomial(mu)) for mu in monomials(d, n))
        rows.append(row)
        for w in row:
            det_sq *= w
    return DeltaWeights(degrees, tuple(rows), det_sq)


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


def _is_exact_scalar(c) -> bool:
    return isinstance(c, (GaussRational, GaussInteger, int, Fraction))


def to_mpc(c):
    """Convert any supported scalar to mpmath.mpc at the current mp precision."""
    if isinstance(c, GaussInteger):
        return mpmath.mpc(c.re, c.im)
    if isinstance(c, GaussRational):
        return mpmath.mpc(mp.mpf(c.re.numerator) / c.re.denominator,
                          mp.mpf(c.im.numerator) / c.im.denominator)
    if isinstance(c, Fraction):
        return mpmath.mpc(mp.mpf(c.numerator) / c.denominator)
    if isinstance(c, (np.complexfloating, np.floating, np.integer)):
        c = complex(c)
    return mpmath.mpc(c)


@dataclass(frozen=True)
class PolySystem:
    degrees: tuple[int, ...]
    coeffs: tuple[tuple, ...]
    exact: bool = field(default=False, compare=False)

    def __post_init__(self):
        dl = DegreeList(tuple(self.degrees))
        object.__setattr__(self, "degrees", dl.degrees)
        if len(self.coeffs) != dl.n:
            raise ValueError(f"expected {dl.n} equations, got {len(self.coeffs)}")
        rows = []
        exact = True
        for i, row in enumerate(self.coeffs):
            if len(row) != dl.N_d(i):
                raise ValueError(f"equation {i}: expected {dl.N_d(i)} coefficients, got {len(row)}")
            row = tuple(row)
            if all(_is_exact_scalar(c) for c in row):
                row = tuple(GaussRational.of(c) for c in row)
            else:
                exact = False
            rows.append(row)
        object.__setattr__(self, "coeffs", tuple(rows))
        object.__setattr__(self, "exact", exact)

    # construction -----------------------------------------------------------

    @classmethod
    def from_terms(cls, degrees: Sequence[int], equations: Sequence[dict]) -> "PolySystem":
        """Build from per-equation ``{exponent tuple: coefficient}`` dicts."""
        dl = DegreeList(tuple(degrees))
        rows = []
        for i, terms in enumerate(equations):
            mons = dl.monomials(i)
            index = {mu: k for k, mu in enumerate(mons)}
            row = [0] * len(mons)
            for mu, c in terms.items():
                mu = tuple(mu)
                if mu not in index:
                    raise ValueError(f"monomial {mu} does not have degree {dl.degrees[i]} in {dl.n + 1} variables")
                row[index[mu]] = row[index[mu]] + c
            rows.append(tuple(row))
        return cls(dl.degrees, tuple(rows))

    @classmethod
    def binary(cls, coeffs: Sequence) -> "PolySystem":
        """Single binary form sum_j c_j X_0^(d-j) X_1^j from (c_0, ..., c_d)."""
        return cls((len(coeffs) - 1,), (tuple(coeffs),))

    # views ------------------------------------------------------------------

    @property
    def degree_list(self) -> DegreeList:
        return DegreeList(self.degrees)

    @property
    def n(self) -> int:
        return len(self.degrees)

    def flat(self) -> list:
        return [c for row in self.coeffs for c in row]

    def is_zero(self) -> bool:
        if self.exact:
            return all(c.is_zero() for c in self.flat())
        return all(to_mpc(c) == 0 for c in self.flat())

    def scale(self, lam) -> "PolySystem":
        if self.exact and _is_exact_scalar(lam):
            lam = GaussRational.of(lam)
            return PolySystem(self.degrees, tuple(tuple(c * lam for c in row) for row in self.coeffs))
        lam = to_mpc(lam)
        return PolySystem(self.degrees, tuple(tuple(to_mpc(c) * lam for c in row) for row in self.coeffs))

    def numeric(self) -> "PolySystem":
        """Copy with mpc coefficients at the current mp precision."""
        return PolySystem(self.degrees, tuple(tuple(to_mpc(c) for c in row) for row in self.coeffs))

    def terms(self, i: int) -> dict:
        return dict(zip(self.degree_list.monomials(i), self.coeffs[i]))

    def evaluate(self, x: Sequence) -> list:
        x = [to_mpc(v) for v in x]
        out = []
        for i in range(self.n):
            s = mpmath.mpc(0)
            for mu, c in self.terms(i).items():
                s += to_mpc(c) * _mono(x, mu)
            out.append(s)
        return out

    def jacobian(self, x: Sequence) -> mpmath.matrix:
        """n x (n+1) matrix of partial derivatives at x (mpc)."""
        x = [to_mpc(v) for v in x]
        J = mpmath.matrix(self.n, self.n + 1)
        for i in range(self.n):
            for mu, c in self.terms(i).items():
                cc = to_mpc(c)
                for j in range(self.n + 1):
                    if mu[j] == 0:
                        continue
                    nu = list(mu)
                    nu[j] -= 1
                    J[i, j] += cc * mu[j] * _mono(x, nu)
        return J

    def __str__(self):
        from .textio import format_system
        return format_system(self)


def _mono(x, mu) -> mpmath.mpc:
    out = mpmath.mpc(1)
    for xi, e in zip(x, mu):
        if e:
            out *= xi ** e
    return out


# ---------------------------------------------------------------------------
# Delta product and norm
# ---------------------------------------------------------------------------


def _check_same_shape(F: PolySystem, G: PolySystem):
    if F.degrees != G.degrees:
        raise ValueError(f"degree mismatch {F.degrees} vs {G.degrees}")


def inner_delta(F: PolySystem, G: PolySystem):
    """<F, G>_Delta = sum w_mu^2 F_mu conj(G_mu).

    Exact ``GaussRational`` when both systems are exact, otherwise ``mpc`` at
    the current mp precision.
    """
    _check_same_shape(F, G)
    w = delta_weights(F.degrees).flat_sq()
    if F.exact and G.exact:
        s = GaussRational(0)
        for wk, f, g in zip(w, F.flat(), G.flat()):
            s = s + f * g.conjugate() * wk
        return s
    s = mpmath.mpc(0)
    for wk, f, g in zip(w, F.flat(), G.flat()):
        s += to_mpc(f) * mpmath.conj(to_mpc(g)) * (mp.mpf(wk.numerator) / wk.denominator)
    return s


def norm_delta_sq(F: PolySystem):
    """||F||_Delta^2, an exact Fraction for exact systems."""
    w = delta_weights(F.degrees).flat_sq()
    if F.exact:
        return sum((wk * c.norm() for wk, c in zip(w, F.flat())), Fraction(0))
    return mpmath.re(inner_delta(F, F))


def norm_delta(F: PolySystem, prec: int = DEFAULT_PREC) -> BoundValue:
    if F.exact:
        return BoundValue.exact(norm_delta_sq(F), prec).sqrt()
    with mp.workprec(prec + 32):
        v = mpmath.sqrt(norm_delta_sq(F))
        return BoundValue.around(v, v * mp.mpf(2) ** (-prec), prec)


def naive_norm_sq(F: PolySystem):
    """Plain Hermitian norm of the coefficient vector (no Delta weights)."""
    if F.exact:
        return sum((c.norm() for c in F.flat()), Fraction(0))
    return sum(abs(to_mpc(c)) ** 2 for c in F.flat())


# ---------------------------------------------------------------------------
# unitary action
# ---------------------------------------------------------------------------


def unitary_defect(sigma) -> float:
    S = np.array(sigma.tolist() if isinstance(sigma, mpmath.matrix) else sigma, dtype=complex)
    return float(np.max(np.abs(S @ S.conj().T - np.eye(S.shape[0]))))


def _as_mp_matrix(sigma) -> mpmath.matrix:
    if isinstance(sigma, mpmath.matrix):
        return sigma
    S = np.asarray(sigma)
    M = mpmath.matrix(S.shape[0], S.shape[1])
    for i in range(S.shape[0]):
        for j in range(S.shape[1]):
            M[i, j] = to_mpc(S[i, j])
    return M


def _poly_mul(p: dict, q: dict) -> dict:
    out: dict = {}
    for a, ca in p.items():
        for b, cb in q.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, 0) + ca * cb
    return out


def substitute_linear(F: PolySystem, L) -> PolySystem:
    """System G with G(y) = F(L y), for an (n+1)x(n+1) matrix L (mpc arithmetic)."""
    n = F.n
    L = _as_mp_matrix(L)
    unit = [tuple(1 if k == j else 0 for k in range(n + 1)) for j in range(n + 1)]
    forms = [{unit[k]: L[j, k] for k in range(n + 1)} for j in range(n + 1)]
    one = {tuple([0] * (n + 1)): mpmath.mpc(1)}
    powers: dict = {}

    def power(j, e):
        if (j, e) not in powers:
            powers[(j, e)] = one if e == 0 else _poly_mul(power(j, e - 1), forms[j])
        return powers[(j, e)]

    rows = []
    for i in range(n):
        acc: dict = {}
        for mu, c in F.terms(i).items():
            cc = to_mpc(c)
            if cc == 0:
                continue
            term = {tuple([0] * (n + 1)): cc}
            for j, e in enumerate(mu):
                if e:
                    term = _poly_mul(term, power(j, e))
            for k, v in term.items():
                acc[k] = acc.get(k, 0) + v
        rows.append(tuple(acc.get(mu, mpmath.mpc(0)) for mu in F.degree_list.monomials(i)))
    return PolySystem(F.degrees, tuple(rows))


def unitary_apply(sigma, F: PolySystem, tol: float = 1e-10) -> PolySystem:
    """sigma(F)(x) := F(sigma^{-1} x) = F(sigma^* x)."""
    S = _as_mp_matrix(sigma)
    if S.rows != F.n + 1 or S.cols != F.n + 1:
        raise ValueError("unitary has the wrong size")
    if unitary_defect(S) > tol:
        raise ValueError("sigma is not unitary within tolerance")
    return substitute_linear(F, S.H)


def random_unitary(size: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR factorisation of a complex Ginibre matrix."""
    Z = (rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))) / math.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diag(R)
    return Q * (d / np.abs(d))


# ---------------------------------------------------------------------------
# univariate polynomials over Q[i] (coefficient lists, constant term first)
# ---------------------------------------------------------------------------


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def _pdivmod(a: list, b: list) -> tuple[list, list]:
    a, b = _trim(a), _trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [GaussRational(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / b[-1]
        q[k] = c
        for j, bj in enumerate(b):
            r[j + k] = r[j + k] - c * bj
        r = _trim(r)
    return q, r


def _pgcd(a: list, b: list) -> list:
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    if not a:
        return a
    lc = a[-1]
    return [c / lc for c in a]


def _pderiv(p: list) -> list:
    return _trim([p[k] * k for k in range(1, len(p))])


def squarefree_decomposition(p: list) -> list[tuple[list, int]]:
    """Yun's algorithm over Q[i]: p = lc * prod q_k^k with squarefree coprime q_k."""
    p = _trim(p)
    if len(p) <= 1:
        return []
    out = []
    a = _pgcd(p, _pderiv(p))
    b = _pdivmod(p, a)[0]
    c = _pdivmod(_pderiv(p), a)[0]
    d = _trim([ci - bi for ci, bi in zip(c + [GaussRational(0)] * len(b), _pderiv(b) + [GaussRational(0)] * len(c))])
    k = 1
    while len(_trim(b)) > 1:
        a = _pgcd(b, d) if d else b
        b = _pdivmod(b, a)[0]
        if len(_trim(a)) > 1:
            out.append((a, k))
        if len(_trim(b)) <= 1:
            break
        c = _pdivmod(d, a)[0] if d else []
        db = _pderiv(b)
        m = max(len(c), len(db))
        d = _trim([(c[j] if j < len(c) else GaussRational(0)) - (db[j] if j < len(db) else GaussRational(0))
                   for j in range(m)])
        k += 1
    return out


def certified_roots(p: Sequence, prec: int = DEFAULT_PREC) -> list[tuple[mpmath.mpc, mpmath.mpf]]:
    """Roots of a squarefree polynomial (constant term first) with inclusion radii.

    Approximations come from ``mpmath.polyroots``; radii are the Weierstrass
    (Braess-Hadeler) bounds ``deg * |p(z_k) / (lc * prod_{j != k}(z_k - z_j))|``,
    inflated for rounding. Disjoint discs each contain exactly one root; an
    overlap raises.
    """
    with mp.workprec(prec + 64):
        c = [to_mpc(x) for x in p]
        while c and c[-1] == 0:
            c.pop()
        deg = len(c) - 1
        if deg < 1:
            return []
        roots = mpmath.polyroots(list(reversed(c)), maxsteps=400, extraprec=prec + 64)
        if deg == 1:
            roots = [-c[0] / c[1]]
        roots = [mpmath.mpc(z) for z in roots]
        lc = c[-1]
        slack = mp.mpf(2) ** (-(prec + 32))
        out = []
        for k, z in enumerate(roots):
            val = mpmath.polyval(list(reversed(c)), z)
            den = lc
            for j, w in enumerate(roots):
                if j != k:
                    den *= (z - w)
            r = deg * abs(val / den) * (1 + slack) + slack * (1 + abs(z))
            out.append((z, r))
        for k in range(deg):
            for j in range(k + 1, deg):
                if abs(out[k][0] - out[j][0]) <= out[k][1] + out[j][1]:
                    raise ArithmeticError("root inclusion discs overlap; input not squarefree?")
        return out


# ---------------------------------------------------------------------------
# zeros of binary forms
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjZero:
    """Zero of a binary form on P_1(C).

    ``coords`` is unit-norm. ``affine`` is t with zero (1 : t), or None for (0 : 1);
    ``radius`` bounds |t_true - t| for the affine chart (0 for exact points).
    """

    coords: tuple
    multiplicity: int
    affine: object = None
    radius: mpmath.mpf = mpmath.mpf(0)

    @property
    def is_simple(self) -> bool:
        return self.multiplicity == 1

    @classmethod
    def from_affine(cls, t, multiplicity: int = 1, radius=0) -> "ProjZero":
        t = to_mpc(t)
        s = mpmath.sqrt(1 + abs(t) ** 2)
        return cls((1 / s, t / s), multiplicity, t, mp.mpf(radius))

    @classmethod
    def at_infinity(cls, multiplicity: int = 1) -> "ProjZero":
        return cls((mpmath.mpc(0), mpmath.mpc(1)), multiplicity, None, mp.mpf(0))


def binary_coefficients(F: PolySystem) -> list:
    if F.n != 1:
        raise ValueError("binary forms only (n = 1)")
    return list(F.coeffs[0])


def zeros_projective(F: PolySystem, prec: int = DEFAULT_PREC) -> list[ProjZero]:
    """All zeros of a binary form in P_1(C) with multiplicity (sum = degree)."""
    if F.n != 1:
        raise ValueError("zero enumeration is limited to binary forms (n = 1)")
    if F.is_zero():
        raise ValueError("the zero form has no isolated zeros")
    d = F.degrees[0]
    c = binary_coefficients(F)   # c_j multiplies X_0^(d-j) X_1^j ; p(t) = f(1, t)
    zeros: list[ProjZero] = []
    with mp.workprec(prec + 32):
        if F.exact:
            p = _trim(c)
            inf_mult = d - (len(p) - 1)
            for q, k in squarefree_decomposition(p):
                for t, r in certified_roots(q, prec):
                    zeros.append(ProjZero.from_affine(t, k, r))
        else:
            num = [to_mpc(x) for x in c]
            while num and num[-1] == 0:
                num.pop()
            inf_mult = d - (len(num) - 1)
            for t, r in certified_roots(num, prec):
                zeros.append(ProjZero.from_affine(t, 1, r))
        if inf_mult:
            zeros.append(ProjZero.at_infinity(inf_mult))
    if sum(z.multiplicity for z in zeros) != d:
        raise ArithmeticError("root count does not match the degree")
    return zeros


# ---------------------------------------------------------------------------
# condition numbers
# ---------------------------------------------------------------------------


def _zeta_vector(zeta) -> list:
    if isinstance(zeta, ProjZero):
        v = list(zeta.coords)
    else:
        v = [to_mpc(x) for x in zeta]
    nrm = mpmath.sqrt(sum(abs(x) ** 2 for x in v))
    if nrm == 0:
        raise ValueError("zero vector is not a projective point")
    return [x / nrm for x in v]


def _zero_multiplicity(zeta) -> int:
    return zeta.multiplicity if isinstance(zeta, ProjZero) else 1


def hermitian_min_eig(B: mpmath.matrix, prec: int) -> BoundValue:
    """Enclosure of the smallest eigenvalue of a Hermitian matrix.

    From B V = V E + R with V numerically unitary, every eigenvalue of B lies
    within ||R||_F / (1 - ||V^*V - I||_F) of the matching diagonal entry of E
    (Bauer-Fike for normal matrices). A rounding slack proportional to ||B||_F
    is added.
    """
    n = B.rows
    if n == 1:
        v = mpmath.re(B[0, 0])
        tiny = abs(v) * mp.mpf(2) ** (-prec - 8)
        return BoundValue(v - tiny, v + tiny, prec)
    E, V = mp.eighe(B)
    R = B * V - V * mpmath.diag(E)
    rn = mpmath.mnorm(R, "F")
    defect = mpmath.mnorm(V.H * V - mpmath.eye(n), "F")
    if defect >= mp.mpf(1) / 2:
        raise ArithmeticError("eigenvector basis is not close to unitary")
    delta = rn / (1 - defect) + mpmath.mnorm(B, "F") * mp.mpf(2) ** (-prec + 8)
    lam = min(mpmath.re(e) for e in E)
    return BoundValue(lam - delta, lam + delta, prec)


def sigma_min_enclosure(A: mpmath.matrix, prec: int) -> BoundValue:
    lam = hermitian_min_eig(A.H * A, prec)
    lo = max(lam.lower, mp.mpf(0))
    hi = max(lam.upper, mp.mpf(0))
    return BoundValue(lo, hi, prec).sqrt()


def _zero_lipschitz(F: PolySystem, zeta) -> mpmath.mpf:
    """Crude bound on how much sigma_min moves per unit change of the affine root."""
    if not isinstance(zeta, ProjZero) or zeta.radius == 0:
        return mp.mpf(0)
    coeff = sum(abs(to_mpc(c)) for c in F.flat())
    D = max(F.degrees)
    return 4 * D * D * coeff * zeta.radius


def _complement_basis(z: list) -> mpmath.matrix:
    """Orthonormal basis of z-perp by modified Gram-Schmidt against z (columns)."""
    m = len(z)
    basis = [z]
    cols = []
    for j in sorted(range(m), key=lambda k: abs(z[k])):
        v = [mpmath.mpc(1 if k == j else 0) for k in range(m)]
        for _ in range(2):
            for b in basis:
                ip = sum(mpmath.conj(bk) * vk for bk, vk in zip(b, v))
                v = [vk - ip * bk for vk, bk in zip(v, b)]
        nv = mpmath.sqrt(sum(abs(x) ** 2 for x in v))
        if nv < mp.mpf(10) ** (-3):
            continue
        v = [x / nv for x in v]
        basis.append(v)
        cols.append(v)
        if len(cols) == m - 1:
            break
    Q = mpmath.matrix(m, m - 1)
    for j, v in enumerate(cols):
        for i in range(m):
            Q[i, j] = v[i]
    return Q


def mu_norm_at(F: PolySystem, zeta, prec: int = DEFAULT_PREC) -> BoundValue:
    """mu_norm(F, zeta) = ||F||_Delta / sigma_min(Diag(d_i^{-1/2}) DF(zeta)|_{zeta-perp}).

    The tangent space is represented by a Gram-Schmidt basis of zeta-perp.
    """
    if _zero_multiplicity(zeta) > 1:
        return BoundValue.infinite(prec)
    with mp.workprec(prec + 48):
        z = _zeta_vector(zeta)
        J = F.jacobian(z)
        M = J * _complement_basis(z)
        for i, d in enumerate(F.degrees):
            for j in range(M.cols):
                M[i, j] /= mpmath.sqrt(d)
        s = sigma_min_enclosure(M, prec + 16)
        s = _widen(s, _zero_lipschitz(F, zeta), prec + 16)
        if s.lower <= 0:
            return BoundValue.infinite(prec)
        out = norm_delta(F, prec + 16) / s
        return BoundValue(out.lower, out.upper, prec)


def householder_to_e0(z: list) -> mpmath.matrix:
    """Complex Householder reflection H (unitary, Hermitian) with H z parallel to e_0."""
    m = len(z)
    nz = mpmath.sqrt(sum(abs(x) ** 2 for x in z))
    phase = z[0] / abs(z[0]) if z[0] != 0 else mpmath.mpc(1)
    alpha = -phase * nz
    w = list(z)
    w[0] = w[0] - alpha
    ww = sum(abs(x) ** 2 for x in w)
    H = mpmath.eye(m)
    if ww == 0:
        return H
    for i in range(m):
        for j in range(m):
            H[i, j] -= 2 * w[i] * mpmath.conj(w[j]) / ww
    return H


def rho_fiber(F: PolySystem, zeta, prec: int = DEFAULT_PREC, sigma=None) -> BoundValue:
    """Fiber distance rho(F, zeta) through a unitary move of zeta to e_0.

    With G = sigma(F) and sigma(zeta) = e_0, the restricted Jacobian of G at e_0
    is read off the coefficients of X_0^(d_i - 1) X_j; rows are scaled by
    d_i^(-1/2) and the smallest singular value is divided by ||F||_Delta.
    ``sigma`` defaults to a Householder reflection.
    """
    if _zero_multiplicity(zeta) > 1:
        return BoundValue.exact(0, prec)
    with mp.workprec(prec + 48):
        z = _zeta_vector(zeta)
        S = householder_to_e0(z) if sigma is None else _as_mp_matrix(sigma)
        G = unitary_apply(S, F, tol=1e-8)
        n = F.n
        A = mpmath.matrix(n, n)
        for i, d in enumerate(F.degrees):
            terms = G.terms(i)
            for j in range(1, n + 1):
                mu = tuple([d - 1] + [1 if k == j else 0 for k in range(1, n + 1)])
                A[i, j - 1] = to_mpc(terms[mu]) / mpmath.sqrt(d)
        s = sigma_min_enclosure(A, prec + 16)
        s = _widen(s, _zero_lipschitz(F, zeta), prec + 16)
        out = s / norm_delta(F, prec + 16)
        lo = max(out.lower, mp.mpf(0))
        return BoundValue(lo, out.upper, prec)


def _widen(b: BoundValue, r, prec: int) -> BoundValue:
    if r == 0:
        return b
    return BoundValue(max(b.lower - r, mp.mpf(0)), b.upper + r, prec)


def mu_norm_system(F: PolySystem, prec: int = DEFAULT_PREC) -> BoundValue:
    zeros = zeros_projective(F, prec)
    if any(not z.is_simple for z in zeros):
        return BoundValue.infinite(prec)
    vals = [mu_norm_at(F, z, prec) for z in zeros]
    return BoundValue(max(v.lower for v in vals), max(v.upper for v in vals), prec)


def rho_of_system(F: PolySystem, prec: int = DEFAULT_PREC) -> BoundValue:
    zeros = zeros_projective(F, prec)
    if any(not z.is_simple for z in zeros):
        return BoundValue.exact(0, prec)
    vals = [rho_fiber(F, z, prec) for z in zeros]
    return BoundValue(min(v.lower for v in vals), min(v.upper for v in vals), prec)


def rho_squared_binary_quadratic(a, b, c) -> Fraction:
    """rho(F)^2 = |b^2 - 4ac| / (2 ||F||_Delta^2) for F = a X0^2 + b X0 X1 + c X1^2.

    Derived from rho(F, zeta)^2 = |p'(t)|^2 (1 + |t|^2)^(2 - d) / (d ||F||^2) at
    the roots t of p(t) = F(1, t); for d = 2 both roots give |p'(t)|^2 = |disc|.
    """
    a, b, c = (GaussRational.of(x) for x in (a, b, c))
    W = a.norm() + b.norm() / 2 + c.norm()
    if W == 0:
        raise ValueError("zero form")
    disc = b * b - a * c * 4
    # |disc| = sqrt(N(disc)) is rational only when N(disc) is a square
    r = _exact_sqrt(disc.norm())
    if r is None:
        raise ValueError("|disc| is irrational; use rho_binary_quadratic_le")
    return r / (2 * W)


def _exact_sqrt(q: Fraction) -> Fraction | None:
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def rho_binary_quadratic_le(a, b, c, eps) -> bool:
    """Exact decision of rho(F) <= eps: N(b^2 - 4ac) <= 4 W^2 eps^4 with W = ||F||_Delta^2."""
    a, b, c = (GaussRational.of(x) for x in (a, b, c))
    eps = Fraction(eps)
    W = a.norm() + b.norm() / 2 + c.norm()
    disc = b * b - a * c * 4
    return disc.norm() <= 4 * W * W * eps ** 4


def rho_binary_quadratic(a, b, c, prec: int = DEFAULT_PREC) -> BoundValue:
    """Enclosure of rho(F) from the discriminant closed form."""
    a, b, c = (GaussRational.of(x) for x in (a, b, c))
    W = a.norm() + b.norm() / 2 + c.norm()
    disc = b * b - a * c * 4
    return (BoundValue.exact(disc.norm(), prec).sqrt() / (BoundValue.exact(W, prec) * 2)).sqrt()


def _exact_affine_root(p: list, t_approx, den_bound: int) -> GaussRational | None:
    """Gauss-rational root of p (constant term first) near t_approx, if there is one.

    A rational root's denominator divides N(leading coefficient), so rounding
    the approximation with that denominator bound and testing exactly suffices.
    """
    re = Fraction(str(mpmath.nstr(mpmath.re(t_approx), 40))).limit_denominator(den_bound)
    im = Fraction(str(mpmath.nstr(mpmath.im(t_approx), 40))).limit_denominator(den_bound)
    t = GaussRational(re, im)
    val = GaussRational(0)
    for c in reversed(p):
        val = val * t + c
    return t if val.is_zero() else None


def rho_binary_decide(F: PolySystem, eps, prec: int = DEFAULT_PREC) -> bool | None:
    """Decide rho(F) <= eps for an exact binary form; None when undecidable at ``prec``.

    Zeros at infinity and Gauss-rational zeros give rational rho(F, zeta)^2,
    compared exactly; other zeros use the rho_fiber enclosure.
    """
    if not F.exact or F.n != 1:
        raise ValueError("exact binary forms only")
    eps = Fraction(eps)
    d = F.degrees[0]
    c = list(F.coeffs[0])
    W = norm_delta_sq(F)
    p = _trim(c)
    lc_norm = p[-1].norm()
    den_bound = max(1, int(lc_norm.numerator * lc_norm.denominator))
    undecided = False
    for z in zeros_projective(F, prec):
        if not z.is_simple:
            return True
        if z.affine is None:
            r2 = c[d - 1].norm() / (d * W)
            if r2 <= eps * eps:
                return True
            continue
        t = _exact_affine_root(p, z.affine, den_bound)
        if t is not None:
            dp = GaussRational(0)
            for j in range(len(p) - 1, 0, -1):
                dp = dp * t + p[j] * j
            r2 = dp.norm() * (1 + t.norm()) ** (2 - d) / (d * W)
            if r2 <= eps * eps:
                return True
            continue
        r = rho_fiber(F, z, prec)
        if r.certainly_le(eps):
            return True
        if not r.certainly_gt(eps):
            undecided = True
    return None if undecided else False
