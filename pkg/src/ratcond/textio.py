"""Plain-text formats for points, matrices and polynomial systems.

Point:   ``a/b:c/d:...`` (entries may be Gauss rationals such as ``1/2+3 i``).
Matrix:  rows separated by ``;``, entries by ``,`` (see :func:`linear.parse_matrix`).
System:  a header line ``degrees: 2,3`` followed by one polynomial per line,
         written as a sum of terms ``c*X0^a*X1^b``. Coefficients containing a
         sign or an ``i`` are wrapped in parentheses, e.g. ``(1/2-3 i)*X0^2``.
         Lines starting with ``#`` are comments.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

from .gauss import GaussRational, parse_gauss_rational
from .linear import SquareMatrix, parse_matrix
from .polysys import PolySystem, to_mpc

__all__ = ["format_point", "parse_point", "format_matrix", "parse_matrix",
           "format_system", "parse_system"]


def parse_point(text: str) -> list[GaussRational]:
    parts = [p for p in text.strip().split(":")]
    if not parts or any(not p.strip() for p in parts):
        raise ValueError(f"malformed point {text!r}")
    return [parse_gauss_rational(p) for p in parts]


def format_point(coords: Sequence) -> str:
    return ":".join(_format_coeff(GaussRational.of(c), bare=True) for c in coords)


def format_matrix(M) -> str:
    return str(SquareMatrix.of(M))


# ---------------------------------------------------------------------------
# systems
# ---------------------------------------------------------------------------


def _format_coeff(c, bare: bool = False) -> str:
    if isinstance(c, GaussRational):
        s = str(c)
        if bare or (c.im == 0 and c.re >= 0):
            return s
        return f"({s})"
    v = to_mpc(c)
    return f"({float(v.real)!r}{float(v.imag):+}j)"


def _format_monomial(mu: tuple[int, ...]) -> str:
    parts = []
    for j, e in enumerate(mu):
        if e == 1:
            parts.append(f"X{j}")
        elif e > 1:
            parts.append(f"X{j}^{e}")
    return "*".join(parts)


def format_system(F: PolySystem) -> str:
    lines = ["degrees: " + ",".join(str(d) for d in F.degrees)]
    for i in range(F.n):
        terms = []
        for mu, c in F.terms(i).items():
            if isinstance(c, GaussRational) and c.is_zero():
                continue
            mono = _format_monomial(mu)
            coeff = _format_coeff(c)
            terms.append(f"{coeff}*{mono}" if mono else coeff)
        lines.append(" + ".join(terms) if terms else "0")
    return "\n".join(lines)


def _split_terms(line: str) -> list[str]:
    """Split at top-level + and - (a sign directly after ``^`` or ``*`` belongs to the factor)."""
    out, cur, depth = [], "", 0
    for ch in line:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {line!r}")
        if ch in "+-" and depth == 0:
            prev = cur.rstrip()[-1:] if cur.strip() else ""
            if prev and prev not in "^*":
                out.append(cur)
                cur = ch
                continue
        cur += ch
    if depth:
        raise ValueError(f"unbalanced parentheses in {line!r}")
    out.append(cur)
    return [t.strip() for t in out if t.strip()]


_VAR = re.compile(r"^X(\d+)(?:\^(\d+))?$")


def _parse_term(term: str, nvars: int) -> tuple[tuple[int, ...], GaussRational]:
    sign = 1
    t = term.replace(" ", "")
    while t and t[0] in "+-":
        if t[0] == "-":
            sign = -sign
        t = t[1:]
    coeff = GaussRational(sign)
    mu = [0] * nvars
    factors, cur, depth = [], "", 0
    for ch in t:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "*" and depth == 0:
            factors.append(cur)
            cur = ""
        else:
            cur += ch
    factors.append(cur)
    for f in factors:
        if not f:
            raise ValueError(f"empty factor in term {term!r}")
        m = _VAR.match(f)
        if m:
            j = int(m.group(1))
            if j >= nvars:
                raise ValueError(f"variable X{j} out of range (system has X0..X{nvars - 1})")
            mu[j] += int(m.group(2) or 1)
        else:
            coeff = coeff * parse_gauss_rational(f)
    return tuple(mu), coeff


def parse_system(text: str) -> PolySystem:
    """Parse the system format; variables are X0..Xn with n the number of equations."""
    degrees = None
    polys = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        low = line.lstrip("#").strip().lower()
        if low.startswith("degrees"):
            body = line.split(":", 1)[1] if ":" in line else low[len("degrees"):]
            degrees = tuple(int(x) for x in re.split(r"[,\s]+", body.strip().strip("()")) if x)
            continue
        if line.startswith("#"):
            continue
        polys.append(line)
    if degrees is None:
        raise ValueError("missing 'degrees:' header")
    if len(polys) != len(degrees):
        raise ValueError(f"header lists {len(degrees)} degrees but {len(polys)} polynomials were given")
    nvars = len(degrees) + 1
    eqs = []
    for i, line in enumerate(polys):
        terms: dict = {}
        if line != "0":
            for t in _split_terms(line):
                mu, c = _parse_term(t, nvars)
                if sum(mu) != degrees[i]:
                    raise ValueError(f"term {t!r} has degree {sum(mu)}, expected {degrees[i]}")
                terms[mu] = terms.get(mu, GaussRational(0)) + c
        eqs.append(terms)
    return PolySystem.from_terms(degrees, eqs)


def fraction_list(text: str) -> list[Fraction]:
    """Comma-separated rationals or decimals (``0.05`` becomes 1/20)."""
    return [Fraction(x.strip()) for x in text.split(",") if x.strip()]
