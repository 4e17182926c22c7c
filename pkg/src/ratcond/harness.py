"""Experiment runner: validated configs, dispatch, CSV/JSON output and text reports."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from dataclasses import asdict, dataclass, field, fields
from fractions import Fraction
from pathlib import Path
from typing import Any

import mpmath
import numpy as np

from . import __version__
from .census import (CensusSpec, mobius_inversion_check, count_volume_check, projective_count_check, delta_count_check,
                     run_census, tail_probability, visible_fraction)
from .exact import (DEFAULT_PREC, BoundValue, artin_estimate_check, ball_volume_K, linear_bound_constants,
                    nonlinear_bound_constants, pi_bound, zeta)
from .gauss import GaussRational
from .lattice import DEFAULT_CAP, davenport_ball
from .newton import (AffineSystem, approx_zero_census, certify_approx_zero, corollary41_precision,
                     gamma_quantity, denominator_structure_check)
from .polysys import (PolySystem, inner_delta, mu_norm_system, random_unitary, rho_fiber, rho_of_system,
                      unitary_apply, unitary_defect, zeros_projective)
from .textio import parse_point, parse_system

CSV_HEADER = ("epsilon", "N", "Ncal", "empirical_tail", "bound", "vacuous")
OUT_ENV = "RATCOND_OUT"
KINDS = ("constants", "census-linear", "census-poly", "tail-report", "davenport",
         "newton-cert", "precision-census", "check-all")


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    kind: str
    n: int | None = None
    degrees: tuple[int, ...] | None = None
    H: Fraction | None = None
    epsilons: tuple[Fraction, ...] = ()
    precision_bits: int = DEFAULT_PREC
    out: str | None = None
    jobs: int = 1
    cap: int = DEFAULT_CAP
    system: str | None = None       # polysys text format (affine system = X0 set to 1)
    zeta: str | None = None         # affine zero, point format
    z: str | None = None            # candidate approximate zero, point format
    m_max: int = 50
    log_base: str = "2"
    w: float = 4.0                  # headline check: Pr[k < w n^(5/2)] against 1 - 2/w

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}")
        if self.H is not None:
            self.H = Fraction(self.H)
            if self.H < 1:
                raise ConfigError("H must be at least 1")
        self.epsilons = tuple(Fraction(e) for e in self.epsilons)
        if self.degrees is not None:
            self.degrees = tuple(int(d) for d in self.degrees)
        if self.precision_bits < 32:
            raise ConfigError("precision_bits must be at least 32")
        if self.jobs < 1 or self.cap < 1 or self.m_max < 1:
            raise ConfigError("jobs, cap and m_max must be positive")
        if self.log_base not in ("2", "e"):
            raise ConfigError("log_base must be '2' or 'e'")
        needs_eps = ("census-linear", "census-poly", "tail-report")
        if self.kind in needs_eps + ("constants",) and not self.epsilons:
            raise ConfigError("epsilon list is empty")
        if self.kind in needs_eps and self.H is None:
            raise ConfigError(f"{self.kind} needs H")
        if self.kind in ("census-linear",) and self.n is None:
            raise ConfigError("census-linear needs n")
        if self.kind == "census-poly" and self.degrees is None:
            raise ConfigError("census-poly needs degrees")
        if self.kind == "constants" and self.n is None and self.degrees is None:
            raise ConfigError("constants needs n or degrees")
        if self.kind in ("newton-cert", "precision-census") and not (self.system and self.zeta):
            raise ConfigError(f"{self.kind} needs a system and a zero")
        if self.kind == "newton-cert" and not self.z:
            raise ConfigError("newton-cert needs a candidate point z")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        d = dict(d)
        if "epsilons" in d:
            d["epsilons"] = tuple(Fraction(str(e)) for e in d["epsilons"])
        if d.get("H") is not None:
            d["H"] = Fraction(str(d["H"]))
        return cls(**d)

    @classmethod
    def from_json(cls, path: str | Path) -> "ExperimentConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["H"] = None if self.H is None else str(self.H)
        d["epsilons"] = [str(e) for e in self.epsilons]
        d["degrees"] = None if self.degrees is None else list(self.degrees)
        return d

    def census_spec(self) -> CensusSpec:
        if self.kind == "census-poly" or (self.kind == "tail-report" and self.degrees is not None):
            return CensusSpec.nonlinear(self.degrees, self.H, self.epsilons)
        return CensusSpec.linear(self.n, self.H, self.epsilons)

    def out_dir(self) -> Path:
        return Path(self.out or os.environ.get(OUT_ENV) or "ratcond-out")


@dataclass
class CheckRow:
    name: str
    passed: bool
    lhs: str = ""
    rhs: str = ""
    note: str = ""


@dataclass
class RunManifest:
    config: dict
    version: str
    stages: list[dict] = field(default_factory=list)
    checks: list[CheckRow] = field(default_factory=list)
    uncertainty: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    files: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["passed"] = self.passed
        return d


# ---------------------------------------------------------------------------
# formatting
# ---------------------------------------------------------------------------


def fmt_bound(b: BoundValue, digits: int = 12) -> str:
    if b.is_infinite:
        return "inf"
    return mpmath.nstr(b.upper, digits)


def _bv(b: BoundValue) -> dict:
    if b.is_infinite:
        return {"lower": "inf", "upper": "inf"}
    return {"lower": mpmath.nstr(b.lower, 20), "upper": mpmath.nstr(b.upper, 20)}


def _fmt_frac(x: Fraction, digits: int = 12) -> str:
    return f"{float(x):.{digits}g}"


def census_csv(report) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(CSV_HEADER)
    for row in tail_probability(report):
        wr.writerow([_fmt_frac(row["epsilon"]), row["N"], row["Ncal"], _fmt_frac(row["empirical_tail"]),
                     fmt_bound(row["bound"]), "true" if row["vacuous"] else "false"])
    return buf.getvalue()


def _write(manifest: RunManifest, out: Path, name: str, text: str):
    out.mkdir(parents=True, exist_ok=True)
    p = out / name
    with open(p, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    manifest.files.append(str(p))


def _check(manifest: RunManifest, name: str, passed: bool, lhs="", rhs="", note=""):
    manifest.checks.append(CheckRow(name, bool(passed), str(lhs), str(rhs), note))


# ---------------------------------------------------------------------------
# experiment bodies
# ---------------------------------------------------------------------------


def _constants(cfg: ExperimentConfig, man: RunManifest):
    prec = cfg.precision_bits
    out = {}
    if cfg.n is not None:
        rows = []
        for e in cfg.epsilons:
            c = linear_bound_constants(cfg.n, e, prec)
            rows.append({"epsilon": str(e), "T_n": str(c.T), "T_n_power": f"{2 * max(4, cfg.n)}^{2 * cfg.n ** 4 + 4 * cfg.n ** 2}",
                         "B": _bv(c.B), "C": _bv(c.C), "L1": _bv(c.L1), "L_prime": _bv(c.L_prime),
                         "sigma": _bv(c.sigma), "K": _bv(c.K)})
        out["linear"] = rows
    if cfg.degrees is not None:
        rows = []
        for e in cfg.epsilons:
            c = nonlinear_bound_constants(cfg.degrees, e, prec)
            base = max(8, 4 * (c.D + 1))
            rows.append({"epsilon": str(e), "N": c.N, "bezout": c.bezout, "D": c.D, "frak_C": c.frak_C,
                         "T_bar_power": f"{base}^{4 * (c.N ** 2 + 3 * (c.n + 2) ** 2 * (c.N + 1))}",
                         "T_bar": str(c.T_bar),
                         "det_delta_sq": str(c.det_delta_sq), "frak_D": _bv(c.frak_D),
                         "G": _bv(c.G), "F": _bv(c.F), "L1_bar": _bv(c.L1_bar), "L_prime_bar": _bv(c.L_prime_bar)})
        out["nonlinear"] = rows
    man.results["constants"] = out
    _write(man, cfg.out_dir(), "constants.json", json.dumps(out, indent=2) + "\n")


def _census(cfg: ExperimentConfig, man: RunManifest, tail: bool = False):
    spec = cfg.census_spec()
    t0 = time.perf_counter()
    rep = run_census(spec, cfg.jobs, cfg.cap)
    man.stages.append({"stage": "census", "points": rep.total_points, "visible": rep.visible_points,
                       "seconds": round(time.perf_counter() - t0, 3)})
    man.uncertainty = {str(e): v for e, v in rep.uncertain.items()}
    man.results["census"] = {
        "spec": spec.to_dict(),
        "N": {str(e): v for e, v in rep.N.items()},
        "Ncal": {str(e): v for e, v in rep.Ncal.items()},
        "bounds": {str(e): _bv(b) for e, b in rep.bounds.items()},
        "bound_provenance": "exact.linear_bound_constants(n, eps).tail_bound(H)" if spec.kind == "linear"
        else "exact.nonlinear_bound_constants(degrees, eps).tail_bound(H)",
    }
    _write(man, cfg.out_dir(), f"{cfg.kind}.csv", census_csv(rep))
    for e in spec.with_unit_eps():
        if rep.uncertain[e]:
            continue
        mob = mobius_inversion_check(rep, e)
        _check(man, f"mobius eps={e}", mob.ok, note="" if mob.ok else f"first failure {mob.first_failure}")
    if spec.kind == "linear":
        for c in (count_volume_check(rep), projective_count_check(rep)):
            _check(man, c.name, c.passed, fmt_bound(c.lhs), fmt_bound(c.rhs))
    else:
        c = delta_count_check(rep)
        _check(man, c.name, c.passed, fmt_bound(c.lhs), fmt_bound(c.rhs))
    if tail:
        rows = tail_probability(rep)
        man.results["tails"] = [{"epsilon": str(r["epsilon"]), "empirical": _fmt_frac(r["empirical_tail"]),
                                 "bound": fmt_bound(r["bound"]), "vacuous": r["vacuous"]} for r in rows]
        if spec.kind == "linear":
            n = spec.n
            lead = float(linear_bound_constants(n, 1).lead.mid)
            for r in rows:
                e = r["epsilon"]
                _check(man, f"tail lead term eps={e}", float(r["empirical_tail"]) <= float(e) * lead + 0.15,
                       _fmt_frac(r["empirical_tail"]), f"{float(e) * lead + 0.15:.6g}",
                       "continuous-model lead term plus 0.15 slack")
            man.results["headline_probability"] = _headline(cfg, rep)
    return rep


def _headline(cfg: ExperimentConfig, rep) -> dict:
    """Pr[mu < w n^(5/2)] on the census; mu >= k so this bounds Pr[k < w n^(5/2)] from below."""
    n = rep.spec.n
    w = cfg.w
    eps = Fraction(1) / Fraction(w * n ** 2.5).limit_denominator(10 ** 6)
    spec = CensusSpec.linear(n, rep.H, (eps,))
    r2 = run_census(spec, cfg.jobs, cfg.cap)
    prob = 1 - r2.tail(eps)
    return {"w": w, "threshold": float(1 / eps), "pr_mu_below": float(prob), "one_minus_2_over_w": 1 - 2 / w,
            "holds": bool(prob >= 1 - 2 / w)}


def _davenport(cfg: ExperimentConfig, man: RunManifest):
    Hmax = int(cfg.H or 20)
    rows = []
    for m, top in ((2, Hmax), (3, min(Hmax, 20))):
        for H in range(1, top + 1):
            r = davenport_ball(m, H, cfg.precision_bits)
            rows.append({"dim": m, "H": H, "count": r.count, "volume": fmt_bound(r.volume),
                         "bound": fmt_bound(r.bound), "pass": r.passed})
            diff = BoundValue.exact(r.count) - r.volume
            _check(man, f"davenport m={m} H={H}", r.passed, mpmath.nstr(max(abs(diff.lower), abs(diff.upper)), 12),
                   fmt_bound(r.bound), f"count {r.count}")
    man.results["davenport"] = rows
    buf = io.StringIO()
    wr = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
    wr.writeheader()
    wr.writerows(rows)
    _write(man, cfg.out_dir(), "davenport.csv", buf.getvalue())


def load_affine(cfg: ExperimentConfig) -> tuple[AffineSystem, list]:
    text = cfg.system
    if text and os.path.exists(text):
        text = Path(text).read_text()
    F = AffineSystem.dehomogenize(parse_system(text.replace("\\n", "\n")))
    zeta = parse_point(cfg.zeta)
    return F, zeta


def _newton(cfg: ExperimentConfig, man: RunManifest):
    F, zeta = load_affine(cfg)
    z = parse_point(cfg.z)
    res = certify_approx_zero(F, zeta, z, prec=cfg.precision_bits)
    man.results["cert"] = res.to_dict()
    _write(man, cfg.out_dir(), "newton-cert.json", json.dumps(res.to_dict(), indent=2) + "\n")
    if res.certified:
        _check(man, "quadratic convergence", bool(res.convergence_ok))


def _precision(cfg: ExperimentConfig, man: RunManifest):
    F, zeta = load_affine(cfg)
    prec = cfg.precision_bits
    t0 = time.perf_counter()
    cen = approx_zero_census(F, zeta, cfg.m_max, prec)
    man.stages.append({"stage": "disc census", "m_max": cfg.m_max, "seconds": round(time.perf_counter() - t0, 3)})
    rep = denominator_structure_check(cen, prec)
    man.uncertainty = {"disc": rep.uncertain}
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(("m", "radius", "lattice_count", "exact_count", "uncertain"))
    for r in cen.rows:
        wr.writerow((r.m, mpmath.nstr(r.radius.mid, 12), r.lattice_count, r.exact_count, r.uncertain))
    _write(man, cfg.out_dir(), "precision-census.csv", buf.getvalue())
    _check(man, "denominator structure (i)", rep.item_i, note=f"H in {rep.item_i_range}")
    _check(man, "denominator structure (ii)", rep.item_ii, note=f"m in {rep.item_ii_range}")
    _check(man, "denominator structure (iii)", rep.item_iii, note=f"failures {rep.item_iii_failures[:10]}")
    wit = corollary41_precision(F, zeta, base=cfg.log_base if cfg.log_base == "e" else 2, prec=prec)
    man.results["gamma"] = _bv(cen.gamma)
    man.results["precision_witness"] = {"p": wit.p, "threshold": fmt_bound(wit.threshold), "denominator": wit.denominator,
                                        "point": [str(c) for c in wit.point], "certified": wit.certified,
                                        "log_base": cfg.log_base}
    man.results["literal_sandwich"] = rep.item_iii_literal


# ---------------------------------------------------------------------------
# property batteries shared by check-all and the tests
# ---------------------------------------------------------------------------


def random_binary_form(rng: np.random.Generator, d: int, bound: int = 6) -> PolySystem:
    c = [GaussRational(int(rng.integers(-bound, bound + 1)), int(rng.integers(-bound, bound + 1)))
         for _ in range(d + 1)]
    return PolySystem.binary(c)


def mu_rho_consistency(count: int, rng: np.random.Generator, d: int = 2,
                       prec: int = DEFAULT_PREC) -> tuple[int, float]:
    """(systems tested, worst |mu * rho - 1| upper bound) over random forms with simple zeros."""
    worst, done = 0.0, 0
    while done < count:
        F = random_binary_form(rng, d)
        if F.is_zero():
            continue
        zs = zeros_projective(F, prec)
        if any(not z.is_simple for z in zs):
            continue
        mu = mu_norm_system(F, prec)
        rho = rho_of_system(F, prec)
        prod = mu * rho
        worst = max(worst, float(max(abs(prod.upper - 1), abs(prod.lower - 1))))
        done += 1
    return done, worst


def unitary_invariance(n_unitaries: int, n_systems: int, rng: np.random.Generator,
                       degrees=(2,), prec: int = 96) -> dict:
    """Worst deviations of <sigma F, sigma G>_Delta and rho(sigma F, sigma zeta) under random unitaries."""
    worst_ip = worst_rho = worst_defect = 0.0
    size = len(degrees) + 1
    with mpmath.workprec(prec):
        systems = []
        while len(systems) < n_systems:
            F = random_binary_form(rng, degrees[0])
            G = random_binary_form(rng, degrees[0])
            zs = zeros_projective(F, prec) if not F.is_zero() else []
            if not zs or any(not z.is_simple for z in zs) or G.is_zero():
                continue
            systems.append((F, G, zs[0], inner_delta(F, G), rho_fiber(F, zs[0], prec)))
        for _ in range(n_unitaries):
            S = random_unitary(size, rng)
            worst_defect = max(worst_defect, unitary_defect(S))
            Sm = mpmath.matrix([[mpmath.mpc(complex(v)) for v in row] for row in S])
            for F, G, zeta, ip, rho in systems:
                sF, sG = unitary_apply(Sm, F), unitary_apply(Sm, G)
                worst_ip = max(worst_ip, float(abs(inner_delta(sF, sG) - mpmath.mpc(complex(ip)))))
                sz = Sm * mpmath.matrix(list(zeta.coords))
                r2 = rho_fiber(sF, [sz[i] for i in range(size)], prec)
                worst_rho = max(worst_rho, float(abs(r2.mid - rho.mid)) + float(r2.width + rho.width))
    return {"inner_product": worst_ip, "rho": worst_rho, "defect": worst_defect}


def gamma_convergence(count: int, rng: np.random.Generator, prec: int = DEFAULT_PREC) -> tuple[int, bool]:
    """Random Gauss-rational starts in the certified disc of x^2 - 1 around 1; all traces checked."""
    f = AffineSystem.univariate([-1, 0, 1])
    g = gamma_quantity(f, 1, prec)
    r = float((BoundValue.exact(0, prec) + certify_approx_zero(f, 1, 1, prec=prec).radius).lower)
    ok, done = True, 0
    while done < count:
        u = rng.uniform(-1, 1, 2)
        if u @ u > 1:
            continue
        z = GaussRational(Fraction(1) + Fraction(u[0] * r).limit_denominator(10 ** 6),
                          Fraction(u[1] * r).limit_denominator(10 ** 6))
        res = certify_approx_zero(f, 1, z, prec=prec, gamma=g)
        if not res.certified:
            continue
        ok = ok and bool(res.convergence_ok) and len(res.iterates) == 5
        done += 1
    return done, ok


def _check_all(cfg: ExperimentConfig, man: RunManifest):
    prec = cfg.precision_bits
    rng = np.random.default_rng(20240601)
    H = int(cfg.H or 12)
    t0 = time.perf_counter()
    rep = run_census(CensusSpec.linear(2, H, (Fraction(1, 20),)), cfg.jobs, cfg.cap)
    for h in range(1, H + 1):
        sub = rep.at_height(h)
        for c in (count_volume_check(sub, prec), projective_count_check(sub, prec)):
            _check(man, f"{c.name} H={h}", c.passed, fmt_bound(c.lhs), fmt_bound(c.rhs))
    frac = visible_fraction(rep)
    with mpmath.workprec(80):
        limit = 90 / mpmath.pi ** 4
    _check(man, f"visible fraction H={H}", abs(float(frac) - float(limit)) <= 0.02, f"{float(frac):.5f}",
           f"{float(limit):.5f}", "tolerance 0.02 at this height")
    for e in (Fraction(1), Fraction(1, 20)):
        _check(man, f"mobius linear eps={e}", mobius_inversion_check(rep, e).ok)
    rp = run_census(CensusSpec.nonlinear((2,), 4, (Fraction(3, 10),)), cfg.jobs, cfg.cap)
    for e in (Fraction(1), Fraction(3, 10)):
        _check(man, f"mobius nonlinear eps={e}", mobius_inversion_check(rp, e).ok)
    man.stages.append({"stage": "censuses", "seconds": round(time.perf_counter() - t0, 3)})
    for m, top in ((2, 50), (3, 10)):
        ok = all(davenport_ball(m, h, prec).passed for h in range(1, top + 1))
        _check(man, f"davenport m={m} H<={top}", ok)
    done, worst = mu_rho_consistency(100, rng, prec=prec)
    _check(man, "mu*rho = 1", worst <= 1e-9, f"{worst:.3g}", "1e-9", f"{done} binary quadratics")
    inv = unitary_invariance(10, 5, rng)
    _check(man, "unitary invariance", inv["inner_product"] <= 1e-9 and inv["rho"] <= 1e-9
           and inv["defect"] < 1e-12, f"{max(inv['inner_product'], inv['rho']):.3g}", "1e-9")
    done, ok = gamma_convergence(50, rng, prec)
    _check(man, "gamma-theorem convergence", ok, note=f"{done} starts")
    f = AffineSystem.univariate([-1, 0, 1])
    rep40 = denominator_structure_check(approx_zero_census(f, 1, 200, prec), prec)
    _check(man, "denominator structure (i)-(iii)", rep40.passed)
    _check(man, "artin estimate m<=50", artin_estimate_check(50, prec))
    rec = all((ball_volume_K(l - 2, prec) * pi_bound(prec) * 2 / l).overlaps(ball_volume_K(l, prec))
              for l in range(2, 61))
    _check(man, "K recurrence l<=60", rec)
    with mpmath.workprec(prec + 64):
        z2, z4 = mpmath.pi ** 2 / 6, mpmath.pi ** 4 / 90
    _check(man, "zeta enclosures", zeta(2, prec).contains(z2) and zeta(4, prec).contains(z4))


_DISPATCH = {
    "constants": _constants,
    "census-linear": _census,
    "census-poly": _census,
    "tail-report": lambda c, m: _census(c, m, tail=True),
    "davenport": _davenport,
    "newton-cert": _newton,
    "precision-census": _precision,
    "check-all": _check_all,
}


def run(cfg: ExperimentConfig) -> RunManifest:
    man = RunManifest(cfg.to_dict(), __version__)
    t0 = time.perf_counter()
    _DISPATCH[cfg.kind](cfg, man)
    man.stages.append({"stage": "total", "seconds": round(time.perf_counter() - t0, 3)})
    _write(man, cfg.out_dir(), f"{cfg.kind}-manifest.json", json.dumps(_jsonable(man.to_dict()), indent=2) + "\n")
    return man


def _jsonable(x: Any):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, BoundValue):
        return _bv(x)
    return x


def report(man: RunManifest) -> str:
    """Human-readable summary of a run."""
    lines = [f"ratcond {man.version}  kind={man.config['kind']}"]
    if "tails" in man.results:
        lines.append(f"{'epsilon':>10} {'empirical':>12} {'bound':>14}  vacuous")
        for r in man.results["tails"]:
            lines.append(f"{r['epsilon']:>10} {r['empirical']:>12} {r['bound']:>14}  {'yes' if r['vacuous'] else 'no'}")
    if "headline_probability" in man.results:
        h = man.results["headline_probability"]
        lines.append(f"Pr[mu < {h['threshold']:.4g}] = {h['pr_mu_below']:.4f}  vs 1 - 2/w = {h['one_minus_2_over_w']:.4f}")
    if "census" in man.results:
        c = man.results["census"]
        for e in c["N"]:
            lines.append(f"eps={e}: N={c['N'][e]} Ncal={c['Ncal'][e]} uncertain={man.uncertainty.get(e, 0)}")
    for ch in man.checks:
        extra = f"  lhs={ch.lhs} rhs={ch.rhs}" if ch.lhs or ch.rhs else ""
        note = f"  ({ch.note})" if ch.note else ""
        lines.append(f"[{'PASS' if ch.passed else 'FAIL'}] {ch.name}{extra}{note}")
    if "cert" in man.results:
        c = man.results["cert"]
        lines.append(f"certified={c['certified']} gamma<={c['gamma_upper']['upper']} "
                     f"radius>={c['radius']['lower']} convergence_ok={c['convergence_ok']}")
    if "precision_witness" in man.results:
        w = man.results["precision_witness"]
        lines.append(f"precision p={w['p']} (threshold {w['threshold']}), denominator {w['denominator']}, "
                     f"point {w['point']}, certified={w['certified']}")
    if "constants" in man.results:
        lines.append(json.dumps(man.results["constants"], indent=2))
    for f in man.files:
        lines.append(f"wrote {f}")
    return "\n".join(lines)
