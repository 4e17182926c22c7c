"""Command-line entry point: ``ratcond <subcommand> [flags]``."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from .harness import KINDS, ConfigError, ExperimentConfig, report, run
from .lattice import ResourceCapExceeded


def _eps_list(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _degrees(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.replace("(", "").replace(")", "").split(",") if x.strip())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ratcond", description="Condition numbers, heights and exhaustive "
                                "censuses of rational inputs of bounded height.")
    sub = p.add_subparsers(dest="kind", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, help="matrix size (linear experiments)")
    common.add_argument("--degrees", type=_degrees, help="degree list, e.g. 2 or 2,3")
    common.add_argument("--H", type=Fraction, help="height cap (rational)")
    common.add_argument("--eps", type=_eps_list, default=(), help="comma-separated epsilons")
    common.add_argument("--precision-bits", type=int, default=128)
    common.add_argument("--out", help="output directory (default $RATCOND_OUT or ./ratcond-out)")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--cap", type=int, default=10 ** 8, help="maximum predicted enumeration size")
    common.add_argument("--config", help="JSON config file; command-line flags are ignored when given")
    helps = {
        "constants": "evaluate the bound constants",
        "census-linear": "exhaustive census of integer matrices",
        "census-poly": "exhaustive census of Z[i] binary forms",
        "tail-report": "census plus empirical tails against the theorem bounds",
        "davenport": "lattice counts in discs and 3-balls against the discrepancy bound",
        "newton-cert": "certify an approximate zero",
        "precision-census": "count approximate zeros by denominator near a zero",
        "check-all": "run the property battery at desk scale",
    }
    for k in KINDS:
        sp = sub.add_parser(k, parents=[common], help=helps[k])
        if k in ("newton-cert", "precision-census"):
            sp.add_argument("--system", required=False, help="system text or a file containing it")
            sp.add_argument("--zeta", help="affine zero, e.g. 1 or 1/2:1+1 i")
            sp.add_argument("--m-max", type=int, default=50)
            sp.add_argument("--log-base", choices=("2", "e"), default="2")
        if k == "newton-cert":
            sp.add_argument("--z", help="candidate point")
        if k == "tail-report":
            sp.add_argument("--w", type=float, default=4.0)
    return p


def config_from_args(ns: argparse.Namespace) -> ExperimentConfig:
    if ns.config:
        cfg = ExperimentConfig.from_json(ns.config)
        if cfg.kind != ns.kind:
            raise ConfigError(f"config file is for {cfg.kind!r}, not {ns.kind!r}")
        return cfg
    kw = dict(kind=ns.kind, n=ns.n, degrees=ns.degrees, H=ns.H, epsilons=ns.eps,
              precision_bits=ns.precision_bits, out=ns.out, jobs=ns.jobs, cap=ns.cap)
    for name in ("system", "zeta", "z", "m_max", "log_base", "w"):
        if getattr(ns, name, None) is not None:
            kw[name] = getattr(ns, name)
    return ExperimentConfig(**kw)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        man = run(cfg)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapExceeded as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    print(report(man))
    return 0 if man.passed else 1


if __name__ == "__main__":
    sys.exit(main())
