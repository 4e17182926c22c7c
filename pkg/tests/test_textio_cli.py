import json
from fractions import Fraction

import pytest

from ratcond.cli import main
from ratcond.gauss import GaussRational
from ratcond.harness import ConfigError, ExperimentConfig
from ratcond.linear import SquareMatrix
from ratcond.polysys import PolySystem
from ratcond.textio import format_matrix, format_point, format_system, parse_matrix, parse_point, parse_system

Q = GaussRational


def test_point_round_trip():
    pt = [Q(Fraction(1, 2)), Q(0, -3), Q(Fraction(-7, 5), Fraction(2, 9))]
    assert parse_point(format_point(pt)) == pt
    assert parse_point("1/2:3") == [Q(Fraction(1, 2)), Q(3)]
    with pytest.raises(ValueError):
        parse_point("1::2")


def test_matrix_round_trip():
    M = SquareMatrix.of([[1, Fraction(-2, 3)], [0, 5]])
    assert parse_matrix(format_matrix(M)) == M


def test_system_round_trip():
    F = PolySystem.from_terms((2, 1), [{(2, 0, 0): Q(1, -2), (0, 1, 1): Fraction(-3, 4), (1, 0, 1): 2},
                                       {(0, 0, 1): Q(0, 1), (1, 0, 0): -1}])
    text = format_system(F)
    assert text.splitlines()[0] == "degrees: 2,1"
    assert parse_system(text) == F
    assert parse_system("# comment\ndegrees: 2\nX0^2 - X1^2") == PolySystem.binary([1, 0, -1])
    assert parse_system("degrees: 1\n0").is_zero()


def test_system_parse_errors():
    with pytest.raises(ValueError):
        parse_system("X0^2")
    with pytest.raises(ValueError):
        parse_system("degrees: 2\nX0^3")
    with pytest.raises(ValueError):
        parse_system("degrees: 2\nX0*X2")
    with pytest.raises(ValueError):
        parse_system("degrees: 2,2\nX0^2")
    with pytest.raises(ValueError):
        parse_system("degrees: 2\n(1+i*X0^2")


def test_config_validation(tmp_path):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({"kind": "census-linear", "n": 2, "H": 3, "epsilons": [], "bogus": 1})
    with pytest.raises((ConfigError, ValueError)):
        ExperimentConfig(kind="census-linear", n=2, H=Fraction(3), epsilons=())
    cfg = ExperimentConfig(kind="census-linear", n=2, H=Fraction(3), epsilons=(Fraction(1, 2),))
    assert ExperimentConfig.from_dict(json.loads(json.dumps(cfg.to_dict()))) == cfg


def test_cli_exit_codes(tmp_path, capsys):
    out = str(tmp_path / "o")
    assert main(["census-linear", "--n", "2", "--H", "3", "--eps", "", "--out", out]) == 2
    assert main(["census-linear", "--n", "7", "--H", "3", "--eps", "1/2", "--out", out]) == 2
    assert main(["census-linear", "--n", "3", "--H", "40", "--eps", "1/2", "--out", out, "--cap", "1000"]) == 3
    assert main(["census-linear", "--n", "2", "--H", "4", "--eps", "1/10,1/2", "--out", out]) == 0
    man = json.loads((tmp_path / "o" / "census-linear-manifest.json").read_text())
    assert man["config"]["n"] == 2 and all(c["passed"] for c in man["checks"])


def test_cli_csv_is_deterministic(tmp_path):
    args = ["census-poly", "--degrees", "2", "--H", "2", "--eps", "1/4,1/2"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b"), "--jobs", "2"]) == 0
    a = (tmp_path / "a" / "census-poly.csv").read_bytes()
    b = (tmp_path / "b" / "census-poly.csv").read_bytes()
    assert a == b
    assert a.splitlines()[0].decode() == "epsilon,N,Ncal,empirical_tail,bound,vacuous"


def test_cli_out_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RATCOND_OUT", str(tmp_path / "env"))
    assert main(["davenport", "--H", "6"]) == 0
    assert (tmp_path / "env" / "davenport-manifest.json").exists()


def test_cli_config_file(tmp_path):
    cfg = {"kind": "tail-report", "n": 2, "H": "5", "epsilons": ["1/10", "1/2"], "out": str(tmp_path)}
    path = tmp_path / "c.json"
    path.write_text(json.dumps(cfg))
    assert main(["tail-report", "--config", str(path)]) == 0
    assert main(["census-linear", "--config", str(path)]) == 2
    path.write_text(json.dumps({**cfg, "colour": "red"}))
    assert main(["tail-report", "--config", str(path)]) == 2


def test_cli_constants(tmp_path, capsys):
    assert main(["constants", "--out", str(tmp_path)]) == 2
    assert main(["constants", "--n", "2", "--eps", "0.05", "--out", str(tmp_path)]) == 0
    text = (tmp_path / "constants-manifest.json").read_text()
    assert "8^48" in text


def test_cli_newton_and_precision(tmp_path):
    sysfile = tmp_path / "f.txt"
    sysfile.write_text("degrees: 2\nX1^2 - X0^2\n")
    assert main(["newton-cert", "--system", str(sysfile), "--zeta", "1", "--z", "11/10", "--out", str(tmp_path)]) == 0
    man = json.loads((tmp_path / "newton-cert-manifest.json").read_text())
    assert man["results"]["cert"]["certified"] is True
    assert main(["precision-census", "--system", str(sysfile), "--zeta", "1", "--m-max", "30",
                 "--out", str(tmp_path)]) == 0
