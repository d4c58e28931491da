import csv
import json

import pytest

from jmatrix.cli import RunConfig, UsageError, main, parse_config, run
from jmatrix.operators import build_model, operator_from_descriptor


def run_json(capsys, *argv):
    code = main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("argv,code", [
    (["verify", "--model", "asc-l", "--N", "10"], 0),
    (["verify", "--model", "laguerre-tl", "--N", "8", "--tol", "1e-20"], 2),
    (["build", "--model", "laguerre-tl", "--alpha", "-3"], 1),
    (["build", "--model", "laguerre-tl", "--q", "0.5"], 1),
    (["bogus"], 1),
    (["build"], 1),
    (["build", "--model", "laguerre-tl", "--tol", "0"], 1),
    (["determinacy", "--model", "laguerre-tl", "--format", "csv"], 1),
    (["spectrum", "--model", "laguerre-s", "--alpha", "0", "--gamma", "1"], 1),
    (["build", "--model", "laguerre-tl", "--allow-reducible"], 1),
])
def test_exit_codes(argv, code, capsys):
    assert main(argv) == code
    if code:
        assert capsys.readouterr().err


def test_build_round_trip(capsys):
    code, d = run_json(capsys, "build", "--model", "meixner-tm", "--beta", "2", "--c", "0.3", "--N", "6")
    assert code == 0
    op = operator_from_descriptor(d)
    assert op.b(0) == build_model("meixner-tm", beta=2.0, c=0.3).b(0)
    assert len(d["coefficients"]["b"]) == 6


def test_spectrum_laguerre(capsys, tmp_path):
    plot = tmp_path / "p.csv"
    code, d = run_json(capsys, "spectrum", "--model", "laguerre-tl", "--alpha", "2", "--N", "100",
                       "--plotdata", str(plot))
    assert code == 0
    assert d["continuousEdge"] == -2.25
    assert abs(d["eigenvaluesDesc"][0] + 2) < 0.05
    rows = list(csv.DictReader(open(plot)))
    assert len(rows) == 101
    assert rows[-1]["kind"] == "predicted" and float(rows[-1]["value"]) == -2.0


def test_reducible_spectrum(capsys):
    code, d = run_json(capsys, "spectrum", "--model", "laguerre-s", "--alpha", "0", "--gamma", "1",
                       "--allow-reducible", "--N", "30")
    assert code == 0 and d["predictedDiscrete"] == [2.0, 0.0]


def test_zeros_and_determinacy(capsys):
    code, d = run_json(capsys, "zeros", "--model", "linpot-chebu", "--N", "50", "--variable", "x")
    assert code == 0 and d["contained"]
    code, d = run_json(capsys, "determinacy", "--model", "qhermite")
    assert d["status"] == "Inconclusive"


def test_quadrature_csv(tmp_path):
    out = tmp_path / "q.csv"
    assert main(["quadrature", "--family", "laguerre", "--alpha", "0", "--N", "2", "--format", "csv", "-o", str(out)]) == 0
    rows = list(csv.reader(open(out)))
    assert rows[0] == ["node", "weight"] and len(rows) == 3


def test_qhermite_support(capsys):
    code, d = run_json(capsys, "qhermite-support", "--a", "0.7", "--q", "0.5", "--K", "60")
    assert code == 0 and abs(d["totalMass"] - 1) < 1e-10


def test_config_validation():
    with pytest.raises(UsageError):
        RunConfig(command="verify", model="laguerre-tl", N=0).validate()
    cfg = parse_config(["verify", "--model", "qhermite", "--N", "6"])
    assert cfg.model == "qhermite" and cfg.N == 6
    assert run(RunConfig(command="quadrature")) == 1
