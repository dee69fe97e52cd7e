import csv
import io
import json
import math

import pytest

from polarspinor.cli import main
from polarspinor.report import CSV_HEADER, REPORT_KEYS, Check, RunReport, emit_report, to_json


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def load(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out.out)


def test_identities_pass(capsys):
    code, rep = load(capsys, "identities", "--trials", "200", "--seed", "42", "--tol", "1e-9")
    assert code == 0 and rep["pass"] is True
    assert set(rep) == set(REPORT_KEYS)
    names = [c["name"] for c in rep["checks"]]
    assert names == sorted(names) and "lorentz.series" in names
    assert all(set(c) == {"name", "max", "mean", "l2", "tolerance", "pass"} for c in rep["checks"])


def test_solution_analytic(capsys):
    code, rep = load(capsys, "solution", "--id", "1", "--m", "1", "--eps", "0.5", "--deriv", "analytic")
    assert code == 0
    residuals = [c["max"] for c in rep["checks"] if ".analytic." in c["name"]]
    assert residuals and max(residuals) < 1e-10


def test_parameter_violation_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["solution", "--id", "1", "--m", "1", "--eps", "1.5"])
    assert exc.value.code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["solution", "--nr", "3"],
        ["dirac", "--r-range", "0.01,2"],
        ["dirac", "--theta-range", "0.3"],
        ["solution", "--h", "-1"],
        ["identities", "--trials", "0"],
        ["solution", "--id", "8"],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_failing_check_exit_status(capsys):
    code, rep = load(capsys, "elko", "--tol", "-0.0")
    assert code == 0
    code, rep = load(capsys, "solution", "--id", "1", "--deriv", "fd", "--tol", "1e-16", "--nr", "4", "--ntheta", "4")
    assert code == 1 and rep["pass"] is False


def test_domain_violation_reported_per_check(capsys):
    code, rep = load(capsys, "solution", "--id", "5", "--deriv", "fd", "--r-range", "0.05,1", "--nr", "4", "--ntheta", "4")
    assert code == 1
    failed = [c for c in rep["checks"] if not c["pass"]]
    assert failed and all(c["max"] is None for c in failed)


def test_determinism(capsys):
    args = ["flatness", "--trials", "2", "--nr", "4", "--ntheta", "4", "--seed", "5"]
    _, a = run(capsys, *args)
    _, b = run(capsys, *args)
    strip = lambda s: [line for line in s.splitlines() if "runtime_ms" not in line]  # noqa: E731
    assert strip(a.out) == strip(b.out)
    _, c = run(capsys, *args[:-1], "6")
    assert strip(a.out) != strip(c.out)


def test_csv_output_and_env_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("POLARSPINOR_OUTPUT_DIR", str(tmp_path))
    code, out = run(capsys, "elko", "--format", "csv")
    assert code == 0 and "report in" in out.out
    rows = list(csv.reader((tmp_path / "verify-elko.csv").open()))
    assert tuple(rows[0]) == CSV_HEADER and len(rows) > 1
    assert all(r[-1] == "true" for r in rows[1:])


def test_explicit_output_path(tmp_path, capsys):
    target = tmp_path / "sub" / "r.json"
    code, _ = run(capsys, "neutrality", "--output", str(target))
    assert code == 0 and json.loads(target.read_text())["command"] == "neutrality"


def test_unwritable_output(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, out = run(capsys, "elko", "--output", str(blocker / "r.json"))
    assert code == 2 and "cannot write" in out.err


# --- report module ------------------------------------------------------------------


def test_number_format_has_many_digits():
    rep = RunReport("x", {"v": 0.5}, None, 0, [Check("a", 0.1, 0.1, 0.1, 1.0)])
    text = to_json(rep)
    assert "1.0000000000000001e-01" in text and "5.0000000000000000e-01" in text
    assert json.loads(text)["checks"][0]["max"] == 0.1


def test_check_semantics():
    assert Check.from_values("a", [1e-3, -2e-3], 1e-2).passed
    assert not Check.failed("b", 1.0).passed
    assert math.isnan(Check.from_values("c", [], 1.0).max) and not Check.from_values("c", [], 1.0).passed
    assert not RunReport("x", {}, None, 0, []).passed


def test_non_finite_serialisation():
    rep = RunReport("x", {}, None, 0, [Check.failed("bad", 1.0)])
    assert json.loads(to_json(rep))["checks"][0]["max"] is None
    rows = list(csv.reader(io.StringIO(emit_report(rep, "csv"))))
    assert rows[1][1] == "inf"
    with pytest.raises(ValueError):
        emit_report(rep, "xml")
