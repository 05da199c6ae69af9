"""
TC011: Command Line and JSON Reports

Exit codes: 0 pass, 1 fail, 2 skipped or inconclusive, 3 malformed input or
usage.
"""

import json
import os

import pytest

from app import main
from src.config import CONFIG
from src.reports import SCHEMA, CheckRecord, Report, status_of, timed
from src.errors import NoReducer, ScaleCapExceeded, StageInvariantFailed
from src.suites import SUITE_ALIASES, SUITES

SPECS = os.path.join(os.path.dirname(__file__), "..", "specs")


@pytest.fixture(autouse=True)
def restore_config():
    saved = dict(CONFIG)
    yield
    CONFIG.clear()
    CONFIG.update(saved)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_sets_command(capsys):
    code, report = run(capsys, "sets", "Z6", "--set", "qinv")
    assert code == 0
    assert report["schema"] == SCHEMA
    assert report["checks"][0]["payload"]["members"] == [1, 5]
    code, report = run(capsys, "sets", "Z4", "--set", "radical")
    assert report["checks"][0]["payload"]["members"] == [0, 2]


def test_failing_property_exits_one(capsys):
    code, report = run(capsys, "check", os.path.join(SPECS, "zn4.json"), "--property", "semiprime")
    assert code == 1
    assert report["status"] == "fail"
    assert report["checks"][0]["payload"]["witness"] == 2


def test_passing_property(capsys):
    code, report = run(capsys, "check", os.path.join(SPECS, "m2f2.json"), "--property", "qb")
    assert code == 0
    assert report["checks"][0]["payload"]["holds"] is True


def test_unmet_hypothesis_is_skipped(capsys):
    code, report = run(capsys, "sets", "2Z4", "--set", "units")
    assert code == 2
    assert report["checks"][0]["status"] == "skipped"
    assert report["checks"][0]["payload"]["error"] == "NonUnitalRing"


def test_malformed_input_exits_three(capsys):
    assert main(["sets", "no-such-ring.json", "--set", "units"]) == 3
    assert main(["reduce-row", "Z6", "--row", "{\"A\": [1, 0, 0]}"]) == 3
    assert main(["demo", "jacobson", "--p", "4"]) == 3
    assert main([]) == 3


def test_reduce_row_command(capsys):
    row = json.dumps({"A": [[1, 0], [0, 1]], "B": [0, 0, 0, 0], "X": [1, 0, 0, 1], "W": [0, 0, 0, 0]})
    code, report = run(capsys, "reduce-row", "Z6", "--row", row)
    assert code == 0
    code, report = run(capsys, "reduce-row", "Z6", "--random", "3", "--seed", "4")
    assert code == 0
    assert len(report["checks"]) == 3
    assert report["seed"] == 4


def test_demo_command(capsys, monkeypatch):
    monkeypatch.setitem(CONFIG, "degree_bound", 3)
    code, report = run(capsys, "demo", "jacobson", "--p", "2", "--element", "y x")
    assert code == 0
    element = report["checks"][1]["payload"]
    assert element["normal_form"] == "y x"
    assert element["in_matrix_ideal"] is False


def test_verify_suite(capsys):
    code, report = run(capsys, "verify", "Z2", "--suite", "closure-laws", "--jobs", "1")
    assert code == 0
    assert all(c["reference"].startswith("closure-laws") for c in report["checks"])


def test_verify_all_suites(capsys):
    code, report = run(capsys, "verify", "Z6", "--jobs", "1", "--no-timings")
    assert code == 0, [c["name"] for c in report["checks"] if c["status"] == "fail"]
    assert report["status"] == "pass"


def test_reports_are_reproducible_without_timings(capsys):
    argv = ["verify", "Z4", "--suite", "quasi-inverse-family", "--jobs", "1", "--seed", "9", "--no-timings"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    second = capsys.readouterr().out
    assert first == second
    assert "wall_time" not in first


def test_report_written_to_file(capsys, tmp_path):
    target = tmp_path / "report.json"
    assert main(["sets", "Z6", "--set", "idempotents", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["checks"][0]["payload"]["members"] == [0, 1, 3, 4]


def test_list_suites(capsys):
    assert main(["--list-suites"]) == 0
    out = capsys.readouterr().out
    assert all(name in out for name in SUITES)
    for alias, name in SUITE_ALIASES.items():
        assert any(line.split()[:2] == [name, alias] for line in out.splitlines()), alias


def test_numbered_suite_names(capsys, monkeypatch):
    monkeypatch.setitem(CONFIG, "reduce_rows", 20)
    code, report = run(capsys, "verify", os.path.join(SPECS, "m2f2.json"), "--suite", "thm6.4", "--jobs", "1")
    assert code == 0
    assert report["checks"]
    assert all(c["reference"].startswith("matrix-reduction") for c in report["checks"])


def test_usage_errors_exit_three(capsys):
    assert main(["verify", "Z6", "--suite", "no-such-suite"]) == 3
    assert main(["check", "Z6"]) == 3
    assert main(["no-such-command"]) == 3
    assert "usage" in capsys.readouterr().err


def test_report_status_aggregation():
    report = Report(spec={}, seed=0)
    assert report.status == "skipped"
    report.checks.append(CheckRecord("a", "skipped"))
    report.checks.append(CheckRecord("b", "pass"))
    assert report.status == "pass" and report.exit_code == 0
    report.checks.append(CheckRecord("c", "inconclusive"))
    assert report.status == "pass"
    report.checks.append(CheckRecord("d", "fail"))
    assert report.exit_code == 1
    assert status_of(None) == "inconclusive"
    with pytest.raises(ValueError):
        CheckRecord("e", "maybe")


def test_timed_classifies_errors():
    records = []
    with timed(records, "cap") as rec:
        raise ScaleCapExceeded("too big", cap=1)
    with timed(records, "broken") as rec:
        raise StageInvariantFailed("identity fails")
    with timed(records, "missing") as rec:
        raise NoReducer("none")
    assert [r.status for r in records] == ["skipped", "fail", "skipped"]
    assert records[0].payload["error"] == "ScaleCapExceeded"
    assert rec.wall_time >= 0
