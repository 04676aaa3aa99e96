import json

import pytest
from typer.testing import CliRunner

from spencer_super.cases import load_cases
from spencer_super.cli import app
from spencer_super.run import RunOptions, run_case
from spencer_super.suite import (
    ERROR,
    FAIL,
    PASS,
    SKIP,
    CaseResult,
    NoCasesMatched,
    exit_code,
    format_table,
    run_suite,
    select_cases,
)

runner = CliRunner()


def test_run_case_bundle():
    bundle = run_case("o(3)", RunOptions(check_golden=True))
    assert bundle["case"] == "o(3)"
    assert bundle["grading"] == {"g-1": "3|0", "g0": "3|0", "faithful": True}
    assert bundle["cohomology"]["2,2"]["sdim"] == "6|0"
    assert "involutivity" not in bundle


def test_run_case_marks_missing_components():
    overrides = {"involutivity": False, "k_max": 4}
    bundle = run_case("gl(2)", RunOptions(max_degree=1, overrides=overrides))
    assert bundle["prolong"]["sdims"]["1"] == "6|0"
    assert bundle["cohomology"]["2,2"]["sdim"] == "0|0"
    assert bundle["cohomology"]["4,2"] == {"missing": True}


def test_run_case_involutivity():
    bundle = run_case("gl(2)")
    involutivity = bundle["involutivity"]
    assert involutivity["involutive"]
    assert involutivity["cartan_bound"]["equality"]
    assert involutivity["scan_vanishes"]


def test_select_cases():
    selected, skipped = select_cases("vect(0|*)")
    assert selected == ["vect(0|2)", "vect(0|3)"]
    assert skipped == ["vect(0|4)"]
    selected, skipped = select_cases("vect(0|*)", slow=True)
    assert skipped == []
    with pytest.raises(NoCasesMatched):
        select_cases("nothing*")


def test_run_suite_sequential():
    results = run_suite("o([34])", threads=1)
    assert [(r.name, r.status) for r in results] == [("o(3)", PASS), ("o(4)", PASS)]


def test_format_table_and_exit_code():
    results = [CaseResult("a", PASS, 1.0), CaseResult("bb", SKIP, 0.0, "slow")]
    table = format_table(results)
    assert table.splitlines()[0].startswith("case")
    assert table.splitlines()[-1] == "pass:1 fail:0 error:0 skip:1"
    assert exit_code(results) == 0
    assert exit_code(results + [CaseResult("c", FAIL, 0.1)]) == 1
    assert exit_code([CaseResult("d", ERROR, 0.1)]) == 1


def test_cli_run_prints_bundle():
    result = runner.invoke(app, ["run", "--case", "co(3)"])
    assert result.exit_code == 0, result.output
    bundle = json.loads(result.stdout)
    assert bundle["cohomology"]["3,2"]["sdim"] == "5|0"


def test_cli_run_writes_json(tmp_path):
    path = tmp_path / "bundle.json"
    result = runner.invoke(app, ["run", "--case", "o(3)", "--json", str(path)])
    assert result.exit_code == 0, result.output
    assert json.loads(path.read_text(encoding="utf-8"))["case"] == "o(3)"


def test_cli_run_golden_mismatch(tmp_path):
    wrong = {
        "provenance": "deliberately wrong",
        "expect": {"cohomology": {"2,2": {"sdim": "7|0"}}},
    }
    (tmp_path / "o_3.json").write_text(json.dumps(wrong), encoding="utf-8")
    result = runner.invoke(app, ["run", "--case", "o(3)", "--golden", str(tmp_path)])
    assert result.exit_code == 1


def test_cli_suite_without_matches():
    result = runner.invoke(app, ["suite", "--suite", "nothing*"])
    assert result.exit_code == 2


def test_cli_suite_writes_summary(tmp_path):
    path = tmp_path / "suite.json"
    result = runner.invoke(
        app, ["suite", "--suite", "o(3)", "--threads", "1", "--json", str(path)]
    )
    assert result.exit_code == 0, result.output
    summary = json.loads(path.read_text(encoding="utf-8"))
    assert summary["results"][0]["status"] == PASS


def test_cli_cases():
    result = runner.invoke(app, ["--log-level", "INFO", "cases", "--filter", "co(*"])
    assert result.exit_code == 0


def test_run_case_uses_realized_algebra():
    realized = run_case("vect(0|2)")
    assert realized["algebra"] == "realized"
    prolonged = run_case("vect(0|2)", RunOptions(overrides={"use_prolong": True}))
    assert prolonged["algebra"] == "prolong"
    assert prolonged["cohomology"] == realized["cohomology"]
    assert run_case("o(3)")["algebra"] == "prolong"


@pytest.mark.parametrize("alpha, top", [("2", "6"), ("5", "12")])
def test_first_osp_a_parabolic(alpha, top):
    bundle = run_case("D21a:parabolic1", RunOptions(alphas=[alpha]))
    special = bundle["specializations"][alpha]
    assert special["cocycles"][0]["closed"]
    hwvs = special["modules"]["2,2"]["hwvs"]
    found = [{"raw": h["raw"], "parity": h["parity"]} for h in hwvs]
    assert {"raw": ["0", "2", top], "parity": 0} in found


def test_published_sign_of_first_osp_a_cocycle_is_not_closed():
    text = "−α(α+1)H₁dY₄dY₇ + α²H₂dY₄dY₇ + (1+α)X₂dY₄dY₅ + X₆dY₁dY₄"
    overrides = {"module": False, "cocycles": [{"k": 2, "s": 2, "text": text}]}
    bundle = run_case("D21a:parabolic1", RunOptions(alphas=[], overrides=overrides))
    assert bundle["cocycles"] == [{"k": 2, "s": 2, "closed": False, "exact": False}]


@pytest.mark.parametrize("alpha", ["2", "5"])
def test_second_osp_a_parabolic(alpha):
    bundle = run_case("D21a:parabolic2", RunOptions(alphas=[alpha]))
    special = bundle["specializations"][alpha]
    assert special["cocycles"][0]["closed"]
    hwvs = special["modules"]["2,2"]["hwvs"]
    found = [{"raw": h["raw"], "parity": h["parity"]} for h in hwvs]
    assert {"raw": ["-3", "2", "1"], "parity": 1} in found


def _golden_cases():
    for name, spec in sorted(load_cases().items()):
        if spec.golden:
            marks = [pytest.mark.slow] if spec.slow else []
            yield pytest.param(name, marks=marks, id=name)


@pytest.mark.parametrize("name", _golden_cases())
def test_case_matches_golden(name):
    run_case(name, RunOptions(check_golden=True))
