import json

import pytest

from spencer_super import golden
from spencer_super.cases import load_cases


def test_subset_ignores_extra_keys():
    expected = {"prolong": {"sdims": {"1": "3|0"}}}
    actual = {
        "prolong": {"sdims": {"-1": "3|0", "1": "3|0"}, "stabilized": True},
        "case": "co(3)",
    }
    assert golden.diff_subset(expected, actual) == []


def test_subset_reports_paths():
    diffs = golden.diff_subset({"a": {"b": 1, "c": 2}}, {"a": {"b": 3}})
    assert [d.path for d in diffs] == ["/a/b", "/a/c"]
    assert diffs[1].actual == "<missing>"
    assert str(diffs[0]) == "/a/b: expected 1 got 3"


def test_lists_match_elementwise():
    assert golden.diff_subset([{"parity": 1}], [{"parity": 1, "raw": ["2"]}]) == []
    assert len(golden.diff_subset([1, 2], [1])) == 1
    assert golden.diff_subset([1, 2], [1, 3])[0].path == "[1]"


def test_type_mismatch():
    assert golden.diff_subset({"a": 1}, "x")[0].path == "/"


def _write(tmp_path, name, data):
    (tmp_path / f"{name}.json").write_text(json.dumps(data), encoding="utf-8")


def test_check_golden(tmp_path):
    expect = {"cohomology": {"2,2": {"sdim": "6|0"}}}
    _write(tmp_path, "sample", {"provenance": "hand written", "expect": expect})
    bundle = {"cohomology": {"2,2": {"sdim": "6|0", "k": 2}}}
    matched = golden.check_golden(bundle, "sample", tmp_path)
    assert matched["provenance"] == "hand written"
    with pytest.raises(golden.GoldenMismatch) as info:
        wrong = {"cohomology": {"2,2": {"sdim": "5|0"}}}
        golden.check_golden(wrong, "sample", tmp_path)
    assert info.value.name == "sample"
    assert info.value.diffs[0].path == "/cohomology/2,2/sdim"


def test_golden_needs_provenance(tmp_path):
    _write(tmp_path, "bare", {"expect": {}})
    with pytest.raises(ValueError):
        golden.load_golden("bare", tmp_path)


def test_golden_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("SPENCER_GOLDEN_DIR", str(tmp_path))
    assert golden.golden_path("x") == tmp_path / "x.json"


def test_packaged_goldens_exist():
    ids = {spec.golden for spec in load_cases().values() if spec.golden}
    assert ids
    for golden_id in ids:
        data = golden.load_golden(golden_id)
        assert data["provenance"]
        assert data["expect"]


def test_dumps_is_stable():
    assert golden.dumps({"b": 1, "a": "ε"}) == '{\n  "a": "ε",\n  "b": 1\n}\n'
