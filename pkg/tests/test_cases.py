import pytest

from spencer_super.cases import (
    UnknownCase,
    case_names,
    load_cases,
    registry_path,
    resolve_case,
)
from spencer_super.config import golden_dir
from spencer_super.golden import load_golden


def test_registry_is_packaged():
    assert registry_path().is_file()
    names = case_names()
    assert names == sorted(names)
    assert {"vect(0|3)", "co(3)", "gl(2)", "D21a:parabolic1"} <= set(names)


def test_defaults_are_merged():
    spec = resolve_case("o(4)")
    assert spec.orders_s == [2]
    assert spec.borel == "full"
    assert spec.weight_sign == 1
    assert spec.k_max == 2
    assert spec.golden == "o_4"
    assert spec.grading == {"kind": "module", "algebra": "o(4)"}


def test_case_values_override_defaults():
    spec = resolve_case("ab3:first-vertex")
    assert spec.weight_sign == -1
    assert spec.borel == "even"
    assert spec.slow


def test_overrides_are_merged_deeply():
    spec = resolve_case("gr(2,4)", {"k_max": 1, "grading": {"reduce": "derived"}})
    assert spec.k_max == 1
    assert spec.grading["reduce"] == "derived"
    assert spec.grading["algebra"] == "sl(4)"
    assert "reduce" not in resolve_case("gr(2,4)").grading


def test_parametric_case():
    spec = resolve_case("D21a:parabolic1")
    assert spec.alphas == ["2", "-3", "5"]
    assert spec.cocycles[0]["k"] == 2


def test_unknown_case():
    with pytest.raises(UnknownCase):
        resolve_case("vect(0|99)")


def test_unknown_field():
    with pytest.raises(UnknownCase):
        resolve_case("o(3)", {"colour": "blue"})


@pytest.mark.parametrize("overrides", [{"borel": "odd"}, {"weight_sign": 2}])
def test_invalid_values(overrides):
    with pytest.raises(UnknownCase):
        resolve_case("o(3)", overrides)


def test_every_case_resolves():
    cases = load_cases()
    assert set(cases) == set(case_names())
    assert all(spec.anchor for spec in cases.values())
    assert all(spec.golden is None or spec.golden.islower() for spec in cases.values())


def test_goldens_and_cases_match():
    named = {spec.golden for spec in load_cases().values() if spec.golden}
    shipped = {path.stem for path in golden_dir().glob("*.json")}
    assert named == shipped
    assert {"ho_5", "psq_3_1_anti", "d21a_parabolic2", "cp_3"} <= named


def test_use_prolong_flag():
    assert resolve_case("cp(3)").use_prolong
    assert not resolve_case("ho(5)").use_prolong


def test_module_goldens_have_module_analysis():
    for name, spec in load_cases().items():
        if spec.golden and "modules" in load_golden(spec.golden)["expect"]:
            assert spec.module, name
    assert resolve_case("co(5)").module
