import pytest

from spencer_super import config
from spencer_super.grading import build_grading
from spencer_super.liesuper import check_jacobi
from spencer_super.prolong import (
    ProlongChain,
    cartan_prolong,
    compare_graded,
    intersection_step,
    prolong_step,
)
from spencer_super.prolong_vectorial import build_vectorial


def _module(name: str):
    return build_grading({"kind": "module", "algebra": name}).base


def test_general_linear_prolong_is_vect():
    result = cartan_prolong(_module("gl(2)"), max_degree=2)
    assert result.sdims == {-1: (2, 0), 0: (4, 0), 1: (6, 0), 2: (8, 0)}
    assert not result.stabilized
    vect = build_vectorial("vect(2|0)", max_degree=2)
    assert compare_graded(result.graded, vect).agree


def test_conformal_prolong_stabilizes():
    result = cartan_prolong(_module("co(3)"))
    assert result.sdims == {-1: (3, 0), 0: (4, 0), 1: (3, 0)}
    assert result.stabilized
    assert not check_jacobi(result.graded.algebra)
    assert result.summary()["sdims"] == {"-1": "3|0", "0": "4|0", "1": "3|0"}


def test_orthogonal_prolong_is_trivial():
    result = cartan_prolong(_module("o(3)"))
    assert result.sdims == {-1: (3, 0), 0: (3, 0)}
    assert result.stabilized


def test_prolong_of_vectorial_base_recovers_it():
    full = build_vectorial("vect(0|3)")
    result = cartan_prolong(full.base())
    assert result.sdims == full.sdim_table()
    assert result.stabilized
    comparison = compare_graded(result.graded, full)
    assert comparison.agree, comparison.mismatches


def test_queer_prolong_matches_full():
    grading = build_grading({"kind": "psq", "n": 3, "p": 1, "sign": 1})
    result = cartan_prolong(grading.base)
    assert result.graded.sdim_of(1) == (2, 2)
    assert compare_graded(result.graded, grading.full).agree


def test_hom_and_intersection_forms_agree():
    base = _module("gl(2)")
    chain = ProlongChain(base, base.component(-1), base.component(0))
    homs, parities = prolong_step(chain, 1)
    chain.homs[1], chain.parities[1] = homs, parities
    assert intersection_step(chain, 1).dim == len(homs) == 6


def test_cross_check_under_debug_profile(monkeypatch):
    monkeypatch.setenv(config.CHECKS_ENV_NAME, "1")
    result = cartan_prolong(_module("gl(2)"), max_degree=2)
    assert result.graded.sdim_of(2) == (8, 0)


def test_compare_reports_mismatches():
    comparison = compare_graded(
        build_vectorial("vect(0|2)"), build_vectorial("vect(0|3)")
    )
    assert not comparison.agree
    assert comparison.mismatches[0] == "sdim g-1: 0|2 vs 0|3"


def test_cutoff_must_be_positive():
    with pytest.raises(ValueError):
        cartan_prolong(_module("o(3)"), max_degree=0)


def test_stopped_prolong_differs_from_full():
    grading = build_grading({"kind": "psq", "n": 3, "p": 1, "sign": -1})
    result = cartan_prolong(grading.base)
    assert result.stabilized
    assert result.graded.top_degree == 0
    comparison = compare_graded(result.graded, grading.full)
    assert not comparison.agree
    assert "sdim g1: 0|0 vs 2|2" in comparison.mismatches
    assert not compare_graded(grading.full, result.graded).agree


def test_truncated_side_is_compared_up_to_its_cutoff():
    full = build_vectorial("vect(0|3)")
    truncated = cartan_prolong(full.base(), max_degree=1).graded
    assert not truncated.complete
    assert compare_graded(truncated, full).agree
