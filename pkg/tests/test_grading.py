import pytest

from spencer_super.cases import UnknownCase
from spencer_super.grading import (
    DepthExceeded,
    build_grading,
    coweight_element,
    element_from_labels,
    grade_by_element,
    reduce_degree_zero,
    semidirect,
    supertraceless_part,
)
from spencer_super.liesuper import check_jacobi, defining_representation
from spencer_super.liesuper_cartan import build_registered
from spencer_super.liesuper_classical import BadParams, build_classical

GR24_LABELS = {"e1": "1/2", "e2": "1/2", "e3": "-1/2", "e4": "-1/2"}
GR24 = {"kind": "element", "algebra": "sl(4)", "labels": GR24_LABELS}


def test_grassmannian_grading():
    result = build_grading(GR24)
    assert result.base.sdim_of(-1) == (4, 0)
    assert result.base.sdim_of(0) == (7, 0)
    assert result.full.sdim_table() == {-1: (4, 0), 0: (7, 0), 1: (4, 0)}
    assert result.base.is_faithful
    assert not result.base.check_degrees()


def test_reduced_degree_zero():
    result = build_grading({**GR24, "reduce": "derived"})
    assert result.base.sdim_of(0) == (6, 0)
    assert result.full is None
    assert not check_jacobi(result.base.algebra)


def test_grading_rejects_deep_or_fractional_eigenvalues():
    g = build_classical("sl(3)")
    with pytest.raises(DepthExceeded):
        grade_by_element(g, element_from_labels(g, {"e1": 1, "e3": -1}))
    with pytest.raises(DepthExceeded):
        grade_by_element(g, element_from_labels(g, {"e1": "1/3", "e2": "-1/3"}))


def test_element_from_unknown_label():
    g = build_classical("sl(3)")
    with pytest.raises(BadParams):
        element_from_labels(g, {"d1": 1})


def test_semidirect_of_defining_module():
    g0 = build_classical("o(3)")
    graded = semidirect(g0, defining_representation(g0))
    assert graded.sdim_table() == {-1: (3, 0), 0: (3, 0)}
    assert graded.is_faithful
    assert not check_jacobi(graded.algebra)


def test_parity_shifted_module():
    result = build_grading({"kind": "module", "algebra": "osp(1|2)", "shift": True})
    assert result.base.sdim_of(-1) == (2, 1)
    assert result.base.sdim_of(0) == (3, 2)


def test_orthosymplectic_conformal_grading():
    result = build_grading(
        {"kind": "element", "algebra": "osp(6|2)", "labels": {"e1": 1}}
    )
    assert result.base.sdim_of(-1) == (4, 2)
    assert result.base.sdim_of(0) == (10, 8)
    assert result.full.sdim_of(1) == (4, 2)


def test_periplectic_identity_grading():
    spec = {
        "kind": "element",
        "algebra": "pe(3)",
        "labels": {"e1": "1/2", "e2": "1/2", "e3": "1/2"},
        "minus_sdim": [0, 6],
        "traceless": True,
    }
    result = build_grading(spec)
    assert result.base.sdim_of(-1) == (0, 6)
    assert result.base.sdim_of(0) == (8, 0)
    assert result.full.algebra.sdim == (8, 9)


def test_supertraceless_needs_matrices():
    g = build_registered("sl2")
    graded = grade_by_element(g, coweight_element(g, 1))
    with pytest.raises(BadParams):
        supertraceless_part(graded)


def test_psq_grading():
    result = build_grading({"kind": "psq", "n": 3, "p": 1, "sign": 1})
    assert result.base.sdim_of(-1) == (2, 2)
    assert result.base.sdim_of(0) == (4, 4)
    assert result.full.algebra.sdim == (8, 8)


def test_coweight_grading_of_d21a():
    result = build_grading(
        {"kind": "coweight", "algebra": "D21a:1", "node": 1}, alpha="2"
    )
    minus = result.full.component(-1)
    labels = {result.full.algebra.space.labels[i] for i in minus}
    assert labels == {"Y1", "Y4", "Y5", "Y7"}
    assert result.base.sdim_of(-1) == (2, 2)
    assert result.base.sdim_of(0) == (5, 4)


def test_reduce_keeps_minus_component():
    graded = build_grading({"kind": "module", "algebra": "co(3)"}).base
    reduced = reduce_degree_zero(graded)
    assert reduced.sdim_of(-1) == (3, 0)
    assert reduced.sdim_of(0) == (3, 0)


def test_unknown_kind():
    with pytest.raises(UnknownCase):
        build_grading({"kind": "tensor"})


@pytest.mark.parametrize(
    "spec, realized",
    [
        ({"kind": "coweight", "algebra": "D21a:1", "node": 1}, True),
        ({"kind": "vectorial", "algebra": "vect(0|2)"}, True),
        ({"kind": "psq", "n": 3, "p": 1, "sign": 1}, True),
        ({"kind": "psq", "n": 3, "p": 1, "sign": -1}, False),
        ({"kind": "module", "algebra": "co(3)"}, False),
        ({**GR24, "reduce": "derived"}, False),
    ],
)
def test_realized_algebra_extends_the_base(spec, realized):
    result = build_grading(spec, alpha="2")
    assert (result.realized is not None) == realized
    if realized:
        assert result.realized.sdim_of(-1) == result.base.sdim_of(-1)
        assert result.realized.sdim_of(0) == result.base.sdim_of(0)
