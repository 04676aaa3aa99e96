import pytest

from spencer_super.exactfield import RATFUNC, RATIONAL
from spencer_super.liesuper import check_jacobi
from spencer_super.liesuper_cartan import (
    GenerationDiverged,
    build_from_cartan_matrix,
    build_registered,
    element_of_word,
)


def test_sl2_from_cartan_matrix():
    g = build_registered("sl2")
    assert g.sdim == (3, 0)
    assert not check_jacobi(g)


def test_generation_diverges_past_expected_size():
    with pytest.raises(GenerationDiverged):
        build_from_cartan_matrix([[2]], [0], (1, 0))


def test_d21a_symbolic_size_and_words():
    g = build_registered("D21a:1")
    assert g.domain == RATFUNC
    assert g.sdim == (9, 8)
    labels = g.space.labels
    assert {f"X{k}" for k in range(1, 8)} <= set(labels)
    assert {"H1", "H2", "H3"} <= set(labels)
    assert "Y7" in labels


@pytest.mark.parametrize("alpha", ["2", "-3", "5"])
def test_d21a_specialized_jacobi(alpha):
    g = build_registered("D21a:1", alpha)
    assert g.domain == RATIONAL
    assert g.sdim == (9, 8)
    assert not check_jacobi(g)


def test_words_evaluate_in_word_basis():
    g = build_registered("D21a:2", "2")
    y4 = element_of_word(g, "[Y1,Y2]")
    assert y4
    with pytest.raises(ValueError):
        element_of_word(g, "[Y1,Y2")
    with pytest.raises(ValueError):
        element_of_word(g, "[Y1,Q9]")


def test_unknown_registry_key():
    with pytest.raises(ValueError):
        build_registered("e8")


@pytest.mark.slow
def test_ab3_size():
    assert build_registered("ab3").sdim == (24, 16)
