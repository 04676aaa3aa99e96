import pytest

from spencer_super.liesuper import check_jacobi
from spencer_super.liesuper_classical import BadParams
from spencer_super.prolong_vectorial import build_vectorial


@pytest.mark.parametrize(
    "name, table",
    [
        ("vect(0|2)", {-1: (0, 2), 0: (4, 0), 1: (0, 2)}),
        ("vect(0|3)", {-1: (0, 3), 0: (9, 0), 1: (0, 9), 2: (3, 0)}),
        ("svect(0|3)", {-1: (0, 3), 0: (8, 0), 1: (0, 6)}),
        ("h(0|4)", {-1: (0, 4), 0: (6, 0), 1: (0, 4)}),
    ],
)
def test_component_sizes(name, table):
    graded = build_vectorial(name)
    for degree, sdim in table.items():
        assert graded.sdim_of(degree) == sdim


def test_vect_0_3_total_and_jacobi():
    graded = build_vectorial("vect(0|3)")
    assert graded.algebra.sdim == (12, 12)
    assert graded.complete
    assert not check_jacobi(graded.algebra, limit=200)


def test_hamiltonian_degree_zero():
    graded = build_vectorial("h(0|5)")
    assert graded.sdim_of(-1) == (0, 5)
    assert graded.sdim_of(0) == (10, 0)


def test_polynomial_coordinates_are_truncated():
    graded = build_vectorial("vect(2|0)", max_degree=2)
    assert graded.sdim_table() == {-1: (2, 0), 0: (4, 0), 1: (6, 0), 2: (8, 0)}
    assert not graded.complete


def test_bad_vectorial_names():
    with pytest.raises(BadParams):
        build_vectorial("h(1|2)")
    with pytest.raises(BadParams):
        build_vectorial("vect(0|0)")
    with pytest.raises(BadParams):
        build_vectorial("k(1|2)")


@pytest.mark.parametrize("name", ["vect(0|2)", "svect(0|3)", "h(0|4)", "ho(5)"])
def test_complete_vectorial_algebras_satisfy_jacobi(name):
    graded = build_vectorial(name)
    assert graded.complete
    assert not check_jacobi(graded.algebra, limit=20)
