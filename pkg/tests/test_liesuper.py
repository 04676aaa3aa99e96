import pytest

from spencer_super.exactfield import RATIONAL
from spencer_super.liesuper import (
    DimensionMismatch,
    LieSuperAlgebra,
    NotClosed,
    ShapeMismatch,
    centralizer_of,
    check_antisymmetry,
    check_jacobi,
    check_representation,
    defining_representation,
    derived_algebra,
    from_matrices,
    queertrace,
    supertrace,
)
from spencer_super.liesuper_classical import build_classical
from spencer_super.superlinalg import SuperSpace


def test_gl_1_1_brackets():
    g = build_classical("gl(1|1)")
    assert g.sdim == (2, 2)
    assert not check_jacobi(g)
    assert not check_antisymmetry(g)
    assert not check_representation(defining_representation(g))


def test_from_matrices_requires_closure():
    module = SuperSpace.standard(2, 0)
    with pytest.raises(NotClosed):
        from_matrices("x", module, [{(0, 1): RATIONAL.one}, {(1, 0): RATIONAL.one}])


def test_bracket_rejects_out_of_range_index():
    g = build_classical("sl(2)")
    with pytest.raises(DimensionMismatch):
        g.bracket({g.dim: RATIONAL.one}, {0: RATIONAL.one})


def test_derived_and_centralizer():
    g = build_classical("gl(2)")
    assert derived_algebra(g).sdim == (3, 0)
    basis = [{i: RATIONAL.one} for i in range(g.dim)]
    assert len(centralizer_of(g, basis)) == 1


def test_traces():
    assert supertrace({(0, 0): 3, (1, 1): 5}, (0, 1)) == -2
    with pytest.raises(ShapeMismatch):
        supertrace({(2, 2): 1}, (0, 1))
    assert queertrace({(0, 1): 4, (1, 0): 4}, 1) == 4
    with pytest.raises(ShapeMismatch):
        queertrace({(0, 1): 4}, 1)


def _sl2_table(h_weight: int) -> LieSuperAlgebra:
    one = RATIONAL.one
    c = RATIONAL.convert(h_weight)
    e, h, f = 0, 1, 2
    sc = {
        (h, e): {e: c},
        (e, h): {e: -c},
        (h, f): {f: -2 * one},
        (f, h): {f: 2 * one},
        (e, f): {h: one},
        (f, e): {h: -one},
    }
    space = SuperSpace(("e", "h", "f"), (0, 0, 0))
    return LieSuperAlgebra("sl(2)", space, RATIONAL, sc)


def test_jacobi_catches_a_corrupted_table():
    assert not check_jacobi(_sl2_table(2))
    assert not check_antisymmetry(_sl2_table(3))
    violations = check_jacobi(_sl2_table(3))
    assert violations
    assert all({0, 1, 2} == set(t) for t in violations)
