import functools

import pytest

from spencer_super.grading import build_grading
from spencer_super.prolong import cartan_prolong
from spencer_super.prolong_vectorial import build_vectorial
from spencer_super.spencer import (
    CochainSpace,
    MissingComponent,
    check_d_squared,
    check_equivariance,
    cohomology,
    full_structure_functions,
    spencer_differential,
    trivial_cohomology,
)


@functools.cache
def _prolonged(name: str, max_degree: int | None = None):
    base = build_grading({"kind": "module", "algebra": name}).base
    return cartan_prolong(base, max_degree).graded


@pytest.mark.parametrize("name, sdim", [("o(3)", (6, 0)), ("o(4)", (20, 0))])
def test_riemannian_curvature(name, sdim):
    assert cohomology(_prolonged(name), 2, 2).sdim == sdim


def test_riemannian_splits_off_conformal_part():
    n = 4
    symmetric = n * (n + 1) // 2
    riemannian = cohomology(_prolonged("o(4)"), 2, 2).dim
    assert riemannian == cohomology(_prolonged("co(4)"), 2, 2).dim + symmetric


def test_conformal_dimension_three_has_cotton_only():
    reports = full_structure_functions(_prolonged("co(3)"), 3)
    assert [r.sdim for r in reports] == [(0, 0), (0, 0), (5, 0)]
    assert [(r.k, r.s) for r in reports] == [(1, 2), (2, 2), (3, 2)]


def test_weyl_tensor_in_dimension_four():
    assert cohomology(_prolonged("co(4)"), 2, 2).sdim == (10, 0)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_vect_has_no_structure_functions(k):
    assert cohomology(build_vectorial("vect(0|3)"), k, 2).dim == 0


def test_divergence_free_odd_class():
    report = cohomology(build_vectorial("svect(0|3)"), 3, 2)
    assert report.sdim == (0, 1)
    assert report.parities == [1]
    rep = report.representatives[0]
    assert report.coordinates(rep) == [1]
    assert not report.is_exact(rep)


def test_full_prolong_has_no_first_order_torsion():
    graded = _prolonged("gl(2)", 2)
    report = cohomology(graded, 1, 1)
    assert report.dim == 0
    assert report.boundaries == report.cycles == 6


def test_missing_component_beyond_cutoff():
    graded = _prolonged("gl(2)", 2)
    assert not graded.complete
    with pytest.raises(MissingComponent):
        cohomology(graded, 5, 2)
    with pytest.raises(ValueError):
        CochainSpace(graded, 1, -1)


def test_cochain_space_shape():
    space = CochainSpace(_prolonged("o(3)"), 2, 2)
    assert space.sdim == (9, 0)
    assert space.dim == 3 * 3


@pytest.mark.parametrize(
    "name, k, s",
    [("o(3)", 2, 1), ("co(3)", 2, 1), ("vect(0|3)", 2, 1), ("svect(0|3)", 3, 1)],
)
def test_differential_squares_to_zero(name, k, s):
    graded = build_vectorial(name) if "|" in name else _prolonged(name)
    assert not check_d_squared(graded, k, s)


def test_differential_is_equivariant():
    assert not check_equivariance(_prolonged("o(3)"), 2, 1)
    assert not check_equivariance(build_vectorial("vect(0|2)"), 1, 1)


def test_differential_target():
    d = spencer_differential(_prolonged("o(3)"), 2, 1)
    assert (d.source.k, d.source.s) == (2, 1)
    assert (d.target.k, d.target.s) == (2, 2)
    assert d.matrix().shape == (d.target.dim, d.source.dim)


@pytest.mark.parametrize(
    "name, s, sdim",
    [
        ("o(3)", 2, (3, 0)),
        ("vect(0|2)", 1, (0, 2)),
        ("vect(0|2)", 2, (3, 0)),
    ],
)
def test_trivial_coefficients(name, s, sdim):
    graded = build_vectorial(name) if "|" in name else _prolonged(name)
    assert trivial_cohomology(graded, s) == sdim


def test_summary():
    summary = cohomology(_prolonged("o(3)"), 2, 2).summary()
    assert summary["sdim"] == "6|0"
    assert summary["cochains"] == "9|0"
    assert summary["k"] == 2 and summary["s"] == 2


@pytest.mark.parametrize("name, k", [("o(3)", 2), ("co(3)", 3), ("vect(0|2)", 2)])
def test_euler_characteristic(name, k):
    graded = build_vectorial(name) if "|" in name else _prolonged(name)
    orders = range(k + 2)
    chains = sum((-1) ** s * CochainSpace(graded, k, s).dim for s in orders)
    classes = sum((-1) ** s * cohomology(graded, k, s).dim for s in orders)
    assert chains == classes


def test_dropping_the_top_component_adds_order_four_classes():
    # ho(5) keeps every order 4 cocycle of h(0|5) but loses the coboundaries
    # coming from g3 (x) g-1*
    with_top = cohomology(build_vectorial("h(0|5)"), 4, 2)
    without_top = cohomology(build_vectorial("ho(5)"), 4, 2)
    assert without_top.sdim == (with_top.sdim[0] + 5, with_top.sdim[1])
