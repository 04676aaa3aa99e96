import functools

import pytest

from spencer_super.grading import GradedAlgebra, build_grading
from spencer_super.involutivity import (
    CutoffTooLow,
    cartan_bound,
    compare_orders,
    default_order,
    is_involutive,
    order_variants,
    vanishing_scan,
)
from spencer_super.prolong import cartan_prolong
from spencer_super.prolong_vectorial import build_vectorial


@functools.cache
def _prolonged(name: str, max_degree: int | None = None) -> GradedAlgebra:
    base = build_grading({"kind": "module", "algebra": name}).base
    return cartan_prolong(base, max_degree).graded


def test_general_linear_is_involutive():
    report = is_involutive(_prolonged("gl(2)", 2))
    assert report.involutive
    assert report.degrees == [-1, 0, 1]
    assert report.failures == []
    assert report.summary()["conditions"] == [True, True, True]
    assert len(report.chain) == 3


def test_cartan_bound_is_attained():
    bound = cartan_bound(_prolonged("gl(2)", 2))
    assert (bound.dim_g1, bound.bound) == (6, 6)
    assert bound.holds and bound.equality


@pytest.mark.parametrize("name", ["o(3)", "co(3)"])
def test_finite_type_with_curvature_is_not_involutive(name):
    assert not is_involutive(_prolonged(name)).involutive


def test_orthogonal_cartan_bound_is_strict():
    bound = cartan_bound(_prolonged("o(3)"))
    assert bound.dim_g1 == 0
    assert bound.holds and not bound.equality


def test_scan_of_truncated_prolong():
    table = vanishing_scan(_prolonged("gl(2)", 2), 2, 2)
    assert len(table) == 9
    assert table[(1, 2)] is None
    assert all(v == (0, 0) for v in table.values() if v is not None)


def test_scan_detects_curvature():
    table = vanishing_scan(_prolonged("o(3)"), 2, 1)
    assert table[(2, 0)] == (6, 0)


def test_order_puts_even_first():
    graded = build_vectorial("h(0|4)")
    assert default_order(graded) == graded.component(-1)
    base = build_grading({"kind": "module", "algebra": "osp(1|2)", "shift": True}).base
    parities = [base.algebra.parities[i] for i in default_order(base)]
    assert parities == sorted(parities)


def test_order_must_span_minus_one():
    graded = _prolonged("gl(2)", 2)
    with pytest.raises(ValueError):
        is_involutive(graded, order=graded.component(-1)[:1])


def test_degrees_beyond_cutoff():
    graded = _prolonged("gl(2)", 2)
    with pytest.raises(CutoffTooLow):
        is_involutive(graded, degrees=[2])
    truncated = GradedAlgebra(graded.algebra, graded.degrees, 0, False)
    with pytest.raises(CutoffTooLow):
        cartan_bound(truncated)


def test_order_variants():
    graded = _prolonged("gl(2)", 2)
    assert set(order_variants(graded)) == {"even-first", "reversed"}
    assert compare_orders(graded) == {"even-first": True, "reversed": True}
    spec = {"kind": "module", "algebra": "osp(1|2)", "shift": True}
    shifted = build_grading(spec).base
    assert len(order_variants(shifted)) == 3
