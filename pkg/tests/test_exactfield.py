import random
from fractions import Fraction

import pytest

from spencer_super.exactfield import (
    RATFUNC,
    RATIONAL,
    PoleAtAlpha,
    Subspace,
    as_integer,
    evaluate_alpha,
    format_element,
    image_basis,
    independent_columns,
    intersect,
    kernel_basis,
    kernel_of_rows,
    matrix,
    rank_of_rows,
    rref,
    to_field,
)


@pytest.mark.parametrize(
    "value, expected",
    [(3, "3"), ("-4/6", "-2/3"), (Fraction(5, 10), "1/2"), ("0", "0")],
)
def test_rational_coercion(value, expected):
    assert format_element(to_field(value, RATIONAL)) == expected


def test_format_plain_integers():
    assert format_element(3) == "3"
    assert format_element(-2) == "-2"


def test_ratfunc_canonical_form():
    x = to_field("(2*a + 2)/(2*a - 4)", RATFUNC)
    assert format_element(x) == "(a + 1)/(a - 2)"
    assert format_element(to_field("a**2", RATFUNC)) == "a**2"


def test_ratfunc_constant_coerces_to_rational():
    three_halves = RATIONAL.convert(3) / RATIONAL.convert(2)
    assert to_field(to_field("6/4", RATFUNC), RATIONAL) == three_halves
    with pytest.raises(ValueError):
        to_field(to_field("a", RATFUNC), RATIONAL)


def test_evaluate_alpha():
    x = to_field("(1 + a)/(a - 2)", RATFUNC)
    assert format_element(evaluate_alpha(x, "5")) == "2"
    assert format_element(evaluate_alpha(x, "-1")) == "0"
    with pytest.raises(PoleAtAlpha):
        evaluate_alpha(x, 2)


def test_as_integer():
    assert as_integer(to_field(7, RATIONAL)) == 7
    assert as_integer(to_field("7/2", RATIONAL)) is None
    assert as_integer(to_field("a", RATFUNC)) is None


def _rows(data):
    return [{j: RATIONAL.convert(x) for j, x in enumerate(row) if x} for row in data]


def test_rref_pivots_and_idempotence():
    m = matrix(_rows([[0, 2, 4], [0, 1, 2], [1, 0, 1]]), 3, RATIONAL)
    rank, pivots, reduced = rref(m)
    assert rank == 2
    assert pivots == (0, 1)
    assert rref(reduced)[1] == pivots
    assert rref(reduced)[2].to_dod() == reduced.to_dod()


def test_rank_nullity():
    rows = _rows([[1, 2, 3, 4], [2, 4, 6, 8], [0, 1, 1, 0]])
    m = matrix(rows, 4, RATIONAL)
    kernel = kernel_basis(m)
    assert rank_of_rows(rows, 4, RATIONAL) + len(kernel) == 4
    for v in kernel:
        for row in rows:
            assert sum(row.get(j, 0) * x for j, x in v.items()) == 0


def _generated_4x4(seed: int) -> list[list[int]]:
    rng = random.Random(seed)
    data = [[rng.randint(-2, 2) for _ in range(4)] for _ in range(4)]
    # low-rank instances come from repeating combinations of earlier rows
    if seed % 3 == 0:
        data[3] = [x + y for x, y in zip(data[0], data[1])]
    if seed % 5 == 0:
        data[2] = [2 * x for x in data[0]]
    return data


@pytest.mark.parametrize("seed", range(120))
def test_rank_nullity_on_generated_4x4(seed):
    rows = _rows(_generated_4x4(seed))
    kernel = kernel_basis(matrix(rows, 4, RATIONAL))
    assert rank_of_rows(rows, 4, RATIONAL) + len(kernel) == 4
    assert rank_of_rows(kernel, 4, RATIONAL) == len(kernel)
    for v in kernel:
        for row in rows:
            assert sum(row.get(j, 0) * x for j, x in v.items()) == 0


def test_kernel_over_ratfunc():
    a = to_field("a", RATFUNC)
    one = RATFUNC.one
    kernel = kernel_of_rows([{0: a, 1: one}], 2, RATFUNC)
    assert len(kernel) == 1
    v = kernel[0]
    assert a * v.get(0, RATFUNC.zero) + v.get(1, RATFUNC.zero) == RATFUNC.zero


def test_image_basis_spans_columns():
    m = matrix(_rows([[1, 1], [1, 1], [0, 0]]), 2, RATIONAL)
    assert len(image_basis(m)) == 1


def test_independent_columns():
    vectors = _rows([[1, 0], [2, 0], [0, 1]])
    selected, expressions = independent_columns(vectors, 2, RATIONAL)
    assert selected == (0, 2)
    assert expressions[1] == {0: RATIONAL.convert(2)}


def test_subspace_normal_form_and_coordinates():
    sub = Subspace.from_vectors(_rows([[1, 1, 0], [0, 1, 1]]), 3, RATIONAL)
    assert sub.dim == 2
    assert sub.contains({0: RATIONAL.convert(1), 2: RATIONAL.convert(-1)})
    assert not sub.contains({0: RATIONAL.one})
    assert sub.reduce({0: RATIONAL.convert(1), 1: RATIONAL.convert(1)}) == {}
    assert sub.coordinates({1: RATIONAL.one}) is None


def test_intersect_grassmann_formula():
    a = _rows([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0]])
    b = _rows([[0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]])
    meet = intersect(a, b, 4, RATIONAL)
    join = Subspace.from_vectors(a + b, 4, RATIONAL)
    assert meet.dim + join.dim == 3 + 3
    sa = Subspace.from_vectors(a, 4, RATIONAL)
    sb = Subspace.from_vectors(b, 4, RATIONAL)
    assert sa.contains_subspace(meet)
    assert sb.contains_subspace(meet)
