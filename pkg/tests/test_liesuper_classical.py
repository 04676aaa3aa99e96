import pytest

from spencer_super.liesuper import (
    check_antisymmetry,
    check_jacobi,
    check_representation,
    defining_representation,
    derived_algebra,
)
from spencer_super.liesuper_classical import (
    BadParams,
    build_classical,
    parse_name,
    q_operator,
    series_names,
)
from spencer_super.superlinalg import matmul, supercommutator


@pytest.mark.parametrize(
    "name, sdim",
    [
        ("gl(2|1)", (5, 4)),
        ("sl(2|1)", (4, 4)),
        ("sl(3)", (8, 0)),
        ("psl(2|2)", (6, 8)),
        ("q(2)", (4, 4)),
        ("sq(2)", (4, 3)),
        ("psq(3)", (8, 8)),
        ("osp(1|2)", (3, 2)),
        ("osp(4|2)", (9, 8)),
        ("o(4)", (6, 0)),
        ("co(3)", (4, 0)),
        ("sp(4)", (10, 0)),
        ("pe(3)", (9, 9)),
        ("spe(3)", (8, 9)),
        ("cpe(2)", (5, 4)),
        ("spe_tau(5)", (16, 16)),
    ],
)
def test_classical_sdim(name, sdim):
    assert build_classical(name).sdim == sdim


@pytest.mark.parametrize("name", ["sl(2|1)", "osp(1|2)", "pe(2)", "q(2)"])
def test_classical_is_a_lie_superalgebra(name):
    g = build_classical(name)
    assert not check_jacobi(g)
    assert not check_representation(defining_representation(g))


def test_borel_data():
    g = build_classical("sl(3)")
    assert len(g.cartan) == 2
    assert len(g.raising) == 3
    assert set(g.weight_labels) == {"e1", "e2", "e3"}
    h = build_classical("gl(2|1)")
    assert len(h.raising) == 3
    assert set(h.weight_labels) == {"e1", "e2", "d1"}


def test_parse_name():
    assert parse_name("osp_sy(4|2)") == ("osp_sy", (4, 2))
    assert parse_name("psq(3)") == ("psq", (3,))
    with pytest.raises(BadParams):
        parse_name("osp[4|2]")


def test_bad_params():
    with pytest.raises(BadParams):
        build_classical("nope(3)")
    with pytest.raises(BadParams):
        build_classical("spe_tau(1)")
    assert "spe_tau" in series_names()


@pytest.mark.parametrize(
    "name",
    [
        "gl(2|1)",
        "sl(2|1)",
        "psl(2|2)",
        "q(2)",
        "sq(2)",
        "psq(3)",
        "osp_sy(2|2)",
        "osp_sk(3|2)",
        "o(4)",
        "sp(4)",
        "pe_sy(2)",
        "pe_sk(2)",
        "spe(3)",
        "spe_tau(3)",
        "cpe(2)",
    ],
)
def test_every_series_satisfies_jacobi(name):
    g = build_classical(name)
    assert not check_jacobi(g)
    assert not check_antisymmetry(g)


def test_jacobi_list_covers_every_series():
    covered = {
        "gl",
        "sl",
        "psl",
        "q",
        "sq",
        "psq",
        "osp_sy",
        "osp_sk",
        "o",
        "sp",
        "pe_sy",
        "pe_sk",
        "spe",
        "spe_tau",
    }
    assert covered == set(series_names())


def _profile(g):
    even_raising = sum(1 for x in g.raising if not g.parity_of(x))
    odd_raising = len(g.raising) - even_raising
    return g.sdim, derived_algebra(g).sdim, len(g.cartan), even_raising, odd_raising


@pytest.mark.parametrize("params", [(1, 2), (2, 2), (3, 2), (2, 4), (4, 2)])
def test_orthosymplectic_formats_agree(params):
    sy = build_classical("osp_sy", params)
    sk = build_classical("osp_sk", params)
    assert _profile(sy) == _profile(sk)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_periplectic_formats_agree(n):
    sy = build_classical("pe_sy", (n,))
    sk = build_classical("pe_sk", (n,))
    # the regular functional picks S^2 in one format and Λ^2 in the other
    assert _profile(sy)[:3] == _profile(sk)[:3]
    assert abs(len(sy.raising) - len(sk.raising)) == n


@pytest.mark.parametrize("name, n", [("q(2)", 2), ("q(3)", 3), ("sq(3)", 3)])
def test_queer_operator_squares_to_minus_one(name, n):
    j = q_operator(n)
    assert matmul(j, j) == {(i, i): -1 for i in range(2 * n)}
    g = build_classical(name)
    for x, p in zip(g.matrices, g.parities):
        assert supercommutator(j, x, 1, p) == {}
