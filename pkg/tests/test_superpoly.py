from spencer_super.superpoly import (
    SuperPolyRing,
    apply_field,
    bracket,
    divergence,
    field_degree,
    field_keys,
    poly_mul,
    poly_parity,
)

RING = SuperPolyRing(("x", "ξ1", "ξ2"), (0, 1, 1))
X, XI1, XI2 = RING.coordinate(0), RING.coordinate(1), RING.coordinate(2)


def test_odd_coordinates_anticommute():
    assert RING.multiply(XI2, XI1) == (-1, (0, 1, 1))
    assert RING.multiply(XI1, XI2) == (1, (0, 1, 1))
    assert RING.multiply(XI1, XI1) is None
    assert poly_mul(RING, {XI1: 1}, {XI2: 1}) == {(0, 1, 1): 1}
    assert poly_mul(RING, {XI2: 1}, {XI1: 1}) == {(0, 1, 1): -1}


def test_left_derivative_sign():
    assert RING.derivative(2, (0, 1, 1)) == (-1, XI1)
    assert RING.derivative(1, (0, 1, 1)) == (1, XI2)
    assert RING.derivative(0, (2, 0, 0)) == (2, X)


def test_monomials_and_parity():
    assert len(RING.monomials(2)) == 4
    assert poly_parity(RING, {XI1: 1, XI2: 3}) == 1
    assert RING.format_monomial((2, 1, 0)) == "x^2·ξ1"


def test_fields():
    d_xi1 = {(RING.one, 1): 1}
    euler_xi1 = {(XI1, 1): 1}
    assert bracket(RING, d_xi1, euler_xi1) == d_xi1
    assert apply_field(RING, euler_xi1, {(1, 1, 0): 1}) == {(1, 1, 0): 1}
    assert divergence(RING, euler_xi1) == {RING.one: -1}
    assert divergence(RING, {(X, 0): 1}) == {RING.one: 1}


def test_field_keys_by_degree():
    keys = field_keys(RING, [-1])
    assert len(keys) == 3
    assert all(field_degree(RING, k) == -1 for k in keys)
    assert len(field_keys(RING, [0])) == 3 * 3
