"""
Polynomial-Grassmann superalgebras and their superderivations.

A monomial is an exponent tuple over the coordinates; odd coordinates carry
exponent 0 or 1 and are kept in index order, so every monomial has one
normal form. Polynomials are sparse ``{monomial: coefficient}`` maps and
vector fields are sparse ``{(monomial, k): coefficient}`` maps standing for
``sum c x^m d_k``. Derivatives act from the left.
"""

import functools
import itertools
import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

LOG = logging.getLogger(__name__)

Monomial = tuple[int, ...]
Poly = dict[Monomial, Any]
Field = dict[tuple[Monomial, int], Any]


@dataclass(frozen=True)
class SuperPolyRing:
    names: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.parities):
            raise ValueError(
                "Coordinate name and parity counts differ - "
                f"names:{len(self.names)} parities:{len(self.parities)}"
            )

    @property
    def rank(self) -> int:
        return len(self.parities)

    @property
    def one(self) -> Monomial:
        return (0,) * self.rank

    def coordinate(self, k: int) -> Monomial:
        return tuple(1 if i == k else 0 for i in range(self.rank))

    def degree(self, m: Monomial) -> int:
        return sum(m)

    def parity(self, m: Monomial) -> int:
        return sum(e for e, p in zip(m, self.parities) if p & 1) & 1

    def monomials(self, degree: int) -> list[Monomial]:
        return _monomials(self.parities, degree)

    def multiply(self, a: Monomial, b: Monomial) -> tuple[int, Monomial] | None:
        """``x^a x^b = sign x^{a+b}``, or ``None`` when an odd coordinate repeats."""
        sign = 1
        for j, (eb, p) in enumerate(zip(b, self.parities)):
            if not (p & 1 and eb):
                continue
            if a[j]:
                return None
            passed = sum(a[i] for i in range(j + 1, self.rank) if self.parities[i] & 1)
            if passed & 1:
                sign = -sign
        return sign, tuple(x + y for x, y in zip(a, b))

    def derivative(self, k: int, m: Monomial) -> tuple[int, Monomial] | None:
        """Left partial derivative ``d_k x^m = c x^{m'}``."""
        if not m[k]:
            return None
        reduced = tuple(e - 1 if i == k else e for i, e in enumerate(m))
        if self.parities[k] & 1:
            before = sum(m[i] for i in range(k) if self.parities[i] & 1)
            return (-1 if before & 1 else 1), reduced
        return m[k], reduced

    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for name, e in zip(self.names, m):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "·".join(parts) or "1"


@functools.cache
def _monomials(parities: tuple[int, ...], degree: int) -> list[Monomial]:
    out = []
    rank = len(parities)
    for combo in itertools.combinations_with_replacement(range(rank), degree):
        if any(a == b and parities[a] & 1 for a, b in zip(combo, combo[1:])):
            continue
        exps = [0] * rank
        for i in combo:
            exps[i] += 1
        out.append(tuple(exps))
    return sorted(out, reverse=True)


def _add(target: dict, key, value) -> None:
    total = target.get(key)
    total = value if total is None else total + value
    if total:
        target[key] = total
    else:
        target.pop(key, None)


def poly_mul(
    ring: SuperPolyRing, f: Mapping[Monomial, Any], g: Mapping[Monomial, Any]
) -> Poly:
    out: Poly = {}
    for a, x in f.items():
        for b, y in g.items():
            product = ring.multiply(a, b)
            if product is not None:
                _add(out, product[1], product[0] * x * y)
    return out


def poly_derivative(ring: SuperPolyRing, k: int, f: Mapping[Monomial, Any]) -> Poly:
    out: Poly = {}
    for m, x in f.items():
        d = ring.derivative(k, m)
        if d is not None:
            _add(out, d[1], d[0] * x)
    return out


def poly_parity(ring: SuperPolyRing, f: Mapping[Monomial, Any]) -> int:
    seen = {ring.parity(m) for m, x in f.items() if x}
    if len(seen) > 1:
        raise ValueError(f"Inhomogeneous polynomial - terms:{len(f)}")
    return seen.pop() if seen else 0


def field_term_parity(ring: SuperPolyRing, key: tuple[Monomial, int]) -> int:
    m, k = key
    return (ring.parity(m) + ring.parities[k]) & 1


def field_degree(ring: SuperPolyRing, key: tuple[Monomial, int]) -> int:
    return ring.degree(key[0]) - 1


def field_from(ring: SuperPolyRing, f: Mapping[Monomial, Any], k: int) -> Field:
    """``f d_k``."""
    return {(m, k): x for m, x in f.items() if x}


def partial(ring: SuperPolyRing, k: int, domain) -> Field:
    return {(ring.one, k): domain.one}


def apply_field(
    ring: SuperPolyRing,
    field: Mapping[tuple[Monomial, int], Any],
    f: Mapping[Monomial, Any],
) -> Poly:
    """``X(f) = sum f_k d_k(f)``."""
    out: Poly = {}
    for (m, k), x in field.items():
        d = poly_derivative(ring, k, f)
        for key, y in poly_mul(ring, {m: x}, d).items():
            _add(out, key, y)
    return out


def bracket(
    ring: SuperPolyRing,
    a: Mapping[tuple[Monomial, int], Any],
    b: Mapping[tuple[Monomial, int], Any],
) -> Field:
    """
    ``[f d_i, g d_j] = f d_i(g) d_j - (-1)^{p(X)p(Y)} g d_j(f) d_i``, extended
    bilinearly.
    """
    out: Field = {}
    for (m, i), x in a.items():
        pa = field_term_parity(ring, (m, i))
        for (n, j), y in b.items():
            pb = field_term_parity(ring, (n, j))
            dg = ring.derivative(i, n)
            if dg is not None:
                product = ring.multiply(m, dg[1])
                if product is not None:
                    _add(out, (product[1], j), product[0] * dg[0] * x * y)
            df = ring.derivative(j, m)
            if df is not None:
                product = ring.multiply(n, df[1])
                if product is not None:
                    sign = 1 if pa & pb else -1
                    _add(out, (product[1], i), sign * product[0] * df[0] * x * y)
    return out


def divergence(ring: SuperPolyRing, field: Mapping[tuple[Monomial, int], Any]) -> Poly:
    """``div(sum f_k d_k) = sum (-1)^{p(f_k) p_k} d_k f_k``."""
    out: Poly = {}
    for (m, k), x in field.items():
        d = ring.derivative(k, m)
        if d is None:
            continue
        sign = -1 if ring.parity(m) & ring.parities[k] & 1 else 1
        _add(out, d[1], sign * d[0] * x)
    return out


def field_keys(
    ring: SuperPolyRing, degrees: Iterable[int]
) -> list[tuple[Monomial, int]]:
    """Every ``x^m d_k`` with field degree in ``degrees``."""
    keys = []
    for d in degrees:
        for m in ring.monomials(d + 1):
            for k in range(ring.rank):
                keys.append((m, k))
    return keys


def format_field(
    ring: SuperPolyRing,
    field: Mapping[tuple[Monomial, int], Any],
    format_coefficient=str,
) -> str:
    terms = []
    for (m, k), x in sorted(field.items()):
        monomial = ring.format_monomial(m)
        terms.append(f"{format_coefficient(x)}*{monomial}d{ring.names[k]}")
    return " + ".join(terms) or "0"


def split_odd_form(names: Sequence[str]) -> dict[tuple[int, int], int]:
    """
    The split symmetric form on odd coordinates named ``xi.., eta.., (theta0)``:
    ``Q(xi_i, eta_i) = 1`` and ``Q(theta0, theta0) = 1``.
    """
    half = len(names) // 2
    form = {}
    for i in range(half):
        form[(i, half + i)] = 1
        form[(half + i, i)] = 1
    if len(names) % 2:
        form[(len(names) - 1, len(names) - 1)] = 1
    return form
