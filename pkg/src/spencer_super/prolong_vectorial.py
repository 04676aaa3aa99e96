"""
Vectorial Lie superalgebras in their standard grading.

Each algebra is realized by superderivations of a polynomial-Grassmann
algebra, every coordinate of degree 1. Degree components are spans of vector
fields; algebras with even coordinates are infinite and are truncated at a
degree cutoff (``complete=False``).
"""

import itertools
import logging
from collections.abc import Callable, Mapping, Sequence
from typing import Any

from spencer_super import config
from spencer_super.exactfield import RATIONAL, Vector, kernel_of_rows
from spencer_super.grading import GradedAlgebra, element_from_labels
from spencer_super.liesuper import (
    LieSuperAlgebra,
    NotClosed,
    change_basis,
    coordinates_solver,
    eigenvalue,
)
from spencer_super.liesuper_classical import BadParams, parse_name, regular_targets
from spencer_super.superlinalg import SuperSpace
from spencer_super.superpoly import (
    Field,
    Monomial,
    SuperPolyRing,
    bracket,
    divergence,
    field_term_parity,
    format_field,
    poly_derivative,
    split_odd_form,
)

LOG = logging.getLogger(__name__)


def build_vectorial(
    name: str,
    params: Sequence[int] | None = None,
    max_degree: int | None = None,
    domain=RATIONAL,
) -> GradedAlgebra:
    """
    ``vect(m|n)``, ``svect(m|n)``, ``h(2n|m)``, ``ho(m)``, ``le(n)`` and
    ``sle(n)``. The name may carry its parameters, as in ``"h(0|5)"``.
    """
    if params is None:
        name, params = parse_name(name)
    params = tuple(params)
    cutoff = config.max_degree() if max_degree is None else max_degree
    if cutoff < 1:
        raise BadParams(
            f"Vectorial cutoff must be positive - name:{name} max_degree:{cutoff}"
        )
    if name in ("vect", "svect"):
        m, n = _pair(name, params)
        graded = _vect(m, n, cutoff, domain)
        if name == "svect":
            graded = _divergence_free(graded, f"svect({m}|{n})")
    elif name == "h":
        two_n, m = _pair(name, params)
        if two_n % 2:
            raise BadParams(
                f"h needs an even number of even coordinates - params:{params}"
            )
        graded = _hamiltonian(two_n // 2, m, cutoff, domain)
    elif name == "ho":
        (m,) = _single(name, params)
        full = _hamiltonian(0, m, cutoff, domain)
        graded = _drop_top(full, f"ho({m})")
    elif name in ("le", "sle"):
        (n,) = _single(name, params)
        graded = _le(n, cutoff, domain)
        if name == "sle":
            graded = _divergence_free(graded, f"sle({n})")
    else:
        raise BadParams(f"Unknown vectorial algebra - name:{name}")
    LOG.debug(
        "Vectorial algebra - name:%s sdims:%s complete:%s",
        graded.name,
        graded.sdim_table(),
        graded.complete,
    )
    return graded


def _pair(name: str, params: tuple[int, ...]) -> tuple[int, int]:
    if len(params) != 2 or min(params) < 0 or sum(params) == 0:
        raise BadParams(
            f"Expected (m|n) with m + n > 0 - name:{name} params:{params}"
        )
    return params[0], params[1]


def _single(name: str, params: tuple[int, ...]) -> tuple[int]:
    if len(params) != 1 or params[0] < 1:
        raise BadParams(
            f"Expected one positive parameter - name:{name} params:{params}"
        )
    return (params[0],)


def _vect(m: int, n: int, cutoff: int, domain) -> GradedAlgebra:
    names = tuple(f"x{i + 1}" for i in range(m))
    names += tuple(f"θ{j + 1}" for j in range(n))
    ring = SuperPolyRing(names, (0,) * m + (1,) * n)
    top = n - 1 if m == 0 else cutoff
    components = {}
    for d in range(-1, top + 1):
        keys = [
            (mono, k) for mono in ring.monomials(d + 1) for k in range(ring.rank)
        ]
        components[d] = [{key: domain.one} for key in keys]
    cartan = [{(ring.coordinate(k), k): domain.one} for k in range(ring.rank)]
    labels = {f"e{i + 1}": i for i in range(m)}
    labels |= {f"d{j + 1}": m + j for j in range(n)}
    return _assemble(
        f"vect({m}|{n})", ring, components, top, m == 0, cartan, labels, domain
    )


def hamiltonian_field(
    ring: SuperPolyRing,
    pairs: int,
    form: Mapping[tuple[int, int], int],
    f: Mapping[Monomial, Any],
) -> Field:
    """
    ``H_f = sum (d_{p_i} f d_{q_i} - d_{q_i} f d_{p_i})
    - (-1)^{p(f)} sum Q_jk d_j f d_k`` with ``p_i, q_i`` the first
    ``2 pairs`` coordinates and ``Q`` on the odd ones.
    """
    out: Field = {}
    parity = {ring.parity(mono) for mono in f}
    sign = -1 if parity == {1} else 1
    for i in range(pairs):
        p, q = i, pairs + i
        _accumulate(out, poly_derivative(ring, p, f), q, 1)
        _accumulate(out, poly_derivative(ring, q, f), p, -1)
    offset = 2 * pairs
    for (j, k), x in form.items():
        derivative = poly_derivative(ring, offset + j, f)
        _accumulate(out, derivative, offset + k, -sign * x)
    return out


def le_field(ring: SuperPolyRing, n: int, f: Mapping[Monomial, Any]) -> Field:
    """``Le_f = sum (d_{x_i} f d_{θ_i} + (-1)^{p(f)} d_{θ_i} f d_{x_i})``."""
    out: Field = {}
    parity = {ring.parity(mono) for mono in f}
    sign = -1 if parity == {1} else 1
    for i in range(n):
        _accumulate(out, poly_derivative(ring, i, f), n + i, 1)
        _accumulate(out, poly_derivative(ring, n + i, f), i, sign)
    return out


def _accumulate(out: Field, poly: Mapping[Monomial, Any], k: int, c) -> None:
    for mono, x in poly.items():
        key = (mono, k)
        total = out.get(key, 0) + c * x
        if total:
            out[key] = total
        else:
            out.pop(key, None)


def _hamiltonian(pairs: int, m: int, cutoff: int, domain) -> GradedAlgebra:
    half = m // 2
    odd_names = [f"ξ{i + 1}" for i in range(half)]
    odd_names += [f"η{i + 1}" for i in range(half)]
    odd_names += ["θ0"] if m % 2 else []
    names = tuple(f"p{i + 1}" for i in range(pairs))
    names += tuple(f"q{i + 1}" for i in range(pairs)) + tuple(odd_names)
    ring = SuperPolyRing(names, (0,) * (2 * pairs) + (1,) * m)
    form = split_odd_form(odd_names)
    top = m - 2 if pairs == 0 else cutoff
    make = _field_maker(domain, lambda f: hamiltonian_field(ring, pairs, form, f))
    components = {
        d: [make(mono) for mono in ring.monomials(d + 2)] for d in range(-1, top + 1)
    }
    offset = 2 * pairs
    cartan = [make(_product(ring, i, pairs + i)) for i in range(pairs)]
    cartan += [
        make(_product(ring, offset + i, offset + half + i)) for i in range(half)
    ]
    labels = {f"e{i + 1}": offset + i for i in range(half)}
    labels |= {f"d{i + 1}": i for i in range(pairs)}
    name = f"h({2 * pairs}|{m})"
    return _assemble(name, ring, components, top, pairs == 0, cartan, labels, domain)


def _le(n: int, cutoff: int, domain) -> GradedAlgebra:
    names = tuple(f"x{i + 1}" for i in range(n))
    names += tuple(f"θ{i + 1}" for i in range(n))
    ring = SuperPolyRing(names, (0,) * n + (1,) * n)
    make = _field_maker(domain, lambda f: le_field(ring, n, f))
    components = {
        d: [make(mono) for mono in ring.monomials(d + 2)]
        for d in range(-1, cutoff + 1)
    }
    cartan = [make(_product(ring, i, n + i)) for i in range(n)]
    labels = {f"e{i + 1}": i for i in range(n)}
    return _assemble(
        f"le({n})", ring, components, cutoff, False, cartan, labels, domain
    )


def _product(ring: SuperPolyRing, a: int, b: int) -> Monomial:
    return tuple(1 if i in (a, b) else 0 for i in range(ring.rank))


def _field_maker(
    domain, builder: Callable[[Mapping[Monomial, Any]], Field]
) -> Callable[[Monomial], Field]:
    def make(mono: Monomial) -> Field:
        return builder({mono: domain.one})

    return make


class _VectorialAlgebra(LieSuperAlgebra):
    """A ``LieSuperAlgebra`` that remembers the vector field of every basis element."""

    ring: SuperPolyRing
    fields: list[Field]

    def describe(self, i: int) -> str:
        return format_field(self.ring, self.fields[i])


def _assemble(
    name: str,
    ring: SuperPolyRing,
    components: Mapping[int, Sequence[Field]],
    top: int,
    complete: bool,
    cartan_fields: Sequence[Field],
    coordinate_labels: Mapping[str, int],
    domain,
) -> GradedAlgebra:
    fields: list[Field] = []
    degrees: list[int] = []
    parities: list[int] = []
    for d in sorted(components):
        found = [(f, _field_parity(ring, f)) for f in components[d] if f]
        found.sort(key=lambda item: item[1])
        for f, p in found:
            fields.append(f)
            degrees.append(d)
            parities.append(p)
    index: dict[tuple[Monomial, int], int] = {}
    for f in fields:
        for key in f:
            index.setdefault(key, len(index))

    def coords(f: Mapping[tuple[Monomial, int], Any]) -> Vector:
        missing = [key for key in f if key not in index]
        if missing:
            mono, k = missing[0]
            raise NotClosed(
                f"Bracket leaves the span - name:{name} "
                f"term:{ring.format_monomial(mono)}d{ring.names[k]}"
            )
        return {index[key]: x for key, x in f.items()}

    by_degree = {
        d: [i for i, deg in enumerate(degrees) if deg == d]
        for d in range(-1, top + 1)
    }
    solvers = {
        d: coordinates_solver([coords(fields[i]) for i in members], len(index), domain)
        for d, members in by_degree.items()
    }

    def express(d: int, f: Field) -> Vector:
        local = solvers[d].express(coords(f))
        if local is None:
            raise NotClosed(f"Bracket leaves the span - name:{name} degree:{d}")
        return {by_degree[d][k]: x for k, x in local.items() if x}

    sc: dict[tuple[int, int], Vector] = {}
    for i, j in itertools.product(range(len(fields)), repeat=2):
        d = degrees[i] + degrees[j]
        if d > top or d < -1 or j < i:
            continue
        product = bracket(ring, fields[i], fields[j])
        if not product:
            continue
        entry = express(d, product)
        if not entry:
            continue
        sc[(i, j)] = entry
        if i != j:
            sign = 1 if parities[i] & parities[j] else -1
            sc[(j, i)] = {k: sign * x for k, x in entry.items()}
    labels = tuple(
        f"{name}:{format_field(ring, f, _short)}" if len(f) == 1 else f"{name}:v{i + 1}"
        for i, f in enumerate(fields)
    )
    space = SuperSpace(labels, tuple(parities))
    algebra = _VectorialAlgebra(name, space, domain, sc)
    algebra.ring = ring
    algebra.fields = fields
    algebra.cartan = [express(0, h) for h in cartan_fields]
    minus = by_degree[-1]
    for label, c in coordinate_labels.items():
        target = express(-1, {(ring.one, c): domain.one})
        algebra.weight_labels[label] = tuple(
            -eigenvalue(algebra, h, target) for h in algebra.cartan
        )
    if algebra.weight_labels:
        algebra.raising = _positive_roots(algebra, by_degree[0])
    else:
        algebra.raising = []
    LOG.debug(
        "Vectorial assembly - name:%s dim:%s g-1:%s top:%s",
        name,
        len(fields),
        len(minus),
        top,
    )
    return GradedAlgebra(algebra, tuple(degrees), top, complete)


def _short(x) -> str:
    return "" if x == 1 else f"{x}"


def _field_parity(ring: SuperPolyRing, f: Field) -> int:
    seen = {field_term_parity(ring, key) for key in f}
    if len(seen) != 1:
        raise ValueError(f"Inhomogeneous vector field - terms:{len(f)}")
    return seen.pop()


def _positive_roots(g: LieSuperAlgebra, zero: Sequence[int]) -> list[Vector]:
    """Degree-zero basis vectors positive under the regular functional of the labels."""
    labels = sorted(g.weight_labels, key=lambda lab: (lab[0] != "e", int(lab[1:])))
    h = element_from_labels(g, regular_targets(labels))
    out = []
    for i in zero:
        lam = eigenvalue(g, h, {i: g.domain.one})
        if lam is not None and lam > 0:
            out.append({i: g.domain.one})
    return out


def _divergence_free(graded: GradedAlgebra, name: str) -> GradedAlgebra:
    """The kernel of the divergence, degree by degree and parity by parity."""
    g = graded.algebra
    ring = g.ring
    vectors: list[Vector] = []
    degrees: list[int] = []
    for d in range(-1, graded.top_degree + 1):
        for parity in (0, 1):
            members = [i for i in graded.component(d) if g.parities[i] == parity]
            if not members:
                continue
            rows: dict[Monomial, dict[int, Any]] = {}
            for c, i in enumerate(members):
                for mono, x in divergence(ring, g.fields[i]).items():
                    rows.setdefault(mono, {})[c] = x
            kernel = kernel_of_rows(list(rows.values()), len(members), g.domain)
            for v in kernel:
                vectors.append({members[c]: x for c, x in v.items()})
                degrees.append(d)
    return _rebased(graded, vectors, degrees, name)


def _drop_top(graded: GradedAlgebra, name: str) -> GradedAlgebra:
    """
    Everything below the top degree; closed because no bracket of
    Hamiltonians reaches the top monomial.
    """
    keep = [i for i, d in enumerate(graded.degrees) if d < graded.top_degree]
    vectors = [{i: graded.domain.one} for i in keep]
    return _rebased(graded, vectors, [graded.degrees[i] for i in keep], name)


def _rebased(
    graded: GradedAlgebra,
    vectors: Sequence[Vector],
    degrees: Sequence[int],
    name: str,
) -> GradedAlgebra:
    g = graded.algebra
    labels = [f"{name}:v{k + 1}" for k in range(len(vectors))]
    sub = change_basis(g, vectors, name=name, labels=labels)
    algebra = _VectorialAlgebra(
        sub.name,
        sub.space,
        sub.domain,
        sub.sc,
        sub.cartan,
        sub.raising,
        sub.weight_labels,
    )
    algebra.ring = g.ring
    algebra.fields = [_combine(g.fields, v) for v in vectors]
    top = max(degrees) if graded.complete else graded.top_degree
    return GradedAlgebra(algebra, tuple(degrees), top, graded.complete)


def _combine(fields: Sequence[Field], v: Mapping[int, Any]) -> Field:
    out: Field = {}
    for i, c in v.items():
        for key, x in fields[i].items():
            total = out.get(key, 0) + c * x
            if total:
                out[key] = total
            else:
                out.pop(key, None)
    return out
