"""
Lie superalgebras as sparse structure-constant tables.

A ``LieSuperAlgebra`` stores the brackets of its basis elements as sparse
vectors, together with the torus and Borel data used for weight reporting:
``cartan`` (commuting even elements acting diagonally on the basis),
``raising`` (positive root vectors) and ``weight_labels`` (each label's values
on the ``cartan`` list). Matrix-realized algebras keep their supermatrices so
weights can be read off diagonal entries.
"""

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Any

from spencer_super.exactfield import (
    RATIONAL,
    Subspace,
    Vector,
    independent_columns,
    intersect,
    kernel_of_rows,
    quotient_space,
    vec_iadd,
    vec_scale,
)
from spencer_super.superlinalg import (
    SuperMatrix,
    SuperSpace,
    mat_add,
    matrix_parity,
    supercommutator,
)

LOG = logging.getLogger(__name__)


class DimensionMismatch(ValueError):
    pass


class NotClosed(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


LinearMap = dict[int, Vector]


@dataclass
class LieSuperAlgebra:
    name: str
    space: SuperSpace
    domain: Any
    sc: dict[tuple[int, int], Vector]
    cartan: list[Vector] = field(default_factory=list)
    raising: list[Vector] = field(default_factory=list)
    weight_labels: dict[str, tuple] = field(default_factory=dict)
    matrices: list[SuperMatrix] | None = None
    module_space: SuperSpace | None = None

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def parities(self) -> tuple[int, ...]:
        return self.space.parities

    @property
    def sdim(self) -> tuple[int, int]:
        return self.space.sdim

    def bracket_basis(self, i: int, j: int) -> Vector:
        return self.sc.get((i, j), {})

    def bracket(self, x: Mapping[int, Any], y: Mapping[int, Any]) -> Vector:
        for v in (x, y):
            if v and max(v) >= self.dim:
                raise DimensionMismatch(
                    "Vector outside algebra - "
                    f"name:{self.name} dim:{self.dim} index:{max(v)}"
                )
        out: Vector = {}
        for i, a in x.items():
            for j, b in y.items():
                entry = self.sc.get((i, j))
                if entry:
                    vec_iadd(out, entry, a * b)
        return out

    def parity_of(self, v: Mapping[int, Any]) -> int | None:
        seen = {self.parities[i] & 1 for i, x in v.items() if x}
        if len(seen) > 1:
            return None
        return seen.pop() if seen else 0

    def ad(self, x: Mapping[int, Any]) -> LinearMap:
        """``ad(x)`` as ``{basis index j: [x, e_j]}``."""
        out: LinearMap = {}
        for j in range(self.dim):
            image = self.bracket(x, {j: self.domain.one})
            if image:
                out[j] = image
        return out

    def basis_vector(self, i: int) -> Vector:
        return {i: self.domain.one}

    def matrix_of(self, v: Mapping[int, Any]) -> SuperMatrix:
        if self.matrices is None:
            raise ValueError(f"Algebra has no matrix realization - name:{self.name}")
        out: SuperMatrix = {}
        for i, c in v.items():
            out = mat_add(out, self.matrices[i], c)
        return out


@dataclass
class Representation:
    """``action[i]`` is the supermatrix of basis element ``i`` on ``space``."""

    algebra: LieSuperAlgebra
    space: SuperSpace
    action: list[SuperMatrix]


def check_jacobi(
    g: LieSuperAlgebra, limit: int | None = None
) -> list[tuple[int, int, int]]:
    """
    Exhaustive super Jacobi check over basis triples:
    ``[a,[b,c]] = [[a,b],c] + (-1)^{p(a)p(b)}[b,[a,c]]``.
    """
    violations = []
    p = g.parities
    for a, b, c in itertools.product(range(g.dim), repeat=3):
        lhs = g.bracket({a: 1}, g.bracket_basis(b, c))
        rhs = g.bracket(g.bracket_basis(a, b), {c: 1})
        sign = -1 if p[a] & p[b] & 1 else 1
        vec_iadd(rhs, g.bracket({b: 1}, g.bracket_basis(a, c)), sign)
        if vec_iadd(lhs, rhs, -1):
            violations.append((a, b, c))
            if limit is not None and len(violations) >= limit:
                break
    if violations:
        LOG.warning(
            "Jacobi violations - name:%s count:%s first:%s",
            g.name,
            len(violations),
            violations[0],
        )
    return violations


def check_antisymmetry(g: LieSuperAlgebra) -> list[tuple[int, int]]:
    bad = []
    p = g.parities
    for a in range(g.dim):
        for b in range(a, g.dim):
            sign = 1 if p[a] & p[b] & 1 else -1
            if vec_iadd(dict(g.bracket_basis(a, b)), g.bracket_basis(b, a), -sign):
                bad.append((a, b))
    return bad


def check_representation(rep: Representation) -> list[tuple[int, int]]:
    """Basis pairs violating ``rho([x,y]) = [rho(x), rho(y)]``."""
    g = rep.algebra
    bad = []
    for a in range(g.dim):
        for b in range(a, g.dim):
            lhs: SuperMatrix = {}
            for k, c in g.bracket_basis(a, b).items():
                lhs = mat_add(lhs, rep.action[k], c)
            rhs = supercommutator(
                rep.action[a], rep.action[b], g.parities[a], g.parities[b]
            )
            if mat_add(lhs, rhs, -1):
                bad.append((a, b))
    return bad


def flatten(m: Mapping[tuple[int, int], Any], n: int) -> Vector:
    return {r * n + c: x for (r, c), x in m.items() if x}


def unflatten(v: Mapping[int, Any], n: int) -> SuperMatrix:
    return {divmod(k, n): x for k, x in v.items() if x}


def from_matrices(
    name: str,
    module: SuperSpace,
    matrices: Sequence[Mapping[tuple[int, int], Any]],
    domain=RATIONAL,
) -> LieSuperAlgebra:
    """
    The Lie superalgebra spanned by homogeneous supermatrices under the
    supercommutator. The basis is the rref of the span, even part first;
    ``NotClosed`` is raised when the span is not a subalgebra.
    """
    n = module.dim
    parities = module.parities
    by_parity: dict[int, list[Vector]] = {0: [], 1: []}
    for m in matrices:
        if not m:
            continue
        by_parity[matrix_parity(m, parities)].append(flatten(m, n))
    rows: list[Vector] = []
    pivots: list[int] = []
    basis_parities: list[int] = []
    for parity in (0, 1):
        sub = Subspace.from_vectors(by_parity[parity], n * n, domain)
        rows.extend(sub.rows)
        pivots.extend(sub.pivots)
        basis_parities.extend([parity] * sub.dim)
    span = Subspace(n * n, domain, tuple(rows), tuple(pivots))
    basis = [unflatten(r, n) for r in rows]
    sc: dict[tuple[int, int], Vector] = {}
    for i, j in itertools.product(range(len(basis)), repeat=2):
        if j < i:
            continue
        product = supercommutator(
            basis[i], basis[j], basis_parities[i], basis_parities[j]
        )
        if not product:
            continue
        coords = span.coordinates(flatten(product, n))
        if coords is None:
            raise NotClosed(
                f"Span is not closed under the bracket - name:{name} pair:{(i, j)}"
            )
        entry = {k: c for k, c in enumerate(coords) if c}
        sc[(i, j)] = entry
        if i != j:
            sign = 1 if basis_parities[i] & basis_parities[j] else -1
            sc[(j, i)] = vec_scale(entry, sign)
    labels = tuple(f"x{i + 1}" for i in range(len(basis)))
    LOG.debug("Matrix algebra - name:%s dim:%s", name, len(basis))
    return LieSuperAlgebra(
        name,
        SuperSpace(labels, tuple(basis_parities)),
        domain,
        sc,
        matrices=basis,
        module_space=module,
    )


def defining_representation(g: LieSuperAlgebra) -> Representation:
    if g.matrices is None or g.module_space is None:
        raise ValueError(f"Algebra has no defining module - name:{g.name}")
    return Representation(g, g.module_space, list(g.matrices))


def change_basis(
    g: LieSuperAlgebra,
    vectors: Sequence[Mapping[int, Any]],
    name: str | None = None,
    labels: Sequence[str] | None = None,
) -> LieSuperAlgebra:
    """
    Re-express ``g`` (or the subalgebra spanned by ``vectors``) in the basis
    ``vectors``. Torus and Borel data are carried over where they lie in the
    span; each vector must be parity-homogeneous.
    """
    vectors = [dict(v) for v in vectors]
    parities = []
    for v in vectors:
        p = g.parity_of(v)
        if p is None:
            raise ValueError(f"Inhomogeneous basis vector - name:{g.name}")
        parities.append(p)
    selected, _ = independent_columns(vectors, g.dim, g.domain)
    if len(selected) != len(vectors):
        raise ValueError(
            "Basis vectors are dependent - "
            f"name:{g.name} rank:{len(selected)} count:{len(vectors)}"
        )
    solver = _Coordinates(vectors, g.dim, g.domain)
    sc: dict[tuple[int, int], Vector] = {}
    for i, j in itertools.product(range(len(vectors)), repeat=2):
        product = g.bracket(vectors[i], vectors[j])
        if not product:
            continue
        coords = solver.express(product)
        if coords is None:
            raise NotClosed(
                f"Span is not closed under the bracket - name:{g.name} pair:{(i, j)}"
            )
        if coords:
            sc[(i, j)] = coords
    expressed = [solver.express(h) for h in g.cartan]
    if all(c is not None for c in expressed):
        torus_rows = [dict(h) for h in g.cartan]
        cartan = expressed
    else:
        torus_rows = list(intersect(g.cartan, vectors, g.dim, g.domain).rows)
        cartan = [solver.express(h) for h in torus_rows]
    raising = [c for c in (solver.express(x) for x in g.raising) if c]
    weight_labels = {}
    if g.weight_labels and torus_rows:
        weight_labels = _transport_labels(g, torus_rows)
    matrices = None if g.matrices is None else [g.matrix_of(v) for v in vectors]
    if labels is None:
        labels = tuple(f"x{i + 1}" for i in range(len(vectors)))
    return LieSuperAlgebra(
        name or g.name,
        SuperSpace(tuple(labels), tuple(parities)),
        g.domain,
        sc,
        cartan=cartan,
        raising=raising,
        weight_labels=weight_labels,
        matrices=matrices,
        module_space=g.module_space,
    )


class _Coordinates:
    """Coordinates of vectors with respect to a fixed independent list."""

    def __init__(self, vectors: Sequence[Mapping[int, Any]], ambient: int, domain):
        self.count = len(vectors)
        self.ambient = ambient
        tagged = []
        for i, v in enumerate(vectors):
            row = dict(v)
            row[ambient + i] = domain.one
            tagged.append(row)
        self.span = Subspace.from_vectors(tagged, ambient + self.count, domain)

    def express(self, v: Mapping[int, Any]) -> Vector | None:
        reduced = self.span.reduce(v)
        if any(k < self.ambient for k in reduced):
            return None
        return {k - self.ambient: -x for k, x in reduced.items()}


def coordinates_solver(
    vectors: Sequence[Mapping[int, Any]], ambient: int, domain
) -> _Coordinates:
    return _Coordinates(vectors, ambient, domain)


def subalgebra(
    g: LieSuperAlgebra,
    vectors: Sequence[Mapping[int, Any]],
    name: str | None = None,
) -> LieSuperAlgebra:
    """Subalgebra spanned by ``vectors`` with an rref basis split by parity."""
    by_parity: dict[int, list[Vector]] = {0: [], 1: []}
    for v in vectors:
        for parity in (0, 1):
            part = {i: x for i, x in v.items() if g.parities[i] & 1 == parity}
            if part:
                by_parity[parity].append(part)
    basis = []
    for parity in (0, 1):
        basis.extend(Subspace.from_vectors(by_parity[parity], g.dim, g.domain).basis)
    return change_basis(g, basis, name=name)


def derived_algebra(g: LieSuperAlgebra, name: str | None = None) -> LieSuperAlgebra:
    return subalgebra(g, list(g.sc.values()), name=name or f"[{g.name},{g.name}]")


def quotient(
    g: LieSuperAlgebra,
    ideal: Sequence[Mapping[int, Any]],
    name: str | None = None,
) -> LieSuperAlgebra:
    """
    ``g / ideal`` with basis the non-pivot basis vectors of ``g`` (taken in
    order); brackets are reduced to normal form modulo the ideal.
    """
    sub = Subspace.from_vectors(ideal, g.dim, g.domain)
    for v in sub.rows:
        for j in range(g.dim):
            if not sub.contains(g.bracket(v, {j: g.domain.one})):
                raise NotClosed(f"Not an ideal - name:{g.name} generator:{j}")
    keep = [j for j in range(g.dim) if j not in set(sub.pivots)]
    position = {j: k for k, j in enumerate(keep)}

    def project(v: Mapping[int, Any]) -> Vector:
        return {position[j]: x for j, x in sub.reduce(v).items()}

    sc = {}
    for a, b in itertools.product(range(len(keep)), repeat=2):
        image = project(g.bracket_basis(keep[a], keep[b]))
        if image:
            sc[(a, b)] = image
    reps = quotient_space(sub, g.cartan)
    cartan = [project(r) for r in reps.rows]
    raising = [r for r in (project(x) for x in g.raising) if r]
    matrices = None if g.matrices is None else [g.matrices[j] for j in keep]
    space = g.space.subspace(keep)
    out = LieSuperAlgebra(
        name or f"{g.name}/I",
        space,
        g.domain,
        sc,
        cartan=cartan,
        raising=raising,
        matrices=matrices,
        module_space=g.module_space,
    )
    if g.weight_labels and g.cartan:
        out.weight_labels = _transport_labels(g, reps.rows)
    return out


def _transport_labels(
    g: LieSuperAlgebra, new_cartan: Sequence[Mapping[int, Any]]
) -> dict[str, tuple]:
    """Label values on new Cartan elements given as combinations of ``g`` basis."""
    solver = _Coordinates(g.cartan, g.dim, g.domain)
    out: dict[str, list] = {lab: [] for lab in g.weight_labels}
    for h in new_cartan:
        coords = solver.express(h)
        if coords is None:
            raise ValueError(f"Cartan element outside the torus - name:{g.name}")
        for lab, values in g.weight_labels.items():
            total = g.domain.zero
            for k, c in coords.items():
                total += c * values[k]
            out[lab].append(total)
    return {lab: tuple(vals) for lab, vals in out.items() if any(vals)}


def eigenvalue(g: LieSuperAlgebra, h: Mapping[int, Any], x: Mapping[int, Any]):
    """``lambda`` with ``[h, x] = lambda x``; ``None`` if ``x`` is no eigenvector."""
    image = g.bracket(h, x)
    if not image:
        return g.domain.zero
    k = next(iter(x))
    lam = image.get(k, g.domain.zero) / x[k]
    if vec_iadd(dict(image), x, -lam):
        return None
    return lam


def weight_of(g: LieSuperAlgebra, x: Mapping[int, Any]) -> tuple | None:
    values = []
    for h in g.cartan:
        lam = eigenvalue(g, h, x)
        if lam is None:
            return None
        values.append(lam)
    return tuple(values)


def centralizer_of(
    g: LieSuperAlgebra, vectors: Sequence[Mapping[int, Any]]
) -> list[Vector]:
    """Basis of ``{x : [x, v] = 0 for all v}``."""
    rows: dict[tuple[int, int], Vector] = {}
    for vi, v in enumerate(vectors):
        for i in range(g.dim):
            for k, c in g.bracket({i: g.domain.one}, v).items():
                rows.setdefault((vi, k), {})[i] = c
    return kernel_of_rows(list(rows.values()), g.dim, g.domain)


def supertrace(a: Mapping[tuple[int, int], Any], parities: Sequence[int]):
    """``str(A) = sum (-1)^{p_i} A_ii``."""
    for i, j in a:
        if not (0 <= i < len(parities) and 0 <= j < len(parities)):
            raise ShapeMismatch(
                f"Entry outside format - entry:{(i, j)} size:{len(parities)}"
            )
    total = 0
    for (i, j), x in a.items():
        if i == j:
            total = total - x if parities[i] & 1 else total + x
    return total


def queertrace(a: Mapping[tuple[int, int], Any], n: int):
    """``qtr((A, B; B, A)) = tr B``; raises ``ShapeMismatch`` off the q(n) shape."""
    for (i, j), x in a.items():
        if not (0 <= i < 2 * n and 0 <= j < 2 * n):
            raise ShapeMismatch(f"Entry outside 2n format - entry:{(i, j)} n:{n}")
        mirror = ((i + n) % (2 * n), (j + n) % (2 * n))
        if a.get(mirror, 0) != x:
            raise ShapeMismatch(f"Not of q(n) shape - entry:{(i, j)} n:{n}")
    total = 0
    for i in range(n):
        total = total + a.get((i, n + i), 0)
    return total


def with_borel(
    g: LieSuperAlgebra,
    cartan: Sequence[Mapping[int, Any]],
    raising: Sequence[Mapping[int, Any]],
    weight_labels: Mapping[str, Sequence[Any]],
) -> LieSuperAlgebra:
    return replace(
        g,
        cartan=[dict(h) for h in cartan],
        raising=[dict(x) for x in raising],
        weight_labels={k: tuple(v) for k, v in weight_labels.items()},
    )


def restrict_representation(
    rep: Representation,
    sub: LieSuperAlgebra,
    embedding: Sequence[Mapping[int, Any]],
) -> Representation:
    """``rep`` pulled back along ``sub.basis[i] -> embedding[i]`` in ``rep.algebra``."""
    if len(embedding) != sub.dim:
        raise DimensionMismatch(
            "Embedding size differs from subalgebra - "
            f"name:{sub.name} dim:{sub.dim} images:{len(embedding)}"
        )
    action = []
    for v in embedding:
        m: SuperMatrix = {}
        for i, c in v.items():
            m = mat_add(m, rep.action[i], c)
        action.append(m)
    return Representation(sub, rep.space, action)
