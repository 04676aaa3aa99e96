"""
Depth-one gradings of Lie superalgebras.

A ``GradedAlgebra`` is a Lie superalgebra together with an integer degree per
basis element. Gradings are produced by a grading element (a torus element
whose adjoint eigenvalues are the degrees), or by the semidirect sum of a
degree-zero algebra with a module placed in degree -1. ``build_grading``
turns a registry entry from ``cases.toml`` into the pair of graded algebras
used downstream: the base ``g-1 + g0`` and, when known, the full algebra the
prolong should reproduce.
"""

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Any

import sympy
from sympy.polys.matrices import DomainMatrix

from spencer_super import liesuper_cartan, liesuper_classical
from spencer_super.cases import UnknownCase, load_cases
from spencer_super.exactfield import (
    RATIONAL,
    Subspace,
    Vector,
    as_integer,
    independent_columns,
    kernel_basis,
    to_field,
    vec_iadd,
)
from spencer_super.liesuper import (
    DimensionMismatch,
    LieSuperAlgebra,
    Representation,
    change_basis,
    coordinates_solver,
    defining_representation,
    eigenvalue,
    flatten,
    quotient,
    supertrace,
)
from spencer_super.superlinalg import SuperMatrix, SuperSpace

LOG = logging.getLogger(__name__)

_X = sympy.Symbol("t")


class NotDiagonalizable(ValueError):
    pass


class DepthExceeded(ValueError):
    pass


@dataclass
class GradedAlgebra:
    algebra: LieSuperAlgebra
    degrees: tuple[int, ...]
    top_degree: int | None = None
    complete: bool = True
    grading_element: Vector | None = None

    def __post_init__(self):
        self.degrees = tuple(self.degrees)
        if len(self.degrees) != self.algebra.dim:
            raise DimensionMismatch(
                f"Degree count differs from dimension - name:{self.name} "
                f"degrees:{len(self.degrees)} dim:{self.algebra.dim}"
            )
        if self.top_degree is None:
            self.top_degree = max(self.degrees, default=0)

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def domain(self):
        return self.algebra.domain

    def component(self, d: int) -> list[int]:
        return [i for i, deg in enumerate(self.degrees) if deg == d]

    def has_component(self, d: int) -> bool:
        """False when degree ``d`` lies beyond the cutoff of a truncated algebra."""
        return self.complete or d <= self.top_degree

    def sdim_of(self, d: int) -> tuple[int, int]:
        odd = sum(self.algebra.parities[i] for i in self.component(d))
        return len(self.component(d)) - odd, odd

    def sdim_table(self) -> dict[int, tuple[int, int]]:
        return {d: self.sdim_of(d) for d in range(-1, self.top_degree + 1)}

    def check_degrees(self) -> list[tuple[int, int]]:
        """Basis pairs whose bracket leaves degree ``deg(i) + deg(j)``."""
        bad = []
        for i, j in itertools.product(range(self.algebra.dim), repeat=2):
            target = self.degrees[i] + self.degrees[j]
            image = self.algebra.bracket_basis(i, j)
            if any(self.degrees[k] != target for k in image):
                bad.append((i, j))
        return bad

    def faithful(self) -> list[Vector]:
        """Kernel of the ``g0``-action on ``g-1``, as vectors of ``g``."""
        g0, gm1 = self.component(0), self.component(-1)
        rows: dict[tuple[int, int], Vector] = {}
        for col, i in enumerate(g0):
            for v in gm1:
                for k, c in self.algebra.bracket_basis(i, v).items():
                    rows.setdefault((v, k), {})[col] = c
        if rows:
            m = DomainMatrix.from_dod(
                dict(enumerate(rows.values())), (len(rows), len(g0)), self.domain
            )
            kernel = kernel_basis(m)
        else:
            kernel = [{c: self.domain.one} for c in range(len(g0))]
        return [{g0[c]: x for c, x in v.items()} for v in kernel]

    @property
    def is_faithful(self) -> bool:
        return not self.faithful()

    def restrict(
        self, degrees: Sequence[int], name: str | None = None
    ) -> "GradedAlgebra":
        """The span of the listed components; brackets landing elsewhere must vanish."""
        keep = [i for i, deg in enumerate(self.degrees) if deg in set(degrees)]
        labels = [self.algebra.space.labels[i] for i in keep]
        sub = change_basis(
            self.algebra,
            [{i: self.domain.one} for i in keep],
            name=name or self.name,
            labels=labels,
        )
        return GradedAlgebra(
            sub, tuple(self.degrees[i] for i in keep), max(degrees), True
        )

    def base(self) -> "GradedAlgebra":
        """The truncation ``g-1 + g0``."""
        return self.restrict((-1, 0))

    def degree_zero_algebra(self) -> LieSuperAlgebra:
        keep = self.component(0)
        return change_basis(
            self.algebra,
            [{i: self.domain.one} for i in keep],
            name=f"{self.name}_0",
            labels=[self.algebra.space.labels[i] for i in keep],
        )

    def g0_raising(self, borel: str = "full") -> list[Vector]:
        """Raising operators of ``g`` in ``g0``, only even ones if ``borel="even"``."""
        zero = set(self.component(0))
        out = []
        for x in self.algebra.raising:
            if not x or not set(x) <= zero:
                continue
            if borel == "even" and self.algebra.parity_of(x):
                continue
            out.append(x)
        return out

    def g0_cartan(self) -> list[Vector]:
        zero = set(self.component(0))
        return [h for h in self.algebra.cartan if set(h) <= zero]


def grade_by_element(
    g: LieSuperAlgebra, h: Mapping[int, Any], name: str | None = None
) -> GradedAlgebra:
    """
    Grade ``g`` by the eigenvalues of ``ad(h)``. When the basis already
    consists of eigenvectors it is kept; otherwise the basis is replaced by
    eigenvectors found from the rational roots of the characteristic
    polynomial of each parity block.
    """
    h = dict(h)
    ad = g.ad(h)
    if all(set(image) <= {j} for j, image in ad.items()):
        values = [ad.get(j, {}).get(j, g.domain.zero) for j in range(g.dim)]
        degrees = tuple(_degree(g, x) for x in values)
        algebra = g if name is None else _renamed(g, name)
        graded = GradedAlgebra(algebra, degrees, grading_element=h)
        LOG.debug(
            "Grading by element - name:%s sdims:%s",
            graded.name,
            graded.sdim_table(),
        )
        return graded
    vectors: list[Vector] = []
    degrees = []
    for parity in (0, 1):
        block = [j for j in range(g.dim) if g.parities[j] == parity]
        for lam, kernel in _eigenspaces(g, ad, block):
            vectors.extend(kernel)
            degrees.extend([_degree(g, lam)] * len(kernel))
    order = sorted(
        range(len(vectors)),
        key=lambda k: (degrees[k], g.parity_of(vectors[k]), k),
    )
    ordered = [vectors[k] for k in order]
    rebased = change_basis(g, ordered, name=name or g.name)
    solver = coordinates_solver(ordered, g.dim, g.domain)
    graded = GradedAlgebra(
        rebased,
        tuple(degrees[k] for k in order),
        grading_element=solver.express(h),
    )
    LOG.debug(
        "Grading by element - name:%s sdims:%s", graded.name, graded.sdim_table()
    )
    return graded


def _renamed(g: LieSuperAlgebra, name: str) -> LieSuperAlgebra:
    return replace(g, name=name)


def _degree(g: LieSuperAlgebra, value) -> int:
    degree = as_integer(value)
    if degree is None or degree < -1:
        raise DepthExceeded(
            f"Grading eigenvalue outside -1, 0, 1, ... - name:{g.name} value:{value}"
        )
    return degree


def _eigenspaces(
    g: LieSuperAlgebra, ad: Mapping[int, Vector], block: Sequence[int]
):
    if not block:
        return []
    size = (len(block), len(block))
    position = {j: r for r, j in enumerate(block)}
    dod: dict[int, dict[int, Any]] = {}
    for c, j in enumerate(block):
        for k, x in ad.get(j, {}).items():
            dod.setdefault(position[k], {})[c] = x
    m = DomainMatrix.from_dod(dod, size, g.domain)
    coeffs = m.to_dense().charpoly()
    poly = sympy.Poly.from_list([g.domain.to_sympy(c) for c in coeffs], _X)
    out = []
    found = 0
    roots = sorted(poly.ground_roots(), key=lambda r: sympy.sympify(r).sort_key())
    for root in roots:
        lam = to_field(root, g.domain)
        shifted = dict((r, dict(row)) for r, row in dod.items())
        for r in range(len(block)):
            row = shifted.setdefault(r, {})
            value = row.get(r, g.domain.zero) - lam
            if value:
                row[r] = value
            else:
                row.pop(r, None)
        kernel = kernel_basis(DomainMatrix.from_dod(shifted, size, g.domain))
        found += len(kernel)
        out.append((lam, [{block[c]: x for c, x in v.items()} for v in kernel]))
    if found != len(block):
        raise NotDiagonalizable(
            "ad of the grading element is not diagonalizable over the field - "
            f"name:{g.name} found:{found} size:{len(block)}"
        )
    return sorted(out, key=lambda item: _degree(g, item[0]))


def semidirect(
    g0: LieSuperAlgebra, rep: Representation, name: str | None = None
) -> GradedAlgebra:
    """``V + g0`` with ``V`` abelian in degree -1 and ``[x, v] = rho(x) v``."""
    n = rep.space.dim
    domain = g0.domain
    parities = tuple(rep.space.parities) + tuple(g0.parities)
    sc: dict[tuple[int, int], Vector] = {}
    for (a, b), entry in g0.sc.items():
        sc[(n + a, n + b)] = {n + k: x for k, x in entry.items()}
    for a, m in enumerate(rep.action):
        for (r, c), x in m.items():
            x = to_field(x, domain)
            if not x:
                continue
            vec_iadd(sc.setdefault((n + a, c), {}), {r: x})
            sign = 1 if parities[c] & parities[n + a] else -1
            vec_iadd(sc.setdefault((c, n + a), {}), {r: x}, sign)
    sc = {k: v for k, v in sc.items() if v}
    labels = tuple(rep.space.labels) + tuple(g0.space.labels)
    algebra = LieSuperAlgebra(
        name or f"{rep.space.dim}+{g0.name}",
        SuperSpace(labels, parities),
        domain,
        sc,
        cartan=[{n + k: x for k, x in h.items()} for h in g0.cartan],
        raising=[{n + k: x for k, x in v.items()} for v in g0.raising],
        weight_labels=dict(g0.weight_labels),
    )
    return GradedAlgebra(algebra, (-1,) * n + (0,) * g0.dim, 0, True)


def element_from_labels(g: LieSuperAlgebra, values: Mapping[str, Any]) -> Vector:
    """The torus element on which each weight label takes the given value (others 0)."""
    labels = sorted(set(g.weight_labels) | set(values))
    unknown = sorted(set(values) - set(g.weight_labels))
    if unknown:
        raise liesuper_classical.BadParams(
            f"Grading labels not carried by the torus - name:{g.name} labels:{unknown}"
        )
    columns = [
        {
            li: g.weight_labels[lab][k]
            for li, lab in enumerate(labels)
            if g.weight_labels[lab][k]
        }
        for k in range(len(g.cartan))
    ]
    target = {}
    for li, lab in enumerate(labels):
        if lab in values and to_field(values[lab], g.domain):
            target[li] = to_field(values[lab], g.domain)
    coords = coordinates_solver(columns, len(labels), g.domain).express(target)
    if coords is None:
        raise liesuper_classical.BadParams(
            "Label values are not attained on the torus - "
            f"name:{g.name} values:{dict(values)}"
        )
    h: Vector = {}
    for k, c in coords.items():
        vec_iadd(h, g.cartan[k], c)
    return h


def coweight_element(g: LieSuperAlgebra, node: int, sign: int = -1) -> Vector:
    """
    Torus element with eigenvalue ``sign`` on the positive generator of
    ``node`` (1-based) and 0 on the other positive generators.
    """
    rank = len(g.cartan)
    generators = []
    for k in range(1, rank + 1):
        for label in (f"Y{k}", f"X+{k}"):
            if label in g.space.labels:
                generators.append({g.space.labels.index(label): g.domain.one})
                break
        else:
            raise liesuper_classical.BadParams(
                f"Positive generator not found - name:{g.name} node:{k}"
            )
    columns = []
    for h in g.cartan:
        col = {}
        for k, x in enumerate(generators):
            lam = eigenvalue(g, h, x)
            if lam is None:
                raise NotDiagonalizable(
                    "Generator is not a torus eigenvector - "
                    f"name:{g.name} node:{k + 1}"
                )
            if lam:
                col[k] = lam
        columns.append(col)
    solver = coordinates_solver(columns, rank, g.domain)
    coords = solver.express({node - 1: g.domain.convert(sign)})
    if coords is None:
        raise liesuper_classical.BadParams(
            f"Fundamental coweight not in the torus span - name:{g.name} node:{node}"
        )
    h: Vector = {}
    for i, c in coords.items():
        vec_iadd(h, g.cartan[i], c)
    return h


def reduce_degree_zero(
    graded: GradedAlgebra, name: str | None = None
) -> GradedAlgebra:
    """Replace ``g0`` by its derived algebra ``[g0, g0]``, keeping ``g-1``."""
    g = graded.algebra
    zero = graded.component(0)
    by_parity: dict[int, list[Vector]] = {0: [], 1: []}
    for i, j in itertools.combinations_with_replacement(zero, 2):
        v = g.bracket_basis(i, j)
        if v:
            by_parity[g.parity_of(v)].append(v)
    derived = []
    for parity in (0, 1):
        span = Subspace.from_vectors(by_parity[parity], g.dim, g.domain)
        derived.extend(span.basis)
    minus = graded.component(-1)
    vectors = [{i: g.domain.one} for i in minus] + derived
    labels = [g.space.labels[i] for i in minus]
    labels += [f"r{k + 1}" for k in range(len(derived))]
    reduced = change_basis(
        g, vectors, name=name or f"{graded.name}:reduced", labels=labels
    )
    LOG.debug(
        "Reduced degree zero - name:%s g0:%s reduced:%s",
        graded.name,
        graded.sdim_of(0),
        reduced.space.subspace(range(len(minus), len(vectors))).sdim,
    )
    degrees = (-1,) * len(minus) + (0,) * len(derived)
    return GradedAlgebra(reduced, degrees, 0, True)


def graded_quotient(
    graded: GradedAlgebra,
    ideal: Sequence[Mapping[int, Any]],
    name: str | None = None,
) -> GradedAlgebra:
    """Quotient by an ideal spanned by degree-homogeneous vectors."""
    sub = Subspace.from_vectors(ideal, graded.algebra.dim, graded.domain)
    keep = [j for j in range(graded.algebra.dim) if j not in set(sub.pivots)]
    q = quotient(graded.algebra, ideal, name=name)
    return GradedAlgebra(
        q,
        tuple(graded.degrees[j] for j in keep),
        graded.top_degree,
        graded.complete,
    )


def supertraceless_part(
    graded: GradedAlgebra, name: str | None = None
) -> GradedAlgebra:
    """The supertraceless elements of a matrix-realized graded algebra, by degree."""
    g = graded.algebra
    if g.matrices is None or g.module_space is None:
        raise liesuper_classical.BadParams(
            f"Supertrace needs a matrix realization - name:{graded.name}"
        )
    parities = g.module_space.parities
    traces = [g.domain.convert(supertrace(m, parities)) for m in g.matrices]
    vectors, degrees = [], []
    for d in sorted(set(graded.degrees)):
        for parity in (0, 1):
            block = [i for i in graded.component(d) if g.parities[i] == parity]
            row = {c: traces[i] for c, i in enumerate(block) if traces[i]}
            if not row:
                kernel = [{c: g.domain.one} for c in range(len(block))]
            else:
                m = DomainMatrix.from_dod({0: row}, (1, len(block)), g.domain)
                kernel = kernel_basis(m)
            for v in kernel:
                vectors.append({block[c]: x for c, x in v.items()})
                degrees.append(d)
    sub = change_basis(g, vectors, name=name or f"s{graded.name}")
    LOG.debug("Supertraceless part - name:%s sdim:%s", sub.name, sub.sdim)
    return GradedAlgebra(sub, tuple(degrees), graded.top_degree, graded.complete)


def matrix_coordinates(g: LieSuperAlgebra, m: SuperMatrix) -> Vector:
    n = g.module_space.dim
    columns = [flatten(x, n) for x in g.matrices]
    coords = coordinates_solver(columns, n * n, g.domain).express(flatten(m, n))
    if coords is None:
        raise liesuper_classical.BadParams(
            f"Matrix outside the algebra - name:{g.name}"
        )
    return coords


def psq_family(n: int, p: int, sign: int = 1) -> liesuper_classical.MatrixFamily:
    """
    Matrices of ``sq(n)`` graded by ``diag(1_p, 0 | 1_p, 0)``: with
    ``sign=+1`` all of ``sq(n)``; with ``sign=-1`` the degree-zero part
    together with the degree -1 matrices anticommuting with ``J``.
    """
    if not 0 < p < n:
        raise liesuper_classical.BadParams(
            f"psq grading needs 0 < p < n - n:{n} p:{p}"
        )
    if sign not in (1, -1):
        raise liesuper_classical.BadParams(
            f"psq grading sign must be 1 or -1 - sign:{sign}"
        )
    family = liesuper_classical.queer_family(n, special=True)
    weight = [1 if s % n < p else 0 for s in range(2 * n)]
    if sign < 0:
        family.matrices = [
            m for m in family.matrices if _matrix_degree(m, weight) == 0
        ]
        for r in range(p, n):
            for c in range(p):
                family.matrices.append({(r, c): 1, (n + r, n + c): -1})
                family.matrices.append({(r, n + c): 1, (n + r, c): -1})
    family.name = f"psq({n}):p={p}" + ("" if sign > 0 else ":anti")
    family.ideal = [{(i, i): 1 for i in range(2 * n)}]
    return family


def _matrix_degree(
    m: Mapping[tuple[int, int], Any], weight: Sequence[int]
) -> int | None:
    seen = {weight[r] - weight[c] for (r, c), x in m.items() if x}
    return seen.pop() if len(seen) == 1 else None


def _graded_psq(n: int, p: int, sign: int) -> GradedAlgebra:
    family = psq_family(n, p, sign)
    ideal = family.ideal
    family.ideal = []
    big = liesuper_classical.realize(family, RATIONAL)
    h = element_from_labels(big, {f"e{i + 1}": 1 for i in range(p)})
    graded = grade_by_element(big, h, name=family.name)
    identity = matrix_coordinates(big, ideal[0])
    out = graded_quotient(graded, [identity], name=family.name)
    out.algebra.cartan, out.algebra.weight_labels = _centered_torus(
        big, identity, n
    )
    return out


def _centered_torus(
    big: LieSuperAlgebra, identity: Vector, n: int
) -> tuple[list[Vector], dict[str, tuple]]:
    """
    Torus of ``psq`` as images of ``h - (sum of labels / n) 1``, so the label
    values always sum to zero and weights have a unique label expression.
    """
    sub = Subspace.from_vectors([identity], big.dim, big.domain)
    keep = [j for j in range(big.dim) if j not in set(sub.pivots)]
    position = {j: k for k, j in enumerate(keep)}
    labels = sorted(big.weight_labels)
    images = [
        {position[j]: x for j, x in sub.reduce(h).items()} for h in big.cartan
    ]
    chosen, _ = independent_columns(images, len(keep), big.domain)
    cartan, values = [], {lab: [] for lab in labels}
    for k in chosen:
        total = sum((big.weight_labels[lab][k] for lab in labels), big.domain.zero)
        cartan.append(images[k])
        for lab in labels:
            values[lab].append(big.weight_labels[lab][k] - total / n)
    return cartan, {lab: tuple(vals) for lab, vals in values.items() if any(vals)}


@dataclass
class GradingResult:
    """
    The base ``g-1 + g0``; ``full`` is the algebra the prolong is compared
    with and ``realized`` an algebra whose nonpositive part is the base, when
    the grading table names one.
    """

    base: GradedAlgebra
    full: GradedAlgebra | None = None
    realized: GradedAlgebra | None = None
    notes: list[str] = field(default_factory=list)


def build_grading(
    spec: Mapping[str, Any], alpha=None, max_degree: int | None = None
) -> GradingResult:
    """
    Realize a grading table from the case registry. Kinds:

    - ``element``: a classical algebra graded by label values of its torus
    - ``coweight``: a Cartan-matrix algebra graded by a fundamental coweight
    - ``module``: ``V + g0`` for the defining module (optionally shifted)
    - ``psq``: ``psq(n)`` with ``g0 = ps(q(p) + q(n-p))`` and either ``g-1``
    - ``vectorial``: the standard grading of a vectorial superalgebra

    ``reduce = "derived"`` replaces ``g0`` by ``[g0, g0]`` and leaves nothing
    to compare with. Only the ``module`` kind and the anticommuting ``psq``
    grading have no realized algebra.
    """
    kind = spec.get("kind")
    full: GradedAlgebra | None = None
    realized: GradedAlgebra | None = None
    if kind == "element":
        g = liesuper_classical.build_classical(spec["algebra"])
        h = element_from_labels(g, spec.get("labels", {}))
        name = spec.get("name", g.name)
        full = grade_by_element(g, h, name=name)
        wanted = spec.get("minus_sdim")
        if wanted is not None and full.sdim_of(-1) != tuple(wanted):
            full = grade_by_element(g, {i: -x for i, x in h.items()}, name=name)
        if spec.get("traceless", False):
            full = supertraceless_part(full)
        base = full.base()
        realized = full
    elif kind == "coweight":
        g = liesuper_cartan.build_registered(spec["algebra"], alpha)
        node, sign = int(spec.get("node", 1)), int(spec.get("sign", -1))
        full = grade_by_element(g, coweight_element(g, node, sign))
        base = full.base()
        realized = full
    elif kind == "module":
        g0 = liesuper_classical.build_classical(spec["algebra"])
        rep = defining_representation(g0)
        if spec.get("shift", False):
            rep = Representation(g0, rep.space.parity_shift(), rep.action)
        base = semidirect(g0, rep, name=spec.get("name"))
        if "prolong_of" in spec:
            full = build_grading(spec["prolong_of"], alpha, max_degree).full
    elif kind == "psq":
        n, p, sign = int(spec["n"]), int(spec["p"]), int(spec.get("sign", 1))
        graded = _graded_psq(n, p, sign)
        base = graded.base()
        full = graded if sign > 0 else _graded_psq(n, p, 1)
        realized = graded if sign > 0 else None
    elif kind == "vectorial":
        from spencer_super.prolong_vectorial import build_vectorial

        full = build_vectorial(spec["algebra"], max_degree=max_degree)
        base = full.base()
        realized = full
    else:
        raise UnknownCase(f"Unknown grading kind - kind:{kind}")
    if spec.get("reduce") == "derived":
        base = reduce_degree_zero(base)
        full = realized = None
    bad = base.check_degrees()
    if bad:
        raise DepthExceeded(f"Base is not graded - name:{base.name} pair:{bad[0]}")
    LOG.info(
        "Grading - kind:%s base:%s g-1:%s g0:%s",
        kind,
        base.name,
        base.sdim_of(-1),
        base.sdim_of(0),
    )
    return GradingResult(base, full, realized)


def grading_registry(
    case_name: str, alpha=None, max_degree: int | None = None
) -> GradingResult:
    cases = load_cases()
    if case_name not in cases:
        raise UnknownCase(f"Unknown case - name:{case_name}")
    return build_grading(cases[case_name].grading, alpha, max_degree)
