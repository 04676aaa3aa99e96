"""
Module analysis over the degree-zero part.

A ``ModuleAction`` is a finite-dimensional module given on coordinates: the
operators of a spanning set of the acting algebra, the torus operators and the
raising operators of a Borel. Everything here is exact linear algebra:
weight spaces, highest-weight vectors, generated submodules, an irreducibility
certificate and the socle filtration.
"""

import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

import sympy
from sympy.polys.matrices import DomainMatrix

from spencer_super.exactfield import (
    ALPHA,
    RATIONAL,
    Subspace,
    Vector,
    format_element,
    kernel_basis,
    kernel_of_rows,
    rref,
    to_field,
    vec_iadd,
)
from spencer_super.liesuper import LieSuperAlgebra, coordinates_solver, weight_of
from spencer_super.superlinalg import normal_order

LOG = logging.getLogger(__name__)

LinearMap = dict[int, Vector]

_T = sympy.Symbol("t")


class NonDiagonalizableAction(ValueError):
    pass


def apply_map(op: Mapping[int, Mapping[int, Any]], v: Mapping[int, Any]) -> Vector:
    out: Vector = {}
    for j, x in v.items():
        image = op.get(j)
        if image:
            vec_iadd(out, image, x)
    return out


@dataclass
class ModuleAction:
    parities: tuple[int, ...]
    operators: list[LinearMap]
    op_parities: tuple[int, ...] = ()
    domain: Any = RATIONAL
    cartan: list[LinearMap] = field(default_factory=list)
    raising: list[LinearMap] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(self.parities)
        return self.dim - odd, odd

    def parity_of(self, v: Mapping[int, Any]) -> int:
        seen = {self.parities[i] for i, x in v.items() if x}
        if len(seen) > 1:
            raise ValueError(f"Inhomogeneous module vector - support:{len(v)}")
        return seen.pop() if seen else 0

    def sdim_of(self, sub: Subspace) -> tuple[int, int]:
        odd = sum(self.parities[p] for p in sub.pivots)
        return sub.dim - odd, odd

    def restrict(self, sub: Subspace) -> "ModuleAction":
        """The submodule ``sub`` in the coordinates of its rref rows."""

        def transport(op: LinearMap) -> LinearMap:
            out: LinearMap = {}
            for i, row in enumerate(sub.rows):
                coords = sub.coordinates(apply_map(op, row))
                if coords is None:
                    raise ValueError(f"Subspace is not stable - dim:{sub.dim} row:{i}")
                image = {j: c for j, c in enumerate(coords) if c}
                if image:
                    out[i] = image
            return out

        return ModuleAction(
            tuple(self.parities[p] for p in sub.pivots),
            [transport(op) for op in self.operators],
            self.op_parities,
            self.domain,
            [transport(op) for op in self.cartan],
            [transport(op) for op in self.raising],
        )

    def quotient(self, sub: Subspace) -> "ModuleAction":
        """``M / sub`` on the non-pivot coordinates."""
        pivots = set(sub.pivots)
        keep = [j for j in range(self.dim) if j not in pivots]
        position = {j: k for k, j in enumerate(keep)}

        def transport(op: LinearMap) -> LinearMap:
            out: LinearMap = {}
            for k, j in enumerate(keep):
                image = {position[i]: x for i, x in sub.reduce(op.get(j, {})).items()}
                if image:
                    out[k] = image
            return out

        return ModuleAction(
            tuple(self.parities[j] for j in keep),
            [transport(op) for op in self.operators],
            self.op_parities,
            self.domain,
            [transport(op) for op in self.cartan],
            [transport(op) for op in self.raising],
        )


class _Span:
    """Incrementally grown span in echelon form keyed by pivot."""

    def __init__(self, ambient: int, domain):
        self.ambient = ambient
        self.domain = domain
        self.rows: dict[int, Vector] = {}

    def reduce(self, v: Mapping[int, Any]) -> Vector:
        out = dict(v)
        cursor = -1
        while True:
            candidates = [k for k in out if k > cursor and k in self.rows]
            if not candidates:
                return out
            p = min(candidates)
            vec_iadd(out, self.rows[p], -out[p])
            cursor = p

    def add(self, v: Mapping[int, Any]) -> Vector | None:
        r = self.reduce(v)
        if not r:
            return None
        p = min(r)
        lead = r[p]
        r = {k: x / lead for k, x in r.items()}
        self.rows[p] = r
        return r

    def contains(self, v: Mapping[int, Any]) -> bool:
        return not self.reduce(v)

    def subspace(self) -> Subspace:
        rows = list(self.rows.values())
        return Subspace.from_vectors(rows, self.ambient, self.domain)


def submodule_generated(
    vectors: Sequence[Mapping[int, Any]], action: ModuleAction
) -> Subspace:
    """The smallest operator-stable subspace containing ``vectors``."""
    span = _Span(action.dim, action.domain)
    queue = [r for r in (span.add(v) for v in vectors) if r is not None]
    while queue:
        current = queue.pop()
        for op in action.operators:
            added = span.add(apply_map(op, current))
            if added is not None:
                queue.append(added)
    return span.subspace()


@dataclass
class WeightVector:
    vector: Vector
    weight: tuple
    parity: int


def weight_spaces(action: ModuleAction) -> dict[tuple, list[Vector]]:
    """
    Simultaneous eigenspaces of the torus operators, each split by parity.
    Basis vectors that are already eigenvectors are kept as they are.
    """
    one = action.domain.one
    fast = all(
        set(op.get(j, {})) <= {j} for op in action.cartan for j in range(action.dim)
    )
    spaces: dict[tuple, list[Vector]] = {}
    if fast:
        zero = action.domain.zero
        for j in range(action.dim):
            weight = tuple(op.get(j, {}).get(j, zero) for op in action.cartan)
            spaces.setdefault(weight, []).append({j: one})
        return spaces
    for parity in (0, 1):
        start = [{j: one} for j in range(action.dim) if action.parities[j] == parity]
        pieces: list[tuple[tuple, list[Vector]]] = [((), start)]
        for op in action.cartan:
            refined = []
            for weight, vectors in pieces:
                for lam, sub in _eigen_split(action, op, vectors):
                    refined.append((weight + (lam,), sub))
            pieces = refined
        for weight, vectors in pieces:
            if vectors:
                spaces.setdefault(weight, []).extend(vectors)
    return spaces


def _eigen_split(
    action: ModuleAction, op: LinearMap, vectors: list[Vector]
) -> list[tuple[Any, list[Vector]]]:
    if not vectors:
        return []
    domain = action.domain
    solver = coordinates_solver(vectors, action.dim, domain)
    n = len(vectors)
    dod: dict[int, dict[int, Any]] = {}
    for c, v in enumerate(vectors):
        coords = solver.express(apply_map(op, v))
        if coords is None:
            raise NonDiagonalizableAction(
                f"Torus does not preserve the piece - size:{n}"
            )
        for r, x in coords.items():
            dod.setdefault(r, {})[c] = x
    m = DomainMatrix.from_dod(dod, (n, n), domain)
    coeffs = m.to_dense().charpoly()
    poly = sympy.Poly.from_list([domain.to_sympy(c) for c in coeffs], _T)
    out = []
    found = 0
    roots = sorted(poly.ground_roots(), key=lambda r: sympy.sympify(r).sort_key())
    for root in roots:
        lam = to_field(root, domain)
        shifted = {r: dict(row) for r, row in dod.items()}
        for r in range(n):
            row = shifted.setdefault(r, {})
            value = row.get(r, domain.zero) - lam
            if value:
                row[r] = value
            else:
                row.pop(r, None)
        kernel = kernel_basis(DomainMatrix.from_dod(shifted, (n, n), domain))
        found += len(kernel)
        sub = []
        for k in kernel:
            w: Vector = {}
            for c, x in k.items():
                vec_iadd(w, vectors[c], x)
            sub.append(w)
        out.append((lam, sub))
    if found != n:
        raise NonDiagonalizableAction(
            "Torus operator is not diagonalizable over the field - "
            f"found:{found} size:{n}"
        )
    return out


def _weight_key(weight: tuple) -> tuple[str, ...]:
    return tuple(format_element(x) for x in weight)


def highest_weight_vectors(action: ModuleAction) -> list[WeightVector]:
    """
    Basis of the joint kernel of the raising operators, weight space by
    weight space and parity by parity.
    """
    out = []
    spaces = weight_spaces(action)
    for weight in sorted(spaces, key=_weight_key):
        for parity in (0, 1):
            vectors = [v for v in spaces[weight] if action.parity_of(v) == parity]
            if not vectors:
                continue
            rows: dict[tuple[int, int], dict[int, Any]] = {}
            for c, v in enumerate(vectors):
                for r, op in enumerate(action.raising):
                    for i, x in apply_map(op, v).items():
                        rows.setdefault((r, i), {})[c] = x
            kernel = kernel_of_rows(list(rows.values()), len(vectors), action.domain)
            for k in kernel:
                w: Vector = {}
                for c, x in k.items():
                    vec_iadd(w, vectors[c], x)
                out.append(WeightVector(w, weight, parity))
    return out


@dataclass
class IrreducibilityCheck:
    irreducible: bool
    witness: Subspace | None = None


def is_irreducible(action: ModuleAction) -> IrreducibilityCheck:
    """
    Irreducible when every weight-space basis vector generates the whole
    module; otherwise the first proper generated submodule is the witness.
    """
    if action.dim == 0:
        return IrreducibilityCheck(False)
    spaces = weight_spaces(action)
    for weight in sorted(spaces, key=_weight_key):
        for v in spaces[weight]:
            generated = submodule_generated([v], action)
            if generated.dim < action.dim:
                return IrreducibilityCheck(False, generated)
    return IrreducibilityCheck(True)


def _embed(outer: Subspace, inner: Subspace) -> Subspace:
    """Rows of ``inner``, coordinates on ``outer.rows``, as ambient vectors."""
    vectors = []
    for row in inner.rows:
        v: Vector = {}
        for i, x in row.items():
            vec_iadd(v, outer.rows[i], x)
        vectors.append(v)
    return Subspace.from_vectors(vectors, outer.ambient, outer.domain)


def find_simple(action: ModuleAction, start: Subspace | None = None) -> Subspace:
    """
    A simple submodule inside ``start`` (default the whole module), by
    descent on witnesses.
    """
    current = start or Subspace.full(action.dim, action.domain)
    while True:
        check = is_irreducible(action.restrict(current))
        if check.irreducible:
            return current
        current = _embed(current, check.witness)


@dataclass
class Component:
    weight: tuple
    parity: int
    sdim: tuple[int, int]
    kind: str


@dataclass
class Layer:
    sdim: tuple[int, int]
    components: list[Component]


@dataclass
class ModuleReport:
    sdim: tuple[int, int]
    hwvs: list[WeightVector]
    generated: list[tuple[int, int]]
    layers: list[Layer]
    split: bool


def _component(action: ModuleAction, sub: Subspace, weight: tuple) -> Component:
    inner = action.restrict(sub)
    top = [w for w in highest_weight_vectors(inner) if w.weight == weight]
    odd = sum(w.parity for w in top)
    kind = "Q" if (len(top) - odd, odd) == (1, 1) else "G"
    parity = top[0].parity if top else 0
    return Component(weight, parity, action.sdim_of(sub), kind)


def _socle(action: ModuleAction) -> tuple[Subspace, list[Component]]:
    span = _Span(action.dim, action.domain)
    components = []
    for w in highest_weight_vectors(action):
        if span.contains(w.vector):
            continue
        generated = submodule_generated([w.vector], action)
        if not is_irreducible(action.restrict(generated)).irreducible:
            continue
        for row in generated.rows:
            span.add(row)
        components.append(_component(action, generated, w.weight))
    if not components:
        simple = find_simple(action)
        weights = [w.weight for w in highest_weight_vectors(action.restrict(simple))]
        for row in simple.rows:
            span.add(row)
        components.append(_component(action, simple, weights[0] if weights else ()))
    return span.subspace(), components


def composition_report(action: ModuleAction) -> ModuleReport:
    """
    Highest-weight vectors with the sdims of the submodules they generate,
    and the socle filtration: each layer is the sum of the simple submodules
    generated by highest-weight vectors of the current quotient.
    """
    hwvs = highest_weight_vectors(action)
    submodules = [submodule_generated([w.vector], action) for w in hwvs]
    generated = [action.sdim_of(sub) for sub in submodules]
    layers = []
    current = action
    while current.dim:
        socle, components = _socle(current)
        layers.append(Layer(current.sdim_of(socle), components))
        LOG.debug(
            "Socle layer - index:%s sdim:%s components:%s",
            len(layers) - 1,
            layers[-1].sdim,
            len(components),
        )
        current = current.quotient(socle)
    split = is_direct_sum(action, hwvs, submodules)
    if split != (len(layers) <= 1):
        raise ValueError(
            "Splitting disagrees with the socle filtration - "
            f"split:{split} layers:{len(layers)}"
        )
    return ModuleReport(action.sdim, hwvs, generated, layers, split)


def is_direct_sum(
    action: ModuleAction,
    hwvs: Sequence[WeightVector],
    submodules: Sequence[Subspace],
) -> bool:
    """
    True when the module is the direct sum of simple submodules generated by
    highest-weight vectors. A vector already inside the sum is skipped, so the
    even and odd highest vectors of one queer-type simple count once.
    """
    span = _Span(action.dim, action.domain)
    for w, sub in zip(hwvs, submodules):
        if span.contains(w.vector):
            continue
        if not is_irreducible(action.restrict(sub)).irreducible:
            LOG.debug(
                "Reducible generated submodule - weight:%s sdim:%s",
                _weight_key(w.weight),
                action.sdim_of(sub),
            )
            return False
        for row in sub.rows:
            span.add(row)
    return len(span.rows) == action.dim


def translate_weight(
    values: Sequence[Any],
    labels: Mapping[str, Sequence[Any]],
    renames: Mapping[str, str] | None = None,
    sign: int = 1,
    domain=RATIONAL,
) -> dict[str, Any]:
    """
    Express raw torus eigenvalues in the weight labels. When the labels are
    dependent on the torus the solution of minimal norm is taken. Renames map
    a label to a new name; ``""`` drops it and a leading ``-`` negates it.
    """
    names = list(labels)
    width = len(values)
    columns = [
        {k: labels[name][k] for k in range(width) if labels[name][k]}
        for name in names
    ]
    target = {k: to_field(x, domain) for k, x in enumerate(values) if x}
    base = coordinates_solver(columns, width, domain).express(target)
    if base is None:
        shown = [format_element(x) for x in values]
        raise ValueError(
            f"Weight is not a label combination - values:{shown} labels:{names}"
        )
    rows = [
        {i: columns[i][k] for i in range(len(names)) if k in columns[i]}
        for k in range(width)
    ]
    kernel = kernel_of_rows(rows, len(names), domain)
    if kernel:
        base = _minimal_norm(base, kernel, len(names), domain)
    out: dict[str, Any] = {}
    renames = renames or {}
    for i, name in enumerate(names):
        c = base.get(i)
        if not c:
            continue
        new = renames.get(name, name)
        if new == "":
            continue
        if new.startswith("-"):
            new, c = new[1:], -c
        out[new] = out.get(new, domain.zero) + sign * c
    return {k: v for k, v in out.items() if v}


def _minimal_norm(base: Vector, kernel: Sequence[Vector], n: int, domain) -> Vector:
    """``base - sum t_j u_j`` orthogonal to every kernel vector ``u_i``."""

    def dot(u: Mapping[int, Any], v: Mapping[int, Any]):
        return sum((x * v[i] for i, x in u.items() if i in v), domain.zero)

    size = len(kernel)
    rows = []
    for i in range(size):
        row = {j: dot(kernel[i], kernel[j]) for j in range(size)}
        row[size] = dot(kernel[i], base)
        rows.append({j: x for j, x in row.items() if x})
    m = DomainMatrix.from_dod(dict(enumerate(rows)), (size, size + 1), domain)
    _, pivots, reduced = rref(m)
    dod = reduced.to_dod()
    out = dict(base)
    for r, p in enumerate(pivots):
        t = dod.get(r, {}).get(size)
        if t:
            vec_iadd(out, kernel[p], -t)
    return out


def format_weight(weight: Mapping[str, Any]) -> str:
    """``{"ε1": 2, "δ1": -1} -> "2ε1-δ1"`` with labels in insertion order."""
    parts = []
    for name, c in weight.items():
        text = format_element(c)
        if text == "1":
            coeff = ""
        elif text == "-1":
            coeff = "-"
        elif re.fullmatch(r"-?\d+(/\d+)?", text):
            coeff = text
        else:
            coeff = f"({text})"
        term = f"{coeff}{name}"
        parts.append(term if not parts or term.startswith("-") else f"+{term}")
    return "".join(parts) or "0"


def format_raw(weight: Sequence[Any], sign: int = 1) -> list[str]:
    return [format_element(sign * x) for x in weight]


def even_reflections(
    g: LieSuperAlgebra,
    cartan: Sequence[Vector],
    raising: Sequence[Vector],
    zero: Sequence[int],
) -> list[tuple[tuple, tuple]]:
    """
    ``(alpha, h)`` pairs for even raising root vectors ``e`` that have an
    opposite root vector ``f`` among the degree-zero basis: ``h = [e, f]``
    expressed on ``cartan``, scaled so that ``alpha(h) = 2``.
    """
    torus = LieSuperAlgebra(g.name, g.space, g.domain, g.sc, cartan=list(cartan))
    solver = coordinates_solver(cartan, g.dim, g.domain)
    weights = {i: weight_of(torus, {i: g.domain.one}) for i in zero}
    out = []
    for e in raising:
        if g.parity_of(e):
            continue
        alpha = weight_of(torus, e)
        if alpha is None:
            continue
        negative = tuple(-x for x in alpha)
        for i, w in weights.items():
            if w != negative:
                continue
            h = solver.express(g.bracket(e, {i: g.domain.one}))
            if not h:
                continue
            coeffs = tuple(h.get(k, g.domain.zero) for k in range(len(cartan)))
            pairing = sum((c * a for c, a in zip(coeffs, alpha)), g.domain.zero)
            if pairing:
                out.append((alpha, tuple(2 * c / pairing for c in coeffs)))
                break
    return out


def check_weyl_invariance(
    weights: Mapping[tuple, int], reflections: Sequence[tuple[tuple, tuple]]
) -> bool:
    """The weight multiset is preserved by every materialized reflection."""
    if not reflections:
        LOG.info("Weyl check skipped - reason:no reflections materialized")
        return True
    for alpha, h in reflections:
        for weight, mult in weights.items():
            pairing = sum((c * x for c, x in zip(h, weight)), 0)
            image = tuple(x - pairing * a for x, a in zip(weight, alpha))
            if weights.get(image, 0) != mult:
                LOG.warning(
                    "Weyl invariance fails - weight:%s image:%s",
                    _weight_key(weight),
                    _weight_key(image),
                )
                return False
    return True


def weight_multiset(action: ModuleAction) -> dict[tuple, int]:
    return {w: len(vs) for w, vs in weight_spaces(action).items()}


_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉−α", "0123456789-a")
_TERM_RE = re.compile(r"^(?P<coef>.*?)(?P<elem>[XHY]\d+)(?P<forms>(?:dY\d+)+)$")


def parse_cocycle(text: str, space, alpha=None) -> Vector:
    """
    Parse a written cochain such as ``"(1+α)X₂dY₄dY₅ + X₆dY₁dY₄"`` against a
    cochain space whose algebra uses the ``X/H/Y`` word labels. A given
    ``alpha`` is substituted into the coefficients.
    """
    g = space.graded.algebra
    labels = list(g.space.labels)
    position = {j: a for a, j in enumerate(space.minus)}
    q = space.xi_parities
    cleaned = text.translate(_SUBSCRIPTS).replace("²", "^2").replace(" ", "")
    out: Vector = {}
    for term in _split_terms(cleaned):
        match = _TERM_RE.match(term)
        if not match:
            raise ValueError(f"Unparseable cochain term - term:{term}")
        coef = _coefficient(match.group("coef"), g.domain, alpha)
        elem = match.group("elem")
        if elem not in labels:
            raise ValueError(f"Unknown element in cochain - element:{elem}")
        slots = []
        for y in re.findall(r"dY(\d+)", match.group("forms")):
            j = labels.index(f"Y{y}")
            if j not in position:
                raise ValueError(f"Form on an element outside g-1 - element:Y{y}")
            slots.append(position[j])
        sign, ordered = normal_order(slots, lambda a: q[a])
        if not sign:
            continue
        vec_iadd(out, {space.index[(labels.index(elem), ordered)]: sign * coef})
    return out


def _split_terms(text: str) -> list[str]:
    terms, depth, current = [], 0, ""
    for ch in text:
        if ch in "+-" and depth == 0 and current and not current.endswith("^"):
            terms.append(current)
            current = "" if ch == "+" else "-"
            continue
        depth += ch == "("
        depth -= ch == ")"
        current += ch
    if current:
        terms.append(current)
    return terms


def _coefficient(text: str, domain, alpha=None):
    if text in ("", "+"):
        return domain.one
    if text == "-":
        return -domain.one
    expr = re.sub(r"(?<=[0-9a)])(?=[a(])", "*", text.replace("^", "**"))
    value = sympy.sympify(expr, locals={"a": ALPHA})
    if alpha is not None:
        value = value.subs(ALPHA, sympy.Rational(str(alpha)))
    return to_field(value, domain)
