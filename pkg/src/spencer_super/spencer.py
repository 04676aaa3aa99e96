"""
The Spencer complex of a graded Lie superalgebra.

Cochains of bidegree ``(k, s)`` are ``g_{k-s} (x) S^s(Π g'-1)``: the dual of
``Y_i`` in ``g-1`` is the symbol ``ξ_i`` of parity ``p(Y_i) + 1``, so
supersymmetric polynomials in the ``ξ`` play the role of exterior forms. A basis
cochain is ``(b, (a_1 <= … <= a_s))``; its reported parity is
``p(b) + sum p(Y_{a_j})``. The differential is that of the abelian algebra
``g-1`` with coefficients in ``g``:

    D(m (x) ω) = sum_i (-1)^{q_i p(m)} [Y_i, m] (x) ξ_i ω

and it commutes with the ``g0``-action up to ``(-1)^{p(x)}``. SIGNS.md has the
conventions.
"""

import functools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from spencer_super import config
from spencer_super.exactfield import (
    Subspace,
    Vector,
    columns_matrix,
    format_element,
    kernel_basis,
    quotient_space,
    vec_iadd,
)
from spencer_super.grading import GradedAlgebra
from spencer_super.liesuper import eigenvalue
from spencer_super.modstruct import LinearMap, ModuleAction, apply_map
from spencer_super.superlinalg import format_sdim, monomials, normal_order

LOG = logging.getLogger(__name__)


class MissingComponent(ValueError):
    pass


@dataclass
class CochainSpace:
    graded: GradedAlgebra
    k: int
    s: int
    coefficients: list[int] = field(init=False)
    minus: list[int] = field(init=False)
    monomials: list[tuple[int, ...]] = field(init=False)
    basis: list[tuple[int, tuple[int, ...]]] = field(init=False)

    def __post_init__(self):
        d = self.k - self.s
        if self.s < 0:
            raise ValueError(f"Negative cochain degree - k:{self.k} s:{self.s}")
        if not self.graded.has_component(d):
            raise MissingComponent(
                "Component beyond the prolong cutoff - "
                f"name:{self.graded.name} degree:{d} top:{self.graded.top_degree}"
            )
        self.coefficients = self.graded.component(d) if d >= -1 else []
        self.minus = self.graded.component(-1)
        self.monomials = monomials(self.xi_parities, self.s)
        self.basis = [(b, mono) for b in self.coefficients for mono in self.monomials]
        LOG.debug(
            "Cochain space - name:%s k:%s s:%s dim:%s",
            self.graded.name,
            self.k,
            self.s,
            len(self.basis),
        )

    @functools.cached_property
    def xi_parities(self) -> tuple[int, ...]:
        g = self.graded.algebra
        return tuple((g.parities[i] + 1) & 1 for i in self.minus)

    @functools.cached_property
    def index(self) -> dict[tuple[int, tuple[int, ...]], int]:
        return {key: c for c, key in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def parity(self, c: int) -> int:
        g = self.graded.algebra
        b, mono = self.basis[c]
        return (g.parities[b] + sum(g.parities[self.minus[a]] for a in mono)) & 1

    @functools.cached_property
    def parities(self) -> tuple[int, ...]:
        return tuple(self.parity(c) for c in range(self.dim))

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(self.parities)
        return self.dim - odd, odd

    @functools.cached_property
    def weights(self) -> list[tuple | None]:
        """Torus weights of the basis cochains, ``None`` off a weight basis."""
        g = self.graded.algebra
        cartan = self.graded.g0_cartan()
        one = g.domain.one
        cache: dict[int, tuple | None] = {}

        def weight(i: int):
            if i not in cache:
                values = [eigenvalue(g, h, {i: one}) for h in cartan]
                cache[i] = None if any(v is None for v in values) else tuple(values)
            return cache[i]

        out = []
        for b, mono in self.basis:
            wb = weight(b)
            parts = [weight(self.minus[a]) for a in mono]
            if wb is None or any(p is None for p in parts):
                out.append(None)
                continue
            total = list(wb)
            for p in parts:
                total = [x - y for x, y in zip(total, p)]
            out.append(tuple(total))
        return out

    def label(self, c: int) -> str:
        g = self.graded.algebra
        b, mono = self.basis[c]
        labels = g.space.labels
        return labels[b] + "".join(f"d{labels[self.minus[a]]}" for a in mono)

    def format(self, v: Mapping[int, Any]) -> str:
        terms = [f"{format_element(x)}*{self.label(c)}" for c, x in sorted(v.items())]
        return " + ".join(terms) or "0"


@dataclass
class Differential:
    source: CochainSpace
    target: CochainSpace
    columns: list[Vector]

    def matrix(self):
        return columns_matrix(self.columns, self.target.dim, self.source.graded.domain)

    def apply(self, v: Mapping[int, Any]) -> Vector:
        return apply_map(dict(enumerate(self.columns)), v)


def spencer_differential(graded: GradedAlgebra, k: int, s: int) -> Differential:
    """``D: C^{k,s} -> C^{k,s+1}``."""
    source = CochainSpace(graded, k, s)
    target = CochainSpace(graded, k, s + 1)
    g = graded.algebra
    q = source.xi_parities
    columns: list[Vector] = []
    for b, mono in source.basis:
        image: Vector = {}
        pb = g.parities[b]
        for i, y in enumerate(source.minus):
            entry = g.bracket_basis(y, b)
            if not entry:
                continue
            sign, ordered = normal_order((i, *mono), lambda a: q[a])
            if not sign:
                continue
            if q[i] & pb:
                sign = -sign
            for m, x in entry.items():
                vec_iadd(image, {target.index[(m, ordered)]: sign * x})
        columns.append(image)
    return Differential(source, target, columns)


def cochain_action(
    graded: GradedAlgebra, x: Mapping[int, Any], k: int, s: int
) -> LinearMap:
    """
    The action of a homogeneous ``x`` in ``g0`` on ``C^{k,s}``:
    ``x (m (x) ω) = [x, m] (x) ω + (-1)^{p(x)p(m)} m (x) θ_x(ω)``, where
    ``θ_x(ξ_k) = -(-1)^{p(x) p(Y_k)} sum_l a_kl ξ_l`` for ``[x, Y_l] = sum_k a_kl Y_k``
    and ``θ_x`` acts as a derivation of parity ``p(x)``.
    """
    space = CochainSpace(graded, k, s)
    g = graded.algebra
    e = g.parity_of(x)
    if e is None:
        raise ValueError(f"Inhomogeneous degree-zero element - name:{graded.name}")
    q = space.xi_parities
    position = {j: a for a, j in enumerate(space.minus)}
    theta: dict[int, Vector] = {}
    for l, y in enumerate(space.minus):
        for kk, coeff in g.bracket(x, {y: g.domain.one}).items():
            a = position.get(kk)
            if a is None:
                raise ValueError(f"Element does not preserve g-1 - name:{graded.name}")
            sign = -1 if e & g.parities[kk] else 1
            vec_iadd(theta.setdefault(a, {}), {l: -sign * coeff})
    out: LinearMap = {}
    for c, (b, mono) in enumerate(space.basis):
        image: Vector = {}
        for m, coeff in g.bracket(x, {b: g.domain.one}).items():
            vec_iadd(image, {space.index[(m, mono)]: coeff})
        outer = -1 if e & g.parities[b] else 1
        passed = 0
        for t, a in enumerate(mono):
            inner = -1 if e & passed else 1
            for l, coeff in theta.get(a, {}).items():
                replaced = mono[:t] + (l,) + mono[t + 1 :]
                sign, ordered = normal_order(replaced, lambda z: q[z])
                if sign:
                    term = outer * inner * sign * coeff
                    vec_iadd(image, {space.index[(b, ordered)]: term})
            passed = (passed + q[a]) & 1
        if image:
            out[c] = image
    return out


@dataclass
class CohomologyReport:
    k: int
    s: int
    space: CochainSpace
    cycles: int
    boundaries: int
    representatives: list[Vector]
    parities: list[int]
    weights: list[tuple | None]
    image: Subspace
    classes: Subspace

    @property
    def dim(self) -> int:
        return len(self.representatives)

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(self.parities)
        return self.dim - odd, odd

    def coordinates(self, cocycle: Mapping[int, Any]) -> list[Any]:
        """Quotient coordinates of a cocycle on the representatives."""
        coords = self.classes.coordinates(self.image.reduce(cocycle))
        if coords is None:
            raise ValueError(f"Not a cocycle of this bidegree - k:{self.k} s:{self.s}")
        return coords

    def is_exact(self, cochain: Mapping[int, Any]) -> bool:
        return self.image.contains(cochain)

    def summary(self) -> dict[str, Any]:
        return {
            "k": self.k,
            "s": self.s,
            "sdim": format_sdim(self.sdim),
            "cochains": format_sdim(self.space.sdim),
            "cycles": self.cycles,
            "boundaries": self.boundaries,
        }


def cohomology(graded: GradedAlgebra, k: int, s: int = 2) -> CohomologyReport:
    """
    ``H^{k,s}`` with representatives: normal forms of cocycles modulo the
    image of ``D``, in rref. The computation runs per block of equal parity
    and torus weight when the basis is a weight basis.
    """
    space = CochainSpace(graded, k, s)
    outgoing = spencer_differential(graded, k, s)
    domain = graded.domain
    images: list[Vector] = []
    if s > 0:
        incoming = spencer_differential(graded, k, s - 1)
        images = [v for v in incoming.columns if v]
    image = Subspace.from_vectors(images, space.dim, domain)
    blocks = _blocks(space)
    reps: list[Vector] = []
    pivots: list[int] = []
    parities: list[int] = []
    weights: list[tuple | None] = []
    cycles = 0
    for key in sorted(blocks, key=_block_order):
        members = blocks[key]
        cols = [outgoing.columns[c] for c in members]
        kernel = kernel_basis(columns_matrix(cols, outgoing.target.dim, domain))
        cycles += len(kernel)
        cocycles = [{members[c]: x for c, x in v.items()} for v in kernel]
        quotient = quotient_space(image, cocycles)
        reps.extend(quotient.rows)
        pivots.extend(quotient.pivots)
        parities.extend([key[0]] * quotient.dim)
        weights.extend([key[1]] * quotient.dim)
    classes = Subspace(space.dim, domain, tuple(reps), tuple(pivots))
    report = CohomologyReport(
        k, s, space, cycles, image.dim, reps, parities, weights, image, classes
    )
    if config.checks_enabled():
        bad = check_d_squared(graded, k, s)
        if bad:
            raise ValueError(
                "D∘D does not vanish - "
                f"name:{graded.name} k:{k} s:{s} columns:{bad[:5]}"
            )
    LOG.debug(
        "Cohomology - name:%s k:%s s:%s cochains:%s cycles:%s boundaries:%s sdim:%s",
        graded.name,
        k,
        s,
        space.dim,
        cycles,
        image.dim,
        format_sdim(report.sdim),
    )
    return report


def _blocks(space: CochainSpace) -> dict[tuple[int, tuple | None], list[int]]:
    weights = space.weights
    use_weights = all(w is not None for w in weights)
    blocks: dict[tuple[int, tuple | None], list[int]] = {}
    for c in range(space.dim):
        key = (space.parities[c], weights[c] if use_weights else None)
        blocks.setdefault(key, []).append(c)
    return blocks


def _block_order(key: tuple[int, tuple | None]):
    parity, weight = key
    return parity, () if weight is None else tuple(format_element(x) for x in weight)


def check_d_squared(graded: GradedAlgebra, k: int, s: int) -> list[int]:
    """Basis cochains of ``C^{k,s}`` on which ``D∘D`` does not vanish."""
    first = spencer_differential(graded, k, s)
    second = spencer_differential(graded, k, s + 1)
    return [c for c, v in enumerate(first.columns) if second.apply(v)]


def check_equivariance(
    graded: GradedAlgebra,
    k: int,
    s: int,
    elements: Sequence[Mapping[int, Any]] | None = None,
) -> list[tuple[int, int]]:
    """Pairs ``(element, cochain)`` violating ``D(x c) = (-1)^{p(x)} x D(c)``."""
    g = graded.algebra
    if elements is None:
        elements = [{i: g.domain.one} for i in graded.component(0)]
    d = spencer_differential(graded, k, s)
    bad = []
    for xi, x in enumerate(elements):
        sign = -1 if g.parity_of(x) else 1
        here = cochain_action(graded, x, k, s)
        there = cochain_action(graded, x, k, s + 1)
        for c in range(d.source.dim):
            lhs = d.apply(here.get(c, {}))
            rhs = apply_map(there, d.columns[c])
            if vec_iadd(lhs, rhs, -sign):
                bad.append((xi, c))
    return bad


def trivial_cohomology(graded: GradedAlgebra, s: int) -> tuple[int, int]:
    """sdim of ``H^s(g-1; 1) = S^s(Π g'-1)`` with the reported parity."""
    g = graded.algebra
    minus = graded.component(-1)
    q = [(g.parities[i] + 1) & 1 for i in minus]
    odd = sum(sum(g.parities[minus[a]] for a in mono) & 1 for mono in monomials(q, s))
    total = len(monomials(q, s))
    return total - odd, odd


def cohomology_module(
    report: CohomologyReport,
    elements: Sequence[Mapping[int, Any]],
    cartan: Sequence[Mapping[int, Any]] = (),
    raising: Sequence[Mapping[int, Any]] = (),
) -> ModuleAction:
    """The ``g0``-module structure on ``H^{k,s}`` in quotient coordinates."""
    graded = report.space.graded
    g = graded.algebra
    if config.checks_enabled():
        bad = check_equivariance(graded, report.k, report.s, elements)
        if bad:
            raise ValueError(
                "Action does not commute with D - "
                f"name:{graded.name} k:{report.k} s:{report.s} first:{bad[0]}"
            )
    return ModuleAction(
        tuple(report.parities),
        [_induced(report, x) for x in elements],
        tuple(g.parity_of(x) for x in elements),
        graded.domain,
        [_induced(report, h) for h in cartan],
        [_induced(report, x) for x in raising],
    )


def _induced(report: CohomologyReport, x: Mapping[int, Any]) -> LinearMap:
    action = cochain_action(report.space.graded, x, report.k, report.s)
    op: LinearMap = {}
    for j, rep in enumerate(report.representatives):
        coords = report.coordinates(apply_map(action, rep))
        image = {i: c for i, c in enumerate(coords) if c}
        if image:
            op[j] = image
    return op


def full_structure_functions(
    graded: GradedAlgebra, k_max: int, with_torsion: bool = False
) -> list[CohomologyReport]:
    """``H^{k,2}`` for ``k = 1..k_max`` (and ``H^{k,1}`` first when asked)."""
    reports = []
    for k in range(1, k_max + 1):
        if with_torsion:
            reports.append(cohomology(graded, k, 1))
        reports.append(cohomology(graded, k, 2))
    return reports
