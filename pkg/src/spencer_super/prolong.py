"""
Cartan prolongation of a pair ``(g-1, g0)``.

An element of ``g_i`` (``i >= 1``) is stored as a linear map
``g-1 -> g_{i-1}``: coordinate ``v * dim(g_{i-1}) + a`` is the coefficient of
the ``a``-th basis element of ``g_{i-1}`` in ``X(v) = [X, v]``. The map must be
supersymmetric, ``[X(v), w] = (-1)^{p(v)p(w)} [X(w), v]``. Brackets between
non-negative components are recovered from
``[[X, Z], v] = [X, [Z, v]] - (-1)^{p(X)p(Z)} [Z, [X, v]]``.
"""

import itertools
import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from spencer_super import config
from spencer_super.exactfield import (
    Subspace,
    Vector,
    kernel_of_rows,
    rank_of_rows,
    vec_iadd,
    vec_scale,
)
from spencer_super.grading import GradedAlgebra
from spencer_super.liesuper import LieSuperAlgebra, NotClosed, coordinates_solver
from spencer_super.superlinalg import SuperSpace, format_sdim

LOG = logging.getLogger(__name__)


class ProlongMismatch(ValueError):
    pass


@dataclass
class ProlongChain:
    """Components of the prolong with the ``g-1`` action of each basis element."""

    base: GradedAlgebra
    minus: list[int]
    zero: list[int]
    homs: dict[int, list[Vector]] = field(default_factory=dict)
    parities: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self):
        g = self.base.algebra
        self.parities[-1] = [g.parities[i] for i in self.minus]
        self.parities[0] = [g.parities[i] for i in self.zero]

    def size(self, d: int) -> int:
        return len(self.parities.get(d, ()))

    def act(self, d: int, a: int, v: int) -> Vector:
        """``[e^{(d)}_a, Y_v]`` in local coordinates of ``g_{d-1}``."""
        if d == 0:
            g = self.base.algebra
            position = {j: k for k, j in enumerate(self.minus)}
            image = g.bracket_basis(self.zero[a], self.minus[v])
            return {position[k]: x for k, x in image.items()}
        width = self.size(d - 1)
        lo = v * width
        return {
            k - lo: x for k, x in self.homs[d][a].items() if lo <= k < lo + width
        }


@dataclass
class ProlongResult:
    graded: GradedAlgebra
    stabilized: bool
    cutoff: int

    @property
    def sdims(self) -> dict[int, tuple[int, int]]:
        return self.graded.sdim_table()

    def summary(self) -> dict[str, Any]:
        return {
            "sdims": {str(d): format_sdim(s) for d, s in self.sdims.items()},
            "stabilized": self.stabilized,
            "cutoff": self.cutoff,
        }


def prolong_step(chain: ProlongChain, i: int) -> tuple[list[Vector], list[int]]:
    """
    Basis of ``g_i`` inside ``Hom(g-1, g_{i-1})``, solved parity by parity.
    Returns the Hom vectors and their parities.
    """
    n = chain.size(-1)
    width = chain.size(i - 1)
    pm = chain.parities[-1]
    pa = chain.parities[i - 1]
    acts = [[chain.act(i - 1, a, w) for w in range(n)] for a in range(width)]
    basis: list[Vector] = []
    parities: list[int] = []
    for parity in (0, 1):
        unknowns = [
            (v, a)
            for v in range(n)
            for a in range(width)
            if (pa[a] + pm[v]) & 1 == parity
        ]
        if not unknowns:
            continue
        column = {key: c for c, key in enumerate(unknowns)}
        rows: dict[tuple[int, int, int], dict[int, Any]] = {}
        for j in range(n):
            for l in range(j, n):
                if j == l and not pm[j]:
                    continue
                sign = -1 if pm[j] & pm[l] else 1
                for (v, w, s) in ((j, l, 1), (l, j, -sign)):
                    for a in range(width):
                        c = column.get((v, a))
                        if c is None:
                            continue
                        for out, x in acts[a][w].items():
                            row = rows.setdefault((j, l, out), {})
                            total = row.get(c, 0) + s * x
                            if total:
                                row[c] = total
                            else:
                                row.pop(c, None)
        kernel = kernel_of_rows(list(rows.values()), len(unknowns), chain.base.domain)
        for vec in kernel:
            basis.append(
                {unknowns[c][0] * width + unknowns[c][1]: x for c, x in vec.items()}
            )
            parities.append(parity)
    LOG.debug(
        "Prolong step - name:%s degree:%s dim:%s", chain.base.name, i, len(basis)
    )
    return basis, parities


def intersection_step(chain: ProlongChain, i: int) -> Subspace:
    """
    ``g_i`` as ``g0``-valued ``i``-tensors on ``g-1``: supersymmetric in adjacent
    slots and satisfying ``[Φ(…, v), w] = (-1)^{p(v)p(w)} [Φ(…, w), v]``.
    Coordinate ``(tuple index) * dim(g0) + a``.
    """
    n = chain.size(-1)
    m = chain.size(0)
    pm = chain.parities[-1]
    tuples = list(itertools.product(range(n), repeat=i))
    position = {t: k for k, t in enumerate(tuples)}
    domain = chain.base.domain
    rows: list[dict[int, Any]] = []
    for t in tuples:
        for s in range(i - 1):
            if t[s] > t[s + 1]:
                continue
            swapped = t[:s] + (t[s + 1], t[s]) + t[s + 2 :]
            sign = -1 if pm[t[s]] & pm[t[s + 1]] else 1
            for a in range(m):
                row = {position[t] * m + a: domain.one}
                vec_iadd(row, {position[swapped] * m + a: domain.one}, -sign)
                if row:
                    rows.append(row)
    acts = [[chain.act(0, a, w) for w in range(n)] for a in range(m)]
    for head in itertools.product(range(n), repeat=i - 1):
        for v in range(n):
            for w in range(v, n):
                sign = -1 if pm[v] & pm[w] else 1
                equation: dict[int, dict[int, Any]] = {}
                at_v = position[head + (v,)] * m
                at_w = position[head + (w,)] * m
                for a in range(m):
                    for out, x in acts[a][w].items():
                        vec_iadd(equation.setdefault(out, {}), {at_v + a: x})
                    for out, x in acts[a][v].items():
                        vec_iadd(equation.setdefault(out, {}), {at_w + a: x}, -sign)
                rows.extend(r for r in equation.values() if r)
    kernel = kernel_of_rows(rows, len(tuples) * m, domain)
    return Subspace.from_vectors(kernel, len(tuples) * m, domain)


def tensor_of(chain: ProlongChain, i: int, hom: Vector) -> Vector:
    """Iterated evaluation ``Φ(v1, …, vi) = [...[[X, v1], v2] ..., vi]``."""
    n = chain.size(-1)
    m = chain.size(0)
    out: Vector = {}
    for k, t in enumerate(itertools.product(range(n), repeat=i)):
        value = hom_apply(chain, i, hom, t[0])
        for depth, v in enumerate(t[1:], start=1):
            nxt: Vector = {}
            for a, x in value.items():
                vec_iadd(nxt, chain.act(i - depth, a, v), x)
            value = nxt
        for a, x in value.items():
            out[k * m + a] = x
    return out


def hom_apply(chain: ProlongChain, i: int, hom: Vector, v: int) -> Vector:
    width = chain.size(i - 1)
    lo = v * width
    return {k - lo: x for k, x in hom.items() if lo <= k < lo + width}


def _cross_check(chain: ProlongChain, i: int) -> None:
    expected = intersection_step(chain, i)
    images = [tensor_of(chain, i, h) for h in chain.homs[i]]
    if expected.dim != len(images) or not all(expected.contains(v) for v in images):
        raise ProlongMismatch(
            "Hom and intersection forms disagree - "
            f"name:{chain.base.name} degree:{i} hom:{len(images)} "
            f"intersection:{expected.dim}"
        )
    LOG.debug(
        "Prolong cross-check - name:%s degree:%s dim:%s",
        chain.base.name,
        i,
        expected.dim,
    )


def cartan_prolong(
    base: GradedAlgebra, max_degree: int | None = None, name: str | None = None
) -> ProlongResult:
    """
    Iterate ``prolong_step`` up to ``max_degree`` (or until a component
    vanishes) and assemble the graded algebra ``g-1 + g0 + g1 + ...``.
    """
    cutoff = config.max_degree() if max_degree is None else max_degree
    if cutoff < 1:
        raise ValueError(
            f"Prolong cutoff must be positive - name:{base.name} max_degree:{cutoff}"
        )
    chain = ProlongChain(base, base.component(-1), base.component(0))
    stabilized = False
    top = 0
    for i in range(1, cutoff + 1):
        homs, parities = prolong_step(chain, i)
        if not homs:
            stabilized = True
            break
        chain.homs[i], chain.parities[i] = _sorted_by_parity(homs, parities)
        top = i
        if config.checks_enabled():
            _cross_check(chain, i)
    graded = _assemble(chain, top, stabilized, name or f"({base.name})_*")
    LOG.info(
        "Prolong - name:%s sdims:%s stabilized:%s",
        base.name,
        {d: format_sdim(s) for d, s in graded.sdim_table().items()},
        stabilized,
    )
    return ProlongResult(graded, stabilized, cutoff)


def _sorted_by_parity(
    homs: list[Vector], parities: list[int]
) -> tuple[list[Vector], list[int]]:
    order = sorted(range(len(homs)), key=lambda k: parities[k])
    return [homs[k] for k in order], [parities[k] for k in order]


def _assemble(
    chain: ProlongChain, top: int, stabilized: bool, name: str
) -> GradedAlgebra:
    base = chain.base
    g = base.algebra
    domain = base.domain
    global_index: dict[int, list[int]] = {
        -1: list(chain.minus),
        0: list(chain.zero),
    }
    nxt = g.dim
    for d in range(1, top + 1):
        global_index[d] = list(range(nxt, nxt + chain.size(d)))
        nxt += chain.size(d)
    dim = nxt
    degree_of = [0] * dim
    parity_of = [0] * dim
    local_of: dict[int, tuple[int, int]] = {}
    for d, members in global_index.items():
        for k, j in enumerate(members):
            degree_of[j] = d
            parity_of[j] = chain.parities[d][k]
            local_of[j] = (d, k)
    sc: dict[tuple[int, int], Vector] = {}
    for (i, j), v in g.sc.items():
        sc[(i, j)] = dict(v)

    def globalize(d: int, local: Mapping[int, Any]) -> Vector:
        return {global_index[d][k]: x for k, x in local.items() if x}

    for d in range(1, top + 1):
        for a, x_idx in enumerate(global_index[d]):
            for v, y_idx in enumerate(global_index[-1]):
                image = globalize(d - 1, chain.act(d, a, v))
                if image:
                    sc[(x_idx, y_idx)] = image
                    sign = 1 if parity_of[x_idx] & parity_of[y_idx] else -1
                    sc[(y_idx, x_idx)] = vec_scale(image, sign)
    algebra = LieSuperAlgebra(
        name,
        _space(g, global_index, parity_of, top),
        domain,
        sc,
        cartan=[dict(h) for h in g.cartan],
        raising=[dict(x) for x in g.raising],
        weight_labels=dict(g.weight_labels),
    )
    solvers = {
        d: coordinates_solver(
            chain.homs[d], chain.size(-1) * chain.size(d - 1), domain
        )
        for d in range(1, top + 1)
    }
    for total in range(1, top + 1):
        for di in range(0, total + 1):
            dj = total - di
            for x_idx in global_index[di]:
                for z_idx in global_index[dj]:
                    hom = _bracket_hom(
                        algebra,
                        chain,
                        global_index,
                        local_of,
                        x_idx,
                        z_idx,
                        parity_of,
                        total,
                    )
                    if not hom:
                        continue
                    coords = solvers[total].express(hom)
                    if coords is None:
                        raise NotClosed(
                            "Prolong bracket leaves the component - "
                            f"name:{name} degree:{total}"
                        )
                    entry = globalize(total, coords)
                    if entry:
                        sc[(x_idx, z_idx)] = entry
    return GradedAlgebra(algebra, tuple(degree_of), top, stabilized)


def _space(
    g: LieSuperAlgebra,
    global_index: Mapping[int, list[int]],
    parity_of: Sequence[int],
    top: int,
) -> SuperSpace:
    labels = list(g.space.labels)
    for d in range(1, top + 1):
        labels += [f"g{d}_{k + 1}" for k in range(len(global_index[d]))]
    return SuperSpace(tuple(labels), tuple(parity_of))


def _bracket_hom(
    algebra: LieSuperAlgebra,
    chain: ProlongChain,
    global_index: Mapping[int, list[int]],
    local_of: Mapping[int, tuple[int, int]],
    x_idx: int,
    z_idx: int,
    parity_of: Sequence[int],
    total: int,
) -> Vector:
    """``W(v) = [X, [Z, v]] - (-1)^{p(X)p(Z)} [Z, [X, v]]`` as a Hom vector."""
    width = chain.size(total - 1)
    position = {j: k for k, j in enumerate(global_index[total - 1])}
    sign = -1 if parity_of[x_idx] & parity_of[z_idx] else 1
    one = algebra.domain.one
    x, z = {x_idx: one}, {z_idx: one}
    out: Vector = {}
    for v, y_idx in enumerate(global_index[-1]):
        y = {y_idx: one}
        value = algebra.bracket(x, algebra.bracket(z, y))
        vec_iadd(value, algebra.bracket(z, algebra.bracket(x, y)), -sign)
        for j, c in value.items():
            if j not in position:
                raise NotClosed(
                    "Prolong bracket has the wrong degree - "
                    f"name:{algebra.name} degree:{total}"
                )
            out[v * width + position[j]] = c
    return out


@dataclass
class GradedComparison:
    agree: bool
    mismatches: list[str]


def compare_graded(
    a: GradedAlgebra, b: GradedAlgebra, max_degree: int | None = None
) -> GradedComparison:
    """
    Per-degree sdims and bracket ranks ``g_i x g_j -> g_{i+j}`` up to the
    larger top degree. A complete algebra has nothing above its top degree,
    so a component one side lacks counts as zero; degrees beyond the cutoff
    of a truncated side are not compared.
    """
    top = max(a.top_degree, b.top_degree)
    if max_degree is not None:
        top = min(top, max_degree)
    known = [
        d for d in range(-1, top + 1) if a.has_component(d) and b.has_component(d)
    ]
    mismatches = []
    for d in known:
        if a.sdim_of(d) != b.sdim_of(d):
            left, right = format_sdim(a.sdim_of(d)), format_sdim(b.sdim_of(d))
            mismatches.append(f"sdim g{d}: {left} vs {right}")
    for di in known:
        for dj in known:
            if dj < di or di + dj not in known:
                continue
            ra, rb = _bracket_rank(a, di, dj), _bracket_rank(b, di, dj)
            if ra != rb:
                mismatches.append(f"rank [g{di}, g{dj}]: {ra} vs {rb}")
    if mismatches:
        LOG.warning(
            "Graded algebras differ - left:%s right:%s first:%s",
            a.name,
            b.name,
            mismatches[0],
        )
    return GradedComparison(not mismatches, mismatches)


def _bracket_rank(graded: GradedAlgebra, di: int, dj: int) -> int:
    g = graded.algebra
    rows = [
        g.bracket_basis(i, j)
        for i in graded.component(di)
        for j in graded.component(dj)
    ]
    return rank_of_rows([r for r in rows if r], g.dim, g.domain)
