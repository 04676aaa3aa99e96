"""
The super involutivity test for a depth-one graded algebra.

With an ordered basis ``a_1 .. a_n`` of ``g-1`` set
``g^r = ker ad(a_1) ∩ … ∩ ker ad(a_r)``. The algebra is involutive when

1. ``g^n = g-1``,
2. ``ad(a_r)`` maps ``g^{r-1}_{d+1}`` onto ``g^{r-1}_d`` for even ``a_r``,
3. ``ad(a_r)`` maps ``g^{r-1}_{d+1}`` onto ``g^r_d`` for odd ``a_r``.

Involutive algebras have vanishing ``H^{i,k}`` for ``i, k >= 0``;
``vanishing_scan`` tabulates those groups so the implication can be checked.
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any

from spencer_super.exactfield import Subspace, Vector, kernel_of_rows
from spencer_super.grading import GradedAlgebra
from spencer_super.spencer import MissingComponent, cohomology
from spencer_super.superlinalg import format_sdim

LOG = logging.getLogger(__name__)


class CutoffTooLow(ValueError):
    pass


@dataclass
class InvolutivityReport:
    name: str
    order: list[str]
    chain: list[dict[int, tuple[int, int]]]
    degrees: list[int]
    condition1: bool
    condition2: bool
    condition3: bool
    failures: list[tuple[int, int]] = field(default_factory=list)

    @property
    def involutive(self) -> bool:
        return self.condition1 and self.condition2 and self.condition3

    def summary(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "chain": [
                {str(d): format_sdim(s) for d, s in sorted(step.items())}
                for step in self.chain
            ],
            "degrees": self.degrees,
            "conditions": [self.condition1, self.condition2, self.condition3],
            "involutive": self.involutive,
        }


def default_order(graded: GradedAlgebra) -> list[int]:
    """Basis of ``g-1`` with the even elements first."""
    minus = graded.component(-1)
    parities = graded.algebra.parities
    return [i for i in minus if not parities[i]] + [i for i in minus if parities[i]]


def order_variants(graded: GradedAlgebra) -> dict[str, list[int]]:
    """The default order, each parity block reversed, and odd elements first."""
    minus = graded.component(-1)
    parities = graded.algebra.parities
    even = [i for i in minus if not parities[i]]
    odd = [i for i in minus if parities[i]]
    variants = {
        "even-first": even + odd,
        "reversed": even[::-1] + odd[::-1],
        "odd-first": odd + even,
    }
    out: dict[str, list[int]] = {}
    for key, order in variants.items():
        if order not in out.values():
            out[key] = order
    return out


def compare_orders(
    graded: GradedAlgebra, degrees: Sequence[int] | None = None
) -> dict[str, bool]:
    """Involutivity verdict per order variant; a disagreement is logged, not raised."""
    verdicts = {
        key: is_involutive(graded, order, degrees).involutive
        for key, order in order_variants(graded).items()
    }
    if len(set(verdicts.values())) > 1:
        LOG.warning(
            "Involutivity depends on the order - name:%s verdicts:%s",
            graded.name,
            verdicts,
        )
    return verdicts


class _Chain:
    """``g^r_d`` as subspaces in the local coordinates of ``g_d``."""

    def __init__(self, graded: GradedAlgebra, order: Sequence[int]):
        self.graded = graded
        self.order = list(order)
        self.local = {d: graded.component(d) for d in set(graded.degrees)}
        self.position = {
            d: {j: c for c, j in enumerate(idx)} for d, idx in self.local.items()
        }
        self._kernels: dict[tuple[int, int], Subspace] = {}

    def size(self, d: int) -> int:
        return len(self.local.get(d, []))

    def globalize(self, d: int, v: Vector) -> Vector:
        return {self.local[d][c]: x for c, x in v.items()}

    def localize(self, d: int, v: Vector) -> Vector:
        return {self.position[d][j]: x for j, x in v.items()}

    def kernel(self, r: int, d: int) -> Subspace:
        key = (r, d)
        if key not in self._kernels:
            g = self.graded.algebra
            rows: dict[tuple[int, int], dict[int, Any]] = {}
            for t in range(r):
                for c, j in enumerate(self.local.get(d, [])):
                    for k, x in g.bracket_basis(self.order[t], j).items():
                        rows.setdefault((t, k), {})[c] = x
            basis = kernel_of_rows(list(rows.values()), self.size(d), g.domain)
            self._kernels[key] = Subspace.from_vectors(basis, self.size(d), g.domain)
        return self._kernels[key]

    def image(self, r: int, d: int) -> Subspace:
        """``ad(a_r) g^{r-1}_{d+1}`` inside ``g_d``."""
        g = self.graded.algebra
        a = {self.order[r - 1]: g.domain.one}
        vectors = [
            self.localize(d, g.bracket(a, self.globalize(d + 1, v)))
            for v in self.kernel(r - 1, d + 1).rows
        ]
        return Subspace.from_vectors(vectors, self.size(d), g.domain)

    def sdim(self, r: int, d: int) -> tuple[int, int]:
        parities = self.graded.algebra.parities
        sub = self.kernel(r, d)
        odd = sum(parities[self.local[d][p]] for p in sub.pivots)
        return sub.dim - odd, odd


def _target_degrees(graded: GradedAlgebra, degrees: Sequence[int] | None) -> list[int]:
    top = graded.top_degree
    if degrees is None:
        return list(range(-1, top + 1 if graded.complete else top))
    for d in degrees:
        if d + 1 > top and not graded.complete:
            raise CutoffTooLow(
                "Degree needs an unmaterialized component - "
                f"name:{graded.name} degree:{d + 1} top:{top}"
            )
    return sorted(degrees)


def is_involutive(
    graded: GradedAlgebra,
    order: Sequence[int] | None = None,
    degrees: Sequence[int] | None = None,
) -> InvolutivityReport:
    """
    Evaluate the three conditions degree by degree. Target degrees default
    to ``-1 .. top - 1`` and include ``top`` when nothing lies above it.
    """
    g = graded.algebra
    order = list(order) if order is not None else default_order(graded)
    if sorted(order) != sorted(graded.component(-1)):
        raise ValueError(
            f"Order is not a basis of g-1 - name:{graded.name} order:{order}"
        )
    targets = _target_degrees(graded, degrees)
    chain = _Chain(graded, order)
    n = len(order)
    scanned = sorted({d for d in targets} | {d + 1 for d in targets})
    condition1 = all(chain.kernel(n, d).dim == 0 for d in scanned if d >= 0)
    condition2 = condition3 = True
    failures = []
    for r in range(1, n + 1):
        odd = bool(g.parities[order[r - 1]])
        for d in targets:
            expected = chain.kernel(r if odd else r - 1, d)
            if chain.image(r, d).equals(expected):
                continue
            failures.append((r, d))
            if odd:
                condition3 = False
            else:
                condition2 = False
    report = InvolutivityReport(
        graded.name,
        [g.space.labels[i] for i in order],
        [{d: chain.sdim(r, d) for d in scanned} for r in range(n + 1)],
        targets,
        condition1,
        condition2,
        condition3,
        failures,
    )
    LOG.info(
        "Involutivity - name:%s involutive:%s conditions:%s",
        graded.name,
        report.involutive,
        (condition1, condition2, condition3),
    )
    if failures:
        LOG.debug(
            "Involutivity failures - name:%s first:%s count:%s",
            graded.name,
            failures[0],
            len(failures),
        )
    return report


@dataclass
class CartanBound:
    dim_g1: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.dim_g1 <= self.bound

    @property
    def equality(self) -> bool:
        return self.dim_g1 == self.bound


def cartan_bound(
    graded: GradedAlgebra, order: Sequence[int] | None = None
) -> CartanBound:
    """``dim g1`` against ``sum_{r < n} dim g^r_0``."""
    if not graded.has_component(1):
        raise CutoffTooLow(
            f"g1 is not materialized - name:{graded.name} top:{graded.top_degree}"
        )
    order = list(order) if order is not None else default_order(graded)
    chain = _Chain(graded, order)
    bound = sum(chain.kernel(r, 0).dim for r in range(len(order)))
    return CartanBound(len(graded.component(1)), bound)


def vanishing_scan(
    graded: GradedAlgebra, i_max: int = 3, k_max: int = 4
) -> dict[tuple[int, int], tuple[int, int] | None]:
    """
    ``sdim H^{i,k}`` for ``0 <= i <= i_max`` and ``0 <= k <= k_max``, where
    ``i`` is the cochain degree and ``k`` the degree of the coefficients.
    Cells that need components beyond the cutoff are ``None``.
    """
    table: dict[tuple[int, int], tuple[int, int] | None] = {}
    for i in range(i_max + 1):
        for k in range(k_max + 1):
            try:
                table[(i, k)] = cohomology(graded, k + i, i).sdim
            except MissingComponent:
                table[(i, k)] = None
    LOG.debug(
        "Vanishing scan - name:%s cells:%s missing:%s",
        graded.name,
        len(table),
        sum(v is None for v in table.values()),
    )
    return table
