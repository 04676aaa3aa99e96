"""
Superspaces and the Sign Rule.

Every sign in the package comes from ``koszul_sign``: the sign picked up when a
sequence of parity-tagged symbols is rearranged. Tensor, symmetric and exterior
powers, the supertranspose and the Spencer differential all route through it.
Conventions are collected in SIGNS.md.
"""

import functools
import itertools
import logging
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from spencer_super.exactfield import Vector, vec_iadd

LOG = logging.getLogger(__name__)

SuperMatrix = dict[tuple[int, int], Any]


class MixedParityMatrix(ValueError):
    pass


def koszul_sign(parities: Sequence[int], permutation: Sequence[int]) -> int:
    """
    Sign of the rearrangement ``slots -> [slots[permutation[0]], ...]``.

    Each pair of symbols whose relative order flips contributes
    ``(-1)^{p_i p_j}``.
    """
    sign = 1
    for a in range(len(permutation)):
        pa = parities[permutation[a]] & 1
        if not pa:
            continue
        for b in range(a + 1, len(permutation)):
            if permutation[b] < permutation[a] and parities[permutation[b]] & 1:
                sign = -sign
    return sign


def normal_order(
    indices: Sequence[int], parity_of: Callable[[int], int]
) -> tuple[int, tuple[int, ...]]:
    """
    Sort a product of basis symbols into ascending order.

    Returns ``(sign, sorted_indices)``; the sign is ``0`` when an odd symbol
    occurs twice, since its square vanishes.
    """
    order = sorted(range(len(indices)), key=lambda i: (indices[i], i))
    ordered = tuple(indices[i] for i in order)
    for a, b in zip(ordered, ordered[1:]):
        if a == b and parity_of(a) & 1:
            return 0, ordered
    return koszul_sign([parity_of(i) for i in indices], order), ordered


@dataclass(frozen=True)
class SuperSpace:
    """
    A superspace with an ordered, parity-homogeneous basis (the format).
    """

    labels: tuple[str, ...]
    parities: tuple[int, ...]

    def __post_init__(self):
        if len(self.labels) != len(self.parities):
            raise ValueError(
                "Label and parity counts differ - "
                f"labels:{len(self.labels)} parities:{len(self.parities)}"
            )

    @classmethod
    def standard(cls, p: int, q: int, prefix: str = "e") -> "SuperSpace":
        labels = tuple(f"{prefix}{i + 1}" for i in range(p + q))
        return cls(labels, (0,) * p + (1,) * q)

    @property
    def dim(self) -> int:
        return len(self.parities)

    @property
    def sdim(self) -> tuple[int, int]:
        odd = sum(p & 1 for p in self.parities)
        return self.dim - odd, odd

    def dual(self) -> "SuperSpace":
        return SuperSpace(tuple(_dual_label(lab) for lab in self.labels), self.parities)

    def parity_shift(self) -> "SuperSpace":
        labels = tuple(_shift_label(lab) for lab in self.labels)
        return SuperSpace(labels, tuple(1 - (p & 1) for p in self.parities))

    def tensor(self, other: "SuperSpace") -> "SuperSpace":
        labels = tuple(f"{a}*{b}" for a in self.labels for b in other.labels)
        parities = tuple((pa + pb) & 1 for pa in self.parities for pb in other.parities)
        return SuperSpace(labels, parities)

    def direct_sum(self, other: "SuperSpace") -> "SuperSpace":
        return SuperSpace(self.labels + other.labels, self.parities + other.parities)

    def subspace(self, indices: Sequence[int]) -> "SuperSpace":
        labels = tuple(self.labels[i] for i in indices)
        return SuperSpace(labels, tuple(self.parities[i] for i in indices))


def _dual_label(label: str) -> str:
    return label[:-1] if label.endswith("'") else f"{label}'"


def _shift_label(label: str) -> str:
    if label.startswith("Π(") and label.endswith(")"):
        return label[2:-1]
    return f"Π({label})"


def format_sdim(sdim: tuple[int, int]) -> str:
    return f"{sdim[0]}|{sdim[1]}"


def sdim_product(a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
    """``(p + q e)(r + s e)`` with ``e^2 = 1``."""
    return a[0] * b[0] + a[1] * b[1], a[0] * b[1] + a[1] * b[0]


@dataclass(frozen=True)
class SuperVector:
    space: SuperSpace
    coords: Vector = field(default_factory=dict)

    @property
    def parity(self) -> int | None:
        parities = {self.space.parities[i] & 1 for i, x in self.coords.items() if x}
        if len(parities) > 1:
            return None
        return parities.pop() if parities else 0

    def __add__(self, other: "SuperVector") -> "SuperVector":
        return SuperVector(self.space, vec_iadd(dict(self.coords), other.coords))


@dataclass(frozen=True)
class SymmetricPower:
    """
    ``S^k(V)`` with basis the sorted multi-indices in which odd slots do not
    repeat, together with the projection from ``V^{⊗k}``.
    """

    base: SuperSpace
    degree: int
    monomials: tuple[tuple[int, ...], ...]
    space: SuperSpace

    @functools.cached_property
    def index(self) -> dict[tuple[int, ...], int]:
        return {m: i for i, m in enumerate(self.monomials)}

    def project(self, slots: Sequence[int]) -> tuple[int, int] | None:
        """Image of ``v_{slots[0]}⊗…`` as ``(sign, monomial index)``."""
        sign, ordered = normal_order(slots, lambda i: self.base.parities[i])
        if not sign:
            return None
        return sign, self.index[ordered]


def monomials(parities: Sequence[int], k: int) -> list[tuple[int, ...]]:
    """Sorted multi-indices of length ``k``; odd indices occur at most once."""
    out = []
    for combo in itertools.combinations_with_replacement(range(len(parities)), k):
        if any(a == b and parities[a] & 1 for a, b in zip(combo, combo[1:])):
            continue
        out.append(combo)
    return out


def sym_power(space: SuperSpace, k: int) -> SymmetricPower:
    if k < 0:
        raise ValueError(f"Negative power - k:{k}")
    monos = tuple(monomials(space.parities, k))
    labels = tuple("·".join(space.labels[i] for i in m) or "1" for m in monos)
    parities = tuple(sum(space.parities[i] for i in m) & 1 for m in monos)
    return SymmetricPower(space, k, monos, SuperSpace(labels, parities))


def ext_power(space: SuperSpace, k: int) -> SymmetricPower:
    """
    ``Λ^k(V)`` as ``S^k(Π V)`` transported back: monomials follow the
    shifted parities, the reported parity of a monomial is the sum of the
    original parities of its slots.
    """
    shifted = sym_power(space.parity_shift(), k)
    labels = tuple(
        "∧".join(space.labels[i] for i in m) or "1" for m in shifted.monomials
    )
    parities = tuple(sum(space.parities[i] for i in m) & 1 for m in shifted.monomials)
    power = SuperSpace(labels, parities)
    return SymmetricPower(shifted.base, k, shifted.monomials, power)


def matrix_parity(a: Mapping[tuple[int, int], Any], parities: Sequence[int]) -> int:
    """Parity of a homogeneous supermatrix; raises ``MixedParityMatrix`` otherwise."""
    seen = {(parities[i] + parities[j]) & 1 for (i, j), x in a.items() if x}
    if len(seen) > 1:
        raise MixedParityMatrix(f"Matrix mixes parities - entries:{len(a)}")
    return seen.pop() if seen else 0


def supertranspose(
    a: Mapping[tuple[int, int], Any],
    parities: Sequence[int],
    parity: int | None = None,
) -> SuperMatrix:
    """``(A^{st})_{ij} = (-1)^{(p_i + p_j)(p_i + p(A))} A_{ji}``."""
    actual = matrix_parity(a, parities)
    if parity is not None and a and any(a.values()) and actual != parity & 1:
        raise MixedParityMatrix(
            f"Declared parity mismatch - declared:{parity} actual:{actual}"
        )
    pa = actual if parity is None else parity & 1
    out: SuperMatrix = {}
    for (j, i), x in a.items():
        if not x:
            continue
        exponent = ((parities[i] + parities[j]) * (parities[i] + pa)) & 1
        out[(i, j)] = -x if exponent else x
    return out


def matmul(
    a: Mapping[tuple[int, int], Any], b: Mapping[tuple[int, int], Any]
) -> SuperMatrix:
    rows_b: dict[int, list[tuple[int, Any]]] = {}
    for (k, j), y in b.items():
        rows_b.setdefault(k, []).append((j, y))
    out: SuperMatrix = {}
    for (i, k), x in a.items():
        for j, y in rows_b.get(k, ()):
            z = out.get((i, j))
            z = x * y if z is None else z + x * y
            if z:
                out[(i, j)] = z
            else:
                out.pop((i, j), None)
    return out


def mat_add(
    a: Mapping[tuple[int, int], Any], b: Mapping[tuple[int, int], Any], c=1
) -> SuperMatrix:
    out = dict(a)
    for key, y in b.items():
        z = out.get(key)
        z = c * y if z is None else z + c * y
        if z:
            out[key] = z
        else:
            out.pop(key, None)
    return out


def supercommutator(
    a: Mapping[tuple[int, int], Any],
    b: Mapping[tuple[int, int], Any],
    pa: int,
    pb: int,
) -> SuperMatrix:
    """``[A, B] = AB - (-1)^{p(A)p(B)} BA``."""
    sign = -1 if (pa & pb) & 1 else 1
    return mat_add(matmul(a, b), matmul(b, a), -sign)

