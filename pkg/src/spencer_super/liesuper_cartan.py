"""
Contragredient Lie superalgebras generated from a Cartan matrix.

Each half ``n-`` and ``n+`` is built height by height. A candidate
``[g_j, u]`` is represented by its brackets with the opposite generators,
which determines it inside the quotient by the maximal ideal meeting the
torus trivially, so no Serre relations are needed. The structure constants
are then read off supercommutators of adjoint matrices on ``n- + h + n+``.
"""

import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from spencer_super import config
from spencer_super.exactfield import (
    RATFUNC,
    RATIONAL,
    Vector,
    evaluate_alpha,
    independent_columns,
    to_field,
    vec_iadd,
)
from spencer_super.liesuper import LieSuperAlgebra, change_basis, check_jacobi
from spencer_super.superlinalg import SuperMatrix, SuperSpace, supercommutator

LOG = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"\[|\]|,|[^\[\],\s]+")


class GenerationDiverged(ValueError):
    pass


@dataclass
class _Root:
    weight: tuple[int, ...]
    label: str
    parity: int
    images: dict[int, Vector]
    origin: tuple[int, int] | None = None


@dataclass
class _Half:
    levels: list[list[_Root]] = field(default_factory=list)
    raised: list[list[list[Vector]]] = field(default_factory=list)

    @property
    def size(self) -> int:
        return sum(len(level) for level in self.levels)


@dataclass(frozen=True)
class CartanData:
    """A registered Cartan matrix with its generator parities and expected size."""

    matrix: tuple[tuple[str, ...], ...]
    parities: tuple[int, ...]
    sdim: tuple[int, int]
    words: dict[int, str] = field(default_factory=dict)

    @property
    def symbolic(self) -> bool:
        return any("a" in entry for row in self.matrix for entry in row)


def build_from_cartan_matrix(
    cm: Sequence[Sequence[Any]],
    gen_parities: Sequence[int],
    expected_sdim: tuple[int, int],
    domain=RATIONAL,
    name: str = "cm",
) -> LieSuperAlgebra:
    """
    Generators ``X+i``, ``X-i``, ``Hi`` with ``[Hi, X±j] = ±A_ij X±j`` and
    ``[X+i, X-j] = δ_ij Hi``; raises ``GenerationDiverged`` when a half
    outgrows ``expected_sdim``.
    """
    a = [[to_field(x, domain) for x in row] for row in cm]
    rank = len(a)
    if any(len(row) != rank for row in a) or len(gen_parities) != rank:
        raise ValueError(
            "Cartan matrix shape mismatch - "
            f"rows:{rank} parities:{len(gen_parities)}"
        )
    parities = tuple(p & 1 for p in gen_parities)
    limit = (sum(expected_sdim) - rank) // 2
    halves = {
        sign: _generate_half(a, parities, sign, limit, domain, name)
        for sign in (-1, 1)
    }
    g = _assemble(a, parities, halves, domain, name)
    if g.sdim != tuple(expected_sdim):
        raise GenerationDiverged(
            "Generation stopped off the expected size - "
            f"name:{name} sdim:{g.sdim} expected:{tuple(expected_sdim)}"
        )
    if config.checks_enabled():
        violations = check_jacobi(g, limit=1)
        if violations:
            raise GenerationDiverged(
                "Generated algebra violates Jacobi - "
                f"name:{name} triple:{violations[0]}"
            )
    LOG.info("Cartan matrix algebra - name:%s sdim:%s", name, g.sdim)
    return g


def _kappa(i: int, sign: int, parities: Sequence[int]) -> int:
    """``[t_i, g_i] = kappa_i H_i`` for the test generators ``t`` of a half."""
    if sign < 0:
        return 1
    return 1 if parities[i] else -1


def _generate_half(
    a, parities: Sequence[int], sign: int, limit: int, domain, name: str
) -> _Half:
    rank = len(a)
    gen = "X+" if sign > 0 else "X-"
    half = _Half()
    first = []
    for k in range(rank):
        weight = tuple(1 if i == k else 0 for i in range(rank))
        images = {k: {k: domain.convert(_kappa(k, sign, parities))}}
        first.append(_Root(weight, f"{gen}{k + 1}", parities[k], images))
    half.levels.append(first)
    while half.levels[-1]:
        height = len(half.levels) - 1
        level = half.levels[-1]
        groups: dict[tuple[int, ...], list[tuple[int, int, Vector]]] = {}
        for j in range(rank):
            for u_idx, u in enumerate(level):
                weight = tuple(
                    m + (1 if i == j else 0) for i, m in enumerate(u.weight)
                )
                image = _candidate_image(
                    a, parities, sign, half, height, j, u_idx, u, domain
                )
                groups.setdefault(weight, []).append((j, u_idx, image))
        raised: list[list[Vector]] = [[{} for _ in level] for _ in range(rank)]
        new_level: list[_Root] = []
        for weight in sorted(groups):
            candidates = groups[weight]
            pivots, expressions = independent_columns(
                [c[2] for c in candidates], rank * len(level), domain
            )
            position = {}
            for p in pivots:
                j, u_idx, image = candidates[p]
                position[p] = len(new_level)
                parity = sum(m * parities[i] for i, m in enumerate(weight)) & 1
                label = f"[{gen}{j + 1},{level[u_idx].label}]"
                new_level.append(
                    _Root(
                        weight, label, parity, _split(image, len(level)), (j, u_idx)
                    )
                )
            for c_idx, (j, u_idx, _) in enumerate(candidates):
                raised[j][u_idx] = {
                    position[p]: x for p, x in expressions[c_idx].items()
                }
        half.raised.append(raised)
        half.levels.append(new_level)
        LOG.debug(
            "Root level - name:%s half:%s height:%s count:%s",
            name,
            gen,
            height + 2,
            len(new_level),
        )
        if half.size > limit:
            raise GenerationDiverged(
                "Half exceeds expected size - "
                f"name:{name} half:{gen} size:{half.size} limit:{limit}"
            )
    half.levels.pop()
    return half


def _candidate_image(
    a,
    parities,
    sign: int,
    half: _Half,
    height: int,
    j: int,
    u_idx: int,
    u: _Root,
    domain,
) -> Vector:
    """
    Flattened ``([t_i, [g_j, u]])_i`` via
    ``[t_i,[g_j,u]] = δ_ij kappa_i [H_i, u] + (-1)^{p_i p_j} [g_j, [t_i, u]]``.
    """
    rank = len(a)
    width = len(half.levels[height])
    out: Vector = {}
    for i in range(rank):
        image: Vector = {}
        if i == j:
            beta = sum((m * a[i][k] for k, m in enumerate(u.weight)), domain.zero)
            scale = _kappa(i, sign, parities) * sign * beta
            vec_iadd(image, {u_idx: domain.one}, scale)
        s = -1 if parities[i] & parities[j] else 1
        for idx, c in u.images.get(i, {}).items():
            if height == 0:
                vec_iadd(image, {j: -sign * a[idx][j]}, c * s)
            else:
                vec_iadd(image, half.raised[height - 1][j][idx], c * s)
        for v, x in image.items():
            out[i * width + v] = x
    return out


def _split(flat: Mapping[int, Any], width: int) -> dict[int, Vector]:
    out: dict[int, Vector] = {}
    for key, x in flat.items():
        i, v = divmod(key, width)
        out.setdefault(i, {})[v] = x
    return out


def _assemble(
    a, parities: Sequence[int], halves: Mapping[int, _Half], domain, name: str
) -> LieSuperAlgebra:
    rank = len(a)
    index: dict[int, list[list[int]]] = {}
    labels: list[str] = []
    basis_parities: list[int] = []
    weights: list[tuple[int, ...]] = []
    for sign in (-1, 1):
        if sign > 0:
            labels += [f"H{i + 1}" for i in range(rank)]
            basis_parities += [0] * rank
            weights += [(0,) * rank] * rank
        index[sign] = []
        for level in halves[sign].levels:
            index[sign].append(list(range(len(labels), len(labels) + len(level))))
            for root in level:
                labels.append(root.label)
                basis_parities.append(root.parity)
                weights.append(tuple(sign * m for m in root.weight))
    cartan_start = halves[-1].size
    dim = len(labels)

    def generator_ad(j: int, sign: int) -> SuperMatrix:
        own, other = halves[sign], halves[-sign]
        m: SuperMatrix = {}
        for h, level in enumerate(own.levels[:-1] if own.levels else []):
            for u in range(len(level)):
                for v, x in own.raised[h][j][u].items():
                    m[(index[sign][h + 1][v], index[sign][h][u])] = x
        for i in range(rank):
            x = -sign * a[i][j]
            if x:
                m[(index[sign][0][j], cartan_start + i)] = x
        for h, level in enumerate(other.levels):
            for u, root in enumerate(level):
                for v, x in root.images.get(j, {}).items():
                    row = cartan_start + v if h == 0 else index[-sign][h - 1][v]
                    m[(row, index[-sign][h][u])] = x
        return {k: x for k, x in m.items() if x}

    ad: list[SuperMatrix | None] = [None] * dim
    for i in range(rank):
        diag = {}
        for b in range(dim):
            x = sum((m * a[i][k] for k, m in enumerate(weights[b])), domain.zero)
            if x:
                diag[(b, b)] = x
        ad[cartan_start + i] = diag
    for sign in (-1, 1):
        for j in range(rank):
            ad[index[sign][0][j]] = generator_ad(j, sign)
        for h, level in enumerate(halves[sign].levels[1:], start=1):
            for u, root in enumerate(level):
                j, prev = root.origin
                g_idx, u_idx = index[sign][0][j], index[sign][h - 1][prev]
                ad[index[sign][h][u]] = supercommutator(
                    ad[g_idx],
                    ad[u_idx],
                    basis_parities[g_idx],
                    basis_parities[u_idx],
                )
    sc: dict[tuple[int, int], Vector] = {}
    for b, m in enumerate(ad):
        for (row, col), x in m.items():
            sc.setdefault((b, col), {})[row] = x
    cartan = [{cartan_start + i: domain.one} for i in range(rank)]
    raising = [{k: domain.one} for level in index[1] for k in level]
    space = SuperSpace(tuple(labels), tuple(basis_parities))
    return LieSuperAlgebra(name, space, domain, sc, cartan=cartan, raising=raising)


def element_of_word(g: LieSuperAlgebra, word: str) -> Vector:
    """Evaluate a bracket word such as ``"[[X-1,X-2],[X-2,X-3]]"``."""
    tokens = _TOKEN_RE.findall(word)
    vector, rest = _parse_word(g, tokens, word)
    if rest:
        raise ValueError(f"Trailing tokens in word - word:{word}")
    return vector


def _parse_word(
    g: LieSuperAlgebra, tokens: list[str], word: str
) -> tuple[Vector, list[str]]:
    if not tokens:
        raise ValueError(f"Truncated word - word:{word}")
    head, rest = tokens[0], tokens[1:]
    if head != "[":
        if head not in g.space.labels:
            raise ValueError(f"Unknown generator in word - word:{word} token:{head}")
        return {g.space.labels.index(head): g.domain.one}, rest
    left, rest = _parse_word(g, rest, word)
    if not rest or rest[0] != ",":
        raise ValueError(f"Expected comma in word - word:{word}")
    right, rest = _parse_word(g, rest[1:], word)
    if not rest or rest[0] != "]":
        raise ValueError(f"Expected closing bracket in word - word:{word}")
    return g.bracket(left, right), rest[1:]


D21A_WORDS_1 = {
    4: "[X-1,X-2]",
    5: "[X-1,X-3]",
    6: "[X-2,X-3]",
    7: "[X-1,[X-2,X-3]]",
}
D21A_WORDS_2 = {
    4: "[X-1,X-2]",
    5: "[X-2,X-3]",
    6: "[X-3,[X-1,X-2]]",
    7: "[[X-1,X-2],[X-2,X-3]]",
}
AB3_WORDS = {
    5: "[X-1,X-2]",
    6: "[X-2,X-3]",
    7: "[X-3,X-4]",
    8: "[X-3,[X-1,X-2]]",
    9: "[X-3,[X-3,X-4]]",
    10: "[X-4,[X-2,X-3]]",
    11: "[[X-1,X-2],[X-2,X-3]]",
    12: "[[X-1,X-2],[X-3,X-4]]",
    13: "[[X-2,X-3],[X-3,X-4]]",
    14: "[[X-1,X-2],[X-4,[X-2,X-3]]]",
    15: "[[X-3,X-4],[X-3,[X-1,X-2]]]",
    16: "[[X-3,[X-1,X-2]],[X-4,[X-2,X-3]]]",
    17: "[[X-3,[X-3,X-4]],[[X-1,X-2],[X-2,X-3]]]",
    18: "[[[X-1,X-2],[X-3,X-4]],[[X-2,X-3],[X-3,X-4]]]",
}

CARTAN_REGISTRY: dict[str, CartanData] = {
    "D21a:1": CartanData(
        (("0", "1", "-1-a"), ("-1", "0", "-a"), ("-1-a", "a", "0")),
        (1, 1, 1),
        (9, 8),
        D21A_WORDS_1,
    ),
    "D21a:2": CartanData(
        (("2", "-1", "0"), ("-1", "0", "-a"), ("0", "-1", "2")),
        (0, 1, 0),
        (9, 8),
        D21A_WORDS_2,
    ),
    "ab3": CartanData(
        (
            ("2", "-1", "0", "0"),
            ("-3", "0", "1", "0"),
            ("0", "-1", "2", "-2"),
            ("0", "0", "-1", "2"),
        ),
        (0, 1, 0, 0),
        (24, 16),
        AB3_WORDS,
    ),
    "sl2": CartanData((("2",),), (0,), (3, 0)),
}


def build_registered(key: str, alpha=None) -> LieSuperAlgebra:
    """
    Build a registered Cartan-matrix algebra. Symbolic matrices are built over
    the rational functions in ``a`` unless ``alpha`` specializes them.
    """
    data = CARTAN_REGISTRY.get(key)
    if data is None:
        raise ValueError(
            f"Unknown Cartan matrix - key:{key} known:{sorted(CARTAN_REGISTRY)}"
        )
    if data.symbolic and alpha is None:
        domain = RATFUNC
        cm = [[to_field(x, RATFUNC) for x in row] for row in data.matrix]
    elif data.symbolic:
        domain = RATIONAL
        cm = [
            [evaluate_alpha(to_field(x, RATFUNC), alpha) for x in row]
            for row in data.matrix
        ]
    else:
        domain = RATIONAL
        cm = [[to_field(x, RATIONAL) for x in row] for row in data.matrix]
    name = key if alpha is None else f"{key}[a={alpha}]"
    g = build_from_cartan_matrix(cm, data.parities, data.sdim, domain, name)
    return word_basis(g, data.words) if data.words else g


def word_basis(g: LieSuperAlgebra, words: Mapping[int, str]) -> LieSuperAlgebra:
    """
    Rebase ``g`` on ``X1..`` (negative words), ``H1..`` and ``Y1..`` (the same
    words in positive generators); generators fill the unlisted indices.
    """
    rank = len(g.cartan)
    count = max([rank, *words])
    negative = {k: f"X-{k}" for k in range(1, rank + 1)}
    negative.update(words)
    if sorted(negative) != list(range(1, count + 1)):
        raise ValueError(
            f"Word indices leave gaps - name:{g.name} indices:{sorted(negative)}"
        )
    vectors, labels = [], []
    for k in range(1, count + 1):
        vectors.append(element_of_word(g, negative[k]))
        labels.append(f"X{k}")
    for i in range(rank):
        vectors.append(dict(g.cartan[i]))
        labels.append(f"H{i + 1}")
    for k in range(1, count + 1):
        vectors.append(element_of_word(g, negative[k].replace("X-", "X+")))
        labels.append(f"Y{k}")
    for label, v in zip(labels, vectors):
        if not v:
            raise ValueError(
                f"Word evaluates to zero - name:{g.name} element:{label}"
            )
    return change_basis(g, vectors, name=g.name, labels=labels)
