"""
Matrix realizations of the classical Lie superalgebra series.

Each series is the span of explicit supermatrices in a fixed format, with a
weight per slot written in the labels ``e1..`` (orthogonal or general part)
and ``d1..`` (symplectic or odd part). The torus is the set of diagonal
elements; the Borel is the set of root vectors positive under a regular
diagonal functional that orders labels decreasingly.
"""

import logging
import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Any

from spencer_super.exactfield import RATIONAL, kernel_of_rows, to_field
from spencer_super.liesuper import (
    LieSuperAlgebra,
    coordinates_solver,
    flatten,
    from_matrices,
    quotient,
    supertrace,
    with_borel,
)
from spencer_super.superlinalg import (
    SuperMatrix,
    SuperSpace,
    mat_add,
    matmul,
    matrix_parity,
    supertranspose,
)

LOG = logging.getLogger(__name__)

CENTRAL_LABEL = "z"

_NAME_RE = re.compile(r"^\s*(?P<series>[a-z_]+)\s*\(\s*(?P<params>[0-9|,\s]*)\)\s*$")


class BadParams(ValueError):
    pass


@dataclass
class MatrixFamily:
    """Spanning matrices of a series in a format, with slot weights."""

    name: str
    module: SuperSpace
    matrices: list[SuperMatrix]
    slots: list[dict[str, int]]
    labels: list[str]
    central: bool = False
    ideal: list[SuperMatrix] = field(default_factory=list)


def parse_name(text: str) -> tuple[str, tuple[int, ...]]:
    """``"osp_sy(4|2)" -> ("osp_sy", (4, 2))``."""
    match = _NAME_RE.match(text)
    if not match:
        raise BadParams(f"Unparseable algebra name: {text}")
    raw = match.group("params").strip()
    params = tuple(int(p) for p in re.split(r"[|,]", raw) if p.strip()) if raw else ()
    return match.group("series"), params


def resolve_series(series: str) -> tuple[str, bool]:
    """Canonical series name and whether a leading ``c`` asks for the identity."""
    series = _ALIASES.get(series, series)
    if series in _BUILDERS:
        return series, False
    if series.startswith("c"):
        base = _ALIASES.get(series[1:], series[1:])
        if base in _BUILDERS:
            return base, True
    raise BadParams(f"Unknown series - name:{series}")


def build_classical(
    name: str, params: Sequence[int] | None = None, domain=RATIONAL
) -> LieSuperAlgebra:
    """
    Build a classical series member, e.g. ``build_classical("osp_sy", (3, 2))``
    or ``build_classical("osp_sy(3|2)")``. A leading ``c`` adds the identity
    (trivial central extension).
    """
    if params is None:
        name, params = parse_name(name)
    family = classical_family(name, params)
    g = realize(family, domain)
    LOG.debug("Classical algebra - name:%s sdim:%s", family.name, g.sdim)
    return g


def classical_family(name: str, params: Sequence[int]) -> MatrixFamily:
    series, central = resolve_series(name)
    try:
        family = _BUILDERS[series](*params)
    except TypeError as e:
        raise BadParams(
            f"Wrong parameter count - name:{name} params:{tuple(params)}"
        ) from e
    if central:
        family.matrices.append({(i, i): 1 for i in range(family.module.dim)})
        family.central = True
        family.name = f"c{family.name}"
    return family


def realize(family: MatrixFamily, domain=RATIONAL) -> LieSuperAlgebra:
    matrices = [_convert(m, domain) for m in family.matrices]
    g = from_matrices(family.name, family.module, matrices, domain)
    g = attach_borel(g, family)
    if not family.ideal:
        return g
    n = family.module.dim
    solver = coordinates_solver([flatten(m, n) for m in g.matrices], n * n, domain)
    ideal = []
    for m in family.ideal:
        coords = solver.express(flatten(_convert(m, domain), n))
        if coords is None:
            raise BadParams(f"Ideal generator outside algebra - name:{family.name}")
        ideal.append(coords)
    return quotient(g, ideal, name=family.name)


def _convert(m: Mapping[tuple[int, int], Any], domain) -> SuperMatrix:
    out = {}
    for key, v in m.items():
        v = to_field(v, domain)
        if v:
            out[key] = v
    return out


def attach_borel(g: LieSuperAlgebra, family: MatrixFamily) -> LieSuperAlgebra:
    """
    Torus = diagonal elements of ``g``; label values solve
    ``diag(h) = W labels(h)`` for the slot-weight matrix ``W``; raising
    operators are basis root vectors positive under the regular functional.
    """
    domain = g.domain
    n = family.module.dim
    even = [i for i in range(g.dim) if not g.parities[i]]
    rows: dict[tuple[int, int], dict[int, Any]] = {}
    for k, i in enumerate(even):
        for (r, c), x in g.matrices[i].items():
            if r != c:
                rows.setdefault((r, c), {})[k] = x
    kernel = kernel_of_rows(list(rows.values()), len(even), domain)
    cartan = [{even[k]: x for k, x in v.items()} for v in kernel]
    labels = list(family.labels) + ([CENTRAL_LABEL] if family.central else [])
    columns = []
    for lab in labels:
        col = {}
        for s, weights in enumerate(family.slots):
            coeff = 1 if lab == CENTRAL_LABEL else weights.get(lab, 0)
            if coeff:
                col[s] = domain.convert(coeff)
        columns.append(col)
    solver = coordinates_solver(columns, n, domain)
    values: dict[str, list] = {lab: [] for lab in labels}
    for h in cartan:
        m = g.matrix_of(h)
        coords = solver.express({s: m[(s, s)] for s in range(n) if m.get((s, s))})
        if coords is None:
            raise BadParams(
                f"Torus element not a slot-weight combination - name:{g.name}"
            )
        for k, lab in enumerate(labels):
            values[lab].append(coords.get(k, domain.zero))
    targets = regular_targets(family.labels)
    slot_value = [
        sum(coeff * targets[lab] for lab, coeff in weights.items())
        for weights in family.slots
    ]
    raising = []
    for i in range(g.dim):
        lam = _regular_eigenvalue(g.matrices[i], slot_value)
        if lam is None:
            raise BadParams(
                f"Basis element is not a root vector - name:{g.name} index:{i}"
            )
        if lam > 0:
            raising.append({i: domain.one})
    labelled = {lab: vals for lab, vals in values.items() if any(vals)}
    return with_borel(g, cartan, raising, labelled)


def regular_targets(labels: Sequence[str]) -> dict[str, int]:
    """Decreasing positive values in label order."""
    return {lab: len(labels) - k for k, lab in enumerate(labels)}


def _regular_eigenvalue(
    m: Mapping[tuple[int, int], Any], slot_value: Sequence[int]
) -> int | None:
    seen = {slot_value[r] - slot_value[c] for (r, c), x in m.items() if x}
    if len(seen) > 1:
        return None
    return seen.pop() if seen else 0


def aut_of_form(
    module: SuperSpace, form: Mapping[tuple[int, int], Any], domain=RATIONAL
) -> list[SuperMatrix]:
    """Homogeneous basis of ``{X : X^{st} B + (-1)^{p(X)p(B)} B X = 0}``."""
    n = module.dim
    parities = module.parities
    form = _convert(form, domain)
    form_parity = matrix_parity(form, parities)
    out = []
    for parity in (0, 1):
        cells = [
            (r, c)
            for r in range(n)
            for c in range(n)
            if (parities[r] + parities[c]) & 1 == parity
        ]
        sign = -1 if parity & form_parity else 1
        equations: dict[tuple[int, int], dict[int, Any]] = {}
        for k, cell in enumerate(cells):
            x = {cell: domain.one}
            transposed = supertranspose(x, parities, parity)
            image = mat_add(matmul(transposed, form), matmul(form, x), sign)
            for key, v in image.items():
                equations.setdefault(key, {})[k] = v
        for vec in kernel_of_rows(list(equations.values()), len(cells), domain):
            out.append({cells[k]: v for k, v in vec.items()})
    LOG.debug("Form automorphisms - size:%s dim:%s", n, len(out))
    return out


def _gl(p: int, q: int = 0) -> MatrixFamily:
    module = SuperSpace.standard(p, q)
    n = p + q
    labels = [f"e{i + 1}" for i in range(p)] + [f"d{j + 1}" for j in range(q)]
    mats = [{(r, c): 1} for r in range(n) for c in range(n)]
    slots = [{lab: 1} for lab in labels]
    return MatrixFamily(f"gl({p}|{q})", module, mats, slots, labels)


def _sl(p: int, q: int = 0) -> MatrixFamily:
    family = _gl(p, q)
    n = p + q
    parities = family.module.parities
    mats = [{(r, c): 1} for r in range(n) for c in range(n) if r != c]
    for i in range(1, n):
        mats.append({(i, i): 1, (0, 0): -1 if parities[i] == parities[0] else 1})
    family.name = f"sl({p}|{q})"
    family.matrices = mats
    return family


def _psl(p: int, q: int | None = None) -> MatrixFamily:
    q = p if q is None else q
    if p != q:
        raise BadParams(f"psl needs p = q - p:{p} q:{q}")
    family = _sl(p, q)
    family.name = f"psl({p}|{p})"
    family.ideal = [{(i, i): 1 for i in range(2 * p)}]
    return family


def queer_family(n: int, special: bool) -> MatrixFamily:
    if n < 1:
        raise BadParams(f"q needs n ≥ 1 - n:{n}")
    names = tuple(f"e{i + 1}" for i in range(n))
    names += tuple(f"Π(e{i + 1})" for i in range(n))
    module = SuperSpace(names, (0,) * n + (1,) * n)
    labels = [f"e{i + 1}" for i in range(n)]
    mats = []
    for i in range(n):
        for j in range(n):
            mats.append({(i, j): 1, (n + i, n + j): 1})
            if not (special and i == j):
                mats.append({(i, n + j): 1, (n + i, j): 1})
    if special:
        for i in range(1, n):
            mats.append({(i, n + i): 1, (n + i, i): 1, (0, n): -1, (n, 0): -1})
    slots = [{lab: 1} for lab in labels] * 2
    return MatrixFamily(f"{'s' if special else ''}q({n})", module, mats, slots, labels)


def _q(n: int) -> MatrixFamily:
    return queer_family(n, special=False)


def _sq(n: int) -> MatrixFamily:
    return queer_family(n, special=True)


def _psq(n: int) -> MatrixFamily:
    family = queer_family(n, special=True)
    family.name = f"psq({n})"
    family.ideal = [{(i, i): 1 for i in range(2 * n)}]
    return family


def q_operator(n: int) -> SuperMatrix:
    """``J = (0, 1; -1, 0)`` in the format of ``q(n)``."""
    out: SuperMatrix = {}
    for i in range(n):
        out[(i, n + i)] = 1
        out[(n + i, i)] = -1
    return out


def _orthogonal_block(
    m: int, offset: int, label: str
) -> tuple[SuperMatrix, list[dict[str, int]]]:
    """
    Antidiagonal symmetric form on ``m`` slots; slot weights
    ``label_1.., (0), ..-label_1``.
    """
    r = m // 2
    form = {(offset + i, offset + m - 1 - i): 1 for i in range(m)}
    slots = [{f"{label}{i + 1}": 1} for i in range(r)]
    if m % 2:
        slots.append({})
    slots += [{f"{label}{r - i}": -1} for i in range(r)]
    return form, slots


def _symplectic_block(
    size: int, offset: int, label: str
) -> tuple[SuperMatrix, list[dict[str, int]]]:
    n = size // 2
    form = {
        (offset + j, offset + size - 1 - j): 1 if j < n else -1 for j in range(size)
    }
    slots = [{f"{label}{j + 1}": 1} for j in range(n)]
    slots += [{f"{label}{n - j}": -1} for j in range(n)]
    return form, slots


def _check_osp(m: int, two_n: int) -> None:
    if two_n % 2 or m < 0 or two_n < 0 or m + two_n == 0:
        raise BadParams(
            f"osp needs m ≥ 0 and an even symplectic size - m:{m} 2n:{two_n}"
        )


def _osp_labels(m: int, two_n: int) -> list[str]:
    return [f"e{i + 1}" for i in range(m // 2)] + [
        f"d{j + 1}" for j in range(two_n // 2)
    ]


def _osp_sy(m: int, two_n: int = 0) -> MatrixFamily:
    """Symmetric form on the ``m`` even slots, skew on the ``2n`` odd slots."""
    _check_osp(m, two_n)
    module = SuperSpace.standard(m, two_n)
    form_even, slots_even = _orthogonal_block(m, 0, "e")
    form_odd, slots_odd = _symplectic_block(two_n, m, "d")
    mats = aut_of_form(module, {**form_even, **form_odd})
    return MatrixFamily(
        f"osp_sy({m}|{two_n})",
        module,
        mats,
        slots_even + slots_odd,
        _osp_labels(m, two_n),
    )


def _osp_sk(m: int, two_n: int = 0) -> MatrixFamily:
    """Skew form on the ``2n`` even slots, symmetric on the ``m`` odd slots."""
    _check_osp(m, two_n)
    module = SuperSpace.standard(two_n, m)
    form_even, slots_even = _symplectic_block(two_n, 0, "d")
    form_odd, slots_odd = _orthogonal_block(m, two_n, "e")
    mats = aut_of_form(module, {**form_even, **form_odd})
    return MatrixFamily(
        f"osp_sk({m}|{two_n})",
        module,
        mats,
        slots_even + slots_odd,
        _osp_labels(m, two_n),
    )


def _o(m: int) -> MatrixFamily:
    family = _osp_sy(m, 0)
    family.name = f"o({m})"
    return family


def _sp(two_n: int) -> MatrixFamily:
    family = _osp_sy(0, two_n)
    family.name = f"sp({two_n})"
    return family


def _periplectic(n: int, symmetric_odd_form: bool) -> MatrixFamily:
    if n < 1:
        raise BadParams(f"pe needs n ≥ 1 - n:{n}")
    module = SuperSpace.standard(n, n)
    form = {}
    for i in range(n):
        form[(i, n + i)] = 1
        form[(n + i, i)] = 1 if symmetric_odd_form else -1
    labels = [f"e{i + 1}" for i in range(n)]
    slots = [{lab: 1} for lab in labels] + [{lab: -1} for lab in labels]
    kind = "sk" if symmetric_odd_form else "sy"
    mats = aut_of_form(module, form)
    return MatrixFamily(f"pe_{kind}({n})", module, mats, slots, labels)


def _pe_sy(n: int) -> MatrixFamily:
    return _periplectic(n, symmetric_odd_form=False)


def _pe_sk(n: int) -> MatrixFamily:
    return _periplectic(n, symmetric_odd_form=True)


def supertraceless(family: MatrixFamily) -> MatrixFamily:
    """Replace the span by its intersection with ``str = 0``."""
    parities = family.module.parities
    matrices = [_convert(m, RATIONAL) for m in family.matrices]
    traces = [RATIONAL.convert(supertrace(m, parities)) for m in matrices]
    k = next((k for k, s in enumerate(traces) if s), None)
    if k is None:
        return family
    pivot, s0 = matrices[k], traces[k]
    family.matrices = [
        mat_add(m, pivot, -s / s0) if s else m
        for j, (m, s) in enumerate(zip(matrices, traces))
        if j != k
    ]
    return family


def _spe(n: int) -> MatrixFamily:
    family = supertraceless(_pe_sy(n))
    family.name = f"spe({n})"
    return family


def _spe_tau(n: int) -> MatrixFamily:
    """``<tau + (n-1) z> ⋉ spe(n-1)`` on the ``(n-1|n-1)`` module."""
    if n < 2:
        raise BadParams(f"spe_tau needs n ≥ 2 - n:{n}")
    family = _spe(n - 1)
    k = n - 1
    element = {(i, i): n for i in range(k)}
    element.update({(k + i, k + i): n - 2 for i in range(k)})
    family.matrices.append(element)
    family.central = True
    family.name = f"spe_tau({n})"
    return family


_BUILDERS = {
    "gl": _gl,
    "sl": _sl,
    "psl": _psl,
    "q": _q,
    "sq": _sq,
    "psq": _psq,
    "osp_sy": _osp_sy,
    "osp_sk": _osp_sk,
    "o": _o,
    "sp": _sp,
    "pe_sy": _pe_sy,
    "pe_sk": _pe_sk,
    "spe": _spe,
    "spe_tau": _spe_tau,
}

_ALIASES = {"osp": "osp_sy", "pe": "pe_sy"}


def series_names() -> list[str]:
    return sorted(_BUILDERS)
