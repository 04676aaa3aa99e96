"""
Exact scalar fields and sparse exact linear algebra.

Two fields are supported: the rationals and the rational functions in one
indeterminate ``a`` (the parameter of the deformed orthosymplectic algebra).
Both are sympy polys domains, so every computation stays exact. Vectors are
sparse ``dict[int, element]`` maps without stored zeros; matrices are sympy
``DomainMatrix`` instances in sparse format.
"""

import logging
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

import sympy
from sympy.polys.domains import QQ
from sympy.polys.matrices import DomainMatrix

LOG = logging.getLogger(__name__)

ALPHA = sympy.Symbol("a")
RATIONAL = QQ
RATFUNC = QQ.frac_field(ALPHA)

Vector = dict[int, Any]


class PoleAtAlpha(ValueError):
    pass


def is_ratfunc(domain) -> bool:
    return domain == RATFUNC


def to_field(value: Any, domain=RATIONAL):
    """
    Coerce ints, Fractions, ``"p/q"`` strings, sympy expressions and elements of
    the other supported field into ``domain``.
    """
    if domain.of_type(value):
        return value
    if isinstance(value, bool):
        raise TypeError(f"Not a field value: {value!r}")
    if isinstance(value, int):
        return domain.convert(value)
    if isinstance(value, Fraction):
        return domain.from_sympy(sympy.Rational(value.numerator, value.denominator))
    if RATIONAL.of_type(value) and is_ratfunc(domain):
        return domain.convert_from(value, RATIONAL)
    if RATFUNC.of_type(value) and not is_ratfunc(domain):
        constant = as_constant(value)
        if constant is None:
            raise ValueError(
                f"Value depends on {ALPHA} - value:{format_element(value)}"
            )
        return constant
    if isinstance(value, str):
        value = sympy.sympify(value, locals={"a": ALPHA})
    return domain.from_sympy(sympy.sympify(value))


def as_constant(x):
    """Return a rational equal to ``x`` when ``x`` does not depend on ``a``."""
    if RATIONAL.of_type(x):
        return x
    if x.numer.is_ground and x.denom.is_ground:
        return RATIONAL.convert(x.numer.LC) / RATIONAL.convert(x.denom.LC)
    return None


def as_integer(x) -> int | None:
    constant = as_constant(x)
    if constant is None or constant.denominator != 1:
        return None
    return int(constant.numerator)


def format_element(x) -> str:
    """
    Canonical string form: ``"p/q"`` or ``"p"`` for rationals, and for rational
    functions ``num`` or ``(num)/(den)`` with a monic denominator in ``a``.
    """
    if isinstance(x, int):
        return str(x)
    if RATIONAL.of_type(x):
        if x.denominator == 1:
            return str(int(x.numerator))
        return f"{int(x.numerator)}/{int(x.denominator)}"
    lc = x.denom.LC
    numer = x.numer.quo_ground(lc)
    denom = x.denom.quo_ground(lc)
    num_str = str(numer.as_expr())
    if denom == denom.ring.one:
        return num_str
    return f"({num_str})/({denom.as_expr()})"


def evaluate_alpha(x, a) -> Any:
    """Substitute the rational ``a`` for the indeterminate of a rational function."""
    a = to_field(a, RATIONAL)
    if RATIONAL.of_type(x):
        return x
    denom = RATIONAL.convert(x.denom.evaluate(0, a))
    if not denom:
        raise PoleAtAlpha(
            "Denominator vanishes - "
            f"value:{format_element(x)} a:{format_element(a)}"
        )
    return RATIONAL.convert(x.numer.evaluate(0, a)) / denom


def vec_add(u: Mapping[int, Any], v: Mapping[int, Any], c=1) -> Vector:
    out = dict(u)
    vec_iadd(out, v, c)
    return out


def vec_iadd(target: Vector, v: Mapping[int, Any], c=1) -> Vector:
    if not c:
        return target
    for i, x in v.items():
        y = target.get(i)
        y = c * x if y is None else y + c * x
        if y:
            target[i] = y
        else:
            target.pop(i, None)
    return target


def vec_scale(v: Mapping[int, Any], c) -> Vector:
    if not c:
        return {}
    return {i: c * x for i, x in v.items()}


def vec_convert(v: Mapping[int, Any], domain) -> Vector:
    out = {}
    for i, x in v.items():
        x = to_field(x, domain)
        if x:
            out[i] = x
    return out


def matrix(rows: Sequence[Mapping[int, Any]], ncols: int, domain) -> DomainMatrix:
    """Sparse matrix whose i-th row is ``rows[i]``."""
    dod = {i: {j: x for j, x in row.items() if x} for i, row in enumerate(rows) if row}
    return DomainMatrix.from_dod(dod, (len(rows), ncols), domain)


def columns_matrix(
    columns: Sequence[Mapping[int, Any]], nrows: int, domain
) -> DomainMatrix:
    """Sparse matrix whose j-th column is ``columns[j]``."""
    dod: dict[int, dict[int, Any]] = {}
    for j, col in enumerate(columns):
        for i, x in col.items():
            if x:
                dod.setdefault(i, {})[j] = x
    return DomainMatrix.from_dod(dod, (nrows, len(columns)), domain)


def rows_of(m: DomainMatrix) -> list[Vector]:
    dod = m.to_dod()
    return [dict(dod.get(i, {})) for i in range(m.shape[0])]


def rref(m: DomainMatrix) -> tuple[int, tuple[int, ...], DomainMatrix]:
    """
    Reduced row echelon form with the first-nonzero-column pivot rule.

    Returns ``(rank, pivots, reduced)``.
    """
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0 or not m.to_dod():
        return 0, (), DomainMatrix.from_dod({}, m.shape, m.domain)
    reduced, pivots = m.to_sparse().rref()
    return len(pivots), tuple(pivots), reduced


def rref_rows(
    rows: Iterable[Mapping[int, Any]], ncols: int, domain
) -> tuple[list[Vector], tuple[int, ...]]:
    """The nonzero rref rows of the matrix with the given rows, and their pivots."""
    rows = [r for r in rows if r]
    rank, pivots, reduced = rref(matrix(rows, ncols, domain))
    dod = reduced.to_dod()
    return [dict(dod[i]) for i in range(rank)], pivots


def kernel_basis(m: DomainMatrix) -> list[Vector]:
    """
    Null space basis: one vector per free column ``f``, namely
    ``e_f - sum_i R[i][f] e_{pivot_i}``.
    """
    ncols = m.shape[1]
    _, pivots, reduced = rref(m)
    dod = reduced.to_dod()
    pivot_set = set(pivots)
    by_column: dict[int, list[tuple[int, Any]]] = {}
    for i, p in enumerate(pivots):
        for j, x in dod.get(i, {}).items():
            if j != p:
                by_column.setdefault(j, []).append((p, x))
    basis = []
    for f in range(ncols):
        if f in pivot_set:
            continue
        v = {f: m.domain.one}
        for p, x in by_column.get(f, ()):
            v[p] = -x
        basis.append(v)
    return basis


def kernel_of_rows(
    rows: Sequence[Mapping[int, Any]], ncols: int, domain
) -> list[Vector]:
    return kernel_basis(matrix(rows, ncols, domain))


def rank_of_rows(rows: Sequence[Mapping[int, Any]], ncols: int, domain) -> int:
    return rref(matrix(rows, ncols, domain))[0]


def image_basis(m: DomainMatrix) -> list[Vector]:
    """Basis of the column space of ``m`` in echelon form."""
    return rref_rows(rows_of(m.transpose()), m.shape[0], m.domain)[0]


def independent_columns(
    vectors: Sequence[Mapping[int, Any]], ambient: int, domain
) -> tuple[tuple[int, ...], list[Vector]]:
    """
    Greedy selection of a basis among ``vectors`` in the given order.

    Returns the indices of the selected vectors and, for every input vector,
    its expression as a combination ``{selected index: coefficient}``.
    """
    _, pivots, reduced = rref(columns_matrix(vectors, ambient, domain))
    dod = reduced.to_dod()
    pivot_set = set(pivots)
    expressions: list[Vector] = []
    for j in range(len(vectors)):
        if j in pivot_set:
            expressions.append({j: domain.one})
            continue
        expr = {}
        for i, p in enumerate(pivots):
            x = dod.get(i, {}).get(j)
            if x:
                expr[p] = x
        expressions.append(expr)
    return pivots, expressions


@dataclass(frozen=True)
class Subspace:
    """
    A subspace of ``domain^ambient`` held as its rref rows.

    Rows are cleared at each other's pivots, so ``reduce`` computes the unique
    normal form of a vector modulo the subspace in a single pass.
    """

    ambient: int
    domain: Any
    rows: tuple[Vector, ...]
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(
        cls, vectors: Iterable[Mapping[int, Any]], ambient: int, domain
    ) -> "Subspace":
        rows, pivots = rref_rows(vectors, ambient, domain)
        return cls(ambient, domain, tuple(rows), tuple(pivots))

    @classmethod
    def zero(cls, ambient: int, domain) -> "Subspace":
        return cls(ambient, domain, (), ())

    @classmethod
    def full(cls, ambient: int, domain) -> "Subspace":
        rows = tuple({i: domain.one} for i in range(ambient))
        return cls(ambient, domain, rows, tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def basis(self) -> list[Vector]:
        return [dict(r) for r in self.rows]

    def reduce(self, v: Mapping[int, Any]) -> Vector:
        out = dict(v)
        for row, p in zip(self.rows, self.pivots):
            c = out.get(p)
            if c:
                vec_iadd(out, row, -c)
        return out

    def contains(self, v: Mapping[int, Any]) -> bool:
        return not self.reduce(v)

    def coordinates(self, v: Mapping[int, Any]) -> list[Any] | None:
        """Coefficients on ``rows`` or ``None`` when ``v`` is outside the subspace."""
        coords = [v.get(p, self.domain.zero) for p in self.pivots]
        if self.reduce(v):
            return None
        return coords

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def __add__(self, other: "Subspace") -> "Subspace":
        vectors = list(self.rows) + list(other.rows)
        return Subspace.from_vectors(vectors, self.ambient, self.domain)

    def equals(self, other: "Subspace") -> bool:
        return self.dim == other.dim and self.contains_subspace(other)

    def intersect(self, other: "Subspace") -> "Subspace":
        return intersect(self.basis, other.basis, self.ambient, self.domain)


def intersect(
    a: Sequence[Mapping[int, Any]],
    b: Sequence[Mapping[int, Any]],
    ambient: int,
    domain,
) -> Subspace:
    """
    Intersection of two spans via the kernel of ``[A^T | -B^T]``: every kernel
    vector ``(x, y)`` yields the common element ``x A = y B``.
    """
    a = [dict(v) for v in a if v]
    b = [dict(v) for v in b if v]
    if not a or not b:
        return Subspace.zero(ambient, domain)
    columns = a + [vec_scale(v, -domain.one) for v in b]
    kernel = kernel_basis(columns_matrix(columns, ambient, domain))
    common = []
    for k in kernel:
        w: Vector = {}
        for i, c in k.items():
            if i < len(a):
                vec_iadd(w, a[i], c)
        common.append(w)
    return Subspace.from_vectors(common, ambient, domain)


def quotient_space(sub: Subspace, vectors: Iterable[Mapping[int, Any]]) -> Subspace:
    """
    Representatives of ``span(vectors) / sub``: the rref of the normal forms.
    Quotient coordinates of ``v`` are ``reps.coordinates(sub.reduce(v))``.
    """
    reduced = (sub.reduce(v) for v in vectors)
    return Subspace.from_vectors(reduced, sub.ambient, sub.domain)


def quotient_coordinates(
    sub: Subspace, reps: Subspace, v: Mapping[int, Any]
) -> list[Any]:
    coords = reps.coordinates(sub.reduce(v))
    if coords is None:
        raise ValueError(f"Vector outside the quotient numerator - dim:{reps.dim}")
    return coords


def apply_rows(rows: Sequence[Mapping[int, Any]], v: Mapping[int, Any]) -> Vector:
    """Apply the matrix with the given rows to a sparse column vector."""
    out: Vector = {}
    for i, row in enumerate(rows):
        acc = 0
        for j, x in row.items():
            y = v.get(j)
            if y:
                acc = acc + x * y
        if acc:
            out[i] = acc
    return out
