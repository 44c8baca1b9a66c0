"""Ordered bases of F_{q^n} over F_q, dual bases and coordinates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf_arith import Field, FieldError


class BasisError(FieldError):
    pass


@dataclass(frozen=True)
class OrderedBasis:
    field: Field
    elements: tuple[int, ...]
    verified: bool = False

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(x) for x in self.elements))
        if len(self.elements) != self.field.n:
            raise BasisError(f"a basis needs {self.field.n} elements, got {len(self.elements)}")

    def __iter__(self):
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def to_list(self) -> list[int]:
        return list(self.elements)


# ---------------------------------------------------------------------------
# Gaussian elimination over F_q (entries are F_q indices)
# ---------------------------------------------------------------------------

def _row_reduce(field: Field, rows: list[list[int]]) -> tuple[list[list[int]], int]:
    """Reduced row echelon form with first-nonzero pivoting; returns (rows, rank)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = field.inv(m[rank][col])
        m[rank] = [field.mul(inv, c) for c in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col] != 0:
                factor = m[r][col]
                m[r] = [field.sub(a, field.mul(factor, b)) for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == nrows:
            break
    return m, rank


def rank_q(field: Field, rows) -> int:
    rows = [list(map(int, r)) for r in rows]
    if not rows:
        return 0
    return _row_reduce(field, rows)[1]


def invert_matrix_q(field: Field, mat) -> list[list[int]]:
    size = len(mat)
    aug = [list(map(int, row)) + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(mat)]
    red, _ = _row_reduce(field, aug)
    for i in range(size):
        if red[i][i] != 1:
            raise BasisError("matrix is singular over F_q")
    return [row[size:] for row in red]


# ---------------------------------------------------------------------------
# basis operations
# ---------------------------------------------------------------------------

def _as_tuple(field, candidate):
    if isinstance(candidate, OrderedBasis):
        if candidate.field != field:
            raise BasisError("basis belongs to a different field")
        return candidate.elements
    return tuple(int(x) for x in candidate)


def is_basis(field: Field, candidate) -> bool:
    """True iff the n-tuple is linearly independent over F_q."""
    elems = _as_tuple(field, candidate)
    if len(elems) != field.n:
        raise BasisError(f"expected {field.n} elements, got {len(elems)}")
    if any(not 0 <= x < field.order for x in elems):
        raise BasisError("element index outside the field")
    return rank_q(field, field.coords_q(np.array(elems)).tolist()) == field.n


def basis_flags(field: Field, tuples: np.ndarray) -> np.ndarray:
    """Vectorised is_basis over an array of shape (k, n) of element indices."""
    tuples = np.asarray(tuples, dtype=np.int64)
    cache: dict[tuple, bool] = {}
    out = np.zeros(len(tuples), dtype=bool)
    for i, row in enumerate(tuples.tolist()):
        key = tuple(row)
        if key not in cache:
            cache[key] = is_basis(field, key)
        out[i] = cache[key]
    return out


def make_basis(field: Field, elements) -> OrderedBasis:
    elements = _as_tuple(field, elements)
    if not is_basis(field, elements):
        raise BasisError(f"{list(elements)} is not a basis over F_q")
    return OrderedBasis(field, elements, verified=True)


def polynomial_basis(field: Field) -> OrderedBasis:
    """(1, y, ..., y^{n-1}): the unit coordinate vectors over F_q."""
    return OrderedBasis(field, tuple(field.q**j for j in range(field.n)), verified=True)


def complete_basis(field: Field, last: int) -> OrderedBasis:
    """Extend a nonzero element to a basis ending in it, greedily by canonical index."""
    if last == 0:
        raise BasisError("zero cannot belong to a basis")
    chosen: list[int] = []
    for x in range(1, field.order):
        if len(chosen) == field.n - 1:
            break
        trial = chosen + [x, last]
        if rank_q(field, field.coords_q(np.array(trial)).tolist()) == len(trial):
            chosen.append(x)
    return make_basis(field, chosen + [last])


def dual_basis(u: OrderedBasis) -> OrderedBasis:
    """The basis v with Tr(u_i v_j) = delta_ij.

    With Gram matrix G_ij = Tr(u_i u_j), writing v_j = sum_k C_jk u_k gives
    C = G^{-1}.
    """
    if not isinstance(u, OrderedBasis):
        raise BasisError("dual_basis expects an OrderedBasis")
    field = u.field
    if not u.verified:
        if not is_basis(field, u.elements):
            raise BasisError("input is not a basis")
    try:
        cinv = invert_matrix_q(field, gram_like(field, u.elements, u.elements))
    except BasisError as exc:
        raise FieldError("trace Gram matrix of a basis is singular") from exc
    v = []
    for row in cinv:
        acc = 0
        for c, uk in zip(row, u.elements):
            acc = field.add(acc, field.mul(c, uk))
        v.append(acc)
    return OrderedBasis(field, tuple(v), verified=True)


def is_dual_pair(u, v) -> bool:
    field = u.field
    return gram_like(field, u.elements, v.elements) == [
        [1 if i == j else 0 for j in range(field.n)] for i in range(field.n)
    ]


def gram_like(field: Field, u, v) -> list[list[int]]:
    return [[field.trace(field.mul(a, b)) for b in v] for a in u]


def _spot_check(u: OrderedBasis, v: OrderedBasis):
    field = u.field
    if field.trace(field.mul(u[0], v[0])) != 1:
        raise BasisError("(u, v) is not a dual pair")
    if field.n > 1 and field.trace(field.mul(u[0], v[1])) != 0:
        raise BasisError("(u, v) is not a dual pair")


def coordinates(x, u: OrderedBasis, v: OrderedBasis) -> np.ndarray:
    """(Tr(v_1 x), ..., Tr(v_n x)); works elementwise on arrays of x.

    The last axis of the result indexes the coordinate.
    """
    _spot_check(u, v)
    field = u.field
    x = np.asarray(x, dtype=np.int64)
    return np.stack([field.trace(field.mul(vi, x)) for vi in v.elements], axis=-1)


def reconstruct(coords, u: OrderedBasis) -> np.ndarray | int:
    """sum_i u_i * c_i, with the coordinate on the last axis."""
    field = u.field
    c = np.asarray(coords, dtype=np.int64)
    if c.shape[-1] != field.n:
        raise BasisError(f"expected {field.n} coordinates, got {c.shape[-1]}")
    field.embed(c)
    terms = field.mul(np.asarray(u.elements, dtype=np.int64), c)
    out = field.sum(terms, axis=-1)
    return int(out) if np.ndim(out) == 0 else out


def count_bases(field: Field) -> int:
    """(q^n - 1)(q^n - q)...(q^n - q^{n-1})."""
    total = 1
    for i in range(field.n):
        total *= field.order - field.q**i
    return total


def all_bases(field: Field):
    """Every ordered basis, extending one vector at a time outside the span."""
    q, order = field.q, field.order
    scalars = field.subfield_elements()

    def extend(prefix, span):
        if len(prefix) == field.n:
            yield tuple(prefix)
            return
        inside = np.zeros(order, dtype=bool)
        inside[span] = True
        for x in np.flatnonzero(~inside).tolist():
            multiples = field.mul(scalars, x)
            grown = field.add(span[:, None], multiples[None, :]).ravel()
            yield from extend(prefix + [x], grown)
    yield from extend([], np.zeros(1, dtype=np.int64))
