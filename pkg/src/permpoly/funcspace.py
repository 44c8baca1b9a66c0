"""Maps on F_{q^n} as dense lookup tables, plus polynomial forms.

A :class:`FuncTable` stores ``values[x]`` for every canonical index ``x``.
Its codomain is either the whole field (``"qn"``) or the subfield F_q
(``"q"``).  Every structural test in the package is a pointwise or fiber
condition on these tables.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .gf_arith import Field, FieldError


class FuncError(FieldError):
    pass


@dataclass(frozen=True, eq=False)
class FuncTable:
    field: Field
    values: np.ndarray
    codomain: str = "qn"

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.int64)
        if vals.shape != (self.field.order,):
            raise FuncError(f"table must have {self.field.order} entries, got {vals.size}")
        if self.codomain not in ("qn", "q"):
            raise FuncError(f"unknown codomain {self.codomain!r}")
        limit = self.field.q if self.codomain == "q" else self.field.order
        if vals.size and (vals.min() < 0 or vals.max() >= limit):
            raise FuncError("table entry outside the codomain")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def __eq__(self, other):
        return (
            isinstance(other, FuncTable)
            and self.field == other.field
            and self.codomain == other.codomain
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self):
        return hash((self.field, self.codomain, self.values.tobytes()))

    def __getitem__(self, x):
        return self.values[x]

    def __len__(self):
        return len(self.values)

    def to_dict(self) -> dict:
        return {"field": self.field.to_dict(), "codomain": self.codomain, "table": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict, field: Field | None = None) -> "FuncTable":
        from .gf_arith import field_from_dict

        if field is None:
            field = field_from_dict(data["field"])
        return cls(field, data["table"], data.get("codomain", "qn"))


def identity(field: Field) -> FuncTable:
    return FuncTable(field, field.elements())


def constant(field: Field, c: int, codomain: str = "qn") -> FuncTable:
    return FuncTable(field, np.full(field.order, c), codomain)


def embed_table(t: FuncTable) -> FuncTable:
    """View an F_q-valued table as F_{q^n}-valued."""
    return FuncTable(t.field, t.values, "qn")


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def reduce_exponent(e: int, order: int) -> int:
    """Exponent of the same map on F_order: 0 stays 0, else 1 + (e-1) mod (order-1)."""
    if e < 0:
        raise FuncError("negative exponent")
    if e == 0:
        return 0
    return 1 + (e - 1) % (order - 1)


@dataclass(frozen=True)
class PolyRep:
    """Sparse polynomial: sorted (coefficient index, exponent) pairs."""

    field: Field
    terms: tuple[tuple[int, int], ...] = dc_field(default=())

    def __post_init__(self):
        acc: dict[int, int] = {}
        for c, e in self.terms:
            c, e = int(c), int(e)
            if not 0 <= c < self.field.order:
                raise FuncError(f"coefficient {c} outside the field")
            if e < 0:
                raise FuncError("negative exponent")
            acc[e] = self.field.add(acc.get(e, 0), c)
        terms = tuple((c, e) for e, c in sorted(acc.items()) if c != 0)
        object.__setattr__(self, "terms", terms)

    def reduced(self) -> "PolyRep":
        """Same map with every exponent below q^n."""
        return PolyRep(self.field, [(c, reduce_exponent(e, self.field.order)) for c, e in self.terms])

    @property
    def degree(self) -> int:
        return self.terms[-1][1] if self.terms else -1

    def exponents(self) -> list[int]:
        return [e for _, e in self.terms]

    def to_dict(self) -> dict:
        return {"terms": [[c, e] for c, e in self.terms]}

    @classmethod
    def from_dict(cls, data: dict, field: Field) -> "PolyRep":
        return cls(field, [tuple(t) for t in data["terms"]])


def eval_poly(p: PolyRep) -> FuncTable:
    field = p.field
    x = field.elements()
    acc = np.zeros(field.order, dtype=np.int64)
    for c, e in p.terms:
        acc = field.add(acc, field.mul(c, field.pow(x, e)))
    return FuncTable(field, acc)


def interpolate(t: FuncTable) -> PolyRep:
    """The unique polynomial of degree < q^n agreeing with the table.

    Uses f = sum_a t(a) (1 - (x - a)^{N-1}), N = q^n, whose coefficients are
    c_0 = t(0) and c_k = -sum_a t(a) a^{N-1-k} for 1 <= k <= N-1.
    """
    field = t.field
    n_elems = field.order
    vals = np.asarray(t.values, dtype=np.int64)
    a = field.elements()
    terms = [(int(vals[0]), 0)]
    for k in range(1, n_elems):
        s = field.sum(field.mul(vals, field.pow(a, n_elems - 1 - k)))
        terms.append((field.neg(int(s)), k))
    return PolyRep(field, terms)


# ---------------------------------------------------------------------------
# structural tests
# ---------------------------------------------------------------------------

def _require_self_map(t: FuncTable):
    if t.codomain != "qn":
        raise FuncError("this test needs a map from F_{q^n} to itself")


def is_permutation(t: FuncTable) -> bool:
    _require_self_map(t)
    seen = np.zeros(t.field.order, dtype=bool)
    seen[t.values] = True
    return bool(seen.all())


def rows_are_permutations(rows: np.ndarray) -> np.ndarray:
    """Row-wise bijectivity of an (k, N) array with entries in range(N)."""
    rows = np.asarray(rows)
    s = np.sort(rows, axis=1)
    if rows.shape[1] < 2:
        return np.ones(rows.shape[0], dtype=bool)
    return np.all(s[:, 1:] != s[:, :-1], axis=1)


def image_size(t: FuncTable) -> int:
    return int(np.unique(t.values).size)


def fiber_sizes(labels, codomain_size: int) -> np.ndarray:
    return np.bincount(np.asarray(labels, dtype=np.int64), minlength=codomain_size)


def counts_are_k_to_1(counts, domain_size: int, k: int) -> bool:
    """The k-to-1 condition on a vector of fiber sizes (both cases)."""
    if k < 1:
        raise FuncError("k must be positive")
    counts = np.asarray(counts)
    attained = counts[counts > 0]
    if domain_size % k == 0:
        return bool(np.all(attained == k))
    odd = attained[attained != k]
    return odd.size == 1 and int(odd[0]) == domain_size % k


def is_k_to_1(t: FuncTable, k: int) -> bool:
    size = t.field.q if t.codomain == "q" else t.field.order
    return counts_are_k_to_1(fiber_sizes(t.values, size), t.field.order, k)


def is_linearized(t: FuncTable, seed: int = 0) -> bool:
    """F_q-linearity: additive and F_q-homogeneous.

    Additivity is exhaustive over all pairs when q^n <= 256.  Above that the
    table is compared with the F_p-linear extension of its values on the
    digit basis p^k (exact), plus a seeded random pair sample.
    """
    _require_self_map(t)
    field = t.field
    v = t.values
    x = field.elements()
    if v[0] != 0:
        return False
    if field.order <= 256:
        xs, ys = np.meshgrid(x, x, indexing="ij")
        if not np.array_equal(v[field.add(xs, ys)], field.add(v[xs], v[ys])):
            return False
    else:
        gens = v[field.p ** np.arange(field.ndigits)]
        # sum_k digit_k(x) * t(p^k), with digit multiplication as scalar mult in F_p
        terms = field.mul(field.digits, gens[None, :])
        if not np.array_equal(field.sum(terms, axis=1), v):
            return False
        rng = np.random.default_rng(seed)
        a = rng.integers(0, field.order, 10 * field.order)
        b = rng.integers(0, field.order, 10 * field.order)
        if not np.array_equal(v[field.add(a, b)], field.add(v[a], v[b])):
            return False
    c = field.subfield_elements()
    cs, xs = np.meshgrid(c, x, indexing="ij")
    return bool(np.array_equal(v[field.mul(cs, xs)], field.mul(cs, v[xs])))


def compose(outer: FuncTable, inner: FuncTable) -> FuncTable:
    """x -> outer(inner(x))."""
    if outer.field != inner.field:
        raise FuncError("field mismatch")
    _require_self_map(inner)
    return FuncTable(outer.field, outer.values[inner.values], outer.codomain)


def invert_table(t: FuncTable) -> FuncTable:
    if not is_permutation(t):
        raise FuncError("table is not a permutation")
    inv = np.empty_like(t.values)
    inv[t.values] = t.field.elements()
    return FuncTable(t.field, inv)


def invert_small(h) -> np.ndarray:
    """Inverse of a permutation of range(len(h)) given as a sequence."""
    h = np.asarray(h, dtype=np.int64)
    if np.unique(h).size != h.size:
        raise FuncError("map is not a permutation")
    inv = np.empty_like(h)
    inv[h] = np.arange(h.size)
    return inv


def random_permutation(field: Field, rng: np.random.Generator) -> FuncTable:
    return FuncTable(field, rng.permutation(field.order))


def dumps(obj) -> str:
    return json.dumps(obj.to_dict(), sort_keys=True)
