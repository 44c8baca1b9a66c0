"""Coordinate structure of permutations of F_{q^n}.

For a dual pair (u, v) every map splits as f(x) = sum_i u_i f_i(x) with
F_q-valued coordinates f_i(x) = Tr(v_i f(x)).  This module builds that
decomposition and the constructions that act on it:

* the image bound and the coordinate-fiber criterion for bijectivity,
* balanced projections (x -> (f_1(x), ..., f_t(x)) is q^{n-t}-to-1 for a PP),
* recombination with new coefficients, F = sum a_i h_i(f_i) and its closed
  form inverse, the linear and power-of-trace families,
* extension of a balanced partial coordinate map to a full permutation.

Functions whose output is guaranteed by a theorem return the evidence with
it: a ``violation`` :class:`~permpoly.report.Report` is attached whenever
the observed verdict disagrees with the predicted one.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import bases as B
from .bases import OrderedBasis
from .funcspace import (
    FuncError,
    FuncTable,
    counts_are_k_to_1,
    fiber_sizes,
    image_size,
    invert_small,
    invert_table,
    is_permutation,
    rows_are_permutations,
)
from .gf_arith import Field
from .report import Report


class PPError(FuncError):
    pass


def _combine(field: Field, coeffs, coords) -> np.ndarray:
    """sum_i coeffs[..., i] * coords[..., i] over the last axis."""
    return field.sum(field.mul(np.asarray(coeffs), np.asarray(coords)), axis=-1)


def _require_pp(f: FuncTable, what: str = "f"):
    if f.codomain != "qn" or not is_permutation(f):
        raise PPError(f"{what} is not a permutation of F_{{q^n}}")


def _check_pair(u: OrderedBasis, v: OrderedBasis):
    if u.field != v.field or not B.is_dual_pair(u, v):
        raise B.BasisError("(u, v) is not a dual pair of bases")


def _check_small_map(field: Field, h) -> np.ndarray:
    h = np.asarray(h, dtype=np.int64)
    if h.shape != (field.q,) or h.min() < 0 or h.max() >= field.q:
        raise PPError(f"maps of F_q must be tables of length {field.q} with F_q values")
    return h


# ---------------------------------------------------------------------------
# decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CoordinateDecomposition:
    f: FuncTable
    u: OrderedBasis
    v: OrderedBasis
    coords: tuple[FuncTable, ...]

    @property
    def field(self) -> Field:
        return self.f.field

    @property
    def images(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(np.unique(c.values).tolist()) for c in self.coords)

    def matrix(self) -> np.ndarray:
        """(q^n, n) array whose row x is (f_1(x), ..., f_n(x))."""
        return np.stack([c.values for c in self.coords], axis=1)

    def labels(self, t: int | None = None) -> np.ndarray:
        """Encode (f_1(x), ..., f_t(x)) as the integer sum f_i q^{i-1}."""
        t = self.field.n if t is None else t
        w = self.field.q ** np.arange(t, dtype=np.int64)
        return self.matrix()[:, :t] @ w


def decompose(f: FuncTable, u: OrderedBasis, v: OrderedBasis) -> CoordinateDecomposition:
    _check_pair(u, v)
    if f.codomain != "qn":
        raise PPError("decompose needs an F_{q^n}-valued map")
    field = f.field
    coords = tuple(
        FuncTable(field, field.trace(field.mul(vi, f.values)), "q") for vi in v.elements
    )
    return CoordinateDecomposition(f, u, v, coords)


def image_bound(d: CoordinateDecomposition) -> tuple[int, int, bool]:
    lhs = image_size(d.f)
    rhs = math.prod(len(a) for a in d.images)
    return lhs, rhs, lhs <= rhs


def fiber_criterion(d: CoordinateDecomposition) -> bool:
    """Every tuple in F_q^n is hit by exactly one x."""
    counts = fiber_sizes(d.labels(), d.field.order)
    return bool(np.all(counts == 1))


def projection_profile(d: CoordinateDecomposition, t: int) -> bool:
    """Is x -> (f_1(x), ..., f_t(x)) a q^{n-t}-to-1 map into F_q^t?"""
    field = d.field
    if not 1 <= t <= field.n:
        raise PPError(f"t must lie in 1..{field.n}")
    counts = fiber_sizes(d.labels(t), field.q**t)
    return counts_are_k_to_1(counts, field.order, field.q ** (field.n - t))


def images_are_full(d: CoordinateDecomposition) -> bool:
    return all(len(a) == d.field.q for a in d.images)


def coordinate_balance_check(d: CoordinateDecomposition) -> Report:
    """For a PP: every A_i is all of F_q and every projection is balanced."""
    field = d.field
    failures = [
        {"t": t} for t in range(1, field.n + 1) if not projection_profile(d, t)
    ]
    if not images_are_full(d):
        failures.append({"images": [sorted(a) for a in d.images]})
    return Report(
        claim="PP coordinates: A_i = F_q and phi_t is q^(n-t)-to-1 for all t",
        formula_value=True,
        observed_value=not failures,
        witnesses=failures,
        ok=not failures,
    )


# ---------------------------------------------------------------------------
# recombination (arbitrary new coefficients)
# ---------------------------------------------------------------------------

@dataclass
class Recombination:
    g: FuncTable
    is_pp: bool
    b_is_basis: bool
    violation: Report | None = None


def recombine(d: CoordinateDecomposition, b) -> Recombination:
    """g(x) = sum_i b_i f_i(x); a PP exactly when b is a basis."""
    _require_pp(d.f)
    field = d.field
    b = tuple(int(x) for x in b)
    if len(b) != field.n:
        raise PPError(f"need {field.n} coefficients")
    g = FuncTable(field, _combine(field, b, d.matrix()))
    is_pp = is_permutation(g)
    basis = B.is_basis(field, b)
    violation = None
    if is_pp != basis:
        violation = Report(
            claim="recombination is a PP iff the coefficients form a basis",
            formula_value=basis,
            observed_value=is_pp,
            witnesses=[{"b": list(b)}],
            ok=False,
        )
    return Recombination(g, is_pp, basis, violation)


# ---------------------------------------------------------------------------
# F = sum a_i h_i(f_i(x)) and its inverse
# ---------------------------------------------------------------------------

@dataclass
class Theorem12Instance:
    f: FuncTable
    u: OrderedBasis
    v: OrderedBasis
    h: tuple[np.ndarray, ...]
    a: tuple[int, ...]
    F: FuncTable
    is_pp: bool
    conditions: dict
    violation: Report | None = None

    def to_dict(self) -> dict:
        out = {
            "F": self.F.values.tolist(),
            "f": self.f.values.tolist(),
            "u": list(self.u.elements),
            "v": list(self.v.elements),
            "h": [list(map(int, hi)) for hi in self.h],
            "a": list(self.a),
            "is_pp": self.is_pp,
            "conditions": self.conditions,
        }
        if self.violation is not None:
            out["violation"] = self.violation.to_dict()
        return out


def theorem12_build(f: FuncTable, u: OrderedBasis, v: OrderedBasis, h, a) -> Theorem12Instance:
    """F(x) = sum_i a_i h_i(f_i(x)) for a PP f and maps h_i of F_q.

    F is a PP iff a is a basis and every h_i permutes F_q; a disagreement
    between that prediction and the table scan is attached as ``violation``.
    """
    _require_pp(f)
    field = f.field
    h = tuple(_check_small_map(field, hi) for hi in h)
    a = tuple(int(x) for x in a)
    if len(h) != field.n or len(a) != field.n:
        raise PPError(f"need {field.n} maps h_i and {field.n} coefficients a_i")
    d = decompose(f, u, v)
    inner = np.stack([hi[c.values] for hi, c in zip(h, d.coords)], axis=1)
    F = FuncTable(field, _combine(field, a, inner))
    is_pp = is_permutation(F)
    conditions = {
        "a_is_basis": B.is_basis(field, a),
        "all_h_pp": all(np.unique(hi).size == field.q for hi in h),
    }
    predicted = conditions["a_is_basis"] and conditions["all_h_pp"]
    violation = None
    if predicted != is_pp:
        violation = Report(
            claim="F is a PP iff a is a basis and all h_i are PPs of F_q",
            formula_value=predicted,
            observed_value=is_pp,
            witnesses=[{"a": list(a), "h": [hi.tolist() for hi in h]}],
            ok=False,
        )
    return Theorem12Instance(f, u, v, h, a, F, is_pp, conditions, violation)


def theorem12_inverse(inst: Theorem12Instance) -> FuncTable:
    """F^{-1}(x) = f^{-1}( sum_i u_i h_i^{-1}(Tr(b_i x)) ), b = dual of a."""
    if not inst.is_pp:
        raise PPError("instance is not a permutation")
    field = inst.F.field
    b = B.dual_basis(B.make_basis(field, inst.a))
    x = field.elements()
    inner = np.stack(
        [invert_small(hi)[field.trace(field.mul(bi, x))] for hi, bi in zip(inst.h, b.elements)],
        axis=1,
    )
    y = _combine(field, inst.u.elements, inner)
    f_inv = invert_table(inst.f)
    return FuncTable(field, f_inv.values[y])


def inverse_coordinate_map(f: FuncTable, u: OrderedBasis, v: OrderedBasis) -> np.ndarray:
    """Table of (c_1, ..., c_n) -> f^{-1}(sum u_i c_i).

    Tuples are listed in lexicographic order (c_1 most significant), so
    entry ``sum_i c_i q^{n-i}`` holds the preimage.  Satisfies
    F(f_1(x), ..., f_n(x)) = x.  Raises if f is not a PP: no such map exists.
    """
    _check_pair(u, v)
    try:
        _require_pp(f)
    except PPError as exc:
        raise PPError("no inverse coordinate map exists: f is not a PP") from exc
    field = f.field
    tuples = np.array(list(itertools.product(range(field.q), repeat=field.n)), dtype=np.int64)
    y = _combine(field, u.elements, tuples)
    return invert_table(f).values[y]


def lex_index(coords, q: int) -> int:
    idx = 0
    for c in coords:
        idx = idx * q + int(c)
    return idx


# ---------------------------------------------------------------------------
# linear and power-of-trace families
# ---------------------------------------------------------------------------

@dataclass
class FamilyResult:
    F: FuncTable
    is_pp: bool
    conditions: dict
    violation: Report | None = None


def trace_coordinates(field: Field, theta) -> np.ndarray:
    """(q^n, n) array of Tr(theta_i x)."""
    x = field.elements()
    return np.stack([field.trace(field.mul(int(t), x)) for t in theta], axis=1)


def linear_pp_from_bases(field: Field, theta, omega) -> FamilyResult:
    """L(x) = sum_i Tr(theta_i x) omega_i.

    When one tuple is a basis, L is a PP iff the other one is.
    """
    theta = tuple(int(x) for x in theta)
    omega = tuple(int(x) for x in omega)
    L = FuncTable(field, _combine(field, omega, trace_coordinates(field, theta)))
    is_pp = is_permutation(L)
    cond = {"theta_basis": B.is_basis(field, theta), "omega_basis": B.is_basis(field, omega)}
    violation = None
    if cond["theta_basis"] or cond["omega_basis"]:
        predicted = cond["theta_basis"] and cond["omega_basis"]
        if predicted != is_pp:
            violation = Report(
                claim="with one basis fixed, L is a PP iff the other tuple is a basis",
                formula_value=predicted,
                observed_value=is_pp,
                witnesses=[{"theta": list(theta), "omega": list(omega)}],
                ok=False,
            )
    return FamilyResult(L, is_pp, cond, violation)


def monomial_family(field: Field, theta, a, m) -> FamilyResult:
    """F(x) = sum_i a_i Tr(theta_i x)^{m_i}.

    Predicted PP iff gcd(m_1...m_n, q-1) = 1 and both a and theta are bases.
    """
    theta = tuple(int(x) for x in theta)
    a = tuple(int(x) for x in a)
    m = tuple(int(x) for x in m)
    if len(m) != field.n or any(mi < 1 for mi in m):
        raise PPError("exponents must be n positive integers")
    tr = trace_coordinates(field, theta)
    powered = np.stack([field.pow(tr[:, i], mi) for i, mi in enumerate(m)], axis=1)
    F = FuncTable(field, _combine(field, a, powered))
    is_pp = is_permutation(F)
    cond = {
        "gcd_ok": math.gcd(math.prod(m), field.q - 1) == 1,
        "a_basis": B.is_basis(field, a),
        "theta_basis": B.is_basis(field, theta),
    }
    predicted = all(cond.values())
    violation = None
    if predicted != is_pp:
        violation = Report(
            claim="power-of-trace map is a PP iff gcd ok and a, theta are bases",
            formula_value=predicted,
            observed_value=is_pp,
            witnesses=[{"theta": list(theta), "a": list(a), "m": list(m)}],
            ok=False,
        )
    return FamilyResult(F, is_pp, cond, violation)


# ---------------------------------------------------------------------------
# extending balanced partial coordinates to a permutation
# ---------------------------------------------------------------------------

def _partial_labels(field: Field, g) -> tuple[np.ndarray, int]:
    g = [gi.values if isinstance(gi, FuncTable) else np.asarray(gi, dtype=np.int64) for gi in g]
    t = len(g)
    if not 1 <= t <= field.n:
        raise PPError(f"need between 1 and {field.n} coordinate maps")
    for gi in g:
        if gi.shape != (field.order,) or gi.min() < 0 or gi.max() >= field.q:
            raise PPError("coordinate maps must be F_q-valued tables on F_{q^n}")
    labels = np.stack(g, axis=1) @ (field.q ** np.arange(t, dtype=np.int64))
    return labels, t


def _fibers(field: Field, g) -> tuple[list[np.ndarray], np.ndarray, int]:
    labels, t = _partial_labels(field, g)
    k = field.q ** (field.n - t)
    if not counts_are_k_to_1(fiber_sizes(labels, field.q**t), field.order, k):
        raise PPError(f"the joint map is not {k}-to-1")
    attained = np.unique(labels)
    fibers = [np.flatnonzero(labels == lab) for lab in attained]
    head = np.stack(
        [(attained // field.q**i) % field.q for i in range(t)], axis=1
    )
    return fibers, head, t


def _tail_vectors(field: Field, t: int) -> np.ndarray:
    """All of F_q^{n-t} in canonical order (first tail coordinate least significant)."""
    m = field.n - t
    idx = np.arange(field.q**m, dtype=np.int64)
    return np.stack([(idx // field.q**j) % field.q for j in range(m)], axis=1) if m else np.zeros((1, 0), dtype=np.int64)


def _assemble(field: Field, u: OrderedBasis, fibers, head, tails, orders) -> np.ndarray:
    coords = np.zeros((field.order, field.n), dtype=np.int64)
    t = head.shape[1]
    for fib, hd, order in zip(fibers, head, orders):
        coords[fib, :t] = hd
        coords[fib, t:] = tails[list(order)]
    return _combine(field, u.elements, coords)


def extend_to_pp(g, u: OrderedBasis) -> FuncTable:
    """A PP whose first t coordinates along u are g_1, ..., g_t.

    Inside each fiber of x -> (g_1(x), ..., g_t(x)) the tail vectors of
    F_q^{n-t} are handed out in canonical order to the fiber members in
    canonical order.
    """
    field = u.field
    fibers, head, t = _fibers(field, g)
    tails = _tail_vectors(field, t)
    orders = [range(len(tails))] * len(fibers)
    return FuncTable(field, _assemble(field, u, fibers, head, tails, orders))


def extension_count_formula(field: Field, t: int) -> int:
    return math.factorial(field.q ** (field.n - t)) ** (field.q**t)


def enumerate_extensions(g, u: OrderedBasis, limit: int = 10**6):
    """Yield every PP extension, one per choice of bijection on each fiber."""
    field = u.field
    fibers, head, t = _fibers(field, g)
    tails = _tail_vectors(field, t)
    total = math.factorial(len(tails)) ** len(fibers)
    if total > limit:
        raise PPError(f"{total} extensions exceed the enumeration limit {limit}")
    perms = list(itertools.permutations(range(len(tails))))
    for choice in itertools.product(perms, repeat=len(fibers)):
        yield FuncTable(field, _assemble(field, u, fibers, head, tails, choice))


def sample_extensions(g, u: OrderedBasis, count: int, rng: np.random.Generator):
    field = u.field
    fibers, head, t = _fibers(field, g)
    tails = _tail_vectors(field, t)
    for _ in range(count):
        orders = [rng.permutation(len(tails)) for _ in fibers]
        yield FuncTable(field, _assemble(field, u, fibers, head, tails, orders))


def count_extensions_bruteforce(g, u: OrderedBasis, limit: int = 2**20) -> int:
    """Count tail maps F_{q^n} -> F_q^{n-t} that complete g to a PP.

    Independent of the fiber bookkeeping: every tail table is tried.
    """
    field = u.field
    labels, t = _partial_labels(field, g)
    m = field.n - t
    n_tail = field.q**m
    total = n_tail**field.order
    if total > limit:
        raise PPError(f"{total} tail maps exceed the brute-force limit {limit}")
    head = np.stack([(labels // field.q**i) % field.q for i in range(t)], axis=1)
    count = 0
    chunk = 1 << 14
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        tail_lab = (idx[:, None] // n_tail ** np.arange(field.order, dtype=np.int64)) % n_tail
        tail = np.stack([(tail_lab // field.q**j) % field.q for j in range(m)], axis=-1)
        coords = np.concatenate(
            [np.broadcast_to(head, (len(idx),) + head.shape), tail], axis=-1
        )
        rows = _combine(field, u.elements, coords)
        count += int(rows_are_permutations(rows).sum())
    return count


# ---------------------------------------------------------------------------
# exhaustive scans and censuses
# ---------------------------------------------------------------------------

def all_tuples(field: Field) -> np.ndarray:
    """Every n-tuple of field elements, shape (q^{n*n}, n)."""
    return np.array(list(itertools.product(range(field.order), repeat=field.n)), dtype=np.int64)


def all_small_maps(q: int, permutations_only: bool = False) -> list[np.ndarray]:
    if permutations_only:
        return [np.array(p, dtype=np.int64) for p in itertools.permutations(range(q))]
    return [np.array(p, dtype=np.int64) for p in itertools.product(range(q), repeat=q)]


def theorem12_scan(f: FuncTable, u: OrderedBasis, v: OrderedBasis,
                   a_tuples=None, h_maps=None, max_witnesses: int = 5) -> Report:
    """Check "F is a PP iff a basis and all h_i PPs" over a whole parameter space.

    Defaults to every a in F_{q^n}^n and every h in (maps of F_q)^n.
    """
    _require_pp(f)
    field = f.field
    a_tuples = all_tuples(field) if a_tuples is None else np.asarray(a_tuples, dtype=np.int64)
    h_maps = all_small_maps(field.q) if h_maps is None else [np.asarray(h) for h in h_maps]
    a_basis = B.basis_flags(field, a_tuples)
    coords = decompose(f, u, v).matrix()
    checked = 0
    witnesses = []
    bad = 0
    for h in itertools.product(h_maps, repeat=field.n):
        h_pp = all(np.unique(hi).size == field.q for hi in h)
        inner = np.stack([hi[coords[:, i]] for i, hi in enumerate(h)], axis=1)
        rows = _combine(field, a_tuples[:, None, :], inner[None, :, :])
        is_pp = rows_are_permutations(rows)
        mismatch = is_pp != (a_basis & h_pp)
        checked += len(a_tuples)
        if mismatch.any():
            bad += int(mismatch.sum())
            for k in np.flatnonzero(mismatch)[: max(0, max_witnesses - len(witnesses))]:
                witnesses.append({"a": a_tuples[k].tolist(), "h": [hi.tolist() for hi in h]})
    return Report(
        claim="F = sum a_i h_i(f_i) is a PP iff a is a basis and all h_i are PPs",
        formula_value=0,
        observed_value=bad,
        witnesses=witnesses,
        ok=bad == 0,
        extra={"instances_checked": checked},
    )


def composition_count_formula(field: Field) -> int:
    return B.count_bases(field) * math.factorial(field.q) ** field.n


def theorem12_census(f: FuncTable, u: OrderedBasis, v: OrderedBasis, max_order: int = 16) -> Report:
    """Count constructions (a basis, h_i PPs) and the distinct tables they give.

    Both numbers are reported next to (q^n-1)...(q^n-q^{n-1}) (q!)^n; the
    count is informational, so ``ok`` only reflects that every construction
    was a PP.
    """
    field = f.field
    if field.order > max_order:
        raise PPError(f"census is limited to fields of size <= {max_order}")
    _require_pp(f)
    coords = decompose(f, u, v).matrix()
    a_tuples = np.array(list(B.all_bases(field)), dtype=np.int64)
    perms = all_small_maps(field.q, permutations_only=True)
    tables = set()
    constructions = 0
    all_pp = True
    for h in itertools.product(perms, repeat=field.n):
        inner = np.stack([hi[coords[:, i]] for i, hi in enumerate(h)], axis=1)
        rows = _combine(field, a_tuples[:, None, :], inner[None, :, :])
        all_pp &= bool(rows_are_permutations(rows).all())
        constructions += len(rows)
        tables.update(r.tobytes() for r in rows)
    formula = composition_count_formula(field)
    distinct = len(tables)
    note = "" if distinct == formula else (
        f"{formula} parameter tuples give only {distinct} distinct maps"
    )
    return Report(
        claim="number of PPs from the composition construction",
        formula_value=formula,
        observed_value={"constructions": constructions, "distinct_tables": distinct},
        ok=all_pp and constructions == formula,
        note=note,
        extra={"all_pp": all_pp},
    )


def linear_pp_census(field: Field) -> Report:
    """Distinct PP tables L = sum Tr(theta_i x) omega_i over all basis pairs.

    Cross-checked against a direct count of q-polynomials sum a_i x^{q^i}
    that permute the field.
    """
    bases = np.array(list(B.all_bases(field)), dtype=np.int64)
    tables = set()
    for theta in bases:
        tr = trace_coordinates(field, theta)
        rows = _combine(field, bases[:, None, :], tr[None, :, :])
        if not rows_are_permutations(rows).all():
            raise PPError("a basis pair produced a non-permutation")
        tables.update(r.tobytes() for r in rows)
    oracle = count_linearized_pps(field)
    formula = B.count_bases(field)
    observed = len(tables)
    return Report(
        claim="number of linear PPs of F_{q^n}",
        formula_value=formula,
        observed_value=observed,
        ok=observed == formula == oracle,
        extra={"q_polynomial_count": oracle},
    )


def count_linearized_pps(field: Field) -> int:
    """Count coefficient vectors (a_0..a_{n-1}) with sum a_i x^{q^i} bijective."""
    x = field.elements()
    powers = np.stack([field.pow(x, field.q**i) for i in range(field.n)], axis=1)
    coeffs = all_tuples(field)
    rows = _combine(field, coeffs[:, None, :], powers[None, :, :])
    return int(rows_are_permutations(rows).sum())


def recombination_scan(f: FuncTable, u: OrderedBasis, v: OrderedBasis) -> Report:
    """Recombination is a PP iff b is a basis, over every b in F_{q^n}^n."""
    _require_pp(f)
    field = f.field
    b_tuples = all_tuples(field)
    coords = decompose(f, u, v).matrix()
    rows = _combine(field, b_tuples[:, None, :], coords[None, :, :])
    is_pp = rows_are_permutations(rows)
    flags = B.basis_flags(field, b_tuples)
    bad = np.flatnonzero(is_pp != flags)
    return Report(
        claim="sum b_i Tr(v_i f(x)) is a PP iff b is a basis",
        formula_value=0,
        observed_value=int(bad.size),
        witnesses=[{"b": b_tuples[k].tolist()} for k in bad[:5]],
        ok=bad.size == 0,
        extra={"instances_checked": int(len(b_tuples))},
    )
