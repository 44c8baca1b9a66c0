"""Permutations of the shape F(x) = G(x) + gamma * Tr(H(x)).

If x -> Tr(H(x)) is q^{n-1}-to-1, completing it with n-1 further F_q
coordinates along a basis (u_1, ..., u_{n-1}, gamma) gives a PP, and every
such completion is counted by (q^{n-1}!)^q.  When Tr(H(x)) is unbalanced
but not constant, a correction H_1 with Tr(H + H_1) balanced turns the same
recipe into PPs whose G part is neither a permutation nor F_q-linear.
"""
from __future__ import annotations

import itertools
import logging
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
    is_linearized,
    is_permutation,
    rows_are_permutations,
)
from .gf_arith import Field
from .pp_struct import enumerate_extensions, extension_count_formula, sample_extensions
from .report import Report

log = logging.getLogger(__name__)

EXHAUSTIVE_MAP_LIMIT = 2**20
EXHAUSTIVE_ASSIGNMENT_LIMIT = 500_000


class TraceShiftError(FuncError):
    pass


@dataclass
class TraceShiftInstance:
    G: FuncTable
    gamma: int
    H: FuncTable
    F: FuncTable
    certificate: dict
    branch: str = ""
    degenerate: bool = False

    def to_dict(self) -> dict:
        out = {
            "G": self.G.to_dict(),
            "gamma": self.gamma,
            "H": self.H.to_dict(),
            "F": self.F.to_dict(),
            "certificate": dict(self.certificate),
        }
        if self.branch:
            out["branch"] = self.branch
        return out


@dataclass
class BalancedPair:
    H: FuncTable
    H1: FuncTable
    T: FuncTable
    branch: str
    discrepancies: int = 0


def trace_of(H: FuncTable) -> FuncTable:
    return FuncTable(H.field, H.field.trace(H.values), "q")


def is_balanced_trace(H: FuncTable) -> bool:
    field = H.field
    counts = fiber_sizes(field.trace(H.values), field.q)
    return counts_are_k_to_1(counts, field.order, field.q ** (field.n - 1))


def build_shape(G: FuncTable, gamma: int, H: FuncTable) -> TraceShiftInstance:
    if G.field != H.field:
        raise TraceShiftError("G and H live over different fields")
    if G.codomain != "qn" or H.codomain != "qn":
        raise TraceShiftError("G and H must map F_{q^n} to itself")
    field = G.field
    gamma = int(gamma)
    F = FuncTable(field, field.add(G.values, field.mul(gamma, field.trace(H.values))))
    cert = {
        "F_is_pp": is_permutation(F),
        "G_is_pp": is_permutation(G),
        "G_is_linearized": is_linearized(G),
    }
    return TraceShiftInstance(G, gamma, H, F, cert, degenerate=gamma == 0)


def _shape_basis(field: Field, gamma: int, u: OrderedBasis | None) -> OrderedBasis:
    if gamma == 0:
        raise TraceShiftError("gamma must be nonzero")
    if u is None:
        return B.complete_basis(field, gamma)
    if u.field != field or u[field.n - 1] != gamma:
        raise TraceShiftError("the basis must end with gamma")
    return B.make_basis(field, u.elements)


def count_shape_family(H: FuncTable, gamma: int, u: OrderedBasis | None = None,
                       mode: str = "auto") -> Report:
    """Count PPs u_1 f_1 + ... + u_{n-1} f_{n-1} + gamma Tr(H) over all f_i.

    ``mode="maps"`` tries every tuple of maps f_i: F_{q^n} -> F_q (the
    brute-force oracle); ``mode="fibers"`` enumerates bijections on the
    fibers of Tr(H) and checks each result.  ``auto`` picks maps when the
    search space is at most 2^20.
    """
    field = H.field
    if not is_balanced_trace(H):
        raise TraceShiftError("Tr(H(x)) is not q^(n-1)-to-1")
    basis = _shape_basis(field, gamma, u)
    formula = extension_count_formula(field, 1)
    n_maps = field.q ** ((field.n - 1) * field.order)
    if mode == "auto":
        mode = "maps" if n_maps <= EXHAUSTIVE_MAP_LIMIT else "fibers"
    T = field.trace(H.values)
    if mode == "maps":
        if n_maps > EXHAUSTIVE_MAP_LIMIT:
            raise TraceShiftError("field too large for the exhaustive map search")
        observed = _count_by_maps(field, basis, T)
    elif mode == "fibers":
        if formula > EXHAUSTIVE_ASSIGNMENT_LIMIT:
            raise TraceShiftError("field too large for fiber enumeration")
        reordered = OrderedBasis(field, (gamma,) + basis.elements[:-1], verified=True)
        tables = set()
        for f in enumerate_extensions([FuncTable(field, T, "q")], reordered,
                                      limit=EXHAUSTIVE_ASSIGNMENT_LIMIT):
            if not is_permutation(f):
                raise TraceShiftError("fiber assignment produced a non-permutation")
            tables.add(f.values.tobytes())
        observed = len(tables)
    else:
        raise TraceShiftError(f"unknown mode {mode!r}")
    return Report(
        claim="number of PPs u_1 f_1 + ... + u_{n-1} f_{n-1} + gamma Tr(H)",
        formula_value=formula,
        observed_value=observed,
        ok=formula == observed,
        extra={"mode": mode},
    )


def _count_by_maps(field: Field, basis: OrderedBasis, T: np.ndarray) -> int:
    m = field.n - 1
    total = field.q ** (m * field.order)
    width = m * field.order
    last = field.mul(basis[field.n - 1], T)
    count = 0
    chunk = 1 << 14
    weights = field.q ** np.arange(width, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = (idx[:, None] // weights) % field.q
        maps = digits.reshape(len(idx), m, field.order)
        acc = np.broadcast_to(last, (len(idx), field.order))
        for i in range(m):
            acc = field.add(acc, field.mul(basis[i], maps[:, i, :]))
        count += int(rows_are_permutations(acc).sum())
    return count


def _smallest_preimages(field: Field) -> np.ndarray:
    """w(a): the canonically smallest element of trace a, for each a in F_q."""
    tr = field.trace_table
    w = np.full(field.q, -1, dtype=np.int64)
    for x in range(field.order - 1, -1, -1):
        w[tr[x]] = x
    return w


def balance_trace(H: FuncTable) -> BalancedPair:
    """Find H_1 with x -> Tr(H(x) + H_1(x)) exactly q^{n-1}-to-1.

    The target is T_0 = Tr.  Off a retained set, H_1(x) = w(Tr x) - H(x),
    which forces Tr(H + H_1) = Tr(x).  The retained set is the first q^{n-1}
    elements of the smallest overfull fiber M(a) of Tr(H), together with up
    to q^{n-1} elements of the smallest other nonempty fiber M(b); there
    H_1 = w(0).  If that glued map fails the balance check, the correction is
    applied everywhere instead.  ``branch`` records which version was
    returned.
    """
    field = H.field
    T_H = field.trace(H.values)
    if np.unique(T_H).size == 1:
        raise TraceShiftError("Tr(H(x)) is constant")
    k = field.q ** (field.n - 1)
    if is_balanced_trace(H):
        zero = FuncTable(field, np.zeros(field.order, dtype=np.int64))
        return BalancedPair(H, zero, FuncTable(field, T_H, "q"), "already-balanced")
    x = field.elements()
    w = _smallest_preimages(field)
    target = field.trace(x)
    direct = field.sub(w[target], H.values)

    counts = fiber_sizes(T_H, field.q)
    a = int(np.flatnonzero(counts > k)[0])
    b = int(next(c for c in range(field.q) if c != a and counts[c] > 0))
    M_a = np.flatnonzero(T_H == a)
    M_b = np.flatnonzero(T_H == b)
    retained = np.concatenate([M_a[:k], M_b[:k]])
    glued = direct.copy()
    glued[retained] = w[0]

    T_glued = field.trace(field.add(H.values, glued))
    discrepancies = int(np.count_nonzero(T_glued != target))
    if counts_are_k_to_1(fiber_sizes(T_glued, field.q), field.order, k):
        H1, T, branch = glued, T_glued, "proof-gluing"
    else:
        log.debug("glued correction unbalanced (%d points off target); using direct", discrepancies)
        H1 = direct
        T = field.trace(field.add(H.values, H1))
        branch = "direct-correction"
    if not counts_are_k_to_1(fiber_sizes(T, field.q), field.order, k):
        raise TraceShiftError("balancing failed")
    return BalancedPair(H, FuncTable(field, H1), FuncTable(field, T, "q"), branch, discrepancies)


def lower_bound(field: Field) -> int:
    """(q^{n-1}!)^q - (q^n - q)...(q^n - q^{n-1})."""
    linear = 1
    for i in range(1, field.n):
        linear *= field.order - field.q**i
    return extension_count_formula(field, 1) - linear


def certify(inst: TraceShiftInstance) -> bool:
    """Recompute every certificate field from scratch."""
    field = inst.F.field
    F = field.add(inst.G.values, field.mul(inst.gamma, field.trace(inst.H.values)))
    return (
        np.array_equal(F, inst.F.values)
        and is_permutation(inst.F)
        and not is_permutation(inst.G)
        and not is_linearized(inst.G)
    )


@dataclass
class OpenProblemResult:
    instances: list[TraceShiftInstance]
    balanced: BalancedPair
    exhaustive: bool
    candidates: int
    lower_bound: int

    @property
    def meets_bound(self) -> bool:
        return len(self.instances) >= self.lower_bound

    def report(self) -> Report:
        return Report(
            claim="PPs G + gamma Tr(H) with G neither a PP nor linearized",
            formula_value=self.lower_bound,
            observed_value=len(self.instances),
            ok=self.meets_bound if self.exhaustive else bool(self.instances),
            extra={
                "mode": "exhaustive" if self.exhaustive else "sampled",
                "candidates": self.candidates,
                "branch": self.balanced.branch,
            },
        )


def solve_open_problem(H: FuncTable, gamma: int, u: OrderedBasis | None = None,
                       samples: int = 200, seed: int = 0) -> OpenProblemResult:
    """PPs F = G + gamma Tr(H) with certified G (not a PP, not linearized).

    G = u_1 f_1 + ... + u_{n-1} f_{n-1} + gamma Tr(H_1), where H_1 comes
    from :func:`balance_trace` and (f_1, ..., f_{n-1}) runs over the
    completions of the balanced trace.  All completions are tried when there
    are at most 500000 of them; otherwise ``samples`` seeded random ones.
    """
    field = H.field
    pair = balance_trace(H)
    basis = _shape_basis(field, int(gamma), u)
    reordered = OrderedBasis(field, (int(gamma),) + basis.elements[:-1], verified=True)
    total = extension_count_formula(field, 1)
    exhaustive = total <= EXHAUSTIVE_ASSIGNMENT_LIMIT
    if exhaustive:
        candidates = enumerate_extensions([pair.T], reordered, limit=EXHAUSTIVE_ASSIGNMENT_LIMIT)
    else:
        candidates = sample_extensions([pair.T], reordered, samples, np.random.default_rng(seed))
    shift_h = field.mul(int(gamma), field.trace(H.values))
    out = []
    seen = set()
    n_candidates = 0
    for F in candidates:
        n_candidates += 1
        key = F.values.tobytes()
        if key in seen:
            continue
        seen.add(key)
        G = FuncTable(field, field.sub(F.values, shift_h))
        inst = build_shape(G, gamma, H)
        inst.branch = pair.branch
        c = inst.certificate
        if c["F_is_pp"] and not c["G_is_pp"] and not c["G_is_linearized"]:
            out.append(inst)
    return OpenProblemResult(out, pair, exhaustive, n_candidates, lower_bound(field))


def all_maps(field: Field, limit: int = 2**16):
    """Every map F_{q^n} -> F_{q^n} (tiny fields only)."""
    total = field.order**field.order
    if total > limit:
        raise TraceShiftError(f"{total} maps exceed the limit {limit}")
    for vals in itertools.product(range(field.order), repeat=field.order):
        yield FuncTable(field, vals)

