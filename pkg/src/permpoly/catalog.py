"""Named families of explicit permutation polynomials over F_{q^2}.

Each family pairs a closed-form polynomial with its predicted PP condition.
For the odd families the polynomial is (1/2)((x + x^q)^m + (x - x^q)^m)
expanded; for the characteristic 2 family it comes from
Tr(x)^m + w Tr(w x)^m with w^2 + w + 1 = 0.  ``reproduce`` evaluates the
polynomial on the whole field and, where it applies, also rebuilds the map
from its power-of-trace form to confirm the expansion.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import bases as B
from .funcspace import FuncTable, PolyRep, eval_poly, image_size, is_permutation
from .gf_arith import Field, FieldError, make_field
from .pp_struct import monomial_family


class CatalogError(FieldError):
    pass


def _prime_power(q: int) -> tuple[int, int]:
    for p in range(2, q + 1):
        if q % p == 0:
            e, r = 0, q
            while r % p == 0:
                r //= p
                e += 1
            if r != 1:
                raise CatalogError(f"{q} is not a prime power")
            return p, e
    raise CatalogError(f"{q} is not a prime power")


def _const(field: Field, c: int) -> int:
    """Integer constant as an element of the prime field."""
    return c % field.p


def _poly(field: Field, terms) -> PolyRep:
    return PolyRep(field, [(_const(field, c), e) for c, e in terms])


def sqrt_minus_one(field: Field) -> int:
    minus_one = field.neg(1)
    x = field.elements()
    hits = np.flatnonzero(field.mul(x, x) == minus_one)
    if hits.size == 0:
        raise CatalogError("-1 is not a square")
    return int(hits[0])


def cube_roots_of_unity(field: Field) -> list[int]:
    """Roots of x^2 + x + 1, smallest index first."""
    x = field.elements()
    vals = field.add(field.add(field.mul(x, x), x), 1)
    return [int(r) for r in np.flatnonzero(vals == 0)]


@dataclass
class Reproduction:
    example: str
    params: dict
    field: Field
    polynomials: list[PolyRep]
    is_pp: bool
    predicted: bool
    image_sizes: list[int]
    checks: dict = dc_field(default_factory=dict)

    @property
    def matches(self) -> bool:
        return self.is_pp == self.predicted

    def to_dict(self) -> dict:
        return {
            "example": self.example,
            "params": self.params,
            "field": self.field.to_dict(),
            "order": self.field.order,
            "polynomials": [p.to_dict() for p in self.polynomials],
            "is_pp": self.is_pp,
            "predicted_pp": self.predicted,
            "matches_prediction": self.matches,
            "image_sizes": self.image_sizes,
            "checks": self.checks,
        }


def _binomial_half_terms(field: Field, m: int):
    """(1/2)((x+y)^m + (x-y)^m) with y = x^q, as (integer coeff, exponent)."""
    q = field.q
    return [(math.comb(m, j), (m - j) + j * q) for j in range(0, m + 1, 2)]


def _odd_family_checks(field: Field, m: int, table: np.ndarray) -> dict:
    """Rebuild the map through the power-of-trace construction."""
    if field.q % 4 != 3:
        return {}
    i = sqrt_minus_one(field)
    half = field.inv(2)
    x = field.elements()
    y = field.pow(x, field.q)
    plus = field.pow(field.add(x, y), m)
    minus = field.pow(field.sub(x, y), m)
    trace_form = field.mul(half, field.add(plus, minus))
    # Tr(i x) = i (x - x^q), so the second coefficient is (1/2) i^{-m}
    a = (half, field.mul(half, field.pow(i, -m)))
    fam = monomial_family(field, (1, i), a, (m, m))
    # the identity Tr(x)^m - i Tr(ix)^m = (x+x^q)^m + (x-x^q)^m as printed
    tr1 = field.pow(field.trace(x), m)
    tr2 = field.pow(field.trace(field.mul(i, x)), m)
    printed_lhs = field.sub(tr1, field.mul(i, tr2))
    return {
        "expansion_matches_trace_form": bool(np.array_equal(trace_form, table)),
        "power_of_trace_instance_matches": bool(np.array_equal(fam.F.values, table)),
        "power_of_trace_conditions": fam.conditions,
        "printed_sign_identity_holds": bool(np.array_equal(printed_lhs, field.add(plus, minus))),
    }


def _odd_family(name: str, m: int, q: int) -> Reproduction:
    p, e = _prime_power(q)
    if p == 2:
        raise CatalogError("this family needs odd q")
    field = make_field(p, e, 2)
    poly = _poly(field, _binomial_half_terms(field, m))
    table = eval_poly(poly).values
    t = FuncTable(field, table)
    predicted = q % 4 == 3 and math.gcd(m, q - 1) == 1
    return Reproduction(name, {"q": q}, field, [poly], is_pp(t), predicted,
                        [image_size(t)], _odd_family_checks(field, m, table))


def is_pp(t: FuncTable) -> bool:
    return is_permutation(t)


def cubic(q: int) -> Reproduction:
    """x^3 + 3x^{1+2q} over F_{q^2}."""
    return _odd_family("cubic", 3, q)


def quintic(q: int) -> Reproduction:
    """x^5 + 10x^{3+2q} + 5x^{1+4q} over F_{q^2}."""
    return _odd_family("quintic", 5, q)


def undecic(q: int) -> Reproduction:
    """x^11 + 55x^{9+2q} + 330x^{7+4q} + 462x^{5+6q} + 165x^{3+8q} + 11x^{1+10q}."""
    return _odd_family("undecic", 11, q)


def x11(m: int) -> Reproduction:
    """x^11 + x^{9+2*3^m} - x^{1+10*3^m} over F_{3^{2m}}; PP iff gcd(m, 10) = 1."""
    if m < 1:
        raise CatalogError("m must be positive")
    field = make_field(3, m, 2)
    q = field.q
    poly = _poly(field, [(1, 11), (1, 9 + 2 * q), (-1, 1 + 10 * q)])
    table = eval_poly(poly).values
    t = FuncTable(field, table)
    full = _poly(field, _binomial_half_terms(field, 11))
    checks = {"matches_reduced_undecic": bool(np.array_equal(eval_poly(full).values, table))}
    checks.update(_odd_family_checks(field, 11, table))
    return Reproduction("x11", {"m": m}, field, [poly], is_pp(t), math.gcd(m, 10) == 1,
                        [image_size(t)], checks)


def pr2(q: int, r: int) -> Reproduction:
    """x^{p^r+2} + x^{p^r+2q} + 2x^{1+(p^r+1)q}, with m = p^r + 2 < q.

    Predicted a PP when q = 3 (mod 4) and gcd(p^r + 2, q - 1) = 1.
    """
    p, e = _prime_power(q)
    if p == 2:
        raise CatalogError("this family needs odd q")
    m = p**r + 2
    if m >= q:
        raise CatalogError(f"need p^r + 2 < q, got {m} >= {q}")
    field = make_field(p, e, 2)
    pr = p**r
    poly = _poly(field, [(1, pr + 2), (1, pr + 2 * q), (2, 1 + (pr + 1) * q)])
    table = eval_poly(poly).values
    t = FuncTable(field, table)
    predicted = q % 4 == 3 and math.gcd(m, q - 1) == 1
    return Reproduction("pr2", {"q": q, "r": r}, field, [poly], is_pp(t), predicted,
                        [image_size(t)], _odd_family_checks(field, m, table))


def char2(r: int, t: int) -> Reproduction:
    """x^{2^r+1} + x^{q(2^r+1)} + w^2 x^{2^r+q} over F_{q^2}, q = 2^t.

    Predicted a PP for odd r and odd t.  Both roots w of x^2 + x + 1 are
    tried; the verdict is the conjunction.
    """
    if r < 1 or t < 1:
        raise CatalogError("r and t must be positive")
    field = make_field(2, t, 2)
    q = field.q
    m = 2**r + 1
    polys, sizes, ok = [], [], True
    checks: dict = {"roots": []}
    x = field.elements()
    for w in cube_roots_of_unity(field):
        w2 = field.mul(w, w)
        poly = PolyRep(field, [(1, m), (1, q * m), (w2, 2**r + q)])
        table = eval_poly(poly).values
        tt = FuncTable(field, table)
        polys.append(poly)
        sizes.append(image_size(tt))
        ok &= is_permutation(tt)
        # Tr(x)^m + w Tr(w x)^m equals w^2 times the polynomial
        trace_form = field.add(field.pow(field.trace(x), m),
                               field.mul(w, field.pow(field.trace(field.mul(w, x)), m)))
        checks["roots"].append({
            "w": w,
            "trace_form_matches": bool(np.array_equal(trace_form, field.mul(w2, table))),
            "basis_1_w": B.is_basis(field, (1, w)),
        })
    predicted = r % 2 == 1 and t % 2 == 1
    return Reproduction("char2", {"r": r, "t": t}, field, polys, ok, predicted, sizes, checks)


CATALOG = {
    "cubic": (cubic, ("q",)),
    "quintic": (quintic, ("q",)),
    "undecic": (undecic, ("q",)),
    "x11": (x11, ("m",)),
    "pr2": (pr2, ("q", "r")),
    "char2": (char2, ("r", "t")),
}


def reproduce(example: str, **params) -> Reproduction:
    try:
        fn, names = CATALOG[example]
    except KeyError:
        raise CatalogError(f"unknown example {example!r}; choose from {sorted(CATALOG)}") from None
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise CatalogError(f"example {example!r} needs parameters {missing}")
    return fn(**{n: int(params[n]) for n in names})
