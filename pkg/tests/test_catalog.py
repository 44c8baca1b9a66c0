import numpy as np
import pytest

from permpoly import catalog
from permpoly.funcspace import PolyRep, eval_poly
from permpoly.gf_arith import make_field
from oracles import SlowField, is_bijection


def slow_table(field, poly):
    slow = SlowField(field)
    out = []
    for x in range(field.order):
        acc = 0
        for c, e in poly.terms:
            acc = slow.add(acc, slow.mul(c, slow.pow(x, e)))
        out.append(acc)
    return out


@pytest.mark.parametrize("q,expected", [(3, True), (7, False), (11, True)])
def test_cubic(q, expected):
    r = catalog.cubic(q)
    assert r.is_pp is expected
    assert r.matches
    assert r.checks["expansion_matches_trace_form"]
    assert r.checks["power_of_trace_instance_matches"]


def test_cubic_over_f9_is_x_cubed():
    r = catalog.cubic(3)
    f = r.field
    assert eval_poly(r.polynomials[0]) == eval_poly(PolyRep(f, [(1, 3)]))


def test_cubic_table_against_slow_arithmetic():
    r = catalog.cubic(3)
    vals = slow_table(r.field, r.polynomials[0])
    assert vals == eval_poly(r.polynomials[0]).values.tolist()
    assert is_bijection(vals, 9)


def test_quintic_f9():
    r = catalog.quintic(3)
    assert r.is_pp and r.matches


@pytest.mark.parametrize("m", [1, 3])
def test_x11_family(m):
    r = catalog.x11(m)
    assert r.is_pp and r.matches
    assert r.checks["matches_reduced_undecic"]


def test_char2_r1_t3():
    r = catalog.char2(1, 3)
    assert r.field.order == 64
    assert r.is_pp and r.matches
    assert all(root["trace_form_matches"] for root in r.checks["roots"])


def test_char2_predicted_failures():
    for r, t in [(1, 2), (2, 3)]:
        res = catalog.char2(r, t)
        assert not res.is_pp and res.matches


def test_printed_sign_identity():
    # holds for m = 1 mod 4 and fails otherwise; the coefficient i^{-m}/2 always works
    assert catalog.quintic(3).checks["printed_sign_identity_holds"]
    assert not catalog.cubic(3).checks["printed_sign_identity_holds"]
    assert catalog.cubic(3).checks["power_of_trace_instance_matches"]


def test_only_if_direction_counterexamples():
    # the predicted non-PP cases that nevertheless permute
    assert catalog.cubic(5).is_pp and not catalog.cubic(5).predicted
    assert catalog.x11(2).is_pp and not catalog.x11(2).predicted


def test_pr2_family():
    r = catalog.pr2(27, 1)
    assert r.predicted and r.is_pp and r.matches
    with pytest.raises(catalog.CatalogError):
        catalog.pr2(11, 2)


def test_reproduce_dispatch_and_errors():
    assert catalog.reproduce("cubic", q=11).is_pp
    with pytest.raises(catalog.CatalogError):
        catalog.reproduce("nope", q=3)
    with pytest.raises(catalog.CatalogError):
        catalog.reproduce("cubic")
    with pytest.raises(catalog.CatalogError):
        catalog.cubic(4)
    with pytest.raises(catalog.CatalogError):
        catalog.cubic(6)


def test_sqrt_minus_one_and_cube_roots():
    f = make_field(3, 1, 2)
    i = catalog.sqrt_minus_one(f)
    assert f.mul(i, i) == f.neg(1)
    g = make_field(2, 1, 2)
    roots = catalog.cube_roots_of_unity(g)
    assert roots == [2, 3]
    with pytest.raises(catalog.CatalogError):
        catalog.sqrt_minus_one(make_field(7, 1, 1))
