import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from permpoly.gf_arith import (Field, FieldError, field_from_dict, is_prime, make_field,
                               prime_factors)
from oracles import SlowField, poly_has_root_or_factor

TOWERS = [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3), (3, 2, 1), (2, 1, 4), (3, 1, 3), (5, 1, 2)]


@pytest.mark.parametrize("pen", TOWERS)
def test_tables_match_schoolbook_arithmetic(pen):
    f = make_field(*pen)
    slow = SlowField(f)
    x = f.elements()
    mul = f.mul(x[:, None], x[None, :])
    add = f.add(x[:, None], x[None, :])
    for a in range(f.order):
        for b in range(f.order):
            assert mul[a, b] == slow.mul(a, b)
            assert add[a, b] == slow.add(a, b)


@pytest.mark.parametrize("pen", TOWERS)
def test_trace_matches_schoolbook(pen):
    f = make_field(*pen)
    slow = SlowField(f)
    assert [f.trace(i) for i in range(f.order)] == [slow.trace(i) for i in range(f.order)]


def test_spec_moduli():
    assert make_field(2, 1, 2).modulus_qn == (1, 1, 1)
    assert make_field(3, 1, 2).modulus_qn == (1, 0, 1)
    f = make_field(2, 2, 2)
    assert f.modulus_q == (1, 1, 1)
    # x^2 + x + w, with w the class of x in F_4
    assert f.modulus_qn == (2, 1, 1)


@pytest.mark.parametrize("p,d", [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (2, 6)])
def test_modulus_is_smallest_irreducible(p, d):
    f = make_field(p, 1, d)
    mod = list(f.modulus_qn)
    assert mod[-1] == 1
    assert not poly_has_root_or_factor(mod, p)
    # every monic candidate with a smaller index is reducible
    idx = sum(c * p**i for i, c in enumerate(mod[:-1]))
    for j in range(idx):
        low = [(j // p**i) % p for i in range(d)]
        assert poly_has_root_or_factor(low + [1], p)


def test_multiplicative_group_is_cyclic():
    for pen in TOWERS:
        f = make_field(*pen)
        g = f.primitive
        seen = {f.pow(g, k) for k in range(f.order - 1)}
        assert len(seen) == f.order - 1


field_params = st.sampled_from(TOWERS)


@settings(max_examples=300, deadline=None)
@given(field_params, st.data())
def test_field_axioms(pen, data):
    f = make_field(*pen)
    el = st.integers(0, f.order - 1)
    a, b, c = data.draw(el), data.draw(el), data.draw(el)
    assert f.add(a, b) == f.add(b, a)
    assert f.mul(a, b) == f.mul(b, a)
    assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
    assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    assert f.sub(f.add(a, b), b) == a
    if a:
        assert f.mul(a, f.inv(a)) == 1
        assert f.div(f.mul(a, b), a) == b


def test_axioms_vectorised_many_triples():
    rng = np.random.default_rng(7)
    for pen in TOWERS:
        f = make_field(*pen)
        a, b, c = rng.integers(0, f.order, size=(3, 2000))
        assert np.array_equal(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)))
        assert np.array_equal(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)))
        assert np.array_equal(f.add(f.add(a, b), c), f.add(a, f.add(b, c)))


@pytest.mark.parametrize("pen", TOWERS)
def test_frobenius_and_trace_properties(pen):
    f = make_field(*pen)
    x = f.elements()
    y = np.roll(x, 3)
    assert np.array_equal(f.frobenius(f.add(x, y)), f.add(f.frobenius(x), f.frobenius(y)))
    assert np.array_equal(f.frobenius(x, f.n), x)
    tr = f.trace(x)
    assert tr.max() < f.q
    assert np.array_equal(f.trace(f.pow(x, f.q)), tr)
    # surjective onto F_q, each value hit q^{n-1} times
    counts = np.bincount(tr, minlength=f.q)
    assert np.all(counts == f.order // f.q)
    c = f.subfield_elements()
    assert np.array_equal(f.trace(f.mul(c[:, None], x[None, :])), f.mul(c[:, None], tr[None, :]))


def test_pow_conventions():
    f = make_field(3, 1, 2)
    assert f.pow(0, 0) == 1
    assert f.pow(0, 5) == 0
    for a in range(1, f.order):
        assert f.pow(a, -1) == f.inv(a)
        assert f.pow(a, f.order - 1) == 1
        e = f.element(a)
        assert (e ** 7).index == f.pow(a, 7)


def test_element_wrapper():
    f = make_field(2, 2, 2)
    a, b = f.element(5), f.element(11)
    assert (a + b).index == f.add(5, 11)
    assert (a * b).index == f.mul(5, 11)
    assert (a / b * b).index == 5
    assert (a - a).index == 0


def test_subfield_embed_project():
    f = make_field(2, 2, 2)
    assert f.embed(3) == 3
    with pytest.raises(FieldError):
        f.embed(4)
    for x in range(f.order):
        if x < f.q:
            assert f.project(x) == x
        else:
            with pytest.raises(FieldError):
                f.project(x)


def test_index_round_trip():
    f = make_field(3, 2, 2)
    x = f.elements()
    assert np.array_equal(f.from_coords_q(f.coords_q(x)), x)
    assert np.array_equal(f.digits @ (3 ** np.arange(4)), x)


def test_bad_parameters():
    with pytest.raises(FieldError):
        make_field(4)
    with pytest.raises(FieldError):
        make_field(2, 0, 1)
    with pytest.raises(FieldError):
        make_field(2, 1, 30)


def test_serialization_round_trip():
    f = make_field(2, 2, 2)
    data = json.loads(f.to_json())
    assert field_from_dict(data) is f or field_from_dict(data) == f
    data["modulus_q"] = [1, 0, 1]
    with pytest.raises(FieldError):
        field_from_dict(data)


def test_names():
    f = make_field(2, 1, 2)
    assert f.name(0) == "0"
    assert f.name(1) == "1"
    assert f.name(f.primitive) != f.name(f.mul(f.primitive, f.primitive))


def test_prime_helpers():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_factors(360) == [2, 3, 5]
