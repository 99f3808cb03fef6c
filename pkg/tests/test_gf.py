import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bgawc.errors import FieldMismatch, GuardExceeded
from bgawc.gf import (CONWAY_POLYNOMIALS, FqField, GaloisSubgroup, FqElement,
                      _least_irreducible, _pf_irreducible, frobenius,
                      galois_subgroups, get_field, multiplicative_order,
                      splitting_field)


def field_order_of(el, field):
    if el.idx == 0:
        return None
    o = 1
    acc = el
    while acc.idx != 1:
        acc = acc * el
        o += 1
    return o


@pytest.mark.parametrize("p,m", sorted(CONWAY_POLYNOMIALS))
def test_table_polynomials_are_irreducible_and_primitive(p, m):
    poly = list(CONWAY_POLYNOMIALS[(p, m)])
    assert poly[-1] == 1 and len(poly) == m + 1
    assert _pf_irreducible(poly, p)
    F = FqField(p, m)
    x = F.x if m > 1 else F.element(poly[0] and (p - poly[0]))
    # x (or the root of the linear polynomial) generates the unit group
    assert field_order_of(x, F) == F.q - 1


def test_fallback_polynomial_is_irreducible():
    f = _least_irreducible(2, 9)
    assert len(f) == 10 and _pf_irreducible(list(f), 2)


def test_f4_multiplication_table():
    F4 = get_field(2, 2)
    x = F4.x
    assert (x * x).coeffs() == (1, 1)  # x^2 = x + 1
    assert (x + F4.zero) == x


def test_f8_cube():
    F8 = get_field(2, 3)
    x = F8.x
    assert (x * x * x).coeffs() == (1, 1, 0)  # x^3 = x + 1


@pytest.mark.parametrize("p,m", [(2, 3), (3, 2), (5, 2), (7, 2)])
def test_field_axioms_random(p, m):
    F = get_field(p, m)
    rng = np.random.default_rng(7)
    els = [FqElement(F, int(i)) for i in rng.integers(0, F.q, 40)]
    for a, b in zip(els[::2], els[1::2]):
        assert a + b == b + a
        assert a * b == b * a
        assert a * (a + b) == a * a + a * b
        if b.idx:
            assert (a / b) * b == a
    for a in els:
        assert a + (-a) == F.zero
        if a.idx:
            assert a * a.inverse() == F.one


@given(st.integers(0, 80), st.integers(0, 80), st.integers(0, 80))
@settings(max_examples=200, deadline=None)
def test_f81_ring_axioms(ai, bi, ci):
    F = get_field(3, 4)
    a, b, c = FqElement(F, ai), FqElement(F, bi), FqElement(F, ci)
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        get_field(2, 2).one + get_field(3, 1).one


def test_division_by_zero():
    F = get_field(5, 1)
    with pytest.raises(ZeroDivisionError):
        F.one / F.zero


@pytest.mark.parametrize("p,t,d", [(2, 7, 3), (3, 2, 1), (2, 5, 4), (2, 15, 4),
                                   (3, 20, 4), (5, 12, 2), (2, 1, 1)])
def test_splitting_field_degrees(p, t, d):
    F = splitting_field(p, t)
    assert F.degree == d


def test_splitting_field_distinguished_root():
    for p, t in [(2, 7), (2, 15), (3, 20), (5, 12), (3, 8)]:
        F = splitting_field(p, t)
        xi = FqElement(F, F.t_root_index)
        assert (xi ** t) == F.one
        for s in range(1, t):
            if t % s == 0:
                assert xi ** s != F.one


def test_frobenius_props():
    F = get_field(2, 3)
    x = F.x
    assert frobenius(x, 1) == x * x
    assert frobenius(x, 3) == x
    for el in F.elements():
        assert frobenius(el, F.degree) == el
    # additive and multiplicative homomorphism
    rng = np.random.default_rng(3)
    F81 = get_field(3, 4)
    for _ in range(1000):
        a = FqElement(F81, int(rng.integers(0, 81)))
        b = FqElement(F81, int(rng.integers(0, 81)))
        assert frobenius(a + b) == frobenius(a) + frobenius(b)
        assert frobenius(a * b) == frobenius(a) * frobenius(b)


def test_prime_field_fixed():
    F = get_field(7, 2)
    for c in range(7):
        assert frobenius(F.element(c), 1) == F.element(c)


def test_galois_subgroups():
    assert [g.generator_exponent for g in galois_subgroups(1, 1)] == [1]
    assert [g.generator_exponent for g in galois_subgroups(6, 1)] == [1, 2, 3, 6]
    assert [g.generator_exponent for g in galois_subgroups(3, 3)] == [3]
    g = GaloisSubgroup(6, 2)
    assert g.order == 3 and not g.is_trivial
    assert GaloisSubgroup(4, 4).is_trivial


def test_multiplicative_order():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 20) == 4
    assert multiplicative_order(5, 1) == 1


def test_field_size_guard():
    with pytest.raises(GuardExceeded):
        FqField(2, 30)
