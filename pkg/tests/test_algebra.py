from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattangle.algebra import (
    Cyclo,
    MPoly,
    OrderCapExceeded,
    RootOfUnity,
    as_root_of_unity,
    cyclotomic_poly,
    embed,
    euler_phi,
    factorize,
    min_poly,
    nullspace,
    order_cap,
    parse_poly,
    q_rank,
    rational_ratio,
    rational_sqrt,
    ru_make,
    set_order_cap,
    solve_rational,
    squarefree_part,
)

ORDERS = (1, 3, 4, 5, 7, 8, 12, 15)


@st.composite
def cyclos(draw, order=None):
    n = order or draw(st.sampled_from(ORDERS))
    coords = draw(st.lists(st.integers(-4, 4), min_size=euler_phi(n), max_size=euler_phi(n)))
    return Cyclo(n, coords)


@st.composite
def same_order(draw, count=3):
    n = draw(st.sampled_from(ORDERS))
    return [draw(cyclos(n)) for _ in range(count)]


@given(same_order())
def test_ring_axioms(xs):
    x, y, z = xs
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x


@given(cyclos())
def test_inverse(x):
    if not x.is_zero():
        assert (x * x.inv()) == Cyclo.one()


@given(same_order(2))
def test_conj_is_a_ring_automorphism(xs):
    x, y = xs
    assert (x * y).conj() == x.conj() * y.conj()
    assert x.conj().conj() == x


@given(same_order(2), st.sampled_from((1, 5, 7, 11)))
def test_galois_is_multiplicative(xs, k):
    x, y = (v.lift(12 * v.order // math.gcd(12, v.order)) for v in xs)
    n = x.order
    if math.gcd(k, n) == 1:
        assert (x * y).galois(k) == x.galois(k) * y.galois(k)


@settings(max_examples=40)
@given(same_order(2))
def test_embedding_respects_products(xs):
    x, y = xs
    ex, ey, exy = embed(x), embed(y), embed(x * y)
    assert abs(complex(ex) * complex(ey) - complex(exy)) < 1e-9


@given(st.integers(1, 60), st.integers(0, 59), st.integers(1, 60), st.integers(0, 59))
def test_root_of_unity_product_matches_cyclo(n, k, m, j):
    r, s = ru_make(k, n), ru_make(j, m)
    assert (r * s).to_cyclo() == r.to_cyclo() * s.to_cyclo()
    assert (r * r.inverse()).is_one()


def test_vanishing_sum_of_fifth_roots():
    z = Cyclo.root(1, 5)
    assert sum((z ** k for k in range(5)), Cyclo.zero()).is_zero()


def test_equality_across_orders():
    assert Cyclo.root(1, 4) == Cyclo.root(3, 12)
    assert hash(Cyclo.root(1, 4)) == hash(Cyclo.root(3, 12))


def test_min_poly_of_sqrt2():
    s2 = Cyclo.root(1, 8) + Cyclo.root(7, 8)
    assert min_poly(s2).univariate_coeffs() == [-2, 0, 1]


@given(cyclos())
def test_min_poly_annihilates(x):
    coeffs = min_poly(x).univariate_coeffs()
    total = Cyclo.zero()
    for c in reversed(coeffs):
        total = total * x + c
    assert total.is_zero()


def test_rational_ratio_and_root_detection():
    w = Cyclo.root(1, 3)
    assert rational_ratio(w * 2, w) == 2
    assert rational_ratio(w, Cyclo.one()) is None
    assert as_root_of_unity(-w) == RootOfUnity(5, 6)
    assert as_root_of_unity(w + 1 + 1) is None


def test_rational_helpers():
    assert factorize(360) == ((2, 3), (3, 2), (5, 1))
    assert euler_phi(12) == 4
    assert squarefree_part(Fraction(-12, 5)) == -15
    assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
    assert rational_sqrt(Fraction(2)) is None
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_q_rank_of_cube_roots():
    assert q_rank([Cyclo.one(), Cyclo.root(1, 3), Cyclo.root(2, 3)]) == 2


def test_linear_algebra():
    cols = [[Fraction(1), Fraction(0)], [Fraction(0), Fraction(1)], [Fraction(1), Fraction(1)]]
    assert len(nullspace(cols)) == 1
    assert solve_rational(cols[:2], [Fraction(3), Fraction(4)]) == [3, 4]


def test_parse_poly_juxtaposition():
    p = parse_poly("-a^2 b (a - c) + 3", ("a", "b", "c"))
    assert p.eval({"a": 2, "b": 1, "c": 1}) == -4 * 1 * 1 + 3
    a, b, c = MPoly.gens("a", "b", "c")
    assert (p - (-(a ** 2) * b * (a - c) + 3)).is_zero()


def test_order_cap_is_enforced():
    old = order_cap()
    try:
        set_order_cap(100)
        with pytest.raises(OrderCapExceeded):
            Cyclo.root(1, 101)
    finally:
        set_order_cap(old)


def test_root_json_round_trip():
    r = RootOfUnity.parse("5/12")
    assert RootOfUnity.from_json(r.to_json()) == r
    x = Cyclo.root(1, 12) + Fraction(1, 3)
    assert Cyclo.from_json(x.to_json()) == x
