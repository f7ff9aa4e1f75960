from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattangle.algebra import ru_make
from lattangle.examples import (
    CurveError,
    ECPoint,
    ec_add,
    ec_double,
    ec_mul,
    ec_multiples,
    ec_neg,
    ec_sweep,
    ec_to_quadruple,
    ec_verify,
    generator,
    genus5_conventions,
    genus5_radius,
    genus5_select_convention,
    genus5_verify,
    j_invariant,
    on_curve,
    phi_invariant,
    system_values,
    torsion_point,
)

F = Fraction


def test_j_invariant():
    assert j_invariant() == 128


def test_small_multiples():
    G = generator()
    assert G == ECPoint.affine(-1, 1)
    assert ec_double(G) == ECPoint.affine(F(-7, 4), F(-5, 8))
    assert ec_multiples(3)[2] == ECPoint.affine(F(31, 9), F(-287, 27))


def test_torsion_point_has_order_two():
    T = torsion_point()
    assert on_curve(T) and not T.is_infinity
    assert ec_double(T).is_infinity


def test_off_curve_point_rejected():
    with pytest.raises(CurveError):
        ec_add(ECPoint.affine(0, 5), generator())


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_group_law_associative(i, j, k):
    G, T = generator(), torsion_point()
    P = ec_add(ec_mul(i, G), T) if i % 2 else ec_mul(i, G)
    Q, R = ec_mul(j, G), ec_mul(k, G)
    assert ec_add(ec_add(P, Q), R) == ec_add(P, ec_add(Q, R))
    assert ec_add(P, ec_neg(P)).is_infinity


def test_multiples_range_checked():
    with pytest.raises(ValueError):
        ec_multiples(13)


def test_two_g_quadruple():
    q = ec_to_quadruple(ec_multiples(2)[1])
    assert q.buv == (F(-2, 5), F(-3), F(1))
    assert q.params == (F(-17, 5), F(-2, 5), F(-34, 35), F(3, 5))
    assert q.valid
    assert system_values(q) == (0, 0)


def test_printed_linear_variant_fails_quartic():
    q = ec_to_quadruple(ec_multiples(2)[1], "system_linear_printed")
    assert system_values(q, "system_linear_printed")[1] == F(-4114, 175)


def test_generator_is_degenerate():
    assert not ec_to_quadruple(generator()).valid


def test_phi_values_distinct():
    phis = [phi_invariant(ec_to_quadruple(P)) for P in ec_multiples(8)[1:]]
    assert phis[:3] == [F(50, 33), F(3362, 2563), F(949442, 1243521)]
    assert len(set(phis)) == len(phis)


def test_ec_verify_two_g():
    rep = ec_verify(ec_multiples(2)[1])
    assert rep["ok"]
    closed = next(c for c in rep["checks"] if c["name"] == "closedFormTau")
    assert closed["orientation"] == "conjugate"


def test_sweep_verifies_valid_multiples():
    recs = ec_sweep(6, verify=True)
    assert [r["quadruple"]["valid"] for r in recs] == [False] + [True] * 5
    assert all(r["report"]["ok"] for r in recs[1:])


def test_genus5_radius():
    assert abs(genus5_radius() - mpmath.mpf("2.86806928011288")) < 1e-12


def test_genus5_convention_is_direct():
    roots = genus5_select_convention()
    assert roots == (ru_make(3, 5), ru_make(3, 10), ru_make(9, 10))
    assert genus5_conventions().index(roots) == 0


def test_genus5_verify():
    rep = genus5_verify(1e-6)
    assert rep["ok"], rep["checks"]
    re, im = (float(v) for v in rep["tau"]["approx"])
    assert abs(re + 0.886282148599602) < 1e-9 and abs(im - 2.72769597803731) < 1e-9
