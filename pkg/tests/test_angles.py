from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lattangle.algebra import Cyclo, RootOfUnity, embed, ru_make
from lattangle.angles import (
    INF,
    AngleConfig,
    ConfigError,
    TauValue,
    amplitude_to_root,
    angle_coeffs_ABC,
    c222_permuted,
    eliminant,
    pair_quadratic,
    pair_squared_angle,
    proportional_branch,
    quadratic_discriminant,
    root_to_amplitude,
    tau_from_tuple,
    tau_recover,
    verify_angle,
)

I = Cyclo.root(1, 4)
Z12 = [Cyclo.root(k, 12) for k in range(12)]
TAU1 = -Z12[3] + Z12[2] + Z12[1] - 1


def test_amplitude_root_round_trip():
    r = amplitude_to_root(Fraction(3, 10))
    assert r == RootOfUnity(3, 10)
    assert root_to_amplitude(r) == Fraction(3, 10)
    assert amplitude_to_root(Fraction(-1, 10)) == RootOfUnity(9, 10)


def test_squared_angle_of_perpendicular_pair():
    assert pair_squared_angle(Cyclo.one(), I) == RootOfUnity(1, 2)


def test_abc_for_i_perpendicular():
    A, B, C = angle_coeffs_ABC(I, RootOfUnity(1, 2))
    assert (A, B, C) == (Cyclo.one(), Cyclo.zero(), Cyclo.zero())


def test_abc_zeta3_has_nonzero_c():
    w = Cyclo.root(1, 3)
    A, _, C = angle_coeffs_ABC(w, RootOfUnity(1, 3))
    assert A == Cyclo.one()
    assert not C.is_zero()


def test_abc_irreducible_for_nonreal_tau():
    A, B, C = angle_coeffs_ABC(Cyclo.root(1, 5), RootOfUnity(1, 5))
    assert A != B * C


def test_abc_errors():
    with pytest.raises(ConfigError):
        angle_coeffs_ABC(I, RootOfUnity(0, 1))
    with pytest.raises(ConfigError):
        angle_coeffs_ABC(Cyclo.rational(2), RootOfUnity(1, 2))


@pytest.mark.parametrize("n", [5, 7, 8, 9, 12])
def test_tau_from_tuple_identity(n):
    th = ru_make(1, n)
    assert tau_from_tuple(1, th * th, th).value == th.to_cyclo()


def test_tau_from_tuple_examples():
    w = RootOfUnity(1, 3)
    assert tau_from_tuple(1, w, w * w).value == Cyclo.root(2, 3)
    assert tau_from_tuple(1, ru_make(3, 12), ru_make(1, 12)).value == TAU1


def test_tau_from_tuple_preconditions():
    with pytest.raises(ConfigError):
        tau_from_tuple(0, RootOfUnity(1, 3), RootOfUnity(2, 3))
    with pytest.raises(ConfigError):
        tau_from_tuple(1, RootOfUnity(1, 3), RootOfUnity(1, 3))


def test_pair_quadratic_direct_expansion():
    # (1, -1, -1, -1): -2 tau^2 + 0 tau - 2, roots +-i
    c2, c1, c0 = pair_quadratic(1, -1, RootOfUnity(1, 2), RootOfUnity(1, 2))
    assert (c2, c1, c0) == (Cyclo.rational(-2), Cyclo.zero(), Cyclo.rational(-2))


def test_pair_quadratic_genus5_field_and_discriminant():
    q = pair_quadratic(12, 2, RootOfUnity(3, 5), RootOfUnity(3, 10))
    assert all(10 % c.order == 0 for c in q)
    q2 = pair_quadratic(2, 3, RootOfUnity(1, 4), RootOfUnity(1, 4))
    assert not quadratic_discriminant(q2).is_zero()


def test_pair_quadratic_preconditions():
    with pytest.raises(ConfigError):
        pair_quadratic(1, 1, RootOfUnity(1, 4), RootOfUnity(1, 4))
    with pytest.raises(ConfigError):
        pair_quadratic(1, 2, RootOfUnity(1, 4), RootOfUnity(0, 1))


def test_eliminant_examples():
    th = RootOfUnity(1, 5)
    cfg = AngleConfig("C4", (1, -1), (th * th, th, th * RootOfUnity(1, 2)))
    assert eliminant(cfg).is_zero()
    assert eliminant(AngleConfig("C4", (1, -1), (ru_make(3, 12), ru_make(1, 12), ru_make(10, 12)))).is_zero()
    m1 = RootOfUnity(1, 2)
    assert eliminant(AngleConfig("C222", (1, 2, 3, 4), (m1, m1, m1))) == Cyclo.rational(-1600)


@settings(max_examples=100)
@given(st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=7), min_size=4, max_size=4))
def test_c222_at_minus_one_is_minus_16_square(params):
    m1 = RootOfUnity(1, 2)
    a, b, c, d = params
    value = eliminant(AngleConfig("C222", params, (m1, m1, m1)))
    assert value == Cyclo.rational(-16 * (a * b - c * d) ** 2)


def test_tau_recover_dodecagonal():
    tau = tau_recover(AngleConfig("C4", (1, -1), (ru_make(3, 12), ru_make(1, 12), ru_make(10, 12))))
    assert tau.value == TAU1
    e = embed(tau.value)
    assert abs(e.re - mpmath.mpf("0.3660254037844386")) < 1e-12
    assert abs(e.re - e.im) < 1e-15


def test_tau_recover_family_is_homothetic_to_imaginary():
    from lattangle.spaces import _moebius_related

    t = RootOfUnity(1, 7)
    tau = tau_recover(AngleConfig("C4", (2, 1), (t, t * RootOfUnity(1, 2), t * t))).value
    T = t.to_cyclo()
    imaginary = (T + 1) / (T - 1)
    assert imaginary == -imaginary.conj()
    assert abs(embed(imaginary).re) < 1e-15
    assert _moebius_related(tau, imaginary)


def test_tau_recover_rejects_nonsolution():
    cfg = AngleConfig("C222", (1, 2, 3, 5), (RootOfUnity(1, 4), RootOfUnity(1, 8), RootOfUnity(3, 8)))
    with pytest.raises(ConfigError):
        tau_recover(cfg)


def test_proportional_branch_genus5():
    roots = (RootOfUnity(3, 5), RootOfUnity(3, 10), RootOfUnity(9, 10))
    br = proportional_branch(AngleConfig("C222", (12, 2, -8, -3), roots))
    assert br.status == "proportional"
    assert br.cosine_check and br.unit_equation_zero
    re, im = br.tau.approx()
    assert abs(mpmath.mpc(re, im) / abs(mpmath.mpc(re, im)) - mpmath.expj(3 * mpmath.pi / 5)) < 1e-12


def test_proportional_branch_unique_zero_after_perturbation():
    roots = (RootOfUnity(3, 5), RootOfUnity(3, 10), RootOfUnity(7, 10))
    assert proportional_branch(AngleConfig("C222", (12, 2, -8, -3), roots)).status == "uniqueZero"


def test_verify_angle_examples():
    assert verify_angle(TauValue.explicit(I), INF, 0, RootOfUnity(1, 2))
    t1 = TauValue.explicit(TAU1)
    assert verify_angle(t1, 1, -1, ru_make(9, 12))
    assert not any(verify_angle(t1, 2, -1, ru_make(k, 12)) for k in range(1, 12))


def _random_c4_solutions(count, seed=3):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        n = rng.choice([5, 7, 8, 9, 10, 12])
        th = ru_make(rng.randrange(1, n), n)
        if th.den <= 2:
            continue
        a = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
        # superrectangular shape: (x, y, z) = (th^2, th, -th) with (a, b) = (a, -a)
        cfg = AngleConfig("C4", (a, -a), (th * th, th, th * RootOfUnity(1, 2)))
        if cfg.is_valid():
            out.append(cfg)
    return out


def test_recovered_tau_satisfies_all_claimed_angles():
    for cfg in _random_c4_solutions(20):
        assert eliminant(cfg).is_zero()
        tau = tau_recover(cfg)
        x, y, z = cfg.roots if not tau.conjugated else tuple(r.inverse() for r in cfg.roots)
        a, b = cfg.params
        assert verify_angle(tau, INF, 0, x)
        assert verify_angle(tau, INF, a, y)
        assert verify_angle(tau, INF, b, z)


def test_c222_permutation_maps_solutions_to_solutions():
    roots = (RootOfUnity(1, 4), RootOfUnity(1, 8), RootOfUnity(3, 8))
    cfg = AngleConfig("C222", (Fraction(-17, 5), Fraction(-2, 5), Fraction(-34, 35), Fraction(3, 5)), roots)
    assert eliminant(cfg).is_zero()
    assert eliminant(c222_permuted(cfg)).is_zero()


def test_config_issues():
    cfg = AngleConfig("C4", (1, 1), (RootOfUnity(1, 3), RootOfUnity(1, 3), RootOfUnity(0, 1)))
    assert set(cfg.issues()) >= {"repeated parameter", "root equal to 1", "roots not distinct"}
    assert AngleConfig.from_json(cfg.to_json()) == cfg
