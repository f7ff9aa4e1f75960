from __future__ import annotations

import itertools
import random
from fractions import Fraction

import pytest

from lattangle.algebra import Cyclo, RootOfUnity, min_poly
from lattangle.angles import ConfigError
from lattangle.spaces import (
    AngleRecord,
    CmMarker,
    SpaceSpec,
    cm_catalog,
    equivalence_normalize,
    field_roots_of_unity,
    find_rational_angles,
    is_cm,
    is_superrectangular,
    lattice_root_orders,
    normalize_space,
    sqrt_neg,
    symmetry_predicates,
)

I = Cyclo.root(1, 4)
Z12 = [Cyclo.root(k, 12) for k in range(12)]
TAU1 = -Z12[3] + Z12[2] + Z12[1] - 1


def _pairs(records):
    return {frozenset((r.v1, r.v2)) for r in records if isinstance(r, AngleRecord)}


def _tuple_pairs(vectors):
    return {frozenset(p) for p in itertools.combinations(vectors, 2)}


# vectors p0 tau + p1 encoded as (p0, p1)
FOUR_TUPLE = [(0, 1), (1, 0), (1, 1), (1, -1)]


def test_normalize_space_examples():
    assert normalize_space(Cyclo.one(), I).tau.value == I
    s = normalize_space(Cyclo.rational(2), 1 - I)
    assert s.tau.conjugated and s.tau.value == (1 + I) / 2
    z5 = Cyclo.root(1, 5)
    t = normalize_space(1 + z5, z5 * z5).tau.value
    assert 5 % t.order == 0 or t.order == 10
    with pytest.raises(ConfigError):
        normalize_space(Cyclo.one(), Cyclo.rational(3))


def test_equivalence_normalize_sets_nonnegative_real_part():
    s = equivalence_normalize(SpaceSpec.of(Cyclo.root(2, 5)))
    assert s.tau.conjugated
    assert s.tau.value == -Cyclo.root(2, 5).conj()


def test_is_cm_examples():
    assert is_cm(SpaceSpec.of(I)).d == 1
    assert is_cm(SpaceSpec.of(Cyclo.root(1, 3))).d == 3
    assert is_cm(SpaceSpec.of(Cyclo.root(1, 5))) is None


def test_cm_catalogs():
    assert cm_catalog(1).catalog == (I, I + 1, I - 1)
    w = Cyclo.root(1, 3)
    assert cm_catalog(3).catalog == (sqrt_neg(3), w, w - 1, w + 1, w + 2)
    assert cm_catalog(2).catalog == (sqrt_neg(2),)
    assert cm_catalog(5).catalog == (sqrt_neg(5),)
    with pytest.raises(ValueError):
        cm_catalog(4)


@pytest.mark.parametrize("d", [1, 2, 3, 5, 6, 7, 15])
def test_sqrt_neg_squares_to_minus_d(d):
    s = sqrt_neg(d)
    assert (s * s).rational_value() == -d


def test_symmetry_examples():
    assert all(symmetry_predicates(SpaceSpec.of(Cyclo.root(1, 5))).to_json().values())
    t1 = symmetry_predicates(SpaceSpec.of(TAU1))
    assert t1.homConjClass and not t1.superrectangular
    # 1 + 2i generates Q(i), which is homothetic to <1, i>
    s = symmetry_predicates(SpaceSpec.of(1 + 2 * I))
    assert s.rectangular and s.superrectangular


def _sample_taus(seed=5, count=30):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.choice([3, 4, 5, 7, 8, 12])
        z = Cyclo.root(1, n)
        tau = Cyclo.rational(rng.randint(-2, 2)) + z * rng.choice([1, 2, 3]) + z * z * rng.randint(-1, 1)
        if not tau.is_real():
            out.append(tau)
    return out


def test_symmetry_implications():
    for tau in _sample_taus():
        s = symmetry_predicates(SpaceSpec.of(tau))
        if s.superrectangular:
            assert s.selfConjClass
        if s.selfConjClass:
            assert s.homConjClass


def test_find_angles_zeta5_exact_type_four():
    recs = find_rational_angles(SpaceSpec.of(Cyclo.root(1, 5)))
    assert _pairs(recs) == _tuple_pairs(FOUR_TUPLE)
    assert len(recs) == 6


def test_find_angles_tau1_has_no_extra_angle():
    recs = find_rational_angles(SpaceSpec.of(TAU1))
    assert len(recs) == 6
    assert _pairs(recs) == _tuple_pairs(FOUR_TUPLE)
    assert all(r.holds(TAU1) for r in recs)


def test_find_angles_gaussian_marker():
    recs = find_rational_angles(SpaceSpec.of(I))
    assert recs and all(isinstance(r, CmMarker) and r.cm.d == 1 for r in recs)
    assert all(8 % r.muSq.sqrt().den == 0 for r in recs)


def test_transcendental_space_has_one_angle():
    (rec,) = find_rational_angles(SpaceSpec.non_algebraic(RootOfUnity(1, 7)))
    assert rec.muSq in (RootOfUnity(1, 7), RootOfUnity(6, 7))


def test_lattice_root_orders():
    assert lattice_root_orders() == {"gaussian": 8, "eisenstein": 12}


def test_cm_marker_iff_quadratic():
    for tau in _sample_taus(seed=11, count=40):
        s = SpaceSpec.of(tau)
        recs = find_rational_angles(s)
        has_marker = any(isinstance(r, CmMarker) for r in recs)
        assert has_marker == (is_cm(s) is not None)
        if not has_marker:
            assert len(recs) <= 2 * len(field_roots_of_unity(tau))


def test_superrectangular_generator_detected():
    for n in (5, 7, 8, 9):
        assert is_superrectangular(Cyclo.root(1, n) * 3 + 1)
    assert not is_superrectangular(TAU1)


def test_angle_record_canonical_swap():
    r = AngleRecord((1, 0), (0, 1), RootOfUnity(3, 4))
    assert r.canonical() == AngleRecord((0, 1), (1, 0), RootOfUnity(1, 4))
    assert r.amplitude == Fraction(3, 4)


def test_quadratic_min_poly_degree_matches_cm():
    assert len(min_poly(Cyclo.root(1, 3) + 2).univariate_coeffs()) == 3
