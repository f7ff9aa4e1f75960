from __future__ import annotations

import itertools
import random

import pytest

from lattangle.algebra import Cyclo, MPoly, ru_make
from lattangle.surface import (
    QuadraticPair,
    defined_over_q,
    defined_over_q_closed,
    estar,
    non_injective,
    resultant_E,
    resultant_E_eliminated,
    substitution,
    sylvester_resultant,
)


def test_resultant_forms_agree():
    qp = QuadraticPair.symbolic()
    E = resultant_E(qp)
    assert (E - sylvester_resultant(qp)).is_zero()
    assert (E - resultant_E_eliminated(qp)).is_zero()


def test_resultant_vanishes_on_common_root():
    rng = random.Random(4)
    for _ in range(20):
        r, s, t = (rng.randint(-9, 9) for _ in range(3))
        qp = QuadraticPair(-(r + s), r * s, -(r + t), r * t)
        assert resultant_E(qp) == 0


def test_estar_at_minus_one():
    m1 = ru_make(1, 2)
    res = estar(m1, m1, m1)
    a, b, c, d = MPoly.gens("a", "b", "c", "d")
    assert (res.estar - (a * b - c * d) ** 2).is_zero()
    assert res.scaling_ok and res.warning


def test_substitution_rejects_trivial_root():
    with pytest.raises(ValueError):
        substitution(ru_make(0, 1), ru_make(1, 3), ru_make(1, 4))


def test_non_injective():
    m1, i = ru_make(1, 2), ru_make(1, 4)
    assert non_injective(m1, i, m1)
    assert not non_injective(i, m1, m1)


def test_scaling_identity_sample():
    for roots in [(1, 5, 7), (3, 2, 11), (6, 4, 9)]:
        x, y, z = (ru_make(k, 12) for k in roots)
        assert estar(x, y, z).scaling_ok


def test_defined_over_q_examples():
    i, w = ru_make(1, 4), ru_make(1, 3)
    assert defined_over_q(i, ru_make(1, 2), i)
    assert defined_over_q(w, ru_make(1, 6), w)
    assert not defined_over_q(i, w, i)
    assert not defined_over_q_closed(ru_make(1, 5), i, i)
