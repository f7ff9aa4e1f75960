"""Resultant of two monic quadratics and the surface it cuts out for fixed squared angles."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .algebra import Cyclo, MPoly, RootOfUnity
from .angles import eval_root_monomials
from .transcribed import c222_coefficients

ABCD = ("a", "b", "c", "d")


@dataclass(frozen=True)
class QuadraticPair:
    """Coefficients of T^2 + A1 T + A2 and T^2 + B1 T + B2 (any ring elements)."""

    A1: object
    A2: object
    B1: object
    B2: object

    @classmethod
    def symbolic(cls) -> "QuadraticPair":
        return cls(*MPoly.gens("A1", "A2", "B1", "B2"))


def resultant_E(qp: QuadraticPair):
    A1, A2, B1, B2 = qp.A1, qp.A2, qp.B1, qp.B2
    return (B2 * B2 - A1 * B1 * B2 + (A1 * A1 - 2 * A2) * B2 + A2 * B1 * B1
            - A1 * A2 * B1 + A2 * A2)


def resultant_E_eliminated(qp: QuadraticPair):
    """Same resultant, written after eliminating T from the difference of the quadratics."""
    A1, A2, B1, B2 = qp.A1, qp.A2, qp.B1, qp.B2
    z1, z2 = B1 - A1, B2 - A2
    return z2 * z2 - A1 * z1 * z2 + A2 * z1 * z1


def _det(m):
    """Leibniz expansion; works for any commutative ring entries."""
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i, j in itertools.combinations(range(n), 2) if perm[i] > perm[j])
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term = term * m[i][j]
        total = term + total
    return total


def sylvester_resultant(qp: QuadraticPair):
    one, zero = 1, 0
    rows = [
        [one, qp.A1, qp.A2, zero],
        [zero, one, qp.A1, qp.A2],
        [one, qp.B1, qp.B2, zero],
        [zero, one, qp.B1, qp.B2],
    ]
    return _det(rows)


def _c(v) -> Cyclo:
    return v.to_cyclo() if isinstance(v, RootOfUnity) else Cyclo.coerce(v)


def substitution(x, y, z) -> QuadraticPair:
    """A1, A2, B1, B2 as linear and quadratic forms in a, b, c, d."""
    X, Y, Z = _c(x), _c(y), _c(z)
    if (Y - 1).is_zero() or (Z - 1).is_zero() or (X - 1).is_zero():
        raise ValueError("x, y, z must differ from 1")
    a, b, c, d = MPoly.gens(*ABCD)
    A1 = a * ((Y - X) / (Y - 1)) + b * ((X * Y - 1) / (Y - 1))
    B1 = c * ((Z - X) / (Z - 1)) + d * ((X * Z - 1) / (Z - 1))
    return QuadraticPair(A1, a * b * X, B1, c * d * X)


def non_injective(x: RootOfUnity, y: RootOfUnity, z: RootOfUnity) -> bool:
    """The substitution fails to be dominant: x = -1 and y or z = -1."""
    m1 = RootOfUnity(1, 2)
    return x == m1 and (y == m1 or z == m1)


@lru_cache(maxsize=None)
def _p_by_abcd() -> dict[tuple[int, ...], dict[tuple[int, int, int], object]]:
    """P regrouped: abcd-exponent -> {xyz-exponent: rational coefficient}."""
    out: dict = {}
    for exy, coeff in c222_coefficients().items():
        poly = coeff.with_variables(ABCD)
        for e, c in poly.terms.items():
            out.setdefault(e, {})[exy] = c
    return out


def p_specialized(x: RootOfUnity, y: RootOfUnity, z: RootOfUnity) -> MPoly:
    """The table-built polynomial P at fixed (x, y, z), as a form in a, b, c, d."""
    terms = {e: eval_root_monomials(cs, (x, y, z)) for e, cs in _p_by_abcd().items()}
    return MPoly(ABCD, terms)


@dataclass(frozen=True)
class EstarResult:
    estar: MPoly
    scaling_ok: bool
    warning: bool

    def to_json(self) -> dict:
        return {"terms": len(self.estar.terms), "scalingIdentity": self.scaling_ok,
                "nonInjective": self.warning}


def estar(x: RootOfUnity, y: RootOfUnity, z: RootOfUnity) -> EstarResult:
    qp = substitution(x, y, z)
    E = resultant_E(qp).with_variables(ABCD)
    X, Y, Z = _c(x), _c(y), _c(z)
    scale = (Y - 1) * (Y - 1) * (Z - 1) * (Z - 1) / X
    ok = (p_specialized(x, y, z) - E * scale).is_zero()
    return EstarResult(E, ok, non_injective(x, y, z))


def defined_over_q_closed(x: RootOfUnity, y: RootOfUnity, z: RootOfUnity) -> bool:
    return any(all((r ** n).is_one() for r in (x, y, z)) for n in (4, 6))


def defined_over_q_ratios(x: RootOfUnity, y: RootOfUnity, z: RootOfUnity) -> bool:
    """All nonzero coefficients of P are rational multiples of a single one."""
    coeffs = list(p_specialized(x, y, z).terms.values())
    if not coeffs:
        raise ArithmeticError("P vanishes identically")
    lead = Cyclo.coerce(coeffs[0])
    return all((Cyclo.coerce(c) / lead).is_rational() for c in coeffs[1:])


def defined_over_q(x: RootOfUnity, y: RootOfUnity, z: RootOfUnity) -> bool:
    closed = defined_over_q_closed(x, y, z)
    if closed != defined_over_q_ratios(x, y, z):
        raise ArithmeticError(f"criteria disagree at {(x, y, z)}")
    return closed
