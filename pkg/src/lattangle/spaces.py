"""Space-level predicates: homothety normalization, CM detection and catalogs,
conjugation symmetries and the finite list of rational angles of V = <1, tau>."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Cyclo,
    RootOfUnity,
    as_fraction,
    as_root_of_unity,
    fraction_str,
    is_squarefree,
    lcm,
    min_poly,
    nullspace,
    q_rank,
    rational_ratio,
    rational_sqrt,
    real_sign,
    ru_make,
    squarefree_part,
)
from .angles import ConfigError, TauValue, angle_coeffs_ABC, normalize_tau


@dataclass(frozen=True)
class SpaceSpec:
    """V = <1, tau>.  ``transcendental`` carries the single defining squared
    angle when tau is a stand-in for a non-algebraic value."""

    tau: TauValue | None
    provenance: str = ""
    transcendental: RootOfUnity | None = None

    @classmethod
    def of(cls, tau, provenance: str = "") -> "SpaceSpec":
        if isinstance(tau, TauValue):
            return cls(tau, provenance)
        return cls(normalize_tau(tau), provenance)

    @classmethod
    def non_algebraic(cls, mu_sq: RootOfUnity, provenance: str = "") -> "SpaceSpec":
        return cls(None, provenance, mu_sq)

    def explicit(self) -> Cyclo:
        if self.tau is None or self.tau.kind != "explicitCyclo":
            raise ConfigError("operation needs an explicit cyclotomic tau")
        return self.tau.value


def normalize_space(v1, v2, provenance: str = "") -> SpaceSpec:
    """Generator tau = v2/v1 of <v1, v2> up to homothety, with Im(tau) > 0."""
    v1, v2 = Cyclo.coerce(v1), Cyclo.coerce(v2)
    if v1.is_zero():
        raise ConfigError("v1 is zero")
    tau = v2 / v1
    if tau.is_real():
        raise ConfigError("v1 and v2 are proportional over R")
    return SpaceSpec(normalize_tau(tau), provenance)


def equivalence_normalize(s: SpaceSpec) -> SpaceSpec:
    """Representative with Re(tau) >= 0; tau -> -conj(tau) generates the conjugate space."""
    tau = s.explicit()
    if real_sign(tau) < 0:
        return SpaceSpec(TauValue.explicit(-tau.conj(), conjugated=not s.tau.conjugated), s.provenance)
    return s


# ---------------------------------------------------------------------------
# CM spaces


@dataclass(frozen=True)
class CmInfo:
    d: int
    catalog: tuple[Cyclo, ...]

    def to_json(self) -> dict:
        return {"d": self.d, "catalog": [c.to_json() for c in self.catalog]}


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _sqrt_prime(p: int) -> Cyclo:
    """sqrt(p) > 0 as a cyclotomic number (Gauss sums; sqrt 2 = zeta8 + zeta8^-1)."""
    if p == 2:
        return Cyclo.root(1, 8) + Cyclo.root(-1, 8)
    g = Cyclo.zero(p)
    for a in range(1, p):
        g = g + Cyclo.root(a, p) * _legendre(a, p)
    if p % 4 == 3:
        g = g * Cyclo.root(-1, 4)  # g = i sqrt(p)
    return g if real_sign(g) > 0 else -g


def sqrt_neg(d: int) -> Cyclo:
    """sqrt(-d) with positive imaginary part, for a positive integer d."""
    if d < 1:
        raise ValueError("d must be positive")
    r = Cyclo.root(1, 4)
    m = d
    for p in range(2, d + 1):
        while m % (p * p) == 0:
            r = r * p
            m //= p * p
        if m % p == 0:
            r = r * _sqrt_prime(p)
            m //= p
        if m == 1:
            break
    assert (r * r).rational_value() == -d
    return r


def cm_catalog(d: int) -> CmInfo:
    """Angle generators lambda of the CM space Q(sqrt(-d)): each (1, lambda) is one angle class."""
    if d < 1 or not is_squarefree(d):
        raise ValueError(f"d = {d} is not a squarefree positive integer")
    s = sqrt_neg(d)
    if d == 1:
        return CmInfo(1, (s, s + 1, s - 1))
    if d == 3:
        z = Cyclo.root(1, 3)
        return CmInfo(3, (s, z, z - 1, z + 1, z + 2))
    return CmInfo(d, (s,))


def is_cm(s: SpaceSpec) -> CmInfo | None:
    if s.tau is None:
        return None
    if s.tau.kind == "explicitCyclo":
        mp = min_poly(s.tau.value).univariate_coeffs()
        if len(mp) != 3:
            return None
        c0, c1 = mp[0], mp[1]
    else:
        c2, c1, c0 = s.tau.quadratic
        c1, c0 = rational_ratio(c1, c2), rational_ratio(c0, c2)
        if not isinstance(c1, Fraction) or not isinstance(c0, Fraction):
            return None
    disc = c1 * c1 - 4 * c0
    if disc >= 0:
        return None
    return cm_catalog(-squarefree_part(disc))


# ---------------------------------------------------------------------------
# symmetry


def _roots_of_unity_in(elements: Sequence[Cyclo]) -> list[RootOfUnity]:
    """All roots of unity of the field generated by the elements (inside Q(zeta_N))."""
    n = lcm(2, *(e.order for e in elements))
    lifted = [e.lift(n) for e in elements]
    stab = [k for k in range(1, n) if math.gcd(k, n) == 1 and all(e.galois(k) == e for e in lifted)]
    return [ru_make(j, n) for j in range(n) if all((j * k - j) % n == 0 for k in stab)]


def field_roots_of_unity(tau) -> list[RootOfUnity]:
    """Roots of unity in Q(tau, conj(tau)), sorted by amplitude."""
    tau = Cyclo.coerce(tau)
    return sorted(set(_roots_of_unity_in([tau, tau.conj()])), key=lambda r: Fraction(r.num, r.den))


def _moebius_related(tau: Cyclo, other: Cyclo) -> bool:
    """other = (a tau + b)/(c tau + d) for a rational invertible matrix.

    For non-real tau and non-rational other this is Q-dependence of 1, tau, other, tau*other.
    """
    return q_rank([Cyclo.one(), tau, other, tau * other]) < 4


@dataclass(frozen=True)
class Symmetry:
    selfConjClass: bool
    homConjClass: bool
    rectangular: bool
    superrectangular: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def is_rectangular(tau) -> bool:
    """V contains two perpendicular vectors: a rational point on the curve for mu^2 = -1."""
    tau = Cyclo.coerce(tau)
    return bool(_angles_for(tau, ru_make(1, 2)))


def is_superrectangular(tau) -> bool:
    """V is homothetic to <1, omega> for a root of unity omega != +-1."""
    tau = Cyclo.coerce(tau)
    n = lcm(2, tau.order)
    return any(_moebius_related(tau, Cyclo.root(k, n)) for k in range(1, n) if 2 * k != n)


def symmetry_predicates(s: SpaceSpec) -> Symmetry:
    tau = s.explicit()
    rect = is_rectangular(tau)
    return Symmetry(
        selfConjClass=rect,
        homConjClass=_moebius_related(tau, tau.conj()),
        rectangular=rect,
        superrectangular=is_superrectangular(tau),
    )


# ---------------------------------------------------------------------------
# rational angles


def _primitive(v: Sequence[Fraction]) -> tuple[int, int]:
    den = lcm(*(Fraction(x).denominator for x in v))
    ints = [int(Fraction(x) * den) for x in v]
    g = math.gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(ints)


@dataclass(frozen=True)
class AngleRecord:
    """Squared angle mu_sq between v1 = p0 tau + p1 and v2 = q0 tau + q1."""

    v1: tuple[int, int]
    v2: tuple[int, int]
    muSq: RootOfUnity

    @property
    def amplitude(self) -> Fraction:
        return self.muSq.amplitude()

    def canonical(self) -> "AngleRecord":
        swapped = AngleRecord(self.v2, self.v1, self.muSq.inverse())
        return min(self, swapped, key=lambda r: (Fraction(r.muSq.num, r.muSq.den), r.v1, r.v2))

    def holds(self, tau) -> bool:
        tau = Cyclo.coerce(tau)
        a = tau * self.v1[0] + self.v1[1]
        b = tau * self.v2[0] + self.v2[1]
        return (a.conj() * b - self.muSq.to_cyclo() * a * b.conj()).is_zero()

    def to_json(self) -> dict:
        return {"kind": "angle", "pair": [list(self.v1), list(self.v2)], "muSq": self.muSq.to_json(),
                "amplitude": fraction_str(self.amplitude)}


@dataclass(frozen=True)
class CmMarker:
    """Every point of the angle curve for muSq is rational: infinitely many angles."""

    muSq: RootOfUnity
    cm: CmInfo

    def to_json(self) -> dict:
        return {"kind": "cmInfinite", "muSq": self.muSq.to_json(), "d": self.cm.d,
                "catalog": [c.to_json() for c in self.cm.catalog]}


def _segre_points(basis: list[list[Fraction]]) -> list[list[Fraction]] | None:
    """Rank-one 2x2 matrices (m1 m2; m3 m4) in the span of basis, up to scale.

    None signals a whole line of solutions.
    """
    if len(basis) == 1:
        m = basis[0]
        return [m] if m[0] * m[3] == m[1] * m[2] else []
    p, q = basis
    # det(s p + t q) = A s^2 + B s t + C t^2
    A = p[0] * p[3] - p[1] * p[2]
    C = q[0] * q[3] - q[1] * q[2]
    B = p[0] * q[3] + q[0] * p[3] - p[1] * q[2] - q[1] * p[2]
    if A == B == C == 0:
        return None
    pts: list[tuple[Fraction, Fraction]] = []
    if A == 0:
        pts.append((Fraction(1), Fraction(0)))
        if B != 0:
            pts.append((-C, B))
    else:
        disc = B * B - 4 * A * C
        r = rational_sqrt(disc) if disc >= 0 else None
        if r is not None:
            pts.extend([(-B + r, 2 * A), (-B - r, 2 * A)])
    return [[s * x + t * y for x, y in zip(p, q)] for s, t in pts]


def _angles_for(tau: Cyclo, mu_sq: RootOfUnity):
    """Angle records for one mu_sq, or the string "cm" when A, B, C are rational."""
    A, B, C = angle_coeffs_ABC(tau, mu_sq)
    n = lcm(A.order, B.order, C.order)
    cols = [list(x.lift(n).coords) for x in (A, B, C, Cyclo.one(n))]
    basis = nullspace(cols)
    if len(basis) == 3:
        return "cm"
    if not basis:
        return []
    points = _segre_points(basis)
    if points is None:
        raise ArithmeticError("a whole line of rational angles on a non-CM curve")
    out = set()
    for m in points:
        if not any(m):
            continue
        col = (m[0], m[2]) if (m[0] or m[2]) else (m[1], m[3])
        row = (m[0], m[1]) if (m[0] or m[1]) else (m[2], m[3])
        rec = AngleRecord(_primitive(col), _primitive(row), mu_sq)
        if rec.v1 == rec.v2:
            continue
        out.add(rec.canonical())
    return sorted(out, key=lambda r: (Fraction(r.muSq.num, r.muSq.den), r.v1, r.v2))


def find_rational_angles(s: SpaceSpec, muSqSet: Sequence[RootOfUnity] | None = None) -> list:
    """All rational angles of V up to swapping the pair, as AngleRecord / CmMarker entries."""
    if s.tau is None:
        return [AngleRecord((0, 1), (1, 0), s.transcendental).canonical()]
    tau = s.explicit()
    if muSqSet is None:
        muSqSet = [r for r in field_roots_of_unity(tau) if not r.is_one()]
    out: dict = {}
    cm = None
    for mu in muSqSet:
        if mu.is_one():
            continue
        res = _angles_for(tau, mu)
        if res == "cm":
            if cm is None:
                cm = is_cm(s)
                if cm is None:
                    raise ArithmeticError("rational angle curve on a non-quadratic tau")
            out[("cm", mu)] = CmMarker(mu, cm)
        else:
            for rec in res:
                out[rec] = rec

    def key(r):
        return (Fraction(r.muSq.num, r.muSq.den), isinstance(r, CmMarker),
                getattr(r, "v1", ()), getattr(r, "v2", ()))

    return sorted(out.values(), key=key)


def lattice_root_orders() -> dict[str, int]:
    """Largest order of mu for the angles of the Gaussian and Eisenstein lattices.

    Derived from the CM catalogs and cross-checked against the angle search.
    """
    out = {}
    for name, d, tau in (("gaussian", 1, Cyclo.root(1, 4)), ("eisenstein", 3, Cyclo.root(1, 6))):
        cat = {(lam / lam.conj()) for lam in cm_catalog(d).catalog}
        found = find_rational_angles(SpaceSpec.of(tau))
        found_mu = {m.muSq.to_cyclo() for m in found if isinstance(m, CmMarker)}
        if cat != found_mu:
            raise ArithmeticError(f"{name}: catalog and angle search disagree")
        out[name] = max(as_root_of_unity(m).sqrt().den for m in cat)
    return out
