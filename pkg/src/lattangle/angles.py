"""Configuration equations for rational angles in V = <1, tau>.

Angles are stored with the squared-argument convention: an angle of amplitude
alpha is represented by the root of unity exp(2 i alpha).  For a pair of vectors
(v1, v2) that root is conj(v1) v2 / (v1 conj(v2)).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .algebra import (
    Cyclo,
    MPoly,
    RootOfUnity,
    as_fraction,
    as_root_of_unity,
    certified_embed,
    embed,
    fraction_str,
    imag_sign,
    lcm,
    parse_poly,
    power_table,
    ru_make,
)
from .transcribed import c222_coefficients

CASES = ("C4", "C32", "C222")
INF = None  # marker for the vector 1 in a pair (b0, b1)


class ConfigError(ValueError):
    """Precondition violation for a configuration operation."""


# ---------------------------------------------------------------------------
# amplitude helpers


def amplitude_to_root(alpha_over_pi) -> RootOfUnity:
    """Root exp(2 i alpha) for alpha = (alpha_over_pi) * pi."""
    q = as_fraction(alpha_over_pi)
    return ru_make(q.numerator, q.denominator)


def root_to_amplitude(r: RootOfUnity) -> Fraction:
    """Amplitude alpha/pi in [0, 1) of the angle whose squared root is r."""
    return Fraction(r.num, r.den)


def squared_arg(v) -> RootOfUnity | None:
    """v / conj(v) when it is a root of unity."""
    v = Cyclo.coerce(v)
    if v.is_zero():
        raise ConfigError("zero vector has no argument")
    return as_root_of_unity(v / v.conj())


def pair_squared_angle(v1, v2) -> RootOfUnity | None:
    v1, v2 = Cyclo.coerce(v1), Cyclo.coerce(v2)
    return as_root_of_unity(v1.conj() * v2 / (v1 * v2.conj()))


# ---------------------------------------------------------------------------
# tau values


@dataclass(frozen=True)
class TauValue:
    """tau either as an explicit cyclotomic number or as a root of a quadratic.

    For a quadratic root, ``quadratic`` holds (c2, c1, c0) and ``x0`` the
    squared argument of tau, so that conj(tau) = tau / x0 on that root.  When
    both roots lie in the upper half plane, ``branch`` indexes them by
    increasing modulus.
    """

    kind: str
    value: Cyclo | None = None
    quadratic: tuple[Cyclo, Cyclo, Cyclo] | None = None
    x0: RootOfUnity | None = None
    conjugated: bool = False
    branch: int = 0

    @classmethod
    def explicit(cls, value, conjugated: bool = False) -> "TauValue":
        return cls("explicitCyclo", value=Cyclo.coerce(value), conjugated=conjugated)

    def numeric(self, precision: int = 128) -> complex:
        return complex(self.approx(precision)[0], self.approx(precision)[1])

    def approx(self, precision: int = 128) -> tuple[mpmath.mpf, mpmath.mpf]:
        if self.kind == "explicitCyclo":
            e = embed(self.value, precision)
            return e.re, e.im
        return upper_roots(self.quadratic, precision)[self.branch]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "conjugated": self.conjugated}
        if self.kind == "explicitCyclo":
            out["value"] = self.value.to_json()
        else:
            out["quadratic"] = [c.to_json() for c in self.quadratic]
            out["x0"] = self.x0.to_json()
            out["branch"] = self.branch
        re, im = self.approx(64)
        out["approx"] = [mpmath.nstr(re, 15), mpmath.nstr(im, 15)]
        return out

    @classmethod
    def from_json(cls, data) -> "TauValue":
        if data["kind"] == "explicitCyclo":
            return cls.explicit(Cyclo.from_json(data["value"]), data.get("conjugated", False))
        q = tuple(Cyclo.from_json(c) for c in data["quadratic"])
        return cls("quadraticRoot", quadratic=q, x0=RootOfUnity.from_json(data["x0"]),
                   conjugated=data.get("conjugated", False), branch=int(data.get("branch", 0)))


def quadratic_roots(q, precision: int = 128) -> list:
    """Both complex roots of c2 T^2 + c1 T + c0 (numeric)."""
    c2, c1, c0 = (embed(c, max(precision, 64)) for c in q)
    with mpmath.workprec(precision + 20):
        a = mpmath.mpc(c2.re, c2.im)
        b = mpmath.mpc(c1.re, c1.im)
        c = mpmath.mpc(c0.re, c0.im)
        s = mpmath.sqrt(b * b - 4 * a * c)
        return [(-b + s) / (2 * a), (-b - s) / (2 * a)]


def upper_roots(q, precision: int = 128) -> list[tuple]:
    """Roots with positive imaginary part as (re, im) pairs, by increasing modulus."""
    tol = mpmath.mpf(2) ** (-(precision // 2))
    roots = [r for r in quadratic_roots(q, precision) if r.imag > tol]
    roots.sort(key=abs)
    return [(r.real, r.imag) for r in roots]


def normalize_tau(tau) -> TauValue:
    """Explicit tau with positive imaginary part (conjugating if necessary)."""
    tau = Cyclo.coerce(tau)
    s = imag_sign(tau)
    if s == 0:
        raise ConfigError("tau is real")
    if s < 0:
        return TauValue.explicit(tau.conj(), conjugated=True)
    return TauValue.explicit(tau)


# ---------------------------------------------------------------------------
# single angle curve


def angle_coeffs_ABC(tau, mu_sq: RootOfUnity) -> tuple[Cyclo, Cyclo, Cyclo]:
    """Coefficients of a0 b0 A + a0 b1 B + a1 b0 C + a1 b1 = 0."""
    tau = Cyclo.coerce(tau)
    if mu_sq.is_one():
        raise ConfigError("mu^2 must differ from 1")
    if tau == tau.conj():
        raise ConfigError("tau must not be real")
    m = mu_sq.to_cyclo()
    tb = tau.conj()
    den = m - 1
    return tau * tb, (m * tau - tb) / den, (m * tb - tau) / den


# ---------------------------------------------------------------------------
# tuple and pair equations


def tau_from_tuple(a, x0: RootOfUnity, xj: RootOfUnity) -> TauValue:
    """tau = a x0 (xj - 1) / (x0 - xj), without orientation normalization."""
    a = as_fraction(a)
    if a == 0:
        raise ConfigError("a must be nonzero")
    if x0 == xj or x0.is_one() or xj.is_one():
        raise ConfigError("need x0 != xj and both != 1")
    X0, XJ = x0.to_cyclo(), xj.to_cyclo()
    tau = X0 * (XJ - 1) * a / (X0 - XJ)
    if tau == tau.conj():
        raise ArithmeticError("tau from a rational tuple came out real")
    return TauValue.explicit(tau)


def pair_quadratic(b0, bj, x0: RootOfUnity, yj: RootOfUnity) -> tuple[Cyclo, Cyclo, Cyclo]:
    """(c2, c1, c0) with c2 tau^2 + c1 tau + c0 = 0 for the angle (tau+b0, tau+bj)."""
    b0, bj = as_fraction(b0), as_fraction(bj)
    if b0 == bj or b0 == 0 or bj == 0:
        raise ConfigError("need b0 != bj, both nonzero")
    if yj.is_one():
        raise ConfigError("yj must differ from 1")
    X, Y = x0.to_cyclo(), yj.to_cyclo()
    n = lcm(X.order, Y.order)
    X, Y = X.lift(n), Y.lift(n)
    return Y - 1, (Y - X) * b0 + (X * Y - 1) * bj, X * (Y - 1) * (b0 * bj)


def quadratic_discriminant(q) -> Cyclo:
    c2, c1, c0 = q
    return c1 * c1 - c2 * c0 * 4


def quadratic_has_real_roots(q) -> bool:
    """Both roots real: true when every root embeds with zero imaginary part."""
    return all(abs(r.imag) <= mpmath.mpf(2) ** -80 for r in quadratic_roots(q))


# ---------------------------------------------------------------------------
# configurations and eliminants


@dataclass(frozen=True)
class AngleConfig:
    """caseId C4: params (a, b), roots (x, y, z) for the tuple (1, tau, tau+a, tau+b).
    C32: params (a, b, c), roots (x, y, z) for (1, tau, tau+a) and the pair (tau+b, tau+c).
    C222: params (a, b, c, d), roots (x, y, z) for (1, tau), (tau+a, tau+b), (tau+c, tau+d).
    """

    caseId: str
    params: tuple
    roots: tuple

    def __post_init__(self):
        if self.caseId not in CASES:
            raise ConfigError(f"unknown case {self.caseId}")
        need = {"C4": 2, "C32": 3, "C222": 4}[self.caseId]
        params = tuple(as_fraction(p) for p in self.params)
        if len(params) != need or len(self.roots) != 3:
            raise ConfigError(f"{self.caseId} needs {need} params and 3 roots")
        object.__setattr__(self, "params", params)
        object.__setattr__(self, "roots", tuple(self.roots))

    def issues(self) -> list[str]:
        """Violations of the non-degeneracy conditions (empty when valid)."""
        out = []
        p = self.params
        if any(v == 0 for v in p):
            out.append("zero parameter")
        if len(set(p)) != len(p):
            out.append("repeated parameter")
        if any(r.is_one() for r in self.roots):
            out.append("root equal to 1")
        x, y, z = self.roots
        if self.caseId == "C4" and len({x, y, z}) < 3:
            out.append("roots not distinct")
        if self.caseId == "C32":
            if x == y:
                out.append("x equals y")
            if p[1] in (0, p[0]) or p[2] in (0, p[0]):
                out.append("pair parameter overlaps the tuple: reduces to C4")
        return out

    def is_valid(self) -> bool:
        return not self.issues()

    def order(self) -> int:
        return lcm(*(r.den for r in self.roots))

    def to_json(self) -> dict:
        return {"case": self.caseId, "params": [fraction_str(p) for p in self.params],
                "roots": [r.to_json() for r in self.roots]}

    @classmethod
    def from_json(cls, data) -> "AngleConfig":
        return cls(data["case"], tuple(Fraction(p) for p in data["params"]),
                   tuple(RootOfUnity.from_json(r) for r in data["roots"]))


@lru_cache(maxsize=None)
def case_polynomial(case: str) -> MPoly:
    """Eliminant as a polynomial in parameters and x, y, z."""
    if case == "C4":
        return parse_poly("(a-b) x + b y - a z - a x y + b x z + (a-b) y z", ("a", "b", "x", "y", "z"))
    if case == "C32":
        return parse_poly(
            "(2 a^2 - a (b+c) + 2 b c) x y - a b x^2 y - a c y - a (a-b) x y^2 - a (a-c) x"
            " + b (a-c) x^2 + c (a-b) y^2 - (2 a^2 - a (b+c) + 2 b c) x y z"
            " + a c x^2 y z + a b y z + a (a-c) x y^2 z + a (a-b) x z - c (a-b) x^2 z - b (a-c) y^2 z",
            ("a", "b", "c", "x", "y", "z"),
        )
    if case == "C222":
        from .transcribed import c222_polynomial

        return c222_polynomial()
    raise ConfigError(f"unknown case {case}")


PARAM_NAMES = {"C4": ("a", "b"), "C32": ("a", "b", "c"), "C222": ("a", "b", "c", "d")}


@lru_cache(maxsize=None)
def _coefficient_polys(case: str) -> tuple[tuple[tuple[int, int, int], MPoly], ...]:
    if case == "C222":
        return tuple(sorted(c222_coefficients().items()))
    groups = case_polynomial(case).coeffs_by(("x", "y", "z"))
    return tuple(groups.items())


def eliminant_coefficients(case: str, params: Sequence) -> dict[tuple[int, int, int], Fraction]:
    """Rational coefficient C_e of x^e1 y^e2 z^e3 for given parameters."""
    vals = dict(zip(PARAM_NAMES[case], (as_fraction(p) for p in params)))
    out = {}
    for e, poly in _coefficient_polys(case):
        c = poly.eval(vals)
        if c:
            out[e] = c
    return out


def eval_root_monomials(coeffs: dict, roots: Sequence[RootOfUnity]) -> Cyclo:
    """sum_e C_e * prod roots^e, exactly, in Q(zeta_N) with N the common order."""
    n = lcm(*(r.den for r in roots))
    ks = [r.num * (n // r.den) for r in roots]
    table = power_table(n)
    den = lcm(*(Fraction(c).denominator for c in coeffs.values())) if coeffs else 1
    acc = [0] * len(table[0])
    for e, c in coeffs.items():
        c = Fraction(c)
        v = c.numerator * (den // c.denominator)
        row = table[sum(k * x for k, x in zip(ks, e)) % n]
        for i, t in enumerate(row):
            if t:
                acc[i] += v * t
    return Cyclo._make(n, acc, den)


def eliminant(cfg: AngleConfig) -> Cyclo:
    return eval_root_monomials(eliminant_coefficients(cfg.caseId, cfg.params), cfg.roots)


# ---------------------------------------------------------------------------
# tau recovery


def conjugate_config(cfg: AngleConfig) -> AngleConfig:
    return AngleConfig(cfg.caseId, cfg.params, tuple(r.inverse() for r in cfg.roots))


def _raw_tau(cfg: AngleConfig) -> Cyclo:
    x, y, z = (r.to_cyclo() for r in cfg.roots)
    n = lcm(x.order, y.order, z.order)
    x, y, z = x.lift(n), y.lift(n), z.lift(n)
    if cfg.caseId in ("C4", "C32"):
        a = cfg.params[0]
        return x * (y - 1) * a / (x - y)
    a, b, c, d = cfg.params
    num = x * (y - 1) * (z - 1) * (c * d - a * b)
    den = (y - x) * (z - 1) * a + (x * y - 1) * (z - 1) * b - (z - x) * (y - 1) * c - (x * z - 1) * (y - 1) * d
    if den.is_zero():
        raise ConfigError("tau denominator vanishes")
    return num / den


def tau_recover(cfg: AngleConfig) -> TauValue:
    """tau of a solved configuration, oriented so that Im(tau) > 0."""
    if not eliminant(cfg).is_zero():
        raise ConfigError("eliminant does not vanish")
    if cfg.caseId == "C222":
        a, b, c, d = cfg.params
        if a * b == c * d:
            br = proportional_branch(cfg)
            if br.status != "proportional":
                raise ConfigError("ab = cd and only tau = 0 is common")
            return br.tau
    return normalize_tau(_raw_tau(cfg))


# ---------------------------------------------------------------------------
# proportional branch (C222 with ab = cd)


@dataclass(frozen=True)
class ProportionalResult:
    status: str
    quadratic: tuple | None = None
    tau: TauValue | None = None
    unit_equation_zero: bool = False
    cosine_check: bool = False

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "quadratic": [c.to_json() for c in self.quadratic] if self.quadratic else None,
            "tau": self.tau.to_json() if self.tau else None,
            "unitEquationZero": self.unit_equation_zero,
            "cosineCheck": self.cosine_check,
        }


def _minors_vanish(q1, q2) -> bool:
    return all((q1[i] * q2[j] - q1[j] * q2[i]).is_zero() for i in range(3) for j in range(i + 1, 3))


def proportional_unit_equation(a, b, c, x, y, z) -> Cyclo:
    """Unit equation (d = ab/c eliminated) whose vanishing makes the two quadratics proportional."""
    coeffs = {
        (0, 0, 0): -b * (a - c), (1, 0, 0): c * (a - c), (0, 1, 0): a * (b - c),
        (1, 1, 0): -c * (b - c), (0, 0, 1): -c * (b - c), (1, 0, 1): a * (b - c),
        (0, 1, 1): c * (a - c), (1, 1, 1): -b * (a - c),
    }
    return eval_root_monomials(coeffs, (x, y, z))


def cosine_form(a, b, c, x, y, z) -> Cyclo:
    """Four-cosine combination with theta, mu, eta square roots of x, y, z."""
    th, mu, et = (r.sqrt().to_cyclo() for r in (x, y, z))
    n = lcm(th.order, mu.order, et.order)
    th, mu, et = th.lift(n), mu.lift(n), et.lift(n)

    def re(v):
        return (v + v.conj()) / 2

    return (re(th * mu * et) * (b * (a - c)) - re(mu * et / th) * (c * (a - c))
            - re(th * et / mu) * (a * (b - c)) + re(th * mu / et) * (c * (b - c)))


def proportional_branch(cfg: AngleConfig) -> ProportionalResult:
    if cfg.caseId != "C222":
        raise ConfigError("proportional branch applies to C222 only")
    a, b, c, d = cfg.params
    if a * b != c * d:
        raise ConfigError("requires ab = cd")
    x, y, z = cfg.roots
    q1 = pair_quadratic(a, b, x, y)
    q2 = pair_quadratic(c, d, x, z)
    if not _minors_vanish(q1, q2):
        return ProportionalResult("uniqueZero")
    unit = proportional_unit_equation(a, b, c, x, y, z).is_zero()
    cos = cosine_form(a, b, c, x, y, z).is_zero()
    if not upper_roots(q1):
        raise ArithmeticError("quadratic has no root in the upper half plane")
    tau = TauValue("quadraticRoot", quadratic=q1, x0=x)
    return ProportionalResult("proportional", q1, tau, unit, cos)


# ---------------------------------------------------------------------------
# angle verification


class _QuadAlg:
    """Arithmetic in K[T]/(c2 T^2 + c1 T + c0); elements are (alpha, beta) = alpha + beta T."""

    def __init__(self, q):
        c2, c1, c0 = q
        self.p1 = -c1 / c2
        self.p0 = -c0 / c2

    def mul(self, u, v):
        a0, a1 = u
        b0, b1 = v
        t2 = a1 * b1
        return a0 * b0 + t2 * self.p0, a0 * b1 + a1 * b0 + t2 * self.p1


def verify_angle(tau: TauValue, b0, b1, mu_sq: RootOfUnity) -> bool:
    """True iff the pair (tau+b0, tau+b1) has squared angle mu_sq (None means the vector 1)."""
    m = mu_sq.to_cyclo()
    if tau.kind == "explicitCyclo":
        t = tau.value
        v1 = Cyclo.one() if b0 is INF else t + as_fraction(b0)
        v2 = Cyclo.one() if b1 is INF else t + as_fraction(b1)
        if (v1 * v2.conj() - v1.conj() * v2).is_zero():
            raise ConfigError("vectors are proportional over R")
        return (v1.conj() * v2 - m * v1 * v2.conj()).is_zero()
    alg = _QuadAlg(tau.quadratic)
    xinv = tau.x0.inverse().to_cyclo()
    zero = Cyclo.zero()

    def vec(b, conj):
        if b is INF:
            return (Cyclo.one(), zero)
        return (Cyclo.rational(as_fraction(b)), xinv if conj else Cyclo.one())

    lhs = alg.mul(vec(b0, True), vec(b1, False))
    rhs = alg.mul(vec(b0, False), vec(b1, True))
    diff = (lhs[0] - m * rhs[0], lhs[1] - m * rhs[1])
    return diff[0].is_zero() and diff[1].is_zero()


def c222_permuted(cfg: AngleConfig) -> AngleConfig:
    """Relabel a C222 configuration so that the first two angles swap.

    Uses tau' = (tau+a)/(tau+b); the pair (1, tau') is the reversed (tau+b, tau+a),
    hence its squared angle is 1/y.
    """
    a, b, c, d = cfg.params
    x, y, z = cfg.roots
    return AngleConfig("C222", (-1, -a / b, (a - c) / (c - b), (a - d) / (d - b)), (y.inverse(), x, z))
