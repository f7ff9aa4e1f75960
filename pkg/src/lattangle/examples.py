"""Worked families: an elliptic curve of (2)+(2)+(2) spaces and a genus-5 configuration."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .algebra import Cyclo, RootOfUnity, as_fraction, fraction_str, parse_poly
from .angles import (
    INF,
    AngleConfig,
    TauValue,
    _raw_tau,
    amplitude_to_root,
    eliminant,
    proportional_branch,
    upper_roots,
    verify_angle,
)
from .transcribed import elliptic_poly, genus5_polys, load

MAX_MULTIPLE = 12


class CurveError(ValueError):
    """Raised for points off the curve or degenerate inputs."""


# ---------------------------------------------------------------------------
# Weierstrass curve Y^2 = X^3 + a2 X^2 + a4 X + a6


def _weierstrass() -> tuple[Fraction, Fraction, Fraction]:
    w = load("elliptic.json")["weierstrass"]
    return Fraction(w["a2"]), Fraction(w["a4"]), Fraction(w["a6"])


@dataclass(frozen=True)
class ECPoint:
    kind: str
    X: Fraction | None = None
    Y: Fraction | None = None

    @classmethod
    def affine(cls, X, Y) -> "ECPoint":
        return cls("affine", as_fraction(X), as_fraction(Y))

    @classmethod
    def infinity(cls) -> "ECPoint":
        return cls("infinity")

    @property
    def is_infinity(self) -> bool:
        return self.kind == "infinity"

    def to_json(self):
        if self.is_infinity:
            return "infinity"
        return [fraction_str(self.X), fraction_str(self.Y)]


def on_curve(P: ECPoint) -> bool:
    if P.is_infinity:
        return True
    a2, a4, a6 = _weierstrass()
    return P.Y ** 2 == P.X ** 3 + a2 * P.X ** 2 + a4 * P.X + a6


def _require(P: ECPoint) -> None:
    if not on_curve(P):
        raise CurveError(f"point {P.to_json()} is not on the curve")


def ec_neg(P: ECPoint) -> ECPoint:
    _require(P)
    return P if P.is_infinity else ECPoint("affine", P.X, -P.Y)


def ec_add(P: ECPoint, Q: ECPoint) -> ECPoint:
    _require(P)
    _require(Q)
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    a2, a4, _ = _weierstrass()
    if P.X == Q.X:
        if P.Y != Q.Y or P.Y == 0:
            return ECPoint.infinity()
        lam = (3 * P.X ** 2 + 2 * a2 * P.X + a4) / (2 * P.Y)
    else:
        lam = (Q.Y - P.Y) / (Q.X - P.X)
    X3 = lam ** 2 - a2 - P.X - Q.X
    return ECPoint("affine", X3, lam * (P.X - X3) - P.Y)


def ec_double(P: ECPoint) -> ECPoint:
    return ec_add(P, P)


def ec_mul(n: int, P: ECPoint) -> ECPoint:
    if n < 0:
        return ec_mul(-n, ec_neg(P))
    result, base = ECPoint.infinity(), P
    while n:
        if n & 1:
            result = ec_add(result, base)
        base = ec_double(base)
        n >>= 1
    return result


def j_invariant() -> Fraction:
    a2, a4, a6 = _weierstrass()
    b2, b4, b6, b8 = 4 * a2, 2 * a4, 4 * a6, 4 * a2 * a6 - a4 ** 2
    c4 = b2 ** 2 - 24 * b4
    disc = -b2 ** 2 * b8 - 8 * b4 ** 3 - 27 * b6 ** 2 + 9 * b2 * b4 * b6
    if disc == 0:
        raise CurveError("singular curve")
    return c4 ** 3 / disc


def ec_group(op: str, *args):
    """Dispatch for add, double, neg, on_curve and j_invariant."""
    table = {"add": ec_add, "double": ec_double, "neg": ec_neg, "on_curve": on_curve,
             "j_invariant": j_invariant}
    if op not in table:
        raise ValueError(f"unknown group operation {op!r}")
    return table[op](*args)


def generator() -> ECPoint:
    return ECPoint.affine(*load("elliptic.json")["generator"])


def torsion_point() -> ECPoint:
    return ECPoint.affine(*load("elliptic.json")["torsion"])


def ec_multiples(n: int) -> list[ECPoint]:
    """G, 2G, ..., nG computed by repeated addition."""
    if not 1 <= n <= MAX_MULTIPLE:
        raise ValueError(f"multiples must lie in 1..{MAX_MULTIPLE}")
    G = generator()
    out = [G]
    while len(out) < n:
        out.append(ec_add(out[-1], G))
    return out


# ---------------------------------------------------------------------------
# quadruples


@dataclass(frozen=True)
class Quadruple:
    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction
    valid: bool
    buv: tuple[Fraction, Fraction, Fraction] | None = None

    @property
    def params(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return self.a, self.b, self.c, self.d

    def to_json(self) -> dict:
        out = {"abcd": [fraction_str(v) for v in self.params], "valid": self.valid}
        if self.buv is not None:
            out["buv"] = [fraction_str(v) for v in self.buv]
        return out


def _linear_variant() -> str:
    """Which printed form of the degree-1 equation is used (fixed by test_examples)."""
    return "system_linear_factor"


def _solve_linear_c(a, b, d, key: str) -> Fraction:
    lin = elliptic_poly(key)
    c0 = lin.eval({"a": a, "b": b, "c": 0, "d": d})
    c1 = lin.eval({"a": a, "b": b, "c": 1, "d": d}) - c0
    if c1 == 0:
        raise CurveError("degree-1 equation does not determine c")
    return -c0 / c1


def ec_to_quadruple(P: ECPoint, variant: str | None = None) -> Quadruple:
    _require(P)
    if P.is_infinity:
        raise CurveError("the point at infinity has no quadruple")
    data = load("elliptic.json")

    def ev(key):
        return parse_poly(data[key], ("X", "Y")).eval({"X": P.X, "Y": P.Y})

    bden, uden = ev("map_b_den"), ev("map_u_den")
    if bden == 0 or uden == 0:
        raise CurveError("map denominator vanishes")
    # the stored numerator of u already carries the leading sign
    b, u, v = ev("map_b_num") / bden, ev("map_u_num") / uden, Fraction(1)
    if elliptic_poly("buv_quartic", ("b", "u", "v")).eval({"b": b, "u": u, "v": v}) != 0:
        raise ArithmeticError("(b, u, v) is off the plane quartic")
    a, d = b + u, b + v
    try:
        c = _solve_linear_c(a, b, d, variant or _linear_variant())
    except CurveError:
        return Quadruple(a, b, Fraction(0), d, False, (b, u, v))
    vals = (a, b, c, d)
    valid = 0 not in vals and len(set(vals)) == 4
    return Quadruple(a, b, c, d, valid, (b, u, v))


def system_values(q: Quadruple, variant: str | None = None) -> tuple[Fraction, Fraction]:
    point = dict(zip("abcd", q.params))
    return (elliptic_poly(variant or _linear_variant()).eval(point),
            elliptic_poly("system_quartic").eval(point))


def elliptic_roots() -> tuple[RootOfUnity, RootOfUnity, RootOfUnity]:
    return tuple(amplitude_to_root(Fraction(s)) for s in load("elliptic.json")["angles"])


def closed_form_tau(q: Quadruple) -> Cyclo:
    """tau from the closed expression in a,b,c,d over Q(i, sqrt 2)."""
    z8 = Cyclo.root(1, 8)
    s2 = z8 + z8.conj()
    i = Cyclo.root(1, 4)
    a, b, c, d = q.params
    den = s2 * (s2 * (c - b) + (a - b - c + d))
    if den.is_zero():
        raise CurveError("closed-form denominator vanishes")
    return (1 - i) * (a * b - c * d) / den


def ec_verify(P: ECPoint) -> dict:
    q = ec_to_quadruple(P)
    if not q.valid:
        raise CurveError(f"invalid quadruple {q.to_json()['abcd']}")
    checks = []

    def check(name, ok, **extra):
        checks.append({"name": name, "ok": bool(ok), **extra})

    lin, quart = system_values(q)
    check("system", lin == 0 and quart == 0, variant=_linear_variant())
    cfg = AngleConfig("C222", q.params, elliptic_roots())
    check("eliminant", eliminant(cfg).is_zero())
    tau = _raw_tau(cfg)
    closed = closed_form_tau(q)
    orientation = "same" if closed == tau else "conjugate" if closed == tau.conj() else "mismatch"
    check("closedFormTau", orientation != "mismatch", orientation=orientation)
    tv = TauValue.explicit(tau)
    x, y, z = cfg.roots
    pairs = ((INF, 0, x), (q.a, q.b, y), (q.c, q.d, z))
    check("angles", all(verify_angle(tv, b0, b1, m) for b0, b1, m in pairs))
    return {
        "point": P.to_json(),
        "quadruple": q.to_json(),
        "tau": tv.to_json(),
        "phi": fraction_str(phi_invariant(q)),
        "checks": checks,
        "ok": all(c["ok"] for c in checks),
    }


def phi_invariant(q: Quadruple) -> Fraction:
    data = load("elliptic.json")
    point = dict(zip("abcd", q.params))
    num = parse_poly(data["phi_num"], "abcd").eval(point)
    den = parse_poly(data["phi_den"], "abcd").eval(point)
    if den == 0:
        raise ZeroDivisionError("phi denominator vanishes")
    phi = num / den
    if q.buv is not None:
        b, _, v = q.buv
        if phi != 2 * v ** 2 / (2 * b ** 2 + v ** 2):
            raise ArithmeticError("the two forms of phi disagree")
    return phi


def ec_sweep(n: int, verify: bool = False) -> list[dict]:
    out = []
    for k, P in enumerate(ec_multiples(n), start=1):
        q = ec_to_quadruple(P)
        rec = {"multiple": k, "point": P.to_json(), "quadruple": q.to_json()}
        if q.valid:
            rec["phi"] = fraction_str(phi_invariant(q))
            if verify:
                rec["report"] = ec_verify(P)
        out.append(rec)
    return out


# ---------------------------------------------------------------------------
# genus-5 configuration


def genus5_radius() -> mpmath.mpf:
    s5 = mpmath.sqrt(5)
    return (mpmath.mpf(9) / 2 + s5 / 2 + mpmath.sqrt(30 + 22 * s5) / 4
            - mpmath.sqrt(150 + 110 * s5) / 4)


def genus5_conventions() -> list[tuple[RootOfUnity, ...]]:
    """Assignments of the three amplitudes to (x, y, z), up to order and global sign."""
    amps = [Fraction(s) for s in load("genus5.json")["amplitudes"]]
    out = []
    for perm in itertools.permutations(amps):
        for sign in (1, -1):
            roots = tuple(amplitude_to_root(sign * a) for a in perm)
            if roots not in out:
                out.append(roots)
    return out


def genus5_select_convention() -> tuple[RootOfUnity, ...]:
    """First convention annihilating the eliminant at both rational points."""
    data = load("genus5.json")
    for roots in genus5_conventions():
        if all(eliminant(AngleConfig("C222", tuple(p), roots)).is_zero()
               for p in (data["trivial_point"], data["nontrivial_point"])):
            return roots
    raise ArithmeticError("no amplitude convention annihilates the eliminant")


def genus5_verify(tol: float = 1e-6) -> dict:
    data = load("genus5.json")
    f1, f2 = genus5_polys()
    checks = []

    def check(name, ok, **extra):
        checks.append({"name": name, "ok": bool(ok), **extra})

    for key in ("trivial_point", "nontrivial_point"):
        pt = dict(zip("abcd", map(Fraction, data[key])))
        check(f"f1,f2 at {key}", f1.eval(pt) == 0 and f2.eval(pt) == 0)
    roots = genus5_select_convention()
    convention = {"index": genus5_conventions().index(roots), "roots": [r.to_json() for r in roots]}
    point = tuple(Fraction(v) for v in data["nontrivial_point"])
    cfg = AngleConfig("C222", point, roots)
    check("eliminant", eliminant(cfg).is_zero())
    br = proportional_branch(cfg)
    check("proportional", br.status == "proportional" and br.unit_equation_zero and br.cosine_check)
    tau = br.tau
    with mpmath.workprec(128):
        re, im = upper_roots(br.quadratic)[tau.branch]
        r = genus5_radius()
        target = r * mpmath.expj(3 * mpmath.pi / 5)
        err = abs(mpmath.mpc(re, im) - target)
    check("closedForm", err < tol, radius=mpmath.nstr(r, 12), error=mpmath.nstr(err, 5))
    a, b, c, d = point
    x, y, z = roots
    pairs = ((INF, 0, x), (a, b, y), (c, d, z), (d, c, z.inverse()))
    check("angles", all(verify_angle(tau, b0, b1, m) for b0, b1, m in pairs),
          pairs=[[None if b0 is INF else fraction_str(b0), fraction_str(b1), m.to_json()]
                 for b0, b1, m in pairs])
    return {"point": [fraction_str(v) for v in point], "convention": convention,
            "tau": tau.to_json(), "checks": checks,
            "ok": all(ch["ok"] for ch in checks)}

