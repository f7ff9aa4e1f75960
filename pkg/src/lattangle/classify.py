"""Classification of spaces with a rational 4-tuple: the bounded-order search,
the two dodecagonal spaces, the 5-tuple obstruction and extra-angle sweeps."""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    Cyclo,
    MPoly,
    RootOfUnity,
    divisors,
    lcm,
    power_table,
    rank,
    rational_ratio,
    ru_make,
    solve_rational,
)
from .angles import (
    INF,
    AngleConfig,
    TauValue,
    eliminant,
    pair_squared_angle,
    tau_recover,
    verify_angle,
)
from .spaces import _moebius_related
from .uniteq import monomial_linear_solve

MAX_SEARCH_ORDER = 840

TAU1_DATA = ((1, -1), (ru_make(3, 12), ru_make(1, 12), ru_make(10, 12)))
TAU2_DATA = ((1, 3), (ru_make(9, 12), ru_make(4, 12), ru_make(1, 12)))


def _z12(k: int) -> Cyclo:
    return Cyclo.root(k, 12)


def tau1() -> Cyclo:
    return -_z12(3) + _z12(2) + _z12(1) - 1


def tau2() -> Cyclo:
    return _z12(3) - _z12(2) + _z12(1) - 1


# ---------------------------------------------------------------------------
# case 4 search


@dataclass(frozen=True)
class Case4Solution:
    """Tuple (1, tau, tau+a, tau+b) with squared arguments (x, y, z) and a/b = ratio."""

    roots: tuple[RootOfUnity, RootOfUnity, RootOfUnity]
    ratio: Fraction
    cls: str

    def config(self) -> AngleConfig:
        return AngleConfig("C4", (self.ratio, 1), self.roots)

    def to_json(self) -> dict:
        return {"roots": [r.to_json() for r in self.roots], "ratio": str(self.ratio), "class": self.cls}


def parse_orders(text: str) -> list[int]:
    """"div:N" (divisors of N), "a..b" (range) or a comma list."""
    text = text.strip()
    if text.startswith("div:"):
        return divisors(int(text[4:]))
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return sorted({int(t) for t in text.split(",") if t})


def _search_exponents(orders: Sequence[int]) -> tuple[int, list[int]]:
    orders = sorted(set(orders))
    if not orders or any(o < 1 or o > 120 for o in orders):
        raise ValueError("orders must lie in 1..120")
    n = lcm(*orders)
    if n > MAX_SEARCH_ORDER:
        raise ValueError(f"common order {n} of the order set exceeds {MAX_SEARCH_ORDER}")
    ks = [k for k in range(1, n) if n // math.gcd(k, n) in orders]
    return n, ks


def _is_superrect(ks: Sequence[int], n: int) -> bool:
    if n % 2:
        return False
    h = n // 2
    x, y, z = ks
    return any(v % n == h for v in (x, y, z, x - y, x - z, y - z))


def _shard(args) -> list[tuple[int, int, int, int, int]]:
    """Solutions with x = zeta_n^kx: tuples (kx, ky, kz, a, b) with a/b rational."""
    n, kx, ks = args
    table = np.array(power_table(n), dtype=np.int64)
    others = [k for k in ks if k != kx]
    pairs = np.array([(ky, kz) for ky in others for kz in others if ky != kz], dtype=np.int64)
    if len(pairs) == 0:
        return []
    ky, kz = pairs[:, 0], pairs[:, 1]
    U = table[kx] - table[(kx + ky) % n] - table[kz] + table[(kz + ky) % n]
    V = table[ky] - table[(ky + kz) % n] - table[kx] + table[(kx + kz) % n]
    piv = np.argmax(U != 0, axis=1)
    rows = np.arange(len(pairs))
    up = U[rows, piv]
    vp = V[rows, piv]
    ok = np.all(V * up[:, None] == U * vp[:, None], axis=1) & (-vp != up)
    out = []
    for r in np.nonzero(ok)[0]:
        a, b = -int(vp[r]), int(up[r])
        g = math.gcd(a, b)
        if b < 0:
            g = -g
        out.append((kx, int(ky[r]), int(kz[r]), a // g, b // g))
    return out


@lru_cache(maxsize=None)
def _dodecagonal_refs() -> tuple[tuple[str, Cyclo], ...]:
    t1, t2 = tau1(), tau2()
    return (("tau1", t1), ("tau1", t1.conj()), ("tau2", t2), ("tau2", t2.conj()))


def dodecagonal_class(tau: Cyclo) -> str | None:
    """tau1 / tau2 when V(tau) is equivalent to that dodecagonal space."""
    for name, ref in _dodecagonal_refs():
        if _moebius_related(tau, ref):
            return name
    return None


def classify_tuple(ks: Sequence[int], n: int, ratio: Fraction) -> str:
    if _is_superrect(ks, n):
        return "superrectangular"
    x, y = Cyclo.root(ks[0], n), Cyclo.root(ks[1], n)
    tau = x * (y - 1) * ratio / (x - y)
    return "dodecagonal" if dodecagonal_class(tau) else "other"


def search_case4(orders: Sequence[int], jobs: int = 1) -> list[Case4Solution]:
    """All C4 solutions with x, y, z distinct, != 1, of the given orders, sorted."""
    n, ks = _search_exponents(orders)
    tasks = [(n, kx, ks) for kx in ks]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_shard, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    else:
        chunks = [_shard(t) for t in tasks]
    raw = sorted(itertools.chain.from_iterable(chunks))
    out = []
    for kx, ky, kz, a, b in raw:
        ratio = Fraction(a, b)
        cls = classify_tuple((kx, ky, kz), n, ratio)
        out.append(Case4Solution((ru_make(kx, n), ru_make(ky, n), ru_make(kz, n)), ratio, cls))
    return out


def orbit_key(sol: Case4Solution) -> tuple[int, tuple[int, int, int]]:
    """Canonical triple under Galois action, conjugation and reordering of the 4-tuple."""
    n = lcm(*(r.den for r in sol.roots))
    s = [0] + [r.num * (n // r.den) for r in sol.roots]
    units = [u for u in range(1, n) if math.gcd(u, n) == 1] or [1]
    best = None
    for perm in itertools.permutations(range(4)):
        base = s[perm[0]]
        t = [(s[j] - base) % n for j in perm[1:]]
        for u in units:
            cand = tuple((v * u) % n for v in t)
            if best is None or cand < best:
                best = cand
    return n, best


def summarize_case4(solutions: Iterable[Case4Solution]) -> dict:
    sols = list(solutions)
    counts = {"superrectangular": 0, "dodecagonal": 0, "other": 0}
    for s in sols:
        counts[s.cls] += 1
    dodeca = [s for s in sols if s.cls == "dodecagonal"]
    classes = set()
    for s in dodeca:
        tau = tau_recover(s.config()).value
        classes.add(dodecagonal_class(tau))
    orbits = sorted({orbit_key(s) for s in dodeca})
    return {"total": len(sols), "counts": counts, "dodecagonalClasses": sorted(classes),
            "dodecagonalOrbits": [[n, list(k)] for n, k in orbits]}


def verify_case4_solution(sol: Case4Solution) -> bool:
    """Eliminant zero and all six pairwise angles of (1, tau, tau+a, tau+b) rational."""
    cfg = sol.config()
    if not eliminant(cfg).is_zero():
        return False
    tau = tau_recover(cfg).value
    vecs = [Cyclo.one(), tau, tau + sol.ratio, tau + 1]
    return all(pair_squared_angle(u, v) is not None for u, v in itertools.combinations(vecs, 2))


# ---------------------------------------------------------------------------
# dodecagonal spaces


def _coords_sqrt3_i(v: Cyclo) -> list[Fraction]:
    """Coordinates of v in the basis (1, sqrt 3, i, i sqrt 3) of Q(zeta12)."""
    s3 = Cyclo.root(1, 12) + Cyclo.root(-1, 12)
    i = Cyclo.root(3, 12)
    basis = [Cyclo.one(12), s3, i, i * s3]
    sol = solve_rational([list(b.lift(12).coords) for b in basis], list(v.lift(12).coords))
    if sol is None:
        raise ValueError("element is not in Q(zeta12)")
    return sol


def _det4(cols: list[list]) -> object:
    """Determinant by cofactor expansion (entries may be MPoly or Fraction)."""
    m = [list(r) for r in zip(*cols)]

    def det(mat):
        if len(mat) == 1:
            return mat[0][0]
        total = 0
        for j, entry in enumerate(mat[0]):
            minor = [row[:j] + row[j + 1:] for row in mat[1:]]
            term = entry * det(minor)
            total = total + term if j % 2 == 0 else total - term
        return total

    return det(m)


def _mul_sqrt3_i(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0 * b0 + a1 * b1 * 3 - a2 * b2 - a3 * b3 * 3,
            a0 * b1 + a1 * b0 - a2 * b3 - a3 * b2,
            a0 * b2 + a2 * b0 + a1 * b3 * 3 + a3 * b1 * 3,
            a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1)


def determinant_sign_invariance() -> dict:
    """det(1, v1, v2, v1 v2) in the basis (1, sqrt3, i, i sqrt3) under sign flips of coordinates 1..3.

    Checked symbolically in the eight coordinates of v1, v2.
    """
    names = [f"p{i}" for i in range(4)] + [f"q{i}" for i in range(4)]
    g = MPoly.gens(*names)
    P, Q = g[:4], g[4:]
    one = (MPoly.const(1, names), MPoly(names), MPoly(names), MPoly(names))
    D = _det4([list(one), list(P), list(Q), list(_mul_sqrt3_i(P, Q))])
    results = {}
    for eps in itertools.product((1, -1), repeat=3):
        sub = {}
        for j, e in zip((1, 2, 3), eps):
            sub[f"p{j}"] = g[j] * e
            sub[f"q{j}"] = g[4 + j] * e
        results["".join("+" if e > 0 else "-" for e in eps)] = (D.substitute(sub) - D).is_zero()
    return results


def dodecagonal_report() -> dict:
    t1, t2 = tau1(), tau2()
    rec1 = tau_recover(AngleConfig("C4", *TAU1_DATA)).value
    rec2 = tau_recover(AngleConfig("C4", *TAU2_DATA)).value
    # argument claims: v / conj(v) = exp(2 i arg v)
    claims = [
        ("tau1", t1, Fraction(1, 4)), ("tau1+1", t1 + 1, Fraction(1, 12)), ("tau1-1", t1 - 1, Fraction(5, 6)),
        ("tau2", t2, Fraction(3, 4)), ("tau2+1", t2 + 1, Fraction(1, 3)), ("tau2+3", t2 + 3, Fraction(1, 12)),
    ]
    args = {name: (v / v.conj()) == ru_make(q.numerator, q.denominator).to_cyclo() for name, v, q in claims}
    coords = [_coords_sqrt3_i(v) for v in (Cyclo.one(12), t1, t2, t1 * t2)]
    qrank = rank(coords)
    inv = determinant_sign_invariance()
    galois = {}
    for name, t in (("tau1", t1), ("tau2", t2)):
        for k in (1, 5, 7, 11):
            galois[f"{name}:sigma{k}"] = _moebius_related(t, t.lift(12).galois(k))
    ok = (rec1 == t1 and rec2 == t2 and all(args.values()) and qrank == 4
          and all(inv.values()) and all(galois.values()))
    return {
        "tau1Recovered": rec1 == t1,
        "tau2Recovered": rec2 == t2,
        "arguments": args,
        "rank(1,tau1,tau2,tau1*tau2)": qrank,
        "determinantSignInvariance": inv,
        "galoisHomothetic": galois,
        "fiveTupleExtensions": {"tau1": no_five_tuple_extension(t1, (0, 1, -1)),
                                "tau2": no_five_tuple_extension(t2, (0, 1, 3))},
        "ok": ok,
    }


def extension_shifts(tau: Cyclo) -> list[Fraction]:
    """Rational c with (1, tau + c) a rational angle: c = (tau - x conj tau)/(x - 1) for x in mu_12."""
    out = set()
    for k in range(1, 12):
        x = Cyclo.root(k, 12)
        c = (tau - x * tau.conj()) / (x - 1)
        if c.is_rational():
            out.add(c.rational_value())
    return sorted(out)


def no_five_tuple_extension(tau: Cyclo, shifts: Sequence[int]) -> bool:
    """The vectors tau + c forming a rational angle with 1 are exactly the 4-tuple's own."""
    return set(extension_shifts(tau)) == set(Fraction(s) for s in shifts)


# ---------------------------------------------------------------------------
# five-tuple obstruction and extra angles


@dataclass(frozen=True)
class FiveTupleSolution:
    theta0: RootOfUnity
    x3: RootOfUnity
    a3: Fraction

    def to_json(self) -> dict:
        return {"theta0": self.theta0.to_json(), "x3": self.x3.to_json(), "a3": str(self.a3)}


def fivetuple_search(bound: int = 24) -> list[FiveTupleSolution]:
    """Solutions of theta0 - x3/theta0 - a3 x3 + a3 = 0, a3 rational not in {0, +-1}."""
    out = []
    for k in range(bound):
        th = ru_make(k, bound)
        if th.den <= 2:
            continue
        T = th.to_cyclo(bound)
        for j in range(1, bound):
            x3 = ru_make(j, bound)
            X = x3.to_cyclo(bound)
            a3 = (X / T - T) / (1 - X)
            if a3.is_rational():
                q = a3.rational_value()
                if q not in (0, 1, -1):
                    out.append(FiveTupleSolution(th, x3, q))
    return out


@dataclass(frozen=True)
class ExtraAngle:
    generator: RootOfUnity
    y: RootOfUnity
    b0: Fraction | None
    b1: Fraction | None
    family: bool = False

    def to_json(self) -> dict:
        out = {"generator": self.generator.to_json(), "y": self.y.to_json()}
        if self.family:
            out["family"] = True
        else:
            out["b0"], out["b1"] = str(self.b0), str(self.b1)
        return out


def _non_degenerate(b0: Fraction, b1: Fraction) -> bool:
    return b0 != b1 and b0 not in (0, 1, -1) and b1 not in (0, 1, -1)


def superrect_extra_angles(D: int = 30) -> dict:
    """Extra angles (theta0 + b0 ..) in the superrectangular family, generator and y1 of order | D."""
    if D > 60:
        raise ValueError("D must be at most 60")
    found: list[ExtraAngle] = []
    for k in range(D):
        th = ru_make(k, D)
        if th.den <= 2:
            continue
        T = th.to_cyclo(D)
        for j in range(1, D):
            y = ru_make(j, D)
            Y = y.to_cyclo(D)
            res = monomial_linear_solve(1 - Y, T - Y / T, 1 / T - T * Y, 1 - Y)
            if res.family:
                found.append(ExtraAngle(th, y, None, None, True))
            for s in res.solutions:
                if _non_degenerate(s.u, s.v):
                    found.append(ExtraAngle(th, y, s.u, s.v))
    unexpected = [e for e in found if not (6 % lcm(e.generator.den, e.y.den) == 0 or e.y == ru_make(1, 2))]
    return {"D": D, "solutions": [e.to_json() for e in found],
            "unexpected": [e.to_json() for e in unexpected], "ok": not unexpected}


def _pair_solutions(tau: Cyclo) -> list[tuple[RootOfUnity, Fraction, Fraction]]:
    out = []
    tb = tau.conj()
    for k in range(1, 12):
        y = Cyclo.root(k, 12)
        res = monomial_linear_solve((y - 1) * tau * tb, y * tb - tau, y * tau - tb, y - 1)
        if res.family:
            raise ArithmeticError("unexpected family of angles in a dodecagonal space")
        for s in res.solutions:
            if s.u != s.v:
                out.append((ru_make(k, 12), s.u, s.v))
    return out


def dodecagonal_extra_angles() -> dict:
    report = {}
    ok = True
    for name, tau, allowed in (("tau1", tau1(), (0, 1, -1)), ("tau2", tau2(), (0, 1, 3))):
        sols = _pair_solutions(tau)
        pairs = sorted({tuple(sorted((b0, b1))) for _, b0, b1 in sols})
        expected = sorted(tuple(sorted(map(Fraction, p))) for p in itertools.combinations(allowed, 2))
        verified = all(verify_angle(TauValue.explicit(tau), b0, b1, y) for y, b0, b1 in sols)
        match = pairs == expected
        ok = ok and match and verified
        report[name] = {
            "solutions": [{"y": y.to_json(), "b0": str(b0), "b1": str(b1)} for y, b0, b1 in sols],
            "pairs": [[str(a), str(b)] for a, b in pairs],
            "matchesExpected": match,
            "anglesVerified": verified,
            "noFiveTuple": no_five_tuple_extension(tau, allowed),
        }
    report["ok"] = ok and all(report[n]["noFiveTuple"] for n in ("tau1", "tau2"))
    return report


def classification_table() -> list[dict]:
    return [
        {"angles": "inf(2)", "description": "homothetic to an imaginary quadratic field other than Q(sqrt-1), Q(sqrt-3)",
         "type": "CM and rectangular", "verifiedBy": "spaces.cm_catalog / spaces.find_rational_angles"},
        {"angles": "inf(4)", "description": "homothetic to Q(sqrt-1)", "field": "Q(sqrt-1)",
         "type": "CM and superrectangular", "verifiedBy": "spaces.cm_catalog(1)"},
        {"angles": "inf(6)", "description": "homothetic to Q(sqrt-3)", "field": "Q(sqrt-3)",
         "type": "CM and superrectangular", "verifiedBy": "spaces.cm_catalog(3)"},
        {"angles": "(4)", "description": "non-CM superrectangular space", "type": "superrectangular",
         "reference": "exact type (4)", "verifiedBy": "classify.search_case4 / classify.superrect_extra_angles"},
        {"angles": "(4)", "description": "homothetic to one of the two dodecagonal spaces", "type": "dodecagonal",
         "verifiedBy": "classify.dodecagonal_report / classify.dodecagonal_extra_angles"},
        {"angles": "(3)+(2)", "description": "expected elliptic families and a finite list", "type": None,
         "verifiedBy": "coset.verify_families"},
        {"angles": "(2)+(2)+(2)", "description": "expected elliptic families and a finite list", "type": None,
         "verifiedBy": "examples.ec_verify / examples.genus5_verify"},
    ]
