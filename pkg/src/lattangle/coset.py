"""Order bounds for solutions of the eliminants: bound constants, the
decomposition of a solution by the p-part of its order, short vectors of
v Z + M Z^3, and detection of one-parameter families (x t^w1, y t^w2, z t^w3)."""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import (
    Cyclo,
    MPoly,
    RootOfUnity,
    factorize,
    lcm,
    real_sign,
    ru_make,
)
from .spaces import _moebius_related
from .angles import (
    INF,
    AngleConfig,
    TauValue,
    case_polynomial,
    eliminant,
    eliminant_coefficients,
    eval_root_monomials,
    proportional_branch,
    tau_recover,
    upper_roots,
    verify_angle,
)

SHORT_VECTOR_CAP = 10_000
MIDDLE_PRIMES = (7, 11, 13, 17, 19, 23, 29, 31, 37)


def constants() -> dict[str, int]:
    """N0 and the resulting bound on the order of any solution, both as exact integers."""
    middle = math.prod(MIDDLE_PRIMES)
    return {"N0": 2**6 * 3**4 * 5**3 * middle**2, "thmBound": 2**7 * 3**4 * 5**3 * middle**2}


@dataclass(frozen=True)
class SolutionPoint:
    cfg: AngleConfig
    order: int

    @classmethod
    def of(cls, cfg: AngleConfig) -> "SolutionPoint":
        if not eliminant(cfg).is_zero():
            raise ValueError("configuration does not solve its eliminant")
        return cls(cfg, cfg.order())

    def to_json(self) -> dict:
        return {"cfg": self.cfg.to_json(), "order": self.order}

    @classmethod
    def from_json(cls, data) -> "SolutionPoint":
        cfg = AngleConfig.from_json(data["cfg"] if "cfg" in data else data)
        return cls(cfg, cfg.order())


# ---------------------------------------------------------------------------
# gamma decomposition


def _split_exponent(k: int, n: int, q: int) -> tuple[int, int]:
    """zeta_n^k = zeta_q^s * zeta_{n/q}^u for q || n with gcd(q, n/q) = 1."""
    r = n // q
    # 1 = alpha r + beta q
    alpha = pow(r, -1, q)
    beta = (1 - alpha * r) // q
    return (k * alpha) % q, (k * beta) % r


def gamma_decompose(sol: SolutionPoint, p: int, m: int) -> list[Cyclo]:
    """Group the eliminant by the zeta_{p^m} part of each monomial.

    For m = 1 the p groups gamma_i collect the terms with (v, e) = i mod p,
    so sum_i zeta_p^i gamma_i is the eliminant and the gamma_i are all equal
    when it vanishes.  For m >= 2 there are p^(m-1) groups, each term carrying
    zeta_{p^m}^((v, e) - i); when the eliminant vanishes every gamma_i does.
    """
    n = sol.order
    q = p**m
    if n % q or (n // q) % p == 0:
        raise ValueError(f"{p}^{m} does not divide the order {n} exactly")
    r = n // q
    coeffs = eliminant_coefficients(sol.cfg.caseId, sol.cfg.params)
    ks = [root.num * (n // root.den) for root in sol.cfg.roots]
    split = [_split_exponent(k, n, q) for k in ks]
    v = [s for s, _ in split]
    groups = p if m == 1 else p ** (m - 1)
    gammas = [Cyclo.zero(n) for _ in range(groups)]
    for e, c in coeffs.items():
        s = sum(vi * ei for vi, ei in zip(v, e)) % q
        coprime = sum(u * ei for (_, u), ei in zip(split, e)) % r
        term = Cyclo.root(coprime, r).lift(n) * c
        if m == 1:
            gammas[s] = gammas[s] + term
        else:
            i = s % groups
            gammas[i] = gammas[i] + term * Cyclo.root(s - i, q).lift(n)
    return gammas


def gamma_sum(gammas: Sequence[Cyclo], p: int, m: int, n: int) -> Cyclo:
    """sum_i zeta^i gamma_i with zeta = zeta_p (m = 1) or zeta_{p^m}."""
    q = p if m == 1 else p**m
    total = Cyclo.zero(n)
    for i, g in enumerate(gammas):
        total = total + Cyclo.root(i, q).lift(n) * g
    return total


def p_part_vector(sol: SolutionPoint, p: int, m: int) -> tuple[int, int, int]:
    """Exponents of the zeta_{p^m} parts of (x, y, z)."""
    n = sol.order
    q = p**m
    return tuple(_split_exponent(root.num * (n // root.den), n, q)[0] for root in sol.cfg.roots)


# ---------------------------------------------------------------------------
# short vectors


def _sv_key(w):
    return (sum(x * x for x in w), tuple(w))


def _orient(w: tuple[int, ...]) -> tuple[int, ...]:
    first = next(x for x in w if x)
    return w if first > 0 else tuple(-x for x in w)


def short_vector(v: Sequence[int], M: int) -> tuple[int, int, int]:
    """Shortest nonzero vector of v Z + M Z^3.

    Each coset lambda v + M Z^3 has its shortest member at the centered
    residues, so the search costs O(M).  Ties: first nonzero coordinate
    positive, then lexicographically smallest.
    """
    v = tuple(int(x) for x in v)
    if len(v) != 3:
        raise ValueError("v must have three coordinates")
    if M < 1 or M > SHORT_VECTOR_CAP:
        raise ValueError(f"M must lie in 1..{SHORT_VECTOR_CAP}")
    if all(x % M == 0 for x in v):
        raise ValueError("v is 0 mod M")
    cands = {(M, 0, 0), (0, M, 0), (0, 0, M)}
    for lam in range(1, M):
        res = [(lam * x) % M for x in v]
        if not any(res):
            continue
        options = []
        for r in res:
            if 2 * r < M:
                options.append((r,))
            elif 2 * r > M:
                options.append((r - M,))
            else:
                options.append((r, r - M))
        for w in itertools.product(*options):
            cands.add(_orient(w))
    best = min(cands, key=_sv_key)
    if not short_vector_bound_holds(best, M, v):
        raise ArithmeticError("short vector exceeds the Hermite bound")
    return best


def short_vector_bound_holds(w: Sequence[int], M: int, v: Sequence[int] | None = None) -> bool:
    """Hermite bound |w|^6 <= 2 det^2 for the lattice v Z + M Z^3, exactly.

    det = M^3 / ord(v mod M), which is M^2 (bound (sqrt 2 M^2)^(1/3)) when v
    has full order, e.g. for M prime.
    """
    n2 = sum(x * x for x in w)
    order = M // math.gcd(M, *v) if v is not None else M
    det = Fraction(M**3, order)
    return n2**3 <= 2 * det * det


def short_vector_bruteforce(v: Sequence[int], M: int) -> tuple[int, int, int]:
    """Reference enumeration over the cube [-M, M]^3 (small M only)."""
    members = {tuple((lam * x) % M for x in v) for lam in range(M)}
    best = None
    for w in itertools.product(range(-M, M + 1), repeat=3):
        if not any(w) or tuple(x % M for x in w) not in members:
            continue
        w = _orient(w)
        if best is None or _sv_key(w) < _sv_key(best):
            best = w
    return best


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True)
class FamilyWitness:
    w: tuple[int, int, int]
    basePoint: SolutionPoint

    def specialize(self, t: RootOfUnity) -> AngleConfig:
        x, y, z = self.basePoint.cfg.roots
        roots = tuple(r * t**wi for r, wi in zip((x, y, z), self.w))
        return AngleConfig(self.basePoint.cfg.caseId, self.basePoint.cfg.params, roots)

    def to_json(self) -> dict:
        return {"w": list(self.w), "basePoint": self.basePoint.to_json()}


def coset_family_test(sol: SolutionPoint, w: Sequence[int]) -> FamilyWitness | None:
    """Witness when (x t^w1, y t^w2, z t^w3) solves the eliminant identically in t.

    The substituted eliminant is a Laurent polynomial in t whose t^k coefficient
    collects the monomials with (w, e) = k; each must vanish.
    """
    w = tuple(int(x) for x in w)
    coeffs = eliminant_coefficients(sol.cfg.caseId, sol.cfg.params)
    by_degree: dict[int, dict] = {}
    for e, c in coeffs.items():
        by_degree.setdefault(sum(a * b for a, b in zip(w, e)), {})[e] = c
    for group in by_degree.values():
        if not eval_root_monomials(group, sol.cfg.roots).is_zero():
            return None
    return FamilyWitness(w, sol)


def family_search(sol: SolutionPoint, max_norm_sq: int = 9) -> list[FamilyWitness]:
    """All nonzero w (up to sign) with |w|^2 <= max_norm_sq giving a family."""
    r = math.isqrt(max_norm_sq)
    out = []
    for w in itertools.product(range(-r, r + 1), repeat=3):
        if not any(w) or _orient(w) != w or sum(x * x for x in w) > max_norm_sq:
            continue
        fw = coset_family_test(sol, w)
        if fw:
            out.append(fw)
    return out


def _exceeds_threshold(p: int, m: int) -> bool:
    return (p == 2 and m > 6) or p ** (m - 1) >= 39


def certify(sol: SolutionPoint) -> dict:
    """Per prime power of the order: gamma vanishing, short vector, family witness.

    A prime power beyond the bound thresholds must come with a family witness;
    otherwise the record is marked as a contract violation.
    """
    out = []
    for p, m in factorize(sol.order):
        gammas = gamma_decompose(sol, p, m)
        v = p_part_vector(sol, p, m)
        entry = {"p": p, "m": m, "v": list(v), "gammasZero": all(g.is_zero() for g in gammas),
                 "gammasEqual": all(g == gammas[0] for g in gammas)}
        if any(x % p for x in v):
            w = short_vector(v, p)
            fw = coset_family_test(sol, w)
            entry["shortVector"] = list(w)
            entry["family"] = fw is not None
        else:
            entry["family"] = False
        entry["contractViolation"] = _exceeds_threshold(p, m) and not entry["family"]
        out.append(entry)
    return {"order": sol.order, "primes": out}


# ---------------------------------------------------------------------------
# the two infinite families


def famiglia1_config(a, t: RootOfUnity) -> AngleConfig:
    """C222 with (a, 1, -1, -a), x = -1, y = z = t."""
    a = Fraction(a)
    return AngleConfig("C222", (a, 1, -1, -a), (ru_make(1, 2), t, t))


def famiglia2_config(b, t: RootOfUnity) -> AngleConfig:
    """C4 with a = 2b and roots (t, -t, t^2)."""
    b = Fraction(b)
    return AngleConfig("C4", (2 * b, b), (t, t * ru_make(1, 2), t * t))


def famiglia1_symbolic_zero() -> bool:
    P = case_polynomial("C222")
    a, b, t = MPoly.gens("a", "b", "t")
    sub = P.substitute({"c": -b, "d": -a, "x": -1, "y": t, "z": t})
    return sub.is_zero()


def famiglia2_symbolic_zero() -> bool:
    P = case_polynomial("C4")
    b, t = MPoly.gens("b", "t")
    sub = P.substitute({"a": b * 2, "x": t, "y": -t, "z": t * t})
    return sub.is_zero()


def famiglia1_has_imaginary_root(a, t: RootOfUnity) -> bool:
    """tau^2 + (a-1) i kappa tau - a = 0 has a root i s (s > 0) iff (a-1)^2 kappa^2 >= 4a,
    where (t+1)/(t-1) = i kappa."""
    y = t.to_cyclo()
    i = Cyclo.root(1, 4)
    kappa = (y + 1) / ((y - 1) * i)
    disc = kappa * kappa * (Fraction(a) - 1) ** 2 - 4 * Fraction(a)
    return real_sign(disc) >= 0


def _sample_roots(rng: random.Random, count: int, bad) -> list[RootOfUnity]:
    out = []
    while len(out) < count:
        n = rng.randint(3, 40)
        k = rng.randrange(1, n)
        r = ru_make(k, n)
        if not bad(r) and r not in out:
            out.append(r)
    return out


def verify_families(samples: int = 20, seed: int = 1) -> dict:
    rng = random.Random(seed)
    report = {"famiglia1": {"symbolicZero": famiglia1_symbolic_zero(), "samples": []},
              "famiglia2": {"symbolicZero": famiglia2_symbolic_zero(), "samples": []}}
    for t in _sample_roots(rng, samples, lambda r: r.den <= 2):
        a = -Fraction(rng.randint(1, 9), rng.randint(1, 5))
        cfg = famiglia1_config(a, t)
        br = proportional_branch(cfg)
        tau = br.tau
        re, im = tau.approx(128)
        ok = (eliminant(cfg).is_zero() and br.status == "proportional"
              and famiglia1_has_imaginary_root(a, t) and abs(re) < 1e-30 and im > 0
              and verify_angle(tau, INF, 0, cfg.roots[0])
              and verify_angle(tau, a, 1, t) and verify_angle(tau, -1, -a, t))
        report["famiglia1"]["samples"].append({"a": str(a), "t": t.to_json(), "ok": bool(ok)})
    for t in _sample_roots(rng, samples, lambda r: r.den <= 4):
        b = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.randint(1, 4))
        cfg = famiglia2_config(b, t)
        tv = tau_recover(cfg)
        roots = [r.inverse() for r in cfg.roots] if tv.conjugated else cfg.roots
        y = t.to_cyclo()
        rect = (y + 1) / (y - 1)
        ok = (eliminant(cfg).is_zero() and (rect + rect.conj()).is_zero()
              and _moebius_related(tv.value, rect)
              and all(verify_angle(tv, INF, s, r) for s, r in zip((0, 2 * b, b), roots)))
        report["famiglia2"]["samples"].append({"b": str(b), "t": t.to_json(), "ok": bool(ok)})
    report["degenerate"] = {
        "famiglia1_a0": famiglia1_config(0, ru_make(1, 5)).issues(),
        "famiglia1_a-1": famiglia1_config(-1, ru_make(1, 5)).issues(),
    }
    report["ok"] = all(s["ok"] for f in ("famiglia1", "famiglia2") for s in report[f]["samples"]) \
        and report["famiglia1"]["symbolicZero"] and report["famiglia2"]["symbolicZero"]
    return report

