"""Linear relations with rational coefficients among roots of unity."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import (
    Cyclo,
    RootOfUnity,
    as_fraction,
    factorize,
    fraction_str,
    is_squarefree,
    lcm,
    nullspace,
    power_table,
    rational_sqrt,
    ru_make,
    solve_rational,
)

BRUTE_BOUND_CAP = 360


# ---------------------------------------------------------------------------
# data types


@dataclass(frozen=True)
class Term:
    """coeff(params) * root * prod unknown_i^exps_i, with coeff affine in the parameters."""

    coeff: Fraction
    exps: tuple[int, ...]
    root: RootOfUnity = RootOfUnity(0, 1)
    param_coeffs: tuple[tuple[str, Fraction], ...] = ()

    def is_constant(self) -> bool:
        return not any(self.exps)


@dataclass(frozen=True)
class UnitRelation:
    unknowns: tuple[str, ...]
    terms: tuple[Term, ...]
    params: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.terms) < 2:
            raise ValueError("a relation needs at least two terms")
        for t in self.terms:
            if len(t.exps) != len(self.unknowns):
                raise ValueError("exponent vector length mismatch")
            if not self.params and t.coeff == 0:
                raise ValueError("zero coefficient in a concrete relation")
            for p, _ in t.param_coeffs:
                if p not in self.params:
                    raise ValueError(f"unknown parameter {p}")
        object.__setattr__(self, "_hash", hash((self.unknowns, self.terms, self.params)))

    def __hash__(self) -> int:
        return self._hash

    @property
    def k(self) -> int:
        return len(self.terms)

    @classmethod
    def linear(cls, coeffs: Sequence, fixed: Mapping[int, RootOfUnity] | None = None) -> "UnitRelation":
        """sum_j coeffs[j] xi_j with xi_j unknown unless given in `fixed`.

        With fixed=None the first root is fixed to 1 (the usual normalization).
        """
        if fixed is None:
            fixed = {0: RootOfUnity(0, 1)}
        names = tuple(f"xi{j}" for j in range(len(coeffs)) if j not in fixed)
        terms = []
        for j, c in enumerate(coeffs):
            if j in fixed:
                terms.append(Term(as_fraction(c), (0,) * len(names), fixed[j]))
            else:
                e = tuple(1 if n == f"xi{j}" else 0 for n in names)
                terms.append(Term(as_fraction(c), e))
        return cls(names, tuple(terms))

    def is_separable(self) -> bool:
        """Every unknown occurs in exactly one term, with exponent 1, one unknown per term."""
        seen = set()
        for t in self.terms:
            nz = [i for i, e in enumerate(t.exps) if e]
            if len(nz) > 1 or any(t.exps[i] != 1 for i in nz):
                return False
            for i in nz:
                if i in seen:
                    return False
                seen.add(i)
        return len(seen) == len(self.unknowns)

    def to_json(self) -> dict:
        return {
            "unknowns": list(self.unknowns),
            "params": list(self.params),
            "terms": [
                {"coeff": fraction_str(t.coeff), "exps": list(t.exps), "root": t.root.to_json(),
                 "params": {p: fraction_str(c) for p, c in t.param_coeffs}}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data) -> "UnitRelation":
        if "coefficients" in data:
            fixed = {int(k): RootOfUnity.from_json(v) for k, v in data.get("fixed", {"0": {"num": 0, "den": 1}}).items()}
            return cls.linear([Fraction(c) for c in data["coefficients"]], fixed)
        terms = []
        for t in data["terms"]:
            root = RootOfUnity.from_json(t["root"]) if "root" in t else RootOfUnity(0, 1)
            pc = tuple(sorted((p, Fraction(c)) for p, c in t.get("params", {}).items()))
            terms.append(Term(Fraction(t["coeff"]), tuple(t["exps"]), root, pc))
        return cls(tuple(data["unknowns"]), tuple(terms), tuple(data.get("params", ())))


@dataclass(frozen=True)
class SolutionRecord:
    assignment: tuple[tuple[str, RootOfUnity], ...]
    subsumPartition: tuple[tuple[int, ...], ...]
    commonOrder: int
    params: tuple[tuple[str, Fraction], ...] | None = ()
    paramFamily: bool = False

    def value(self, name: str) -> RootOfUnity:
        return dict(self.assignment)[name]

    def key(self):
        return tuple(Fraction(r.num, r.den) for _, r in self.assignment), self.params or ()

    def to_json(self) -> dict:
        out = {
            "assignment": {n: r.to_json() for n, r in self.assignment},
            "subsumPartition": [list(b) for b in self.subsumPartition],
            "commonOrder": self.commonOrder,
        }
        if self.params:
            out["params"] = {p: fraction_str(v) for p, v in self.params}
        if self.paramFamily:
            out["paramFamily"] = True
        return out


# ---------------------------------------------------------------------------
# Conway-Jones admissible orders


def _primes_upto(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p**0.5) + 1))]


@lru_cache(maxsize=None)
def cj_admissible_orders(k: int) -> tuple[int, ...]:
    """Squarefree Q with sum over p | Q of (p - 2) at most k - 2."""
    if k < 2:
        raise ValueError("k must be at least 2")
    primes = _primes_upto(k)
    out = set()
    for r in range(len(primes) + 1):
        for combo in itertools.combinations(primes, r):
            if sum(p - 2 for p in combo) <= k - 2:
                q = 1
                for p in combo:
                    q *= p
                out.add(q)
    return tuple(sorted(out))


def maximal_admissible_orders(k: int) -> list[int]:
    qs = cj_admissible_orders(k)
    return [q for q in qs if not any(q2 != q and q2 % q == 0 for q2 in qs)]


def cj_bound(k: int) -> int:
    return lcm(*cj_admissible_orders(k))


# ---------------------------------------------------------------------------
# shared helpers


def _int_coeffs(coeffs: Sequence[Fraction]) -> tuple[list[int], int]:
    den = lcm(*(c.denominator for c in coeffs)) if coeffs else 1
    return [int(c * den) for c in coeffs], den


@lru_cache(maxsize=None)
def _table(n: int) -> np.ndarray:
    return np.array(power_table(n), dtype=np.int64)


def minimal_vanishing_partition(coeffs: Sequence[int], exps: Sequence[int], n: int) -> tuple[tuple[int, ...], ...]:
    """Greedy split of a vanishing sum into minimal vanishing subsums.

    Terms are coeffs[j] * zeta_n^exps[j]; zero coefficients become singletons.
    Smallest subsets are taken first, ties broken lexicographically.
    """
    return _partition(tuple(coeffs), tuple(e % n for e in exps), n)


@lru_cache(maxsize=1 << 16)
def _partition(coeffs: tuple[int, ...], exps: tuple[int, ...], n: int) -> tuple[tuple[int, ...], ...]:
    table = power_table(n)
    vecs = [tuple(c * v for v in table[e]) for c, e in zip(coeffs, exps)]
    blocks = [(j,) for j, c in enumerate(coeffs) if c == 0]
    remaining = [j for j, c in enumerate(coeffs) if c != 0]
    while remaining:
        found = None
        for s in range(2, len(remaining) + 1):
            for combo in itertools.combinations(remaining, s):
                if not any(map(sum, zip(*(vecs[j] for j in combo)))):
                    found = combo
                    break
            if found:
                break
        if found is None:
            raise ArithmeticError("sum does not vanish")
        blocks.append(found)
        remaining = [j for j in remaining if j not in found]
    return tuple(sorted(blocks))


def _has_vanishing_proper_subsum(vecs: list) -> bool:
    vecs = [tuple(int(x) for x in v) for v in vecs]
    k = len(vecs)
    for s in range(1, k):
        for combo in itertools.combinations(range(k), s):
            if not any(map(sum, zip(*(vecs[j] for j in combo)))):
                return True
    return False


def _record(rel: UnitRelation, n: int, ks: Sequence[int], params=()) -> SolutionRecord:
    """Build a record from unknown exponents ks (units of zeta_n)."""
    return _record_cached(rel, n, tuple(ks), params if params is None else tuple(params))


@lru_cache(maxsize=None)
def _concrete_coeffs(rel: UnitRelation, params) -> tuple[int, ...]:
    pmap = dict(params or ())
    coeffs = [t.coeff + sum(v * pmap.get(p, 0) for p, v in t.param_coeffs) for t in rel.terms]
    return tuple(_int_coeffs(coeffs)[0])


@lru_cache(maxsize=1 << 16)
def _record_cached(rel: UnitRelation, n: int, ks: tuple[int, ...], params) -> SolutionRecord:
    icoeffs = _concrete_coeffs(rel, params)
    exps = [(t.root.num * (n // t.root.den) + sum(e * k for e, k in zip(t.exps, ks))) % n for t in rel.terms]
    part = minimal_vanishing_partition(icoeffs, exps, n)
    order = lcm(*(n // math.gcd(e, n) for c, e in zip(icoeffs, exps) if c != 0)) if any(icoeffs) else 1
    assignment = tuple((u, ru_make(k, n)) for u, k in zip(rel.unknowns, ks))
    return SolutionRecord(assignment, part, order, tuple(sorted(params)) if params is not None else None,
                          params is None)


def _galois_units(n: int, rel: UnitRelation) -> list[int]:
    return [k for k in range(1, n) if np.gcd(k, n) == 1
            and all((t.root.num * k - t.root.num) % t.root.den == 0 for t in rel.terms)]


def _galois_canonical(records: list[SolutionRecord], rel: UnitRelation, n: int) -> list[SolutionRecord]:
    units = _galois_units(n, rel) if n > 1 else [1]
    seen = set()
    out = []
    for rec in records:
        ks = [r.num * (n // r.den) for _, r in rec.assignment]
        orbit = sorted(tuple((k * u) % n for k in ks) for u in units)
        key = (orbit[0], rec.params)
        if key in seen:
            continue
        seen.add(key)
        if tuple(ks) == orbit[0]:
            out.append(rec)
        else:
            out.append(_record(rel, n, orbit[0], rec.params if not rec.paramFamily else None))
    return out


def _sorted(records: Iterable[SolutionRecord]) -> list[SolutionRecord]:
    records = list(records)
    big = lcm(*(r.den for rec in records for _, r in rec.assignment)) if records else 1
    return sorted(records, key=lambda rec: (tuple(r.num * (big // r.den) for _, r in rec.assignment),
                                            rec.params or ()))


# ---------------------------------------------------------------------------
# brute force oracle


def _ambient_order(rel: UnitRelation, bound: int) -> int:
    return lcm(bound, *(t.root.den for t in rel.terms))


def brute_solve(rel: UnitRelation, orderBound: int, galois_reduce: bool = False,
                cap: int = BRUTE_BOUND_CAP) -> list[SolutionRecord]:
    """All assignments of unknowns to roots of order dividing orderBound with exact zero sum."""
    if orderBound < 1:
        raise ValueError("orderBound must be positive")
    if orderBound > cap:
        raise ValueError(f"orderBound {orderBound} exceeds cap {cap}")
    n = _ambient_order(rel, orderBound)
    step = n // orderBound
    if rel.params:
        recs = _brute_parametric(rel, n, step, orderBound)
    elif rel.is_separable() and len(rel.unknowns) >= 2:
        recs = _brute_mitm(rel, n, step, orderBound)
    else:
        recs = _brute_full(rel, n, step, orderBound)
    recs = _sorted(recs)
    if galois_reduce:
        recs = _sorted(_galois_canonical(recs, rel, n))
    return recs


def _const_exponents(rel, n):
    return np.array([t.root.num * (n // t.root.den) for t in rel.terms], dtype=np.int64)


def _brute_full(rel, n, step, bound):
    u = len(rel.unknowns)
    table = _table(n)
    icoeffs, _ = _int_coeffs([t.coeff for t in rel.terms])
    base = _const_exponents(rel, n)
    exps = np.array([t.exps for t in rel.terms], dtype=np.int64).reshape(len(rel.terms), u)
    out = []
    if u == 0:
        total = sum(table[b] * c for b, c in zip(base, icoeffs))
        return [_record(rel, n, ())] if not np.any(total) else []
    grid = np.array(list(itertools.product(range(bound), repeat=u)), dtype=np.int64) * step
    chunk = 200_000
    for start in range(0, len(grid), chunk):
        g = grid[start:start + chunk]
        total = np.zeros((len(g), table.shape[1]), dtype=np.int64)
        for j, c in enumerate(icoeffs):
            idx = (g @ exps[j] + base[j]) % n
            total += c * table[idx]
        hits = np.nonzero(~np.any(total, axis=1))[0]
        for h in hits:
            out.append(_record(rel, n, tuple(int(v) for v in g[h])))
    return out


def _brute_mitm(rel, n, step, bound):
    table = _table(n)
    icoeffs, _ = _int_coeffs([t.coeff for t in rel.terms])
    base = _const_exponents(rel, n)
    owner = {}
    const_total = np.zeros(table.shape[1], dtype=np.int64)
    for j, t in enumerate(rel.terms):
        nz = [i for i, e in enumerate(t.exps) if e]
        if nz:
            owner[nz[0]] = j
        else:
            const_total += icoeffs[j] * table[base[j]]
    u = len(rel.unknowns)
    left = list(range(u // 2))
    right = list(range(u // 2, u))

    def half(idx, with_const):
        grid = np.array(list(itertools.product(range(bound), repeat=len(idx))), dtype=np.int64) * step
        tot = np.zeros((len(grid), table.shape[1]), dtype=np.int64)
        if with_const:
            tot += const_total
        for col, i in enumerate(idx):
            j = owner[i]
            tot += icoeffs[j] * table[(grid[:, col] + base[j]) % n]
        return grid, tot

    lg, lt = half(left, True)
    rg, rt = half(right, False)
    index: dict[bytes, list[int]] = {}
    for r, row in enumerate(lt):
        index.setdefault(row.tobytes(), []).append(r)
    out = []
    for r, row in enumerate(rt):
        for l in index.get((-row).tobytes(), ()):
            ks = [0] * u
            for col, i in enumerate(left):
                ks[i] = int(lg[l, col])
            for col, i in enumerate(right):
                ks[i] = int(rg[r, col])
            out.append(_record(rel, n, tuple(ks)))
    return out


def _brute_parametric(rel, n, step, bound):
    """Unknown roots enumerated; parameters solved exactly as rationals."""
    table = power_table(n)
    u = len(rel.unknowns)
    params = rel.params
    out = []
    for combo in itertools.product(range(bound), repeat=u):
        ks = tuple(k * step for k in combo)
        cols = [[Fraction(0)] * len(table[0]) for _ in range(len(params) + 1)]
        for t in rel.terms:
            e = (t.root.num * (n // t.root.den) + sum(a * b for a, b in zip(t.exps, ks))) % n
            row = table[e]
            contrib = [(0, t.coeff)] + [(params.index(p) + 1, c) for p, c in t.param_coeffs]
            for col, c in contrib:
                if c:
                    for i, v in enumerate(row):
                        if v:
                            cols[col][i] += c * v
        # sum_p p * cols[p] = -cols[0]
        sol = solve_rational(cols[1:], [-v for v in cols[0]])
        if sol is None:
            continue
        free = nullspace(cols[1:])
        if free:
            out.append(_record(rel, n, ks, None))
        else:
            out.append(_record(rel, n, ks, tuple(zip(params, sol))))
    return out


# ---------------------------------------------------------------------------
# Conway-Jones structured solver


@lru_cache(maxsize=None)
def _grid(q: int, width: int) -> np.ndarray:
    if width == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.array(list(itertools.product(range(q), repeat=width)), dtype=np.int64)


def _zero_completions(base: np.ndarray, coeffs: list[int], q: int, n: int) -> list[tuple[int, ...]]:
    """Exponent tuples e (multiples of n/q) with base + sum c_i zeta_n^e_i = 0.

    Two halves are tabulated and matched by hashing, so width w costs about q^(w/2).
    """
    table = _table(n)
    qs = n // q
    w = len(coeffs)
    if w == 0:
        return [()] if not np.any(base) else []
    left = w // 2

    def half(cs, with_base):
        grid = _grid(q, len(cs)) * qs
        tot = np.zeros((len(grid), table.shape[1]), dtype=np.int64)
        if with_base:
            tot += base
        for col, c in enumerate(cs):
            tot += c * table[grid[:, col]]
        return grid, tot

    lg, lt = half(coeffs[:left], True)
    rg, rt = half(coeffs[left:], False)
    index: dict[bytes, list[int]] = {}
    for r, row in enumerate(lt):
        index.setdefault(row.tobytes(), []).append(r)
    out = []
    for r, row in enumerate(rt):
        for l in index.get((-row).tobytes(), ()):
            out.append(tuple(int(v) for v in lg[l]) + tuple(int(v) for v in rg[r]))
    return out


def _set_partitions(items: list[int], min_block: int = 2):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for r in range(min_block - 1, len(rest) + 1):
        for combo in itertools.combinations(rest, r):
            block = (first,) + combo
            remaining = [x for x in rest if x not in combo]
            for tail in _set_partitions(remaining, min_block):
                yield [block] + tail


def cj_solve(rel: UnitRelation, bound: int | None = None, galois_reduce: bool = False) -> list[SolutionRecord]:
    """Solutions assembled block by block from minimal vanishing subsums.

    Each minimal block, normalized by its first term, consists of roots whose
    common order is admissible for the block length.  Blocks without a fixed
    term rotate freely; `bound` restricts all unknowns to roots of order
    dividing it (default: lcm of the admissible orders for the full length and
    of the fixed roots).
    """
    if rel.params:
        raise ValueError("cj_solve needs concrete rational coefficients")
    if not rel.is_separable():
        raise ValueError("cj_solve needs each unknown alone in its own term")
    k = rel.k
    if bound is None:
        bound = lcm(cj_bound(k), *(t.root.den for t in rel.terms))
    n = lcm(bound, cj_bound(k), *(t.root.den for t in rel.terms))
    table = _table(n)
    icoeffs, _ = _int_coeffs([t.coeff for t in rel.terms])
    term_unknown = {}
    for j, t in enumerate(rel.terms):
        nz = [i for i, e in enumerate(t.exps) if e]
        term_unknown[j] = nz[0] if nz else None
    const_exp = [t.root.num * (n // t.root.den) for t in rel.terms]
    step = n // bound

    @lru_cache(maxsize=None)
    def normalized_blocks(block: tuple[int, ...], fixed_key: tuple[tuple[int, int], ...]):
        """Minimal vanishing blocks with the anchor term at 1: dicts {term: eta exponent}.

        fixed_key pins eta for the fixed non-anchor terms.
        """
        j0 = block[0]
        fixed_eta = dict(fixed_key)
        free_terms = [j for j in block[1:] if j not in fixed_eta]
        found = []
        for q in maximal_admissible_orders(len(block)):
            qs = n // q
            if any(d % qs for d in fixed_eta.values()):
                continue
            base = icoeffs[j0] * table[0]
            for j, d in fixed_eta.items():
                base = base + icoeffs[j] * table[d]
            for sol in _zero_completions(base, [icoeffs[j] for j in free_terms], q, n):
                etas = {j0: 0, **fixed_eta}
                for j, e in zip(free_terms, sol):
                    etas[j] = e
                if _has_vanishing_proper_subsum([icoeffs[j] * table[etas[j]] for j in block]):
                    continue
                found.append(etas)
        return found

    @lru_cache(maxsize=None)
    def block_solutions(block: tuple[int, ...]) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Assignments {term index: exponent} for unknown terms of a minimal vanishing block."""
        fixed = [j for j in block if term_unknown[j] is None]
        if fixed:
            order_ = (fixed[0],) + tuple(j for j in block if j != fixed[0])
            rho = const_exp[fixed[0]]
            fixed_key = tuple(sorted((j, (const_exp[j] - rho) % n) for j in fixed[1:]))
            rotations = [rho]
        else:
            order_ = block
            fixed_key = ()
            rotations = [r * step for r in range(bound)]
        found = set()
        for etas in normalized_blocks(order_, fixed_key):
            for rho in rotations:
                assign = []
                for j in block:
                    if term_unknown[j] is None:
                        continue
                    e = (etas[j] + rho) % n
                    if e % step:
                        break
                    assign.append((j, e))
                else:
                    found.add(tuple(sorted(assign)))
        return tuple(sorted(found))

    seen = set()
    out = []
    for partition in _set_partitions(list(range(k))):
        lists = [block_solutions(tuple(b)) for b in partition]
        if any(not l for l in lists):
            continue
        for combo in itertools.product(*lists):
            ks = [0] * len(rel.unknowns)
            for part in combo:
                for j, e in part:
                    ks[term_unknown[j]] = e
            key = tuple(ks)
            if key in seen:
                continue
            seen.add(key)
            out.append(_record(rel, n, key))
    recs = _sorted(out)
    if galois_reduce:
        recs = _sorted(_galois_canonical(recs, rel, n))
    return recs


def records_as_set(records: Iterable[SolutionRecord]) -> set:
    return {(rec.assignment, rec.params) for rec in records}


# ---------------------------------------------------------------------------
# monomial-linear solver


@dataclass(frozen=True)
class MonomialSolution:
    u: Fraction
    v: Fraction
    degenerate: bool

    def to_json(self) -> dict:
        return {"u": fraction_str(self.u), "v": fraction_str(self.v), "degenerate": self.degenerate}


@dataclass(frozen=True)
class MonomialResult:
    solutions: tuple[MonomialSolution, ...]
    family: bool = False
    family_basis: tuple = field(default=())


def monomial_linear_solve(c1, cu, cv, cuv) -> MonomialResult:
    """Rational (u, v) with c1 + cu*u + cv*v + cuv*u*v = 0, coefficients in Q(zeta_n).

    The equation is split over the power basis into a rational linear system in
    (u, v, w) and w = u*v is imposed afterwards.  A positive-dimensional
    solution set with w = uv holding identically is reported as a family.
    """
    elems = [Cyclo.coerce(c) for c in (c1, cu, cv, cuv)]
    n = lcm(*(e.order for e in elems))
    c1, cu, cv, cuv = (list(e.lift(n).coords) for e in elems)
    cols = [cu, cv, cuv]
    part = solve_rational(cols, [-x for x in c1])
    if part is None:
        return MonomialResult(())
    basis = nullspace(cols)
    sols: list[tuple[Fraction, Fraction]] = []
    if not basis:
        u, v, w = part
        if u * v == w:
            sols.append((u, v))
    elif len(basis) == 1:
        d = basis[0]
        # (pu + s du)(pv + s dv) - (pw + s dw) = A s^2 + B s + C
        A = d[0] * d[1]
        B = part[0] * d[1] + part[1] * d[0] - d[2]
        C = part[0] * part[1] - part[2]
        roots: list[Fraction] = []
        if A == 0:
            if B == 0:
                if C == 0:
                    return MonomialResult((), True, (tuple(part), tuple(d)))
            else:
                roots.append(-C / B)
        else:
            disc = B * B - 4 * A * C
            r = rational_sqrt(disc) if disc >= 0 else None
            if r is not None:
                roots.extend(sorted({(-B + r) / (2 * A), (-B - r) / (2 * A)}))
        for s in roots:
            sols.append((part[0] + s * d[0], part[1] + s * d[1]))
    else:
        return MonomialResult((), True, (tuple(part),) + tuple(tuple(b) for b in basis))
    out = tuple(
        MonomialSolution(u, v, u == v or u == 0 or v == 0) for u, v in sorted(set(sols))
    )
    return MonomialResult(out)
