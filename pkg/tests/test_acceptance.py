"""One test per acceptance criterion; each prints a single PASS/FAIL line."""

from __future__ import annotations

import itertools
import math
import random
import time
from fractions import Fraction

import mpmath
import pytest

from lattangle.algebra import Cyclo, MPoly, factorize, ru_make
from lattangle.classify import (
    dodecagonal_extra_angles,
    dodecagonal_report,
    fivetuple_search,
    parse_orders,
    search_case4,
    summarize_case4,
    superrect_extra_angles,
    verify_case4_solution,
)
from lattangle.coset import constants, verify_families
from lattangle.examples import (
    ECPoint,
    ec_double,
    ec_multiples,
    ec_to_quadruple,
    ec_verify,
    generator,
    genus5_radius,
    genus5_verify,
    j_invariant,
    on_curve,
    phi_invariant,
    system_values,
    torsion_point,
)
from lattangle.spaces import cm_catalog, lattice_root_orders, sqrt_neg
from lattangle.surface import (
    QuadraticPair,
    defined_over_q_closed,
    defined_over_q_ratios,
    estar,
    resultant_E,
    sylvester_resultant,
)
from lattangle.uniteq import UnitRelation, brute_solve, cj_bound, cj_solve, records_as_set

# runtime limits in seconds; exact checks have zero tolerance
LIMIT_CJ = 60
LIMIT_SEARCH30 = 60
LIMIT_SEARCH60 = 300
LIMIT_EC = 30
GENUS5_TOL = 1e-6


@pytest.fixture
def verdict(capsys):
    def emit(n: int, ok: bool, detail: str = ""):
        with capsys.disabled():
            print(f"\n[criterion {n:2d}] {'PASS' if ok else 'FAIL'} {detail}".rstrip())
        assert ok, detail

    return emit


def test_c01_cj_matches_brute(verdict):
    start = time.perf_counter()
    mismatches, count = [], 0
    for k in range(2, 6):
        bound = cj_bound(k)
        for coeffs in itertools.product((1, -1, 2, -2), repeat=k):
            rel = UnitRelation.linear(list(coeffs))
            count += 1
            if records_as_set(cj_solve(rel)) != records_as_set(brute_solve(rel, bound)):
                mismatches.append(coeffs)
    elapsed = time.perf_counter() - start
    verdict(1, not mismatches and elapsed < LIMIT_CJ,
            f"{count} relations, {len(mismatches)} mismatches, {elapsed:.1f}s < {LIMIT_CJ}s")


def test_c02_search_div30(verdict):
    start = time.perf_counter()
    summary = summarize_case4(search_case4(parse_orders("div:30")))
    elapsed = time.perf_counter() - start
    non_super = summary["total"] - summary["counts"]["superrectangular"]
    verdict(2, non_super == 0 and elapsed < LIMIT_SEARCH30,
            f"{summary['total']} solutions, {non_super} non-superrectangular, {elapsed:.2f}s")


def test_c03_search_div60(verdict):
    start = time.perf_counter()
    sols = search_case4(parse_orders("div:60"))
    summary = summarize_case4(sols)
    elapsed = time.perf_counter() - start
    report = dodecagonal_report()
    ok = (summary["counts"]["other"] == 0
          and summary["dodecagonalClasses"] == ["tau1", "tau2"]
          and len(summary["dodecagonalOrbits"]) == 2
          and len(report["arguments"]) == 6 and all(report["arguments"].values())
          and report["tau1Recovered"] and report["tau2Recovered"]
          and all(verify_case4_solution(s) for s in sols if s.cls == "dodecagonal")
          and elapsed < LIMIT_SEARCH60)
    verdict(3, ok, f"counts {summary['counts']}, classes {summary['dodecagonalClasses']}, {elapsed:.2f}s")


def test_c04_fivetuple_obstruction(verdict):
    sols = fivetuple_search(24)
    orders = sorted({s.theta0.den for s in sols})
    verdict(4, bool(sols) and all(6 % d == 0 for d in orders), f"theta0 orders {orders} divide 6")


def test_c05_superrect_extra_angles(verdict):
    rep = superrect_extra_angles(30)
    verdict(5, rep["ok"], f"{len(rep['solutions'])} solutions, {len(rep['unexpected'])} unexpected")


def test_c06_dodecagonal_extra_angles(verdict):
    rep = dodecagonal_extra_angles()
    ok = (rep["ok"] and rep["tau1"]["pairs"] == [["-1", "0"], ["-1", "1"], ["0", "1"]]
          and rep["tau2"]["pairs"] == [["0", "1"], ["0", "3"], ["1", "3"]])
    verdict(6, ok, f"tau1 {rep['tau1']['pairs']}, tau2 {rep['tau2']['pairs']}")


def test_c07_family_identities(verdict):
    rep = verify_families(samples=20, seed=1)
    ok = (rep["ok"] and rep["famiglia1"]["symbolicZero"] and rep["famiglia2"]["symbolicZero"]
          and all(len(rep[f]["samples"]) == 20 for f in ("famiglia1", "famiglia2")))
    verdict(7, ok, "symbolic zero and 20 verified specializations per family")


def test_c08_elliptic_example(verdict):
    start = time.perf_counter()
    G = generator()
    basics = (j_invariant() == 128 and on_curve(G) and torsion_point() == ECPoint.affine(-2, 0)
              and ec_double(torsion_point()).is_infinity
              and ec_double(G) == ECPoint.affine(Fraction(-7, 4), Fraction(-5, 8)))
    points = ec_multiples(6)[1:]
    quads = [ec_to_quadruple(P) for P in points]
    reports = [ec_verify(P) for P in points]
    phis = [phi_invariant(q) for q in quads]  # raises if the two forms disagree
    ok = (basics and all(q.valid and system_values(q) == (0, 0) for q in quads)
          and all(r["ok"] for r in reports) and len(set(phis)) == len(phis))
    elapsed = time.perf_counter() - start
    verdict(8, ok and elapsed < LIMIT_EC, f"2G..6G verified, phi distinct, {elapsed:.2f}s")


def test_c09_genus5(verdict):
    rep = genus5_verify(GENUS5_TOL)
    checks = {c["name"]: c for c in rep["checks"]}
    a, b, c, d = (Fraction(v) for v in rep["point"])
    ok = (rep["ok"] and a * b == c * d == 24
          and checks["f1,f2 at trivial_point"]["ok"] and checks["f1,f2 at nontrivial_point"]["ok"]
          and checks["proportional"]["ok"] and checks["closedForm"]["ok"])
    verdict(9, ok, f"r = {mpmath.nstr(genus5_radius(), 12)}, "
                   f"error {checks['closedForm']['error']} < {GENUS5_TOL}")


def test_c10_resultant_surface(verdict):
    rng = random.Random(10)

    def q():
        return Fraction(rng.randint(-20, 20), rng.randint(1, 9))

    sylvester_ok = all(resultant_E(qp) == sylvester_resultant(qp)
                       for qp in (QuadraticPair(q(), q(), q(), q()) for _ in range(200)))
    triples = list(itertools.product([ru_make(k, 12) for k in range(1, 12)], repeat=3))
    identity_ok = all(estar(*t).scaling_ok for t in triples)
    defq_ok = all(defined_over_q_closed(*t) == defined_over_q_ratios(*t) for t in triples)
    m1 = ru_make(1, 2)
    a, b, c, d = MPoly.gens("a", "b", "c", "d")
    special_ok = (estar(m1, m1, m1).estar - (a * b - c * d) ** 2).is_zero()
    verdict(10, sylvester_ok and identity_ok and defq_ok and special_ok,
            f"200 Sylvester inputs, {len(triples)} root triples")


def test_c11_cm_catalogs(verdict):
    i, w = Cyclo.root(1, 4), Cyclo.root(1, 3)
    ok = (cm_catalog(1).catalog == (i, i + 1, i - 1)
          and cm_catalog(3).catalog == (sqrt_neg(3), w, w - 1, w + 1, w + 2)
          and cm_catalog(2).catalog == (sqrt_neg(2),)
          and cm_catalog(5).catalog == (sqrt_neg(5),))
    orders = lattice_root_orders()
    verdict(11, ok and orders == {"gaussian": 8, "eisenstein": 12}, f"root orders {orders}")


def test_c12_constants(verdict):
    c = constants()
    primes = (7, 11, 13, 17, 19, 23, 29, 31, 37)
    n0 = 2**6 * 3**4 * 5**3 * math.prod(p**2 for p in primes)
    ok = (c["N0"] == n0 and c["thmBound"] == 2 * n0
          and all(math.prod(p**e for p, e in factorize(v)) == v for v in (c["N0"], c["thmBound"])))
    verdict(12, ok, f"N0 = {c['N0']}")


def test_c13_determinism(verdict, cli_run):
    runs = [("search", "case4", "--orders", "div:60", "--jobs", j) for j in ("1", "1", "2", "3")]
    bodies = []
    for argv in runs:
        code, rep = cli_run(*argv)
        bodies.append((code, repr(rep["results"]), rep["checksums"]))
    verdict(13, len(set(map(repr, bodies))) == 1, f"{len(runs)} runs, identical result bodies")
