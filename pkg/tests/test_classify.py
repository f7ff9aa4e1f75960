from __future__ import annotations

from fractions import Fraction

import pytest

from lattangle.classify import (
    classification_table,
    dodecagonal_class,
    dodecagonal_extra_angles,
    dodecagonal_report,
    extension_shifts,
    fivetuple_search,
    orbit_key,
    parse_orders,
    search_case4,
    summarize_case4,
    superrect_extra_angles,
    tau1,
    tau2,
    verify_case4_solution,
)


def test_parse_orders():
    assert parse_orders("1..6") == [1, 2, 3, 4, 5, 6]
    assert parse_orders("div:12") == [1, 2, 3, 4, 6, 12]
    with pytest.raises(ValueError):
        parse_orders("bogus")


def test_search_div12():
    sols = search_case4(parse_orders("div:12"))
    summary = summarize_case4(sols)
    assert summary["counts"] == {"superrectangular": 90, "dodecagonal": 48, "other": 0}
    assert summary["dodecagonalClasses"] == ["tau1", "tau2"]
    assert len(summary["dodecagonalOrbits"]) == 2
    assert all(verify_case4_solution(s) for s in sols)


def test_search_jobs_deterministic():
    orders = parse_orders("div:12")
    assert search_case4(orders, jobs=1) == search_case4(orders, jobs=2)


def test_orbits_group_dodecagonal_solutions():
    sols = [s for s in search_case4(parse_orders("div:12")) if s.cls == "dodecagonal"]
    assert len({orbit_key(s) for s in sols}) == 2


def test_dodecagonal_class_of_references():
    assert dodecagonal_class(tau1()) == "tau1"
    assert dodecagonal_class(tau2() + 1) == "tau2"


def test_dodecagonal_report():
    rep = dodecagonal_report()
    assert rep["ok"]
    assert rep["rank(1,tau1,tau2,tau1*tau2)"] == 4
    assert all(rep["determinantSignInvariance"].values())
    assert len(rep["determinantSignInvariance"]) == 8


def test_extension_shifts():
    assert extension_shifts(tau1()) == [Fraction(-1), Fraction(0), Fraction(1)]
    assert extension_shifts(tau2()) == [Fraction(0), Fraction(1), Fraction(3)]


def test_fivetuple_generators_divide_six():
    sols = fivetuple_search(24)
    assert sols
    assert all(6 % s.theta0.den == 0 for s in sols)


def test_superrect_extra_angles():
    assert superrect_extra_angles(30)["ok"]
    with pytest.raises(ValueError):
        superrect_extra_angles(61)


def test_superrect_gaussian_family_at_24():
    rep = superrect_extra_angles(24)
    assert rep["unexpected"] and all(e.get("family") for e in rep["unexpected"])


def test_dodecagonal_extra_angles():
    rep = dodecagonal_extra_angles()
    assert rep["ok"]
    assert rep["tau1"]["pairs"] == [["-1", "0"], ["-1", "1"], ["0", "1"]]


def test_classification_table_rows():
    rows = classification_table()
    assert len(rows) == 7
    assert {r["type"] for r in rows} >= {"dodecagonal", "superrectangular"}
