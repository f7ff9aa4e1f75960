from __future__ import annotations

import pytest

from lattangle import algebra


def _strip(report):
    report = dict(report)
    report.pop("timestamp")
    return report


@pytest.fixture
def restore_cap():
    cap = algebra.order_cap()
    yield
    algebra.set_order_cap(cap)


def test_eliminant_zero_on_family_point(cli_run):
    code, rep = cli_run("eliminant", "--case", "C4", "--params", "2,1", "--roots", "1/7,9/14,2/7")
    assert code == 0
    assert rep["results"]["isZero"] is True
    assert set(rep["checksums"]) >= {"elliptic.json", "genus5.json", "c222_table.json"}


def test_verify_dodecagonal_angles(cli_run):
    code, rep = cli_run("verify", "--case", "C4", "--params", "1,-1", "--roots", "3/12,1/12,10/12")
    assert code == 0
    assert rep["results"]["eliminantZero"]
    assert all(a["ok"] for a in rep["results"]["angles"])


@pytest.mark.parametrize("argv", [
    ("constants",),
    ("genus5",),
    ("ec", "--multiples", "4", "--verify"),
    ("report", "dodecagonal"),
    ("report", "fivetuple"),
    ("report", "extra-angles"),
    ("search", "case4", "--orders", "div:12"),
    ("surface", "--roots", "1/4,1/2,1/4"),
])
def test_expect_paper_passes(cli_run, argv):
    code, rep = cli_run(*argv, "--expect", "paper")
    assert code == 0
    assert rep["expectation"]["pass"] is True


def test_bad_orders_is_usage_error(cli_run, capsys):
    code, rep = cli_run("search", "case4", "--orders", "bogus")
    assert code == 2 and rep is None


def test_unknown_subcommand(cli_run):
    code, _ = cli_run("frobnicate")
    assert code == 2


def test_order_cap_env(cli_run, monkeypatch, restore_cap):
    monkeypatch.setenv("LATTANGLE_ORDER_CAP", "6")
    code, _ = cli_run("eliminant", "--case", "C4", "--params", "2,1", "--roots", "1/7,9/14,2/7")
    assert code == 2


def test_text_format_shows_amplitudes(capsys):
    from lattangle.cli import main

    assert main(["--format", "text", "eliminant", "--case", "C4", "--params", "2,1",
                 "--roots", "1/7,9/14,2/7"]) == 0
    out = capsys.readouterr().out
    assert "1/7 pi" in out and "isZero: True" in out


def test_search_deterministic_across_jobs(cli_run):
    _, one = cli_run("search", "case4", "--orders", "div:12", "--jobs", "1")
    _, two = cli_run("search", "case4", "--orders", "div:12", "--jobs", "2")
    one, two = _strip(one), _strip(two)
    one["command"] = two["command"] = None
    assert one == two


def test_coset_families(cli_run):
    code, rep = cli_run("coset", "--samples", "5")
    assert code == 0 and rep["results"]["ok"]
