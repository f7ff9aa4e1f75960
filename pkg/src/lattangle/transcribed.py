"""Loading of the transcribed polynomial data files, with checksums."""

from __future__ import annotations

import hashlib
import json
import re
from functools import lru_cache
from importlib import resources

from .algebra import MPoly, parse_poly

DATA_FILES = ("c222_table.json", "genus5.json", "elliptic.json", "expectations.json")

_MONO = re.compile(r"([xyz])(?:\^(\d+))?")


def _raw(name: str) -> bytes:
    return resources.files("lattangle.data").joinpath(name).read_bytes()


@lru_cache(maxsize=None)
def load(name: str) -> dict:
    return json.loads(_raw(name).decode("utf-8"))


def checksums() -> dict[str, str]:
    """sha256 of every bundled data file, keyed by file name."""
    return {name: hashlib.sha256(_raw(name)).hexdigest() for name in DATA_FILES}


def _monomial_exponents(text: str) -> tuple[int, int, int]:
    exps = {"x": 0, "y": 0, "z": 0}
    if text != "1":
        pos = 0
        for m in _MONO.finditer(text):
            if m.start() != pos:
                raise ValueError(f"bad monomial {text!r}")
            exps[m.group(1)] += int(m.group(2) or 1)
            pos = m.end()
        if pos != len(text):
            raise ValueError(f"bad monomial {text!r}")
    return exps["x"], exps["y"], exps["z"]


@lru_cache(maxsize=None)
def c222_coefficients() -> dict[tuple[int, int, int], MPoly]:
    """Map (ex, ey, ez) -> coefficient polynomial in a,b,c,d (27 entries)."""
    data = load("c222_table.json")
    params = data["parameters"]
    out = {}
    for row in data["rows"]:
        coeff = parse_poly(row["coefficient"], params)
        for mono in row["monomials"]:
            e = _monomial_exponents(mono)
            if e in out:
                raise ValueError(f"duplicate monomial {mono}")
            out[e] = coeff
    return out


@lru_cache(maxsize=None)
def c222_polynomial() -> MPoly:
    """P as a polynomial in a,b,c,d,x,y,z."""
    names = ("a", "b", "c", "d", "x", "y", "z")
    total = MPoly(names)
    for (ex, ey, ez), coeff in c222_coefficients().items():
        mono = MPoly(names, {(0, 0, 0, 0, ex, ey, ez): 1})
        total = total + coeff.with_variables(names) * mono
    return total


def genus5_polys() -> tuple[MPoly, MPoly]:
    data = load("genus5.json")
    return parse_poly(data["f1"], data["variables"]), parse_poly(data["f2"], data["variables"])


def elliptic_poly(key: str, variables=("a", "b", "c", "d")) -> MPoly:
    return parse_poly(load("elliptic.json")[key], variables)
