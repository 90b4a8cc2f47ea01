"""Reference values bundled with the package for regression checks.

* node polynomials ``N_delta(d)`` for ``delta <= 14`` (descending rational
  coefficients),
* Severi degrees ``N^{d, delta}`` for ``d <= 13`` (the irreducible counts are
  the entries with ``d >= delta + 2``),
* the quadratic exponents ``Q_delta`` of the generating function,
* the first nine leading coefficients of ``N_delta`` as polynomials in
  ``delta``, after dividing by ``3**delta / delta!``.
"""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources

from .polynomial import RationalPolynomial

__all__ = [
    "load_node_polynomials",
    "load_severi_table",
    "is_irreducible_entry",
    "irreducible_entries",
    "q_polynomials",
    "leading_coefficient_polynomials",
]


def _data(name: str) -> str:
    return resources.files("nodepoly").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def load_node_polynomials() -> dict[int, RationalPolynomial]:
    raw = json.loads(_data("appendix_a.json"))
    return {int(k): RationalPolynomial.from_pairs(v) for k, v in raw.items()}


@lru_cache(maxsize=None)
def load_severi_table() -> dict[tuple[int, int], int]:
    rows = csv.DictReader(io.StringIO(_data("appendix_b.tsv")), delimiter="\t")
    return {(int(r["d"]), int(r["delta"])): int(r["value"]) for r in rows}


def is_irreducible_entry(d: int, delta: int) -> bool:
    """Whether the tabulated Severi degree also counts irreducible curves.

    With ``delta <= d - 2`` every contributing diagram is connected, so the
    entry equals the genus ``(d-1)(d-2)/2 - delta`` Gromov-Witten invariant.
    """
    return d >= delta + 2


def irreducible_entries(max_degree: int | None = None) -> dict[tuple[int, int], int]:
    """Entries ``(d, g) -> N_{d, g}`` read off the Severi table."""
    out = {}
    for (d, delta), v in load_severi_table().items():
        if is_irreducible_entry(d, delta) and (max_degree is None or d <= max_degree):
            out[d, (d - 1) * (d - 2) // 2 - delta] = v
    return out


def _poly(*desc) -> RationalPolynomial:
    return RationalPolynomial.from_descending([Fraction(c) for c in desc])


@lru_cache(maxsize=None)
def q_polynomials() -> dict[int, RationalPolynomial]:
    """``Q_1 .. Q_14``, each quadratic in ``d``."""
    d1 = _poly(1, -1)
    table = {
        1: _poly(3) * d1 * d1,
        2: _poly(Fraction(-3, 2)) * d1 * _poly(14, -25),
    }
    scaled = {
        3: (690, -2364, 1899),
        4: (-12060, 47835, -45207),
        5: (217728, -965646, 1031823),
        6: (-4010328, 19451628, -22907925),
        7: (74884932, -391230216, 499072374),
        8: (-1412380980, 7860785643, -10727554959),
        9: (26842726680, -157836614730, 228307435911),
        10: (-513240952752, 3167809665372, -4822190211285),
        11: (9861407170992, -63560584231524, 101248067530602),
        12: (-190244562607008, 1275088266948600, -2115732543025293),
        13: (3682665360521280, -25576895657724768, 44039919476860362),
        14: (-71494333556133600, 513017995615177680, -913759995239314452),
    }
    for n, cs in scaled.items():
        table[n] = _poly(*(Fraction(c, n) for c in cs))
    return table


@lru_cache(maxsize=None)
def leading_coefficient_polynomials() -> list[RationalPolynomial]:
    """Coefficients of ``d**(2 delta - t)``, ``t = 0..8``, as polynomials in
    ``delta`` after dividing ``N_delta`` by ``3**delta / delta!``."""
    def falling(m):
        return RationalPolynomial.from_roots(list(range(m)))

    return [
        _poly(1),
        _poly(-2, 0),
        _poly(Fraction(-1, 3), Fraction(4, 3), 0),
        falling(2) * _poly(20, -13) / 6,
        -(falling(2) * _poly(69, -85, 92)) / 54,
        -(falling(3) * _poly(702, -629, -286)) / 270,
        falling(3) * _poly(6028, -15476, 11701, 4425) / 3240,
        falling(4) * _poly(13628, -6089, -29572, -24485) / 11340,
        -(falling(4) * _poly(282855, -931146, 417490, 425202, 1141616)) / 204120,
    ]
