"""Node polynomials and Severi degrees from the template decomposition.

A floor diagram of degree ``d`` is an ordered collection of templates placed
at increasing positions ``k_1 < k_2 < ...``, so Severi degrees are nested sums
of template polynomials.  Done symbolically in ``d`` the sums give the node
polynomial; done numerically at a fixed ``d`` they give the Severi degree.
"""
from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .diagrams import count_markings_bruteforce, enumerate_floor_diagrams
from .errors import CapacityError, DomainError, InternalConsistencyError
from .polynomial import RationalPolynomial, discrete_sum
from .templates import (
    Template,
    cache_filename,
    generate_templates,
    class_value_table,
    read_template_cache,
    template_polynomial,
    write_template_cache,
)

__all__ = [
    "CACHE_ENV_VAR",
    "TemplateClass",
    "TemplateStore",
    "NodePolynomialResult",
    "ThresholdResult",
    "default_store",
    "build_template_classes",
    "node_polynomial",
    "severi_degree",
    "severi_degree_bruteforce",
    "gromov_witten",
    "q_transform",
    "polynomiality_threshold",
    "BRUTEFORCE_MAX_DEGREE",
]

CACHE_ENV_VAR = "NODEPOLY_CACHE_DIR"
BRUTEFORCE_MAX_DEGREE = 7


@dataclass(frozen=True)
class TemplateClass:
    """Templates of one cogenus sharing ``(kmin, l, epsilon)``.

    ``combined_poly`` is the sum of ``mu * P`` over the members; the nested
    sums only ever see a template through these four numbers and that sum.
    """

    cogenus: int
    kmin: int
    length: int
    epsilon: int
    combined_poly: RationalPolynomial
    size: int

    @property
    def key(self) -> tuple[int, int, int]:
        return (self.kmin, self.length, self.epsilon)


def _poly_chunk(templates: Sequence[Template]) -> list[RationalPolynomial]:
    return [template_polynomial(t) for t in templates]


def _group_classes(cogenus: int, templates: Sequence[Template], polys: Sequence[RationalPolynomial]) -> list[TemplateClass]:
    acc: dict[tuple[int, int, int], list] = {}
    for t, p in zip(templates, polys):
        key = (t.kmin, t.length, t.epsilon)
        slot = acc.setdefault(key, [RationalPolynomial(), 0])
        slot[0] = slot[0] + p * t.multiplicity
        slot[1] += 1
    return [TemplateClass(cogenus, k[0], k[1], k[2], v[0], v[1]) for k, v in sorted(acc.items())]


class TemplateStore:
    """Memoizes templates, their polynomials and classes; optionally backed by
    a directory of text caches."""

    def __init__(self, cache_dir: str | os.PathLike | None = None, workers: int = 1):
        self.cache_dir = Path(cache_dir) if cache_dir else None
        self.workers = max(1, int(workers))
        self._templates: dict[tuple[int, int | None], list[Template]] = {}
        self._classes: dict[tuple[int, int | None], list[TemplateClass]] = {}
        self._tables: dict[tuple[int, int], dict] = {}

    def templates(self, delta: int, max_drop: int | None = None) -> list[Template]:
        if max_drop is not None and max_drop >= delta - 1:
            max_drop = None  # the bound excludes nothing
        key = (delta, max_drop)
        if key in self._templates:
            return self._templates[key]
        out = None
        path = self.cache_dir / cache_filename(delta, max_drop) if self.cache_dir else None
        if path is not None and path.exists():
            out = read_template_cache(path, delta, max_drop)
        if out is None:
            full = self._templates.get((delta, None))
            if full is not None:
                out = [t for t in full if t.drop <= max_drop]
            else:
                out = generate_templates(delta, max_drop, workers=self.workers)
            if path is not None:
                path.parent.mkdir(parents=True, exist_ok=True)
                write_template_cache(path, delta, out, max_drop)
        self._templates[key] = out
        return out

    def polynomials(self, templates: Sequence[Template]) -> list[RationalPolynomial]:
        if self.workers > 1 and len(templates) > 200:
            from concurrent.futures import ProcessPoolExecutor

            step = max(50, len(templates) // (self.workers * 8))
            chunks = [templates[i : i + step] for i in range(0, len(templates), step)]
            with ProcessPoolExecutor(max_workers=self.workers) as pool:
                parts = list(pool.map(_poly_chunk, chunks))
            return [p for part in parts for p in part]
        return _poly_chunk(templates)

    def classes(self, delta: int, max_drop: int | None = None) -> list[TemplateClass]:
        if max_drop is not None and max_drop >= delta - 1:
            max_drop = None
        key = (delta, max_drop)
        if key not in self._classes:
            ts = self.templates(delta, max_drop)
            self._classes[key] = _group_classes(delta, ts, self.polynomials(ts))
        return self._classes[key]

    def class_table(self, max_cogenus: int, degree: int) -> dict[tuple[int, int, int], dict[int, int]]:
        """Numeric class sums ``(cogenus, l, eps) -> {k: value}`` for every
        template of cogenus ``<= max_cogenus`` fitting in degree ``degree``.
        A cached table for larger parameters is filtered instead of recomputed."""
        for (b, dg), tab in self._tables.items():
            if b >= max_cogenus and dg >= degree:
                out = {}
                for (c, l, e), vals in tab.items():
                    if c <= max_cogenus:
                        sub = {k: v for k, v in vals.items() if k + l <= degree + 1}
                        if sub:
                            out[(c, l, e)] = sub
                return out
        tab = class_value_table(max_cogenus, degree)
        self._tables[(max_cogenus, degree)] = tab
        return tab


_DEFAULT_STORE: TemplateStore | None = None


def default_store() -> TemplateStore:
    global _DEFAULT_STORE
    if _DEFAULT_STORE is None:
        _DEFAULT_STORE = TemplateStore(os.environ.get(CACHE_ENV_VAR) or None)
    return _DEFAULT_STORE


def build_template_classes(delta: int, store: TemplateStore | None = None) -> dict[int, list[TemplateClass]]:
    """Template classes for every cogenus ``1..delta``."""
    if delta < 1:
        raise DomainError("delta must be positive")
    store = store or default_store()
    return {j: store.classes(j) for j in range(1, delta + 1)}


# -- symbolic evaluation ----------------------------------------------------------


@dataclass(frozen=True)
class NodePolynomialResult:
    delta: int
    poly: RationalPolynomial

    def __call__(self, d):
        return self.poly(d)


def node_polynomial(delta: int, store: TemplateStore | None = None) -> NodePolynomialResult:
    """The node polynomial ``N_delta(d)``.

    Collections are built left to right.  A partial collection only matters
    through its cogenus ``c``, the first vertex ``t`` where the next template
    may start, and the polynomial ``Q`` of the sums done so far (as a function
    of the next template's position), so partial collections with equal
    ``(c, t)`` are merged by adding their polynomials.  Placing a class at
    positions ``k = max(kmin, t) .. x - l`` turns ``Q`` into
    ``x -> sum_k muP(k) Q(k)``, a discrete integral.
    """
    if delta < 0:
        raise DomainError("delta must be non-negative")
    if delta == 0:
        return NodePolynomialResult(0, RationalPolynomial.constant(1))
    classes = build_template_classes(delta, store)
    states: dict[tuple[int, int], RationalPolynomial] = {(0, 1): RationalPolynomial.constant(1)}
    total = RationalPolynomial()
    for c in range(delta):
        layer = sorted((t, q) for (cc, t), q in states.items() if cc == c)
        for t, q in layer:
            for j in range(1, delta - c + 1):
                for cls in classes[j]:
                    a = max(cls.kmin, t)
                    F = discrete_sum(cls.combined_poly * q, a)
                    if c + j == delta:
                        total = total + F.shift(cls.epsilon - cls.length)
                    else:
                        key = (c + j, a + cls.length)
                        states[key] = states.get(key, RationalPolynomial()) + F.shift(-cls.length)
    return NodePolynomialResult(delta, total)


# -- numeric evaluation -----------------------------------------------------------


def severi_degree(d: int, delta: int, store: TemplateStore | None = None) -> int:
    """The Severi degree ``N^{d, delta}`` as an exact integer.

    The same nested sums as :func:`node_polynomial` with ``d`` fixed, so every
    sum is finite and empty ranges contribute nothing.  The class sums
    ``sum mu * P`` at each position come from a transfer computation over
    template vertices (see :func:`class_value_table`), which leaves out
    templates whose ``kmin`` exceeds the position.
    """
    if d < 1:
        raise DomainError("degree must be positive")
    if delta < 0:
        raise DomainError("delta must be non-negative")
    if delta == 0:
        return 1
    store = store or default_store()
    classes: dict[int, list[tuple[int, int, dict[int, int]]]] = defaultdict(list)
    for (j, l, eps), vals in sorted(store.class_table(delta, d).items()):
        classes[j].append((l, eps, vals))
    states: dict[tuple[int, int], int] = {(0, 1): 1}
    total = 0
    for c in range(delta):
        layer = sorted((t, n) for (cc, t), n in states.items() if cc == c)
        for t, n in layer:
            for j in range(1, delta - c + 1):
                for l, eps, vals in classes.get(j, ()):
                    last = c + j == delta
                    hi = d - l + (eps if last else 0)
                    for k in range(t, hi + 1):
                        v = vals.get(k, 0)
                        if not v:
                            continue
                        if last:
                            total += n * v
                        else:
                            key = (c + j, k + l)
                            states[key] = states.get(key, 0) + n * v
    return total


def severi_degree_bruteforce(d: int, delta: int) -> int:
    """Severi degree as a sum over all (possibly disconnected) floor diagrams."""
    if d < 1 or delta < 0:
        raise DomainError("need d >= 1 and delta >= 0")
    if d > BRUTEFORCE_MAX_DEGREE:
        raise CapacityError(f"brute force limited to d <= {BRUTEFORCE_MAX_DEGREE}")
    return sum(D.multiplicity * count_markings_bruteforce(D) for D in enumerate_floor_diagrams(d, delta))


def gromov_witten(d: int, g: int) -> int:
    """Number of irreducible degree ``d`` genus ``g`` curves through
    ``3d + g - 1`` general points, as a sum over connected diagrams."""
    if d < 1:
        raise DomainError("degree must be positive")
    top = (d - 1) * (d - 2) // 2
    if not 0 <= g <= top:
        raise DomainError(f"genus must lie in [0, {top}] for degree {d}")
    if d > BRUTEFORCE_MAX_DEGREE:
        raise CapacityError(f"diagram enumeration limited to d <= {BRUTEFORCE_MAX_DEGREE}")
    delta = top - g
    return sum(
        D.multiplicity * count_markings_bruteforce(D)
        for D in enumerate_floor_diagrams(d, delta, connected_only=True)
    )


# -- generating function --------------------------------------------------------


def q_transform(node_polys: Sequence) -> list[RationalPolynomial]:
    """``Q_1..Q_D`` with ``sum N_delta x^delta = exp(sum Q_delta x^delta)``.

    Uses ``delta N_delta = sum_{j=1}^{delta} j Q_j N_{delta-j}``.
    """
    polys = [p.poly if isinstance(p, NodePolynomialResult) else p for p in node_polys]
    if not polys or polys[0] != RationalPolynomial.constant(1):
        raise DomainError("the series must start with N_0 = 1")
    qs: list[RationalPolynomial] = [RationalPolynomial()]  # Q_0 placeholder
    for n in range(1, len(polys)):
        acc = polys[n] * n
        for j in range(1, n):
            acc = acc - qs[j] * polys[n - j] * j
        qs.append(acc / n)
    return qs[1:]


# -- thresholds -----------------------------------------------------------------


@dataclass(frozen=True)
class ThresholdResult:
    delta: int
    threshold: int
    window_top: int
    mismatches: tuple[int, ...]  # degrees d < threshold where the polynomial fails

    def __int__(self):
        return self.threshold


def polynomiality_threshold(
    delta: int,
    store: TemplateStore | None = None,
    node_poly: RationalPolynomial | None = None,
) -> ThresholdResult:
    """Smallest ``d*`` with ``N_delta(d) = N^{d, delta}`` on ``[d*, delta + 2]``.

    Polynomiality is known to hold from ``d = delta`` on, so agreement on the
    window is checked exactly for every degree from ``delta + 2`` down to 1.
    """
    if delta < 1:
        raise DomainError("delta must be positive")
    store = store or default_store()
    poly = node_poly if node_poly is not None else node_polynomial(delta, store).poly
    top = delta + 2
    agree = {d: poly(d) == severi_degree(d, delta, store) for d in range(1, top + 1)}
    d_star = top + 1
    while d_star > 1 and agree[d_star - 1]:
        d_star -= 1
    if d_star > top:
        raise InternalConsistencyError(f"N_{delta} disagrees with the Severi degree at d = {top}")
    return ThresholdResult(delta, d_star, top, tuple(d for d in range(1, d_star) if not agree[d]))
