"""Labeled floor diagrams: statistics, enumeration, markings, decomposition.

A labeled floor diagram of degree ``d`` is a multiset of weighted edges
``i -> j`` (``1 <= i < j <= d``) such that every vertex has divergence
(outgoing weight minus incoming weight) at most one.  The code here does not
use template polynomials, so it serves as an independent oracle for the
template machinery.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import comb
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, DomainError
from .templates import Edge, Template

__all__ = [
    "LabeledFloorDiagram",
    "diagram_cogenus",
    "diagram_multiplicity",
    "count_markings_bruteforce",
    "enumerate_floor_diagrams",
    "TemplateDecomposition",
    "decompose",
    "recompose",
    "MAX_MARKING_ELEMENTS",
]

# the marking counter memoizes over (floors placed, per-class counts); this
# ceiling on sinks plus midpoints keeps it at desk scale
MAX_MARKING_ELEMENTS = 60


@dataclass(frozen=True)
class LabeledFloorDiagram:
    degree: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        d = self.degree
        if d < 1:
            raise DomainError("degree must be positive")
        for i, j, w in self.edges:
            if not (1 <= i < j <= d) or w < 1:
                raise DomainError(f"bad edge {i}->{j} (weight {w}) for degree {d}")
        if list(self.edges) != sorted(self.edges):
            raise DomainError("edges must be sorted")
        for v in range(1, d + 1):
            if self.divergence(v) > 1:
                raise DomainError(f"vertex {v} has divergence {self.divergence(v)}")

    @classmethod
    def from_edges(cls, degree: int, edges: Iterable[Sequence[int]]) -> "LabeledFloorDiagram":
        return cls(degree, tuple(sorted(Edge(*e) for e in edges)))

    def divergence(self, v: int) -> int:
        out = sum(e.weight for e in self.edges if e.source == v)
        inc = sum(e.weight for e in self.edges if e.target == v)
        return out - inc

    @cached_property
    def components(self) -> list[tuple[int, int]]:
        """``(vertices, edges)`` for each connected component."""
        parent = list(range(self.degree + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, j, _ in self.edges:
            parent[find(i)] = find(j)
        verts = Counter(find(v) for v in range(1, self.degree + 1))
        edges = Counter(find(e.source) for e in self.edges)
        return [(verts[r], edges[r]) for r in sorted(verts)]

    @property
    def is_connected(self) -> bool:
        return len(self.components) == 1

    @property
    def genus(self) -> int:
        if not self.is_connected:
            raise DomainError("genus is only defined for connected diagrams")
        return len(self.edges) - self.degree + 1

    @cached_property
    def cogenus(self) -> int:
        return diagram_cogenus(self)

    @cached_property
    def multiplicity(self) -> int:
        return diagram_multiplicity(self)


def diagram_cogenus(D: LabeledFloorDiagram) -> int:
    parts = D.components
    total = 0
    for dj, ej in parts:
        gj = ej - dj + 1
        total += (dj - 1) * (dj - 2) // 2 - gj
    for a in range(len(parts)):
        for b in range(a + 1, len(parts)):
            total += parts[a][0] * parts[b][0]
    return total


def diagram_multiplicity(D: LabeledFloorDiagram) -> int:
    m = 1
    for e in D.edges:
        m *= e.weight * e.weight
    return m


def count_markings_bruteforce(D: LabeledFloorDiagram) -> int:
    """Number of markings of ``D`` by direct search.

    The extended poset has the floors ``1 < ... < d``, one midpoint per edge
    (after its source floor, before its target floor) and ``1 - div(j)`` sinks
    after floor ``j``.  Markings are the linear orders of this poset up to
    exchanging midpoints of identical edges or sinks of the same floor, which
    is the number of distinct words obtained by writing each element as its
    class label.  Words are counted by a memoized search over prefixes.
    """
    d = D.degree
    classes: list[tuple[int, int | None, int]] = []  # (after floor, before floor, size)
    for e, c in sorted(Counter(D.edges).items()):
        classes.append((e.source, e.target, c))
    for v in range(1, d + 1):
        c = 1 - D.divergence(v)
        if c:
            classes.append((v, None, c))
    elements = sum(c for _, _, c in classes)
    if elements > MAX_MARKING_ELEMENTS:
        raise CapacityError(f"{elements} midpoints and sinks exceed the ceiling {MAX_MARKING_ELEMENTS}")
    sizes = tuple(c for _, _, c in classes)
    due_at = [[i for i, (_, b, _) in enumerate(classes) if b == v] for v in range(d + 2)]

    @lru_cache(maxsize=None)
    def words(f: int, placed: tuple[int, ...]) -> int:
        if f == d and placed == sizes:
            return 1
        total = 0
        if f < d and all(placed[i] == sizes[i] for i in due_at[f + 1]):
            total += words(f + 1, placed)
        for i, (a, b, c) in enumerate(classes):
            if placed[i] < c and f >= a and (b is None or f < b):
                nxt = placed[:i] + (placed[i] + 1,) + placed[i + 1 :]
                total += words(f, nxt)
        return total

    result = words(0, tuple(0 for _ in classes))
    words.cache_clear()
    return result


def enumerate_floor_diagrams(d: int, delta: int, connected_only: bool = False) -> Iterator[LabeledFloorDiagram]:
    """All labeled floor diagrams of degree ``d`` and cogenus ``delta``.

    Any diagram of degree ``d`` has cogenus ``C(d, 2) - #edges``, so the search
    fixes the number of edges and assigns outgoing edge multisets vertex by
    vertex, keeping the outgoing weight at most the incoming weight plus one.
    """
    if d < 1 or delta < 0:
        raise DomainError("need d >= 1 and delta >= 0")
    n_edges = comb(d, 2) - delta
    if n_edges < 0:
        return
    inflow = [0] * (d + 2)
    edges: list[Edge] = []

    def choices(v, cap, rem):
        # multisets of (target, weight) from v, total weight <= cap, size <= rem
        items = [(t, w) for t in range(v + 1, d + 1) for w in range(1, cap + 1)]
        picked: list[Edge] = []

        def rec(idx, cap_left, rem_left):
            if idx == len(items):
                yield list(picked)
                return
            t, w = items[idx]
            yield from rec(idx + 1, cap_left, rem_left)
            c = 0
            while (c + 1) * w <= cap_left and c + 1 <= rem_left:
                c += 1
                picked.append(Edge(v, t, w))
                yield from rec(idx + 1, cap_left - c * w, rem_left - c)
            del picked[len(picked) - c :]

        yield from rec(0, cap, rem)

    def search(v, rem):
        if v == d:
            if rem == 0:
                D = LabeledFloorDiagram(d, tuple(sorted(edges)))
                if not connected_only or D.is_connected:
                    yield D
            return
        # divergence <= 1: outgoing weight at most incoming weight plus one
        cap = inflow[v] + 1
        for out in choices(v, cap, rem):
            for e in out:
                inflow[e.target] += e.weight
            edges.extend(out)
            yield from search(v + 1, rem - len(out))
            del edges[len(edges) - len(out) :]
            for e in out:
                inflow[e.target] -= e.weight

    yield from search(1, n_edges)


# -- template decomposition ----------------------------------------------------


@dataclass(frozen=True)
class TemplateDecomposition:
    degree: int
    parts: tuple[tuple[Template, int], ...]  # (template, smallest vertex)


def _extended_edges(D: LabeledFloorDiagram) -> list[Edge]:
    d = D.degree
    out = list(D.edges)
    for v in range(1, d + 1):
        out.extend([Edge(v, d + 1, 1)] * (1 - D.divergence(v)))
    return out


def decompose(D: LabeledFloorDiagram) -> TemplateDecomposition:
    """Split ``D`` into templates placed left to right.

    A sink vertex ``d+1`` absorbs the missing divergence, short edges are
    discarded and the remaining edges are grouped into blocks of overlapping
    edges; each block, shifted so that it starts at 0, is a template.
    """
    long_edges = sorted(e for e in _extended_edges(D) if not (e.weight == 1 and e.length == 1))
    parts: list[tuple[Template, int]] = []
    block: list[Edge] = []
    reach = 0
    for e in long_edges:
        if block and e.source >= reach:
            parts.append(_shift_block(block))
            block = []
        block.append(e)
        reach = max(reach, e.target)
    if block:
        parts.append(_shift_block(block))
    return TemplateDecomposition(D.degree, tuple(parts))


def _shift_block(block: list[Edge]) -> tuple[Template, int]:
    k = min(e.source for e in block)
    return Template.from_edges([(e.source - k, e.target - k, e.weight) for e in block]), k


def recompose(dec: TemplateDecomposition) -> LabeledFloorDiagram:
    """Inverse of :func:`decompose`.

    In the extended diagram the total weight crossing the gap between ``v``
    and ``v + 1`` equals ``v``; the short edges make up the difference left by
    the templates.
    """
    d = dec.degree
    crossing = [0] * (d + 2)
    edges: list[Edge] = []
    last = 0
    for t, k in dec.parts:
        if k < 1 or k < last or k + t.length > d + 1:
            raise DomainError(f"template placed at {k} does not fit")
        last = k + t.length
        for e in t.edges:
            edges.append(Edge(e.source + k, e.target + k, e.weight))
            for v in range(e.source + k, e.target + k):
                crossing[v] += e.weight
    for v in range(1, d + 1):
        short = v - crossing[v]
        if short < 0:
            raise DomainError(f"templates carry weight {crossing[v]} past vertex {v}")
        edges.extend([Edge(v, v + 1, 1)] * short)
    final = []
    for e in edges:
        if e.target == d + 1:
            if e.weight != 1:
                raise DomainError("edges into the sink vertex must have weight one")
            continue
        final.append(e)
    return LabeledFloorDiagram(d, tuple(sorted(final)))
