"""Templates: the building blocks of floor diagrams.

A template lives on the vertices ``0, 1, ..., l``.  Its edges ``i -> j`` carry
positive integer weights, no edge is a *short edge* (``i -> i+1`` of weight
one) and every vertex strictly between ``0`` and ``l`` lies strictly inside
some edge.  This module enumerates templates, computes their statistics and
counts the markings of a template padded with ``k`` extra strands.
"""
from __future__ import annotations

import os
from collections import Counter, defaultdict
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import product
from fractions import Fraction
from math import comb, factorial
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import CacheFormatError, CapacityError, DomainError, InternalConsistencyError
from .polynomial import RationalPolynomial, interpolate

__all__ = [
    "Edge",
    "Template",
    "TemplateType",
    "KNOWN_TEMPLATE_COUNTS",
    "is_template",
    "enumerate_types",
    "templates_of_type",
    "generate_templates",
    "iter_templates_by_cuts",
    "class_values_at",
    "class_value_table",
    "template_class_keys",
    "count_extensions",
    "template_polynomial",
    "format_template_line",
    "parse_template_line",
    "write_template_cache",
    "read_template_cache",
    "cache_filename",
]

# number of templates of each cogenus (independently re-derived in the tests)
KNOWN_TEMPLATE_COUNTS = {1: 2, 2: 7, 3: 26, 4: 102, 5: 414, 6: 1711, 7: 7135, 8: 29913}

# ceiling on the number of strand midpoints handled by the marking counter
MAX_MIDPOINTS = 400


class Edge(NamedTuple):
    source: int
    target: int
    weight: int

    @property
    def length(self) -> int:
        return self.target - self.source


def is_template(length: int, edges: Iterable[Edge]) -> bool:
    edges = list(edges)
    if length < 1 or not edges:
        return False
    covered = [False] * (length + 1)
    top = 0
    for i, j, w in edges:
        if not (0 <= i < j <= length) or w < 1:
            return False
        if j == i + 1 and w == 1:
            return False
        top = max(top, j)
        for v in range(i + 1, j):
            covered[v] = True
    if top != length:
        return False
    return all(covered[1:length])


@dataclass(frozen=True)
class Template:
    """A template on ``0..length`` with edges kept in sorted order."""

    length: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if not is_template(self.length, self.edges):
            raise DomainError(f"not a template: l={self.length}, edges={self.edges}")
        if list(self.edges) != sorted(self.edges):
            raise DomainError("template edges must be sorted")

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]], length: int | None = None) -> "Template":
        es = sorted(Edge(*e) for e in edges)
        if length is None:
            length = max((e.target for e in es), default=0)
        return cls(length, tuple(es))

    @cached_property
    def cogenus(self) -> int:
        return sum(e.length * e.weight - 1 for e in self.edges)

    @cached_property
    def multiplicity(self) -> int:
        m = 1
        for e in self.edges:
            m *= e.weight * e.weight
        return m

    @cached_property
    def kappa(self) -> tuple[int, ...]:
        """``kappa[j]`` for ``j = 1..l`` (index 0 is a placeholder 0): the total
        weight of edges ``i -> k`` with ``i < j <= k``."""
        out = [0] * (self.length + 1)
        for i, j, w in self.edges:
            for v in range(i + 1, j + 1):
                out[v] += w
        return tuple(out)

    @cached_property
    def kmin(self) -> int:
        return max(self.kappa[j] - j + 1 for j in range(1, self.length + 1))

    @cached_property
    def epsilon(self) -> int:
        """1 if every edge arriving at the last vertex has weight one."""
        return int(all(e.weight == 1 for e in self.edges if e.target == self.length))

    @cached_property
    def tight_vertex(self) -> int:
        """Smallest ``j`` at which the bound defining ``kmin`` is attained."""
        for j in range(1, self.length + 1):
            if self.kappa[j] - j + 1 == self.kmin:
                return j
        raise AssertionError("unreachable")

    @cached_property
    def s(self) -> int:
        j = self.tight_vertex
        return sum(1 for e in self.edges if e.source == j - 1 and e.target == j)

    @cached_property
    def drop(self) -> int:
        """``cogenus - #edges``; zero only for templates built from
        edges of length*weight two."""
        return sum(e.length * e.weight - 2 for e in self.edges)

    @cached_property
    def type(self) -> "TemplateType":
        return TemplateType.from_counter(Counter((e.length, e.weight) for e in self.edges))

    @cached_property
    def edge_groups(self) -> tuple[tuple[Edge, int], ...]:
        return tuple(sorted(Counter(self.edges).items()))

    def __str__(self):
        return format_template_line(self)


@dataclass(frozen=True, order=True)
class TemplateType:
    """Multiset of edge kinds ``(length, weight) -> count``, stored sorted."""

    counts: tuple[tuple[tuple[int, int], int], ...]

    @classmethod
    def from_counter(cls, c) -> "TemplateType":
        return cls(tuple(sorted((k, v) for k, v in dict(c).items() if v)))

    @property
    def cogenus(self) -> int:
        return sum(c * (L * w - 1) for (L, w), c in self.counts)

    @property
    def drop(self) -> int:
        return sum(c * (L * w - 2) for (L, w), c in self.counts)

    @property
    def num_edges(self) -> int:
        return sum(c for _, c in self.counts)

    def as_dict(self) -> dict[tuple[int, int], int]:
        return dict(self.counts)


def _kinds(max_cost: int) -> list[tuple[int, int]]:
    return sorted(
        (L, w)
        for L in range(1, max_cost + 2)
        for w in range(1, max_cost + 2)
        if (L, w) != (1, 1) and L * w - 1 <= max_cost
    )


def enumerate_types(delta: int, max_drop: int | None = None) -> list[TemplateType]:
    """All edge-kind multisets of total cogenus ``delta``.

    With ``max_drop`` only types whose drop does not exceed it are returned.
    """
    if delta < 1:
        raise DomainError("cogenus must be positive")
    kinds = _kinds(delta)
    out: list[TemplateType] = []

    def rec(idx, left, drop_left, chosen):
        if left == 0:
            out.append(TemplateType(tuple(chosen)))
            return
        if idx == len(kinds):
            return
        L, w = kinds[idx]
        cost, dr = L * w - 1, L * w - 2
        c = 0
        while c * cost <= left and (drop_left is None or c * dr <= drop_left):
            nxt = chosen + [((L, w), c)] if c else chosen
            rec(idx + 1, left - c * cost, None if drop_left is None else drop_left - c * dr, nxt)
            c += 1

    rec(0, delta, max_drop, [])
    return sorted(out)


def templates_of_type(ttype: TemplateType) -> list[Template]:
    """Enumerate the templates of a given type by sliding edges rightwards.

    All edges start at vertex 0.  Edges are ordered by ``(length, weight)`` and
    moved one step at a time in non-decreasing index order, so every
    configuration of sources is reached by exactly one move sequence.  Within
    a kind the sources are kept non-increasing, which removes relabelings of
    identical edges.  Branches are cut as soon as vertex 0 can no longer keep
    an edge, some internal vertex can no longer be covered, or the current
    length exceeds the total edge length.
    """
    spec: list[tuple[int, int]] = []
    for kind, c in ttype.counts:
        spec.extend([kind] * c)
    n = len(spec)
    lens = [L for L, _ in spec]
    same_prev = [i > 0 and spec[i] == spec[i - 1] for i in range(n)]
    total_len = sum(lens)
    # suffix sums of (len - 1) and of "has length >= 2"
    cover_cap = [0] * (n + 1)
    long_after = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        cover_cap[i] = cover_cap[i + 1] + lens[i] - 1
        long_after[i] = long_after[i + 1] + (lens[i] >= 2)
    src = [0] * n
    out: list[Template] = []

    def emit():
        length = max(src[i] + lens[i] for i in range(n))
        edges = [Edge(src[i], src[i] + lens[i], spec[i][1]) for i in range(n)]
        if is_template(length, edges):
            out.append(Template(length, tuple(sorted(edges))))

    def pruned(r1):
        length = max(src[i] + lens[i] for i in range(n))
        if length > total_len:
            return True
        if not (src[r1] == 0 or r1 < n - 1 or any(src[i] == 0 for i in range(r1))):
            return True
        covered = [False] * (length + 1)
        for i in range(r1):
            for v in range(src[i] + 1, src[i] + lens[i]):
                covered[v] = True
        uncovered = [v for v in range(1, length) if not covered[v]]
        if len(uncovered) > cover_cap[r1]:
            return True
        if uncovered and uncovered[0] <= src[r1] and long_after[r1 + 1] == 0:
            return True
        return False

    def visit(r1):
        emit()
        for r2 in range(r1, n):
            if same_prev[r2] and src[r2 - 1] < src[r2] + 1:
                continue
            src[r2] += 1
            if not pruned(r2):
                visit(r2)
            src[r2] -= 1

    visit(0)
    return out


def _types_worker(ttype: TemplateType) -> list[Template]:
    return templates_of_type(ttype)


def generate_templates(delta: int, max_drop: int | None = None, workers: int = 1) -> list[Template]:
    """All templates of cogenus ``delta`` (optionally with bounded drop).

    Types are independent, so with ``workers > 1`` they are farmed out to a
    process pool; the output order does not depend on ``workers``.
    """
    types = enumerate_types(delta, max_drop)
    if workers > 1 and len(types) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_types_worker, types, chunksize=4))
    else:
        chunks = [templates_of_type(t) for t in types]
    return [t for chunk in chunks for t in chunk]


@lru_cache(maxsize=None)
def _multisets(budget: int) -> tuple[tuple[tuple[int, int], ...], ...]:
    """All multisets of edge kinds whose cogenus is at most ``budget``."""
    kinds = _kinds(budget) if budget > 0 else []
    out = []

    def rec(idx, left, chosen):
        if idx == len(kinds):
            out.append(tuple(chosen))
            return
        L, w = kinds[idx]
        cost = L * w - 1
        c = 0
        while c * cost <= left:
            rec(idx + 1, left - c * cost, chosen + [(L, w)] * c)
            c += 1

    rec(0, budget, [])
    out.sort(key=lambda m: (sum(L * w - 1 for L, w in m), m))
    return tuple(out)


def iter_templates_by_cuts(
    max_cogenus: int,
    fit_degree: int | None = None,
    exact_cogenus: bool = False,
) -> Iterator[Template]:
    """Enumerate templates vertex by vertex, choosing the outgoing edges of
    each vertex in turn.

    Yields every template of cogenus at most ``max_cogenus`` (exactly
    ``max_cogenus`` when ``exact_cogenus``).  With ``fit_degree = d`` only the
    templates with ``kmin + l - epsilon <= d`` are produced, i.e. those that
    can occur in a floor diagram of degree ``d``; branches are cut using the
    partial value of ``kmin`` and the furthest target seen so far.
    """
    edges: list[Edge] = []

    def rec(v, budget, top, kpart):
        if v > 0 and top == v:
            if exact_cogenus and budget:
                return
            t = Template(v, tuple(sorted(edges)))
            if fit_degree is None or t.kmin + t.length - t.epsilon <= fit_degree:
                yield t
            return
        for ms in _multisets(budget):
            if v == 0 and not ms:
                continue
            cost = sum(L * w - 1 for L, w in ms)
            new = [Edge(v, v + L, w) for L, w in ms]
            new_top = max([top] + [e.target for e in new])
            through = sum(e.weight for e in edges if e.target > v) + sum(e.weight for e in new)
            kp = max(kpart, through - v)
            if fit_degree is not None and kp + new_top - 1 > fit_degree:
                continue
            edges.extend(new)
            yield from rec(v + 1, budget - cost, new_top, kp)
            del edges[len(edges) - len(new):]

    if max_cogenus < 1:
        return
    yield from rec(0, max_cogenus, 0, -(10**9))


@lru_cache(maxsize=None)
def _outgoing_choices(budget: int, max_len: int):
    """Outgoing edge multisets from one vertex, with ``mu / prod(count!)``."""
    out = []
    for ms in _multisets(budget):
        if any(L > max_len for L, _ in ms):
            continue
        cost = sum(L * w - 1 for L, w in ms)
        weight = Fraction(1)
        for L, w in ms:
            weight *= w * w
        for c in Counter(ms).values():
            weight /= factorial(c)
        out.append((ms, cost, weight))
    return tuple(out)


def class_values_at(k: int, max_cogenus: int, max_length: int) -> dict[tuple[int, int, int], int]:
    """``sum mu(t) * count_extensions(t, k)`` over all templates ``t`` with
    ``kmin(t) <= k``, grouped by ``(cogenus, length, epsilon)``.

    Templates are never materialized: the sweep runs over template vertices,
    and its state records, for each later vertex, the number of incoming edges
    whose midpoint is not yet placed, their total weight and whether any of
    them is heavier than one.  Identical edges are made distinguishable at
    creation, paying ``1/c!``; the ``k + g - kappa`` short edges of a gap are
    identical, so a gap holding ``s`` of them with ``y`` midpoints admits
    ``(s + y)! / s!`` orders.
    """
    if k < 1:
        raise DomainError("k must be positive")
    results: dict[tuple[int, int, int], Fraction] = defaultdict(Fraction)
    # state: (cogenus used, open) where open[r] = (unplaced, weight, heavy)
    # describes edges ending r steps to the right of the current vertex
    states: dict[tuple[int, tuple], Fraction] = {(0, ()): Fraction(1)}
    for v in range(max_length + 1):
        nxt: dict[tuple[int, tuple], Fraction] = defaultdict(Fraction)
        for (c, open_), val in states.items():
            arriving = open_[0] if open_ else (0, 0, False)
            rest = list(open_[1:])
            if v > 0 and not any(W for _, W, _ in rest):
                if arriving[1]:
                    results[(c, v, int(not arriving[2]))] += val
                continue
            for ms, cost, weight in _outgoing_choices(max_cogenus - c, max_length - v):
                if v == 0 and not ms:
                    continue
                slots = list(rest)
                for L, w in ms:
                    while len(slots) < L:
                        slots.append((0, 0, False))
                    u, W, h = slots[L - 1]
                    slots[L - 1] = (u + 1, W + w, h or w > 1)
                shorts = k + v - sum(W for _, W, _ in slots)
                if shorts < 0:
                    continue
                base = val * weight
                ranges = [(slots[0][0],) if r == 0 else range(slots[r][0] + 1) for r in range(len(slots))]
                for ys in product(*ranges):
                    ways = factorial(shorts + sum(ys)) // factorial(shorts)
                    for r, y in enumerate(ys):
                        ways *= comb(slots[r][0], y)
                    new_open = tuple((u - y, W, h) for (u, W, h), y in zip(slots, ys))
                    while new_open and new_open[-1] == (0, 0, False):
                        new_open = new_open[:-1]
                    nxt[(c + cost, new_open)] += base * ways
        states = nxt
    out = {}
    for key, val in results.items():
        if val.denominator != 1:
            raise InternalConsistencyError(f"non-integral class value {val} for {key}")
        out[key] = int(val)
    return out


def class_value_table(max_cogenus: int, degree: int) -> dict[tuple[int, int, int], dict[int, int]]:
    """Class sums for every start ``k = 1..degree`` and every template that
    fits, i.e. ``k + length <= degree + 1``."""
    table: dict[tuple[int, int, int], dict[int, int]] = defaultdict(dict)
    for k in range(1, degree + 1):
        for key, val in class_values_at(k, max_cogenus, degree + 1 - k).items():
            if val:
                table[key][k] = val
    return dict(table)


def template_class_keys(cogenus: int) -> set[tuple[int, int, int]]:
    """The keys ``(kmin, length, epsilon)`` attained by templates of the given
    cogenus.

    Same vertex sweep as :func:`class_values_at`, keeping only reachability:
    the state holds the cogenus used, the weight (and heaviness) of open edges
    by relative target, and the running maximum of ``kappa_j - j + 1``.
    """
    if cogenus < 1:
        raise DomainError("cogenus must be positive")
    max_length = cogenus + 1  # every edge has length <= its cost + 1
    keys: set[tuple[int, int, int]] = set()
    states = {(0, (), -(10**9))}
    for v in range(max_length + 1):
        nxt = set()
        for c, open_, kpart in states:
            arriving = open_[0] if open_ else (0, False)
            rest = list(open_[1:])
            if v > 0:
                kpart = max(kpart, sum(W for W, _ in open_) - v + 1)
            if v > 0 and not any(W for W, _ in rest):
                if arriving[0] and c == cogenus:
                    keys.add((kpart, v, int(not arriving[1])))
                continue
            for ms, cost, _ in _outgoing_choices(cogenus - c, max_length - v):
                if v == 0 and not ms:
                    continue
                slots = list(rest)
                for L, w in ms:
                    while len(slots) < L:
                        slots.append((0, False))
                    W, h = slots[L - 1]
                    slots[L - 1] = (W + w, h or w > 1)
                while slots and slots[-1] == (0, False):
                    slots.pop()
                nxt.add((c + cost, tuple(slots), kpart))
        states = nxt
    return keys


# -- marking counts ------------------------------------------------------


def count_extensions(t: Template, k: int) -> int:
    """Number of markings of ``t`` padded to ``k`` strands.

    The padding adds ``k + i - 1 - kappa[i]`` short edges ``i-1 -> i``.  A
    marking is a linear order of vertices and edge midpoints compatible with
    the edges, up to permuting midpoints of identical edges.  Vertices are
    already totally ordered, so a marking amounts to choosing a gap for every
    midpoint of a long edge and an order inside each gap.
    """
    if k < t.kmin:
        raise DomainError(f"k={k} is below kmin={t.kmin}")
    l = t.length
    total = sum(c for _, c in t.edge_groups)
    if total > MAX_MIDPOINTS:
        raise CapacityError(f"template has {total} edges; ceiling is {MAX_MIDPOINTS}")
    fixed = [[] for _ in range(l)]
    long_groups = []
    for e, c in t.edge_groups:
        if e.length == 1:
            fixed[e.source].append(c)
        else:
            long_groups.append((e.source, e.target, c))
    states: dict[tuple[int, ...], int] = {tuple(c for _, _, c in long_groups): 1}
    for g in range(l):
        shorts = k + g - t.kappa[g + 1]
        base = shorts + sum(fixed[g])
        denom = factorial(shorts)
        for c in fixed[g]:
            denom *= factorial(c)
        active = [i for i, (a, b, _) in enumerate(long_groups) if a <= g < b]
        new: dict[tuple[int, ...], int] = defaultdict(int)
        for rem, val in states.items():
            ranges = []
            for i in active:
                if long_groups[i][1] == g + 1:
                    ranges.append((rem[i],))
                else:
                    ranges.append(range(rem[i] + 1))
            for xs in product(*ranges):
                ways = factorial(base + sum(xs)) // denom
                r = list(rem)
                for i, x in zip(active, xs):
                    ways //= factorial(x)
                    r[i] -= x
                new[tuple(r)] += val * ways
        states = new
    return states.get(tuple(0 for _ in long_groups), 0)


@lru_cache(maxsize=None)
def template_polynomial(t: Template) -> RationalPolynomial:
    """The polynomial ``k -> count_extensions(t, k)`` for ``k >= kmin``.

    Interpolated through ``cogenus + 1`` consecutive values starting at
    ``kmin`` and checked at two further points.
    """
    k0, dl = t.kmin, t.cogenus
    xs = list(range(k0, k0 + dl + 1))
    p = interpolate(xs, [count_extensions(t, k) for k in xs])
    for k in (k0 + dl + 1, k0 + dl + 2):
        if p(k) != count_extensions(t, k):
            raise InternalConsistencyError(f"interpolation check failed for {t} at k={k}")
    return p


# -- text cache ------------------------------------------------------------

CACHE_VERSION = 1


def format_template_line(t: Template) -> str:
    body = ",".join(f"{e.source}->{e.target}:{e.weight}" for e in t.edges)
    return f"l={t.length}; {body}"


def parse_template_line(line: str) -> Template:
    try:
        head, body = line.split(";", 1)
        key, val = head.strip().split("=")
        if key != "l":
            raise ValueError(key)
        length = int(val)
        edges = []
        for part in body.strip().split(","):
            arrow, w = part.split(":")
            i, j = arrow.split("->")
            edges.append(Edge(int(i), int(j), int(w)))
        t = Template(length, tuple(edges))
    except (ValueError, DomainError) as exc:
        raise CacheFormatError(f"bad template line {line!r}: {exc}") from None
    return t


def cache_filename(delta: int, max_drop: int | None = None) -> str:
    if max_drop is None:
        return f"templates_{delta}.txt"
    return f"templates_{delta}_maxdrop{max_drop}.txt"


def write_template_cache(path, delta: int, templates: Sequence[Template], max_drop: int | None = None) -> None:
    header = f"# cogenus={delta} count={len(templates)} version={CACHE_VERSION}"
    if max_drop is not None:
        header += f" max_drop={max_drop}"
    lines = [header] + [format_template_line(t) for t in templates]
    path = Path(path)
    tmp = path.with_suffix(path.suffix + f".tmp{os.getpid()}")
    tmp.write_text("\n".join(lines) + "\n")
    os.replace(tmp, path)


def read_template_cache(path, delta: int | None = None, max_drop: int | None = None) -> list[Template]:
    """Load a cache file, validating header, per-line cogenus and counts."""
    text = Path(path).read_text()
    lines = text.splitlines()
    if not lines or not lines[0].startswith("#"):
        raise CacheFormatError(f"{path}: missing header")
    fields = {}
    for tok in lines[0][1:].split():
        if "=" not in tok:
            raise CacheFormatError(f"{path}: bad header token {tok!r}")
        k, v = tok.split("=", 1)
        fields[k] = v
    try:
        cog, count, version = int(fields["cogenus"]), int(fields["count"]), int(fields["version"])
        file_drop = int(fields["max_drop"]) if "max_drop" in fields else None
    except (KeyError, ValueError):
        raise CacheFormatError(f"{path}: incomplete header {lines[0]!r}") from None
    if version != CACHE_VERSION:
        raise CacheFormatError(f"{path}: unsupported version {version}")
    if delta is not None and cog != delta:
        raise CacheFormatError(f"{path}: cogenus {cog}, expected {delta}")
    if file_drop != max_drop and (delta is not None or max_drop is not None):
        raise CacheFormatError(f"{path}: max_drop {file_drop}, expected {max_drop}")
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != count:
        raise CacheFormatError(f"{path}: header says {count} templates, found {len(body)}")
    if file_drop is None and cog in KNOWN_TEMPLATE_COUNTS and count != KNOWN_TEMPLATE_COUNTS[cog]:
        raise CacheFormatError(f"{path}: {count} templates of cogenus {cog}, expected {KNOWN_TEMPLATE_COUNTS[cog]}")
    out = []
    for ln in body:
        t = parse_template_line(ln)
        if t.cogenus != cog:
            raise CacheFormatError(f"{path}: template {ln!r} has cogenus {t.cogenus}")
        if file_drop is not None and t.drop > file_drop:
            raise CacheFormatError(f"{path}: template {ln!r} exceeds max_drop")
        out.append(t)
    if len(set(out)) != len(out):
        raise CacheFormatError(f"{path}: duplicate templates")
    return out
