from __future__ import annotations

from collections import Counter, defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nodepoly.errors import CacheFormatError, CapacityError, DomainError
from nodepoly.templates import (
    Edge,
    Template,
    cache_filename,
    class_value_table,
    class_values_at,
    count_extensions,
    enumerate_types,
    format_template_line,
    generate_templates,
    is_template,
    iter_templates_by_cuts,
    parse_template_line,
    read_template_cache,
    template_polynomial,
    templates_of_type,
    write_template_cache,
)
from reference_values import FIGURE_ROWS, TEMPLATE_COUNTS


@pytest.fixture(scope="module")
def small_templates():
    return {j: generate_templates(j) for j in range(1, 6)}


def test_is_template_rules():
    assert is_template(1, [Edge(0, 1, 2)])
    assert not is_template(1, [Edge(0, 1, 1)])  # a short edge
    assert not is_template(2, [Edge(0, 1, 2), Edge(1, 2, 2)])  # vertex 1 uncovered
    assert not is_template(3, [Edge(0, 2, 1)])  # nothing reaches the end
    assert not is_template(2, [])
    with pytest.raises(DomainError):
        Template(1, (Edge(0, 1, 1),))


@pytest.mark.parametrize("delta", range(1, 6))
def test_counts_small(small_templates, delta):
    ts = small_templates[delta]
    assert len(ts) == TEMPLATE_COUNTS[delta]
    assert len(set(ts)) == len(ts)
    assert all(t.cogenus == delta for t in ts)


@pytest.mark.parametrize("delta", range(1, 7))
def test_sliding_enumeration_agrees_with_vertex_sweep(delta):
    # two unrelated enumeration orders must produce the same set
    a = set(generate_templates(delta))
    b = set(iter_templates_by_cuts(delta, exact_cogenus=True))
    assert a == b


def test_figure_rows():
    by_edges = {t.edges: t for j in (1, 2) for t in generate_templates(j)}
    assert len(by_edges) == len(FIGURE_ROWS)
    for edges, dl, l, mu, eps, kappa, kmin, P, s in FIGURE_ROWS:
        t = by_edges[tuple(sorted(Edge(*e) for e in edges))]
        assert (t.cogenus, t.length, t.multiplicity, t.epsilon, t.kappa[1:], t.kmin, t.s) == (dl, l, mu, eps, kappa, kmin, s)
        for k in range(kmin, kmin + 6):
            assert count_extensions(t, k) == P(k)


def test_types_and_drop_filter():
    assert len(enumerate_types(2)) == 5
    for delta in range(1, 7):
        full = generate_templates(delta)
        for e in range(delta):
            sub = generate_templates(delta, max_drop=e)
            assert set(sub) == {t for t in full if t.drop <= e}
    for ttype in enumerate_types(4):
        assert all(t.type == ttype for t in templates_of_type(ttype))


def test_workers_do_not_change_output():
    assert generate_templates(5, workers=2) == generate_templates(5)


def test_domain_errors():
    with pytest.raises(DomainError):
        enumerate_types(0)
    t = Template.from_edges([(0, 1, 2)])
    with pytest.raises(DomainError):
        count_extensions(t, 1)
    with pytest.raises(DomainError):
        class_values_at(0, 2, 3)


def test_capacity_ceiling():
    t = Template.from_edges([(0, 1, 2)] * 401)
    with pytest.raises(CapacityError):
        count_extensions(t, t.kmin)


@pytest.mark.parametrize("delta", [1, 2, 3])
def test_extension_count_matches_gap_placement_oracle(small_templates, delta):
    # independent count: assign each long midpoint a gap, then count the
    # distinct orders inside the gaps as multinomials of label multisets
    from itertools import product
    from math import factorial

    for t in small_templates[delta]:
        for k in range(t.kmin, t.kmin + 3):
            shorts = [k + g - t.kappa[g + 1] for g in range(t.length)]
            long_edges = [e for e in t.edges if e.length > 1]
            seen = set()
            total = 0
            for gaps in product(*[range(e.source, e.target) for e in long_edges]):
                content = [Counter() for _ in range(t.length)]
                for e, g in zip(long_edges, gaps):
                    content[g][e] += 1
                for e in t.edges:
                    if e.length == 1:
                        content[e.source][e] += 1
                key = tuple(tuple(sorted(c.items())) for c in content)
                if key in seen:
                    continue
                seen.add(key)
                ways = 1
                for g, c in enumerate(content):
                    n = shorts[g] + sum(c.values())
                    w = factorial(n) // factorial(shorts[g])
                    for m in c.values():
                        w //= factorial(m)
                    ways *= w
                total += ways
            assert count_extensions(t, k) == total, (t, k)


def test_template_polynomial_interpolates(small_templates):
    for j in (1, 2, 3, 4):
        for t in small_templates[j]:
            p = template_polynomial(t)
            for k in range(t.kmin, t.kmin + 4):
                assert p(k) == count_extensions(t, k)


def test_template_polynomial_degree_law(small_templates):
    for j in small_templates:
        for t in small_templates[j]:
            assert template_polynomial(t).degree == len(t.edges)


@pytest.mark.parametrize("delta", range(1, 6))
def test_vanishing_below_kmin(small_templates, delta):
    for t in small_templates[delta]:
        p = template_polynomial(t)
        for k in range(t.kmin - t.s, t.kmin):
            assert p(k) == 0, (t, k)


@pytest.mark.parametrize("delta", range(1, 9))
def test_start_shift_inequality(delta):
    for t in generate_templates(delta):
        assert t.kmin - t.s + t.length - t.epsilon <= delta + 1


@pytest.mark.parametrize("max_cogenus,degree", [(3, 5), (5, 6)])
def test_class_table_matches_template_sums(max_cogenus, degree):
    expect: dict = defaultdict(lambda: defaultdict(int))
    for j in range(1, max_cogenus + 1):
        for t in generate_templates(j):
            for k in range(max(t.kmin, 1), degree + 2 - t.length):
                v = t.multiplicity * count_extensions(t, k)
                if v:
                    expect[t.cogenus, t.length, t.epsilon][k] += v
    got = class_value_table(max_cogenus, degree)
    assert {key: dict(v) for key, v in expect.items()} == got


def test_template_line_round_trip(small_templates):
    for ts in small_templates.values():
        for t in ts:
            assert parse_template_line(format_template_line(t)) == t
    assert format_template_line(Template.from_edges([(0, 2, 1), (1, 2, 2)])) == "l=2; 0->2:1,1->2:2"


@pytest.mark.parametrize("line", ["", "l=1", "x=1; 0->1:2", "l=1; 0->1:1", "l=2; 0-2:1", "l=1; 0->1:w"])
def test_bad_template_lines(line):
    with pytest.raises(CacheFormatError):
        parse_template_line(line)


def test_cache_round_trip(tmp_path, small_templates):
    ts = small_templates[4]
    path = tmp_path / cache_filename(4)
    write_template_cache(path, 4, ts)
    assert read_template_cache(path, 4) == ts
    sub = [t for t in ts if t.drop <= 1]
    p2 = tmp_path / cache_filename(4, 1)
    assert p2.name == "templates_4_maxdrop1.txt"
    write_template_cache(p2, 4, sub, max_drop=1)
    assert read_template_cache(p2, 4, max_drop=1) == sub


def test_cache_validation(tmp_path, small_templates):
    ts = small_templates[3]
    path = tmp_path / "templates_3.txt"
    write_template_cache(path, 3, ts)
    lines = path.read_text().splitlines()
    with pytest.raises(CacheFormatError):
        read_template_cache(path, 2)  # wrong cogenus
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(CacheFormatError):
        read_template_cache(path, 3)  # header count disagrees
    path.write_text("\n".join([lines[0].replace("count=26", "count=25")] + lines[1:-1]) + "\n")
    with pytest.raises(CacheFormatError):
        read_template_cache(path, 3)  # count differs from the known number
    path.write_text("\n".join(lines[:-1] + [lines[1]]) + "\n")
    with pytest.raises(CacheFormatError):
        read_template_cache(path, 3)  # duplicate line
    path.write_text("\n".join(lines[:-1] + ["l=1; 0->1:2"]) + "\n")
    with pytest.raises(CacheFormatError):
        read_template_cache(path, 3)  # wrong cogenus on a line
    path.write_text("no header\n")
    with pytest.raises(CacheFormatError):
        read_template_cache(path)


@given(st.lists(st.tuples(st.integers(0, 3), st.integers(1, 3), st.integers(1, 3)), min_size=1, max_size=4))
@settings(max_examples=150, deadline=None)
def test_random_templates_polynomial_in_k(raw):
    edges = [(i, i + L, w) for i, L, w in raw]
    length = max(j for _, j, _ in edges)
    es = [Edge(*e) for e in edges]
    if not is_template(length, es):
        return
    t = Template(length, tuple(sorted(es)))
    p = template_polynomial(t)
    assert p.degree == len(t.edges)
    for k in range(t.kmin - t.s, t.kmin):
        assert p(k) == 0
