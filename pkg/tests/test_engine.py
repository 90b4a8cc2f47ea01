from __future__ import annotations

import pytest

from nodepoly.engine import (
    TemplateStore,
    build_template_classes,
    gromov_witten,
    node_polynomial,
    polynomiality_threshold,
    q_transform,
    severi_degree,
    severi_degree_bruteforce,
)
from nodepoly.errors import CacheFormatError, CapacityError, DomainError
from nodepoly.golden import irreducible_entries, load_node_polynomials, load_severi_table, q_polynomials
from nodepoly.polynomial import RationalPolynomial as R
from nodepoly.templates import cache_filename


@pytest.mark.parametrize("delta", range(0, 6))
def test_node_polynomials_small(store, delta):
    assert node_polynomial(delta, store).poly == load_node_polynomials()[delta]


def test_node_polynomial_examples(store):
    assert node_polynomial(0, store).poly == R.constant(1)
    assert node_polynomial(1, store).poly == R.from_descending([3, -6, 3])
    p = node_polynomial(2, store)
    assert p(5) == severi_degree(5, 2, store)
    with pytest.raises(DomainError):
        node_polynomial(-1, store)


def test_classes_cover_all_templates(store):
    classes = build_template_classes(3, store)
    assert sum(c.size for c in classes[3]) == 26
    for j, cs in classes.items():
        assert all(c.cogenus == j for c in cs)
        assert len({c.key for c in cs}) == len(cs)


@pytest.mark.parametrize("d", range(1, 8))
def test_severi_degrees_against_table(store, d):
    table = load_severi_table()
    for delta in range(0, 9):
        assert severi_degree(d, delta, store) == table[d, delta], (d, delta)


def test_severi_examples(store):
    assert severi_degree(5, 5, store) == 90027
    assert severi_degree(3, 1, store) == 12
    assert severi_degree(4, 0, store) == 1
    with pytest.raises(DomainError):
        severi_degree(0, 1, store)
    with pytest.raises(DomainError):
        severi_degree(3, -1, store)


@pytest.mark.parametrize("d", range(1, 6))
def test_bruteforce_oracle(store, d):
    for delta in range(0, 5):
        assert severi_degree(d, delta, store) == severi_degree_bruteforce(d, delta)


def test_bruteforce_limits():
    with pytest.raises(CapacityError):
        severi_degree_bruteforce(8, 1)
    with pytest.raises(DomainError):
        severi_degree_bruteforce(0, 1)


@pytest.mark.parametrize("delta", range(1, 5))
def test_node_polynomial_agrees_for_large_degree(store, delta):
    p = node_polynomial(delta, store)
    for d in range(delta, delta + 4):
        assert p(d) == severi_degree(d, delta, store)


def test_gromov_witten_examples():
    assert gromov_witten(3, 0) == 12
    assert gromov_witten(4, 1) == 225
    assert gromov_witten(5, 3) == 7915
    assert gromov_witten(1, 0) == 1
    assert gromov_witten(3, 1) == 1


@pytest.mark.parametrize("d", range(1, 6))
def test_gromov_witten_matches_irreducible_entries(d):
    for (dd, g), v in irreducible_entries(d).items():
        if dd == d:
            assert gromov_witten(d, g) == v


def test_gromov_witten_errors():
    with pytest.raises(DomainError):
        gromov_witten(3, 2)
    with pytest.raises(DomainError):
        gromov_witten(3, -1)
    with pytest.raises(CapacityError):
        gromov_witten(8, 0)


def test_q_transform(store):
    polys = [node_polynomial(j, store) for j in range(5)]
    qs = q_transform(polys)
    ref = q_polynomials()
    assert len(qs) == 4
    for j, q in enumerate(qs, 1):
        assert q == ref[j]
        assert q.degree == 2
    with pytest.raises(DomainError):
        q_transform([R.constant(2), R.constant(1)])
    with pytest.raises(DomainError):
        q_transform([])


def test_q_transform_inverts_exponential():
    # exp(a x) for a quadratic a has coefficients a^n / n!
    a = R.from_descending([1, 2, 3])
    series = [R.constant(1), a, a * a / 2, a * a * a / 6]
    assert q_transform(series) == [a, R(), R()]


@pytest.mark.parametrize("delta,expected", [(1, 1), (2, 1), (3, 3), (4, 3), (5, 4)])
def test_thresholds(store, delta, expected):
    res = polynomiality_threshold(delta, store)
    assert res.threshold == expected == int(res)
    assert res.window_top == delta + 2
    if delta >= 3:
        assert expected - 1 in res.mismatches
    with pytest.raises(DomainError):
        polynomiality_threshold(0, store)


def test_disk_cache_is_transparent(tmp_path):
    cold = TemplateStore(None)
    warm = TemplateStore(tmp_path)
    a = node_polynomial(4, warm).poly
    assert (tmp_path / cache_filename(4)).exists()
    again = TemplateStore(tmp_path)
    assert node_polynomial(4, again).poly == a == node_polynomial(4, cold).poly
    assert severi_degree(6, 4, again) == severi_degree(6, 4, cold)


def test_corrupt_cache_is_rejected(tmp_path):
    TemplateStore(tmp_path).templates(3)
    path = tmp_path / cache_filename(3)
    lines = path.read_text().splitlines()
    path.write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(CacheFormatError):
        TemplateStore(tmp_path).templates(3)


def test_max_drop_view_of_cached_full_set(tmp_path):
    s = TemplateStore(tmp_path)
    full = s.templates(5)
    sub = s.templates(5, max_drop=1)
    assert sub == [t for t in full if t.drop <= 1]
    assert s.templates(5, max_drop=9) is full


def test_class_table_reuse(store):
    big = store.class_table(6, 7)
    small = store.class_table(4, 5)
    fresh = TemplateStore(None).class_table(4, 5)
    assert small == fresh
    assert all(c <= 6 for c, _, _ in big)


def test_parallel_workers_agree(tmp_path):
    s = TemplateStore(None, workers=2)
    assert node_polynomial(5, s).poly == load_node_polynomials()[5]
