"""Placement, compositions, rates, delivery decomposition, and simulation."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest

from conftest import brute_placement_sets
from sicps.icp import single_known_files, wrap
from sicps.macc import (
    CcdnConfig,
    build_delivery_icp,
    composition_count_max_below,
    composition_count_max_eq,
    end_to_end_simulate,
    enumerate_placement_sets,
    group_rotation_classes,
    interpolate_rate,
    iter_weak_compositions,
    placement_map,
    placement_set_count,
    rate_closed_form_large_L,
    rate_hkd,
    rate_new,
    rate_rk,
    tradeoff_csv,
    tradeoff_curve,
    weak_compositions,
)

EXAMPLE_SETS = [
    (1, 3), (1, 4), (1, 5), (1, 6), (1, 7),
    (2, 4), (2, 5), (2, 6), (2, 7), (2, 8),
    (3, 5), (3, 6), (3, 7), (3, 8),
    (4, 6), (4, 7), (4, 8),
    (5, 7), (5, 8),
    (6, 8),
]


def test_placement_sets_eight_user_example():
    sets = enumerate_placement_sets(8, 2, 2)
    assert sets == sorted(EXAMPLE_SETS)
    assert len(sets) == placement_set_count(8, 2, 2) == 20


def test_placement_sets_singletons():
    assert enumerate_placement_sets(9, 3, 1) == [(a,) for a in range(1, 10)]


def test_placement_sets_match_brute_filter():
    for K, L, w in [(10, 2, 3), (8, 2, 2), (12, 3, 3), (9, 4, 2), (7, 1, 3), (6, 3, 2)]:
        assert enumerate_placement_sets(K, L, w) == brute_placement_sets(K, L, w)
    assert len(enumerate_placement_sets(10, 2, 3)) == 50


def test_placement_sets_count_identity_grid():
    for K in range(2, 15):
        for L in range(1, K + 1):
            for w in range(1, K // L + 1):
                enumerated = len(enumerate_placement_sets(K, L, w))
                assert enumerated == placement_set_count(K, L, w), (K, L, w)


def test_placement_sets_rejects_bad_w():
    with pytest.raises(ValueError):
        enumerate_placement_sets(8, 2, 5)
    with pytest.raises(ValueError):
        enumerate_placement_sets(8, 2, 0)


def test_placement_plan_loads():
    plan = placement_map(CcdnConfig(5, 8, 2), 2)
    assert plan.subfile_size == Fraction(1, 20)
    assert plan.per_cache_load() == Fraction(2 * 5, 8)
    assert plan.subfiles_per_cache() == 5

    plan = placement_map(CcdnConfig(3, 10, 2), 3)
    assert plan.subfile_size == Fraction(1, 50)
    assert plan.per_cache_load() == Fraction(9, 10)


def test_placement_full_coverage_at_max_memory():
    cfg = CcdnConfig(4, 8, 2)
    plan = placement_map(cfg, 4)  # w = K/L
    assert len(plan.sets) == 2
    for user in range(1, 9):
        assert plan.missing_sets(user) == []


def test_placement_user_cache_window():
    plan = placement_map(CcdnConfig(2, 8, 2), 2)
    assert plan.user_caches(1) == (1, 2)
    assert plan.user_caches(8) == (8, 1)
    # subfile on caches {3,5} serves users 2,3,4,5
    assert plan.available_to_user((3, 5), 2)
    assert not plan.available_to_user((3, 5), 1)
    assert not plan.available_to_user((3, 5), 6)


def test_weak_compositions_examples():
    b = weak_compositions(3, 3)
    assert len(b) == 10
    assert set(b) == {
        (3, 0, 0), (0, 3, 0), (0, 0, 3), (2, 1, 0), (0, 2, 1),
        (1, 0, 2), (2, 0, 1), (1, 2, 0), (0, 1, 2), (1, 1, 1),
    }
    assert b == sorted(b)  # lexicographic
    assert weak_compositions(0, 2) == [(0, 0)]
    assert len(weak_compositions(4, 2)) == 5


def test_weak_compositions_count_identity():
    for n in range(0, 9):
        for m in range(1, 7):
            assert len(weak_compositions(n, m)) == math.comb(n + m - 1, m - 1)


def test_composition_count_examples():
    assert composition_count_max_below(3, 3, 4) == 10
    assert composition_count_max_below(3, 3, 1) == 0
    assert composition_count_max_below(3, 3, 3) == 7


def test_composition_count_matches_brute_force():
    for n in range(0, 10):
        for m in range(1, 7):
            comps = weak_compositions(n, m)
            for t in range(1, n + 2):
                brute = sum(1 for c in comps if max(c) < t)
                assert composition_count_max_below(n, m, t) == brute, (n, m, t)
            for t in range(0, n + 1):
                brute_eq = sum(1 for c in comps if max(c) == t)
                assert composition_count_max_eq(n, m, t) == brute_eq, (n, m, t)


def test_rotation_classes_example():
    classes = group_rotation_classes(weak_compositions(3, 3))
    assert [c.representative for c in classes] == [
        (3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 1, 1),
    ]
    by_rep = {c.representative: c for c in classes}
    assert by_rep[(2, 0, 1)].members == ((2, 0, 1), (1, 2, 0), (0, 1, 2))
    assert by_rep[(1, 1, 1)].base == (1,)
    assert by_rep[(1, 1, 1)].multiplicity == 3
    assert by_rep[(3, 0, 0)].multiplicity == 1


def test_rotation_classes_degenerate_and_even():
    zero = group_rotation_classes(weak_compositions(0, 4))
    assert len(zero) == 1
    assert zero[0].base == (0,)
    assert zero[0].multiplicity == 4

    classes = group_rotation_classes(weak_compositions(4, 2))
    assert {c.representative: set(c.members) for c in classes} == {
        (4, 0): {(4, 0), (0, 4)},
        (3, 1): {(3, 1), (1, 3)},
        (2, 2): {(2, 2)},
    }


def test_rotation_classes_partition_property():
    for n, m in [(3, 3), (5, 3), (4, 4), (6, 2)]:
        comps = weak_compositions(n, m)
        classes = group_rotation_classes(comps)
        members = [c for cls in classes for c in cls.members]
        assert sorted(members) == sorted(comps)
        for cls in classes:
            assert set(cls.members) == {
                tuple(cls.representative[(j - t) % m] for j in range(m))
                for t in range(m)
            }


def test_rotation_classes_require_complete_family():
    with pytest.raises(ValueError):
        group_rotation_classes([(3, 0, 0), (2, 1, 0)])


def rate_new_direct(K, L, w):
    """Enumeration oracle for the aggregated rate computation."""
    if w * L == K:
        return Fraction(0)
    cap = 2 * (K - w * L) + w - 1
    total = sum(
        min(cap - max(b), K) for b in iter_weak_compositions(K - w * L - 1, w + 1)
    )
    return Fraction(total, placement_set_count(K, L, w) * (w + 1))


def test_rate_new_values():
    assert rate_new(8, 2, 2) == Fraction(68, 60)
    assert rate_new(8, 2, 4) == 0
    assert rate_new(8, 4, 1) == Fraction(11, 8)
    assert rate_new(10, 2, 1) == Fraction(39, 10)


def test_rate_new_matches_enumeration():
    for K in range(2, 15):
        for L in range(1, K + 1):
            for w in range(1, K // L + 1):
                assert rate_new(K, L, w) == rate_new_direct(K, L, w), (K, L, w)


def test_rate_new_rejects_bad_w():
    with pytest.raises(ValueError):
        rate_new(8, 2, 5)


def test_rate_hkd_values():
    assert rate_hkd(8, 2, 2) == Fraction(4, 3)
    assert rate_hkd(8, 2, 4) == 0
    assert rate_hkd(40, 4, 4) == Fraction(24, 5)


def test_rate_rk_values():
    assert rate_rk(8, 8, 2, Fraction(2)) == 2
    assert rate_rk(6, 9, 3, Fraction(2)) == 0
    assert rate_rk(100, 100, 1, Fraction(50)) == 25
    with pytest.raises(ValueError):
        rate_rk(4, 8, 2, Fraction(3))


def test_closed_form_values():
    assert rate_closed_form_large_L(8, 4) == Fraction(11, 8) == rate_new(8, 4, 1)
    assert rate_closed_form_large_L(9, 4) == Fraction(17, 9) == rate_new(9, 4, 1)
    # K-L = 1: single-gap case against the formula branches
    for K in range(3, 12):
        assert rate_closed_form_large_L(K, K - 1) == rate_new(K, K - 1, 1)
    with pytest.raises(ValueError):
        rate_closed_form_large_L(12, 5)


def test_closed_form_cap():
    for K in range(2, 20):
        for L in range((K + 1) // 2, K + 1):
            value = rate_closed_form_large_L(K, L)
            assert value <= Fraction(5 * (K - L) * (K - L + 1), 8 * K)


def test_corollary7_small_grid():
    for K in range(2, 13):
        for L in range(1, K + 1):
            for w in range(1, K // L + 1):
                new = rate_new(K, L, w)
                assert new <= rate_hkd(K, L, w)
                assert new <= rate_rk(K, K, L, Fraction(w * K, K))


def test_corner_dominance_on_large_sweep_config():
    N, K, L = 100, 40, 4
    for w in range(1, K // L + 1):
        new = rate_new(K, L, w)
        assert new <= rate_hkd(K, L, w)
        assert new <= rate_rk(N, K, L, Fraction(w * N, K))


def test_tradeoff_curve_endpoints_and_midpoint():
    cfg = CcdnConfig(8, 8, 2)
    points = tradeoff_curve(cfg)
    assert points[0].M == 0 and points[0].rate == 8
    assert points[-1].M == 4 and points[-1].rate == 0
    rates = [p.rate for p in points]
    assert rates == sorted(rates, reverse=True)
    # memory sharing between the w=1 and w=2 corners
    mid = interpolate_rate(points, Fraction(3, 2))
    assert mid == (rate_new(8, 2, 1) + rate_new(8, 2, 2)) / 2


def test_tradeoff_curve_sampling_and_csv():
    cfg = CcdnConfig(10, 10, 2)
    points = tradeoff_curve(cfg, samples=9)
    assert all(a.M < b.M for a, b in zip(points, points[1:]))
    assert all(a.rate >= b.rate for a, b in zip(points, points[1:]))
    sources = {p.source for p in points}
    assert sources <= {"NEW", "EXTREME", "MEMORY_SHARED"}
    text = tradeoff_csv(points)
    lines = text.strip().split("\n")
    assert lines[0] == "M_exact,M_decimal,rate_exact,rate_decimal,source"
    assert len(lines) == len(points) + 1
    first = lines[1].split(",")
    assert first[0] == "0" and first[2] == "10"


EXAMPLE_COLUMN_LABELS = {
    # availability sets of the first-row subfiles -> gap label, from the
    # worked (K=8, L=2, w=2) delivery table
    (2, 3, 4, 5): (3, 0, 0),
    (3, 4, 5, 6): (2, 0, 1),
    (4, 5, 6, 7): (1, 0, 2),
    (5, 6, 7, 8): (0, 0, 3),
    (2, 3, 5, 6): (2, 1, 0),
    (3, 4, 6, 7): (1, 1, 1),
    (4, 5, 7, 8): (0, 1, 2),
    (2, 3, 6, 7): (1, 2, 0),
    (3, 4, 7, 8): (0, 2, 1),
    (2, 3, 7, 8): (0, 3, 0),
}


def users_of_cache_set(cache_set, K, L):
    users = set()
    for c in cache_set:
        users.update(wrap(c - j, K) for j in range(L))
    return tuple(sorted(users))


def test_delivery_table_eight_user_example():
    cfg = CcdnConfig(8, 8, 2)
    table = build_delivery_icp(cfg, 2, list(range(1, 9)))
    assert len(table.columns) == 10
    seen = {}
    for col in table.columns:
        file_id, cache_set = col.cells[0]
        assert file_id == 1  # user 1 demands file 1
        seen[users_of_cache_set(cache_set, 8, 2)] = col.label
    assert seen == EXAMPLE_COLUMN_LABELS


def test_delivery_table_labels_are_all_compositions():
    for cfg, w in [(CcdnConfig(10, 10, 2), 3), (CcdnConfig(9, 9, 3), 2),
                   (CcdnConfig(7, 7, 1), 2)]:
        table = build_delivery_icp(cfg, w, list(range(1, cfg.K + 1)))
        labels = [col.label for col in table.columns]
        n = cfg.K - w * cfg.L - 1
        assert sorted(labels) == weak_compositions(n, w + 1)
        assert len(labels) == math.comb(cfg.K - w * cfg.L + w - 1, w)


def test_delivery_table_zero_columns_at_full_memory():
    table = build_delivery_icp(CcdnConfig(8, 8, 2), 4, list(range(1, 9)))
    assert table.columns == ()


def test_delivery_table_rows_are_missing_subfiles():
    cfg = CcdnConfig(8, 8, 2)
    table = build_delivery_icp(cfg, 2, list(range(1, 9)))
    for user in range(1, 9):
        row_sets = {col.cells[user - 1][1] for col in table.columns}
        assert row_sets == set(table.plan.missing_sets(user))


def test_delivery_column_side_information_matches_label():
    # per-column availability pattern of every user equals the single-column
    # instance generated by the label
    cfg = CcdnConfig(10, 10, 2)
    table = build_delivery_icp(cfg, 3, list(range(1, 11)))
    for col in table.columns:
        for user in (1, 4, 10):
            si_rows = {
                row
                for row in range(1, 11)
                if table.plan.available_to_user(col.cells[row - 1][1], user)
            }
            assert si_rows == single_known_files(col.label, cfg.L, cfg.K, user)


def test_delivery_table_validates_demands():
    cfg = CcdnConfig(8, 8, 2)
    with pytest.raises(ValueError):
        build_delivery_icp(cfg, 2, [1, 2, 3])
    with pytest.raises(ValueError):
        build_delivery_icp(cfg, 2, [9] * 8)


def test_simulation_eight_user_example():
    report = end_to_end_simulate(CcdnConfig(8, 8, 2), 2, list(range(1, 9)), seed=5)
    assert report.decoded_ok
    assert report.total_rate == Fraction(68, 60)
    by_rep = {c.representative: c for c in report.classes}
    assert by_rep[(3, 0, 0)].chi == 6
    assert by_rep[(2, 1, 0)].chi == 7
    assert by_rep[(2, 0, 1)].chi == 7
    assert by_rep[(1, 1, 1)].chi == 8
    assert by_rep[(1, 1, 1)].split == 3
    assert report.failures == ()


def test_simulation_full_memory_is_free():
    report = end_to_end_simulate(CcdnConfig(8, 8, 2), 4, list(range(1, 9)), seed=1)
    assert report.decoded_ok
    assert report.total_rate == 0
    assert report.classes == ()


def test_simulation_matches_formula_on_grid():
    for K, L, w in [(10, 2, 1), (6, 2, 1), (6, 1, 2), (7, 2, 3), (9, 2, 2),
                    (8, 3, 2), (12, 5, 2), (9, 4, 1)]:
        cfg = CcdnConfig(K, K, L)
        report = end_to_end_simulate(cfg, w, list(range(1, K + 1)), seed=K + w)
        assert report.decoded_ok, (K, L, w)
        assert report.total_rate == rate_new(K, L, w), (K, L, w)


def test_class_graph_matches_physical_availability():
    # The broadcast decodes against the union-instance graph; check that the
    # graph's side information coincides, node by node, with what the cache
    # topology actually makes available to each user in the class's columns.
    from sicps.icp import GapVector, build_union_icp, rotate_gaps, to_suicp

    for K, L, w in [(8, 2, 2), (10, 2, 3), (9, 3, 2), (11, 2, 3)]:
        cfg = CcdnConfig(K, K, L)
        table = build_delivery_icp(cfg, w, list(range(1, K + 1)))
        classes = group_rotation_classes([c.label for c in table.columns])
        by_label = {c.label: c for c in table.columns}
        for cls in classes:
            period = len(cls.base)
            bar = build_union_icp(GapVector(cls.representative, L))
            graph = to_suicp(bar)
            for k in range(1, K + 1):
                physical = {
                    (m, p)
                    for p in range(1, bar.i + 1)
                    for m in range(1, K + 1)
                    if table.plan.available_to_user(
                        by_label[rotate_gaps(cls.representative, p - 1)]
                        .cells[m - 1][1],
                        k,
                    )
                }
                assert physical == graph.side_info((k, 1)), (K, L, w, cls, k)
            assert period == len(set(cls.members))


def test_rate_new_half_memory_unit_access():
    # L=1 at memory N/2: the aggregated rate collapses to (K/2)/(1+K/2)
    for K in (4, 6, 8, 10, 12, 20):
        assert rate_new(K, 1, K // 2) == Fraction(K // 2, 1 + K // 2)


def test_simulation_handles_period_two_class():
    # (K=11, L=2, w=3) produces a label orbit with period 2 and split 2
    cfg = CcdnConfig(11, 11, 2)
    report = end_to_end_simulate(cfg, 3, list(range(1, 12)), seed=6)
    assert report.decoded_ok
    assert report.total_rate == rate_new(11, 2, 3)
    splits = {c.representative: (c.columns, c.split) for c in report.classes}
    assert splits[(2, 0, 2, 0)] == (2, 2)
    assert splits[(1, 1, 1, 1)] == (1, 4)


def test_simulation_repeated_demands_same_rate():
    cfg = CcdnConfig(3, 8, 2)
    demands = [1, 2, 3, 1, 2, 3, 1, 2]
    report = end_to_end_simulate(cfg, 2, demands, seed=2)
    assert report.decoded_ok
    assert report.total_rate == rate_new(8, 2, 2)


def test_simulation_respects_field_choice():
    report = end_to_end_simulate(
        CcdnConfig(8, 8, 2), 2, list(range(1, 9)), field_order=11, seed=3
    )
    assert report.decoded_ok
    assert all(c.field == 11 for c in report.classes)
    with pytest.raises(ValueError):
        end_to_end_simulate(CcdnConfig(8, 8, 2), 2, list(range(1, 9)),
                            field_order=6, seed=3)


def test_simulation_report_json():
    report = end_to_end_simulate(CcdnConfig(8, 8, 2), 2, list(range(1, 9)), seed=5)
    payload = report.to_json()
    assert payload["decoded_ok"] is True
    assert payload["total_rate"] == "17/15"
    assert len(payload["classes"]) == 4
    assert payload["failures"] == []


def test_config_validation():
    with pytest.raises(ValueError):
        CcdnConfig(0, 8, 2)
    with pytest.raises(ValueError):
        CcdnConfig(4, 8, 9)
    with pytest.raises(ValueError):
        CcdnConfig(4, 8, 0)
