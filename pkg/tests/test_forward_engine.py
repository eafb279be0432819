"""End-to-end construction: regressions, invariants, merging, fallbacks."""

import json
import random

import pytest

from conftest import random_tree_network, ws_instance
from radialflow import (Infeasible, build_network, config_to_json, solve,
                        solve_forest, validate_radial)
from radialflow.forward_engine import (_spanning_fallback, complexity_probe,
                                       default_source_count, fit_exponent)
from radialflow.islander import PartitionView
from radialflow.network_model import balance_tolerance, full_view
from radialflow.preprocessor import preprocess


def test_tree_input_needs_no_sampling():
    net = random_tree_network(random.Random(5), 12)
    cfg, report = solve(net)
    assert report.iterations == 0
    assert report.partitions == 0
    assert report.presampled == net.m
    direct = solve_forest(net, range(net.m))
    assert cfg.total_cost == pytest.approx(direct.cost, rel=1e-12)
    assert validate_radial(net, cfg).passed


def test_feeder_ring_regression(feeder_ring):
    cfg, report = solve(feeder_ring)
    assert report.cost == pytest.approx(81.0, rel=1e-12)
    assert report.iterations == 3
    assert report.merges == 1
    assert report.flipped_edges == 0
    assert validate_radial(feeder_ring, cfg).passed


def test_gap_ring_regression(gap_ring):
    cfg, report = solve(gap_ring)
    assert report.cost == pytest.approx(65.25, rel=1e-12)
    assert 47.0 <= report.cost <= 81.0
    assert report.iterations == 5
    assert report.flipped_edges == 0
    assert validate_radial(gap_ring, cfg).passed


def test_square_with_two_supplies():
    # greedy merge across the ring; the exact flows follow from the tree
    net = build_network(["s1", "t1", "s2", "t2"],
                        [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)],
                        [1.0, -3.0, 3.0, -1.0])
    cfg, report = solve(net)
    assert report.cost == pytest.approx(22.0, rel=1e-12)
    assert report.merges == 1
    assert report.flipped_edges == 0
    assert validate_radial(net, cfg).passed


def test_fifteen_node_regression(block15):
    cfg, report = solve(block15)
    assert report.cost == pytest.approx(104.5, rel=1e-9)
    assert report.partitions == 2
    assert report.presampled == 5
    assert validate_radial(block15, cfg).passed


def test_ieee33_regression(ieee33):
    cfg, report = solve(ieee33)
    assert report.cost == pytest.approx(843.0, rel=1e-9)
    assert len(cfg.directed_edges) == ieee33.n - 1
    assert validate_radial(ieee33, cfg).passed


def test_settled_directions_survive(block15):
    pre = preprocess(block15)
    cfg, report = solve(block15)
    assert cfg.directed_edges[:len(pre.presampled)] == pre.presampled


def test_generated_instance_validates():
    net = ws_instance(120, seed=7)
    cfg, report = solve(net)
    outcome = validate_radial(net, cfg)
    assert outcome.passed, outcome.summary()
    assert report.n == 120 and report.m == net.m
    again, _ = solve(net)
    assert config_to_json(net, again) == config_to_json(net, cfg)


def test_thread_count_does_not_change_output(block15):
    one, _ = solve(block15, threads=1)
    two, _ = solve(block15, threads=2)
    assert config_to_json(block15, one) == config_to_json(block15, two)


def test_report_json_shape(feeder_ring):
    _, report = solve(feeder_ring)
    doc = json.loads(report.to_json())
    assert set(doc) == {"cost", "iterations", "partitions", "presampled",
                        "flipped_edges", "timings"}
    assert set(doc["timings"]) == {"preprocess", "islander", "loop",
                                   "solve_flow"}


def test_all_zero_network_spans_for_free():
    net = build_network(["a", "b", "c", "d"],
                        [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)],
                        [0.0, 0.0, 0.0, 0.0])
    cfg, report = solve(net)
    assert report.cost == 0.0
    assert len(cfg.directed_edges) == 3
    assert all(f == 0.0 for f in cfg.flows)
    assert validate_radial(net, cfg).passed


def test_fallback_rejects_unserved_demand():
    net = build_network(["a", "b"], [(0, 1, 1.0)], [1.0, -1.0])
    part = PartitionView(0, full_view(net), {0: 2.0, 1: -2.0},
                         frozenset(), {})
    with pytest.raises(Infeasible, match="no supply"):
        _spanning_fallback(part, balance_tolerance([2.0, -2.0]))


def test_invariant_mode_counts_and_completes():
    net = ws_instance(30, seed=3)
    cfg, report = solve(net, check_invariants=True)
    assert report.reducible_condensations >= 0
    assert validate_radial(net, cfg).passed


def test_trace_rows_are_sequential(gap_ring):
    _, plain = solve(gap_ring)
    assert plain.trace == ()
    _, traced = solve(gap_ring, collect_trace=True)
    assert len(traced.trace) == traced.iterations
    assert [row.iteration for row in traced.trace] == list(
        range(1, traced.iterations + 1))
    assert all(row.deleted_count >= 0 for row in traced.trace)


def test_probe_handles_trivial_sizes():
    rows = complexity_probe([1, 2], seeds=2)
    assert [(r[0], r[1]) for r in rows] == [(1, 0), (2, 1)]
    assert rows[0][3] == 0.0
    assert rows[1][3] == pytest.approx(1.0, rel=1e-12)
    assert all(r[2] >= 0.0 for r in rows)


def test_fit_exponent_recovers_slope():
    pairs = [(10.0, 1e-3), (100.0, 1e-1)]
    assert fit_exponent(pairs) == pytest.approx(2.0, rel=1e-9)
    rows = [(10.0, 0, 1e-3, 5.0), (100.0, 0, 1e-1, 9.0)]
    assert fit_exponent(rows) == pytest.approx(2.0, rel=1e-9)


def test_default_source_count_bands():
    assert default_source_count(3) == 1
    assert default_source_count(9) == 3
    assert default_source_count(30) == 10
    assert default_source_count(120) == 10
    assert default_source_count(240) == 10
    assert default_source_count(400) == 20
    assert default_source_count(600) == 20
