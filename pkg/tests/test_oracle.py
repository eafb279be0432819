"""The enumeration oracle against hand counts and a naive re-enumeration."""

import itertools
import math
import random

import pytest

from conftest import random_tree_network, ws_instance
from radialflow import (ImbalanceError, TooLarge, build_network, solve_forest,
                        validate_radial)
from radialflow.oracle import enumerate_optimal


def naive_enumerate(net):
    """All acyclic node-covering edge subsets, by raw subset iteration."""
    enumerated = 0
    feasible = 0
    best_cost = math.inf
    for r in range(net.m + 1):
        for combo in itertools.combinations(range(net.m), r):
            parent = list(range(net.n))

            def find(x):
                while parent[x] != x:
                    x = parent[x]
                return x

            acyclic = True
            touched = set()
            for i in combo:
                u, v, _ = net.edges[i]
                touched.update((u, v))
                ru, rv = find(u), find(v)
                if ru == rv:
                    acyclic = False
                    break
                parent[rv] = ru
            if not acyclic or len(touched) != net.n:
                continue
            enumerated += 1
            try:
                sol = solve_forest(net, combo)
            except ImbalanceError:
                continue
            feasible += 1
            best_cost = min(best_cost, sol.cost)
    return enumerated, feasible, best_cost


def square_net():
    return build_network(["s1", "t1", "s2", "t2"],
                         [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 1.0)],
                         [1.0, -3.0, 3.0, -1.0])


def bowtie_net():
    names = ["s", "a", "b", "c", "d"]
    edges = [(0, 1, 1.0), (0, 2, 2.0), (1, 2, 0.5),
             (0, 3, 1.0), (0, 4, 2.0), (3, 4, 0.5)]
    injections = [4.0, -1.2, -0.8, -1.1, -0.9]
    return build_network(names, edges, injections)


def test_feeder_ring_counts(feeder_ring):
    result = enumerate_optimal(feeder_ring)
    assert result.optimal_cost == pytest.approx(47.0, rel=1e-12)
    assert result.feasible_count == 4
    assert result.enumerated_count == 6
    assert validate_radial(feeder_ring, result.optimum).passed


def test_gap_ring_counts(gap_ring):
    result = enumerate_optimal(gap_ring)
    assert result.optimal_cost == pytest.approx(47.0, rel=1e-12)
    assert result.feasible_count == 6
    assert result.enumerated_count == 17
    assert validate_radial(gap_ring, result.optimum).passed


def test_square_optimum_is_exact():
    # four spanning trees plus the one two-edge matching whose halves
    # both balance
    result = enumerate_optimal(square_net())
    assert result.optimal_cost == pytest.approx(6.0, rel=1e-12)
    assert result.feasible_count == 5


def test_single_node():
    net = build_network(["only"], [], [0.0])
    result = enumerate_optimal(net)
    assert result.optimum.directed_edges == ()
    assert result.optimal_cost == 0.0
    assert result.feasible_count == 1
    assert result.enumerated_count == 1


def test_size_guards():
    net = ws_instance(30, seed=0)
    with pytest.raises(TooLarge, match="exceeds"):
        enumerate_optimal(net)
    small = square_net()
    with pytest.raises(TooLarge):
        enumerate_optimal(small, max_nodes=3)
    with pytest.raises(TooLarge):
        enumerate_optimal(small, max_edges=3)


@pytest.mark.parametrize("maker", [square_net, bowtie_net])
def test_matches_naive_enumeration(maker):
    net = maker()
    result = enumerate_optimal(net)
    enumerated, feasible, best_cost = naive_enumerate(net)
    assert result.enumerated_count == enumerated
    assert result.feasible_count == feasible
    assert result.optimal_cost == pytest.approx(best_cost, rel=1e-12)


def test_matches_naive_on_ring(gap_ring):
    enumerated, feasible, best_cost = naive_enumerate(gap_ring)
    assert (enumerated, feasible) == (17, 6)
    assert best_cost == pytest.approx(47.0, rel=1e-12)


def test_tree_optimum_is_the_tree():
    rng = random.Random(11)
    for _ in range(5):
        net = random_tree_network(rng, rng.randrange(3, 9))
        result = enumerate_optimal(net)
        full = solve_forest(net, range(net.m))
        assert result.feasible_count >= 1
        assert result.optimal_cost == pytest.approx(full.cost, rel=1e-12)
        assert validate_radial(net, result.optimum).passed
