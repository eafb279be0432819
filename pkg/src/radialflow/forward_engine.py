"""Greedy construction of a feasible radial configuration.

Stages: settle forced edges (degree-one peeling), split at articulation
supplies, then grow polytrees inside each partition one edge at a time until
every node is covered and every tree's surplus is drained.  The final
orientation and flows come from an exact forest solve over the chosen edges;
sampled directions that disagree with the solved flow are flipped and counted.
"""

from __future__ import annotations

import json
import logging
import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .exceptions import Infeasible, InvariantViolation, NoCandidate
from .islander import PartitionView, islander
from .condenser import assert_irreducible, net_concad
from .network_model import (DistributionNetwork, RadialConfiguration,
                            balance_tolerance)
from .preprocessor import preprocess
from .sampler import ForestState, PathCostAccumulator, sample
from .tree_flow import solve_forest

logger = logging.getLogger("radialflow.engine")


@dataclass(frozen=True)
class TraceRow:
    """One sampling decision, for the optional CSV trace."""

    iteration: int
    edge_index: int
    weight: float
    balance_ok: bool
    pendant: bool
    deleted_count: int


@dataclass
class SolveReport:
    """Solve statistics.  ``to_json`` emits the stable public subset."""

    cost: float
    iterations: int
    partitions: int
    presampled: int
    flipped_edges: int
    timings: dict[str, float]
    n: int = 0
    m: int = 0
    zero_flow: int = 0
    merges: int = 0
    reducible_condensations: int = 0
    trace: tuple[TraceRow, ...] = field(default_factory=tuple)

    def to_json(self) -> str:
        doc = {"cost": self.cost, "iterations": self.iterations,
               "partitions": self.partitions, "presampled": self.presampled,
               "flipped_edges": self.flipped_edges, "timings": self.timings}
        return json.dumps(doc, indent=2) + "\n"


@dataclass
class PartitionOutcome:
    directed: list[tuple[int, int]]
    edge_indices: list[int]
    iterations: int
    merges: int
    trace: list[TraceRow]
    reducible: int = 0


def solve(net: DistributionNetwork, *, threads: int | None = None,
          check_invariants: bool = False,
          collect_trace: bool = False) -> tuple[RadialConfiguration, SolveReport]:
    """Build a feasible radial configuration for a network.

    Args:
        net: Connected, balanced distribution network.
        threads: Worker count for concurrent partitions; defaults to one
            worker per partition, capped at the machine's CPU count.  Results
            are merged in partition order, so output does not depend on it.
        check_invariants: Diagnostics mode.  Verifies the monotone surplus
            drain after every step and the final configuration, raising
            :class:`InvariantViolation` on failure, and counts condensations
            with an articulation super-source in
            ``report.reducible_condensations``.
        collect_trace: Record one :class:`TraceRow` per sampling decision.

    Returns:
        The configuration and a :class:`SolveReport`.

    Raises:
        Infeasible: If the construction gets stuck; carries the partition
            index and iteration where it happened.
    """
    t0 = time.perf_counter()
    pre = preprocess(net)
    t1 = time.perf_counter()
    logger.info("preprocess settled %d edges, %d remain",
                len(pre.presampled), len(pre.reduced.edge_indices))

    if pre.fully_reduced:
        parts: list[PartitionView] = []
    else:
        parts = islander(pre.reduced, pre.reduced_injections)
    t2 = time.perf_counter()
    logger.info("islander produced %d partition(s)", len(parts))

    workers = threads if threads is not None else min(
        len(parts), os.cpu_count() or 1)
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(
                lambda part: run_partition(part, check_invariants=check_invariants,
                                           collect_trace=collect_trace),
                parts))
    else:
        outcomes = [run_partition(part, check_invariants=check_invariants,
                                  collect_trace=collect_trace)
                    for part in parts]
    t3 = time.perf_counter()

    directed: list[tuple[int, int]] = list(pre.presampled)
    edge_indices: list[int] = list(pre.presampled_edge_indices)
    iterations = 0
    merges = 0
    reducible = 0
    trace: list[TraceRow] = []
    for outcome in outcomes:
        directed.extend(outcome.directed)
        edge_indices.extend(outcome.edge_indices)
        iterations += outcome.iterations
        merges += outcome.merges
        reducible += outcome.reducible
        trace.extend(outcome.trace)
    if collect_trace:
        trace = [TraceRow(i + 1, r.edge_index, r.weight, r.balance_ok,
                          r.pendant, r.deleted_count)
                 for i, r in enumerate(trace)]

    solution = solve_forest(net, edge_indices)
    t4 = time.perf_counter()

    final_edges: list[tuple[int, int]] = []
    flipped = 0
    for k, idx in enumerate(solution.edge_indices):
        solved = solution.oriented_edges[k]
        sampled = directed[k]
        if solution.flows[k] == 0.0:
            final_edges.append(sampled)
        else:
            final_edges.append(solved)
            if solved != sampled:
                flipped += 1
    cfg = RadialConfiguration(tuple(final_edges), solution.flows, solution.cost)

    report = SolveReport(
        cost=solution.cost, iterations=iterations, partitions=len(parts),
        presampled=len(pre.presampled), flipped_edges=flipped,
        timings={"preprocess": t1 - t0, "islander": t2 - t1,
                 "loop": t3 - t2, "solve_flow": t4 - t3},
        n=net.n, m=net.m, zero_flow=len(solution.zero_flow_edges),
        merges=merges, reducible_condensations=reducible, trace=tuple(trace))
    logger.info("solved: cost %.6g, %d iterations, %d flips",
                report.cost, report.iterations, report.flipped_edges)
    if check_invariants:
        from .network_model import validate_radial
        outcome_report = validate_radial(net, cfg)
        if not outcome_report.passed:
            raise InvariantViolation(
                "final configuration failed validation: " + outcome_report.summary())
    return cfg, report


def run_partition(part: PartitionView, *, check_invariants: bool = False,
                  collect_trace: bool = False) -> PartitionOutcome:
    """Grow polytrees inside one partition until covered and drained."""
    net = part.graph.net
    inj = part.injections
    tol = balance_tolerance(inj.values())
    pool = [(idx, net.edges[idx][0], net.edges[idx][1], net.edges[idx][2])
            for idx in part.graph.edge_indices]
    sources = sorted(part.sources)

    if not sources:
        return _spanning_fallback(part, tol)

    state = ForestState(sources, inj)
    h = PathCostAccumulator()
    uncovered = set(part.graph.nodes) - set(sources)
    cap = max(len(part.graph.nodes) - 1, 0)

    outcome = PartitionOutcome([], [], 0, 0, [])
    while True:
        drained = all(abs(r) <= tol for r in state.residuals.values())
        if not uncovered and drained:
            break
        if outcome.iterations >= cap:
            raise Infeasible(
                f"partition {part.index} still "
                f"{'uncovered' if uncovered else 'imbalanced'} after "
                f"{outcome.iterations} iterations",
                partition_index=part.index, iteration=outcome.iterations)
        if not uncovered and not pool:
            raise Infeasible(
                f"partition {part.index} has imbalanced trees and no edges left",
                partition_index=part.index, iteration=outcome.iterations)

        if check_invariants:
            before = math.fsum(max(r, 0.0) for r in state.residuals.values())
            cond = net_concad(part.graph, inj, state.membership)
            if not assert_irreducible(cond):
                outcome.reducible += 1
                logger.debug(
                    "reducible condensation in partition %d at iteration %d",
                    part.index, outcome.iterations)

        try:
            result = sample(part.graph, inj, state, h, pool)
        except NoCandidate as exc:
            raise Infeasible(
                f"partition {part.index} stuck: {exc}",
                partition_index=part.index,
                iteration=outcome.iterations) from exc

        chosen = result.chosen
        dropped = set(result.deleted)
        dropped.add(chosen.edge_index)
        pool = [e for e in pool if e[0] not in dropped]

        i, j = chosen.tail, chosen.head
        ti = state.tree_of(i)
        tj = state.tree_of(j)
        if tj is None:
            h.extend(i, j, net.edges[chosen.edge_index][2], chosen.demand)
            state.absorb(ti, j)
            uncovered.discard(j)
        else:
            state.merge(ti, tj)
            outcome.merges += 1

        outcome.directed.append((i, j))
        outcome.edge_indices.append(chosen.edge_index)
        outcome.iterations += 1
        if collect_trace:
            outcome.trace.append(TraceRow(
                outcome.iterations, chosen.edge_index, chosen.weight,
                chosen.balance_ok, chosen.pendant_source, len(result.deleted)))
        if logger.isEnabledFor(logging.DEBUG):
            logger.debug(
                "partition %d iter %d: edge %d (%s > %s) w=%.4g bal=%s pend=%s",
                part.index, outcome.iterations, chosen.edge_index,
                net.names[i], net.names[j], chosen.weight, chosen.balance_ok,
                chosen.pendant_source)

        if check_invariants:
            after = math.fsum(max(r, 0.0) for r in state.residuals.values())
            if after > before + tol:
                raise InvariantViolation(
                    f"surplus grew from {before!r} to {after!r} in partition "
                    f"{part.index} at iteration {outcome.iterations}")
    return outcome


def _spanning_fallback(part: PartitionView, tol: float) -> PartitionOutcome:
    """Cover a partition that has no supply at all.

    Only legal when every injection is (numerically) zero; any spanning tree
    then carries zero flow.  A demand node with no supply is infeasible.
    """
    if any(abs(p) > tol for p in part.injections.values()):
        raise Infeasible(
            f"partition {part.index} has demand but no supply",
            partition_index=part.index, iteration=0)
    adj = part.graph.adjacency()
    start = min(part.graph.nodes)
    seen = {start}
    outcome = PartitionOutcome([], [], 0, 0, [])
    frontier = [start]
    while frontier:
        x = min(frontier)
        frontier.remove(x)
        for y, eidx in sorted(adj[x]):
            if y not in seen:
                seen.add(y)
                frontier.append(y)
                outcome.directed.append((x, y))
                outcome.edge_indices.append(eidx)
                outcome.iterations += 1
    return outcome


def complexity_probe(sizes: Sequence[int], seeds: int = 5, k: int = 4,
                     beta: float = 0.2, n_sources: int | None = None,
                     ) -> list[tuple[int, int, float, float]]:
    """Time the solver on freshly generated instances of each size.

    Returns one ``(n, m, median_seconds, median_cost)`` row per size, the
    medians taken over ``seeds`` generated instances.  Sizes below three
    cannot come from the ring-lattice generator and are probed on fixed
    trivial networks instead.
    """
    from .generator import GenSpec, generate
    from .network_model import build_network
    points: list[tuple[int, int, float, float]] = []
    for n in sizes:
        ns = n_sources if n_sources is not None else default_source_count(n)
        times: list[float] = []
        costs: list[float] = []
        m = 0
        for seed in range(seeds):
            if n == 1:
                net = build_network(["v0"], [], [0.0])
            elif n == 2:
                net = build_network(["v0", "v1"], [(0, 1, 1.0)], [1.0, -1.0])
            else:
                net = generate(GenSpec(n=n, k=k, beta=beta, n_sources=ns,
                                       seed=seed))
            m = net.m
            start = time.perf_counter()
            _, report = solve(net)
            times.append(time.perf_counter() - start)
            costs.append(report.cost)
        points.append((n, m, statistics.median(times),
                       statistics.median(costs)))
        logger.info("probe n=%d: median %.4fs over %d seeds",
                    n, points[-1][2], seeds)
    return points


def default_source_count(n: int) -> int:
    """Supply count heuristic for generated benchmark instances."""
    return max(1, min(10 if n <= 240 else 20, n // 3))


def fit_exponent(points: Sequence[Sequence[float]]) -> float:
    """Least-squares slope of log(time) against log(size).

    Accepts ``(n, seconds)`` pairs or the wider rows of
    :func:`complexity_probe`.
    """
    xs = [math.log(row[0]) for row in points]
    ys = [math.log(max(row[2] if len(row) > 2 else row[1], 1e-9))
          for row in points]
    slope, _ = statistics.linear_regression(xs, ys)
    return slope
