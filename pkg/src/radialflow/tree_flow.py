"""Exact flow solve on forests by leaf elimination.

On a forest the conservation equations have exactly one solution, found in
linear time by repeatedly settling leaves: a leaf's only incident edge must
carry the leaf's entire accumulated injection.  Edge orientation follows the
sign of that value, so the solved flow is always non-negative.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .exceptions import CycleError, ImbalanceError, UnknownEdge
from .network_model import DistributionNetwork, balance_tolerance


@dataclass(frozen=True)
class ForestFlowSolution:
    """Solved orientation and flows for a forest edge subset.

    Attributes:
        oriented_edges: ``(tail, head)`` per edge, flow runs tail to head.
        flows: Non-negative flow magnitudes, aligned with ``oriented_edges``.
        edge_indices: Parent-network edge index per entry.
        cost: Total quadratic cost ``sum(C * x**2)``.
        component_roots: Covered nodes with in-degree zero, ascending.
        zero_flow_edges: Positions carrying exactly zero flow.
    """

    oriented_edges: tuple[tuple[int, int], ...]
    flows: tuple[float, ...]
    edge_indices: tuple[int, ...]
    cost: float
    component_roots: tuple[int, ...]
    zero_flow_edges: tuple[int, ...]


def solve_forest(net: DistributionNetwork, forest_edges: Iterable[int],
                 injections: Iterable[float] | None = None) -> ForestFlowSolution:
    """Solve conservation on a forest-shaped subset of network edges.

    Args:
        net: Parent network supplying edge endpoints and cost coefficients.
        forest_edges: Edge indices forming the forest (order is irrelevant).
        injections: Override for the network injections, full length.

    Raises:
        CycleError: If the edge subset contains a cycle.
        ImbalanceError: If some component's injections do not cancel.
    """
    edge_list = list(forest_edges)
    if injections is None:
        p = list(net.injections)
    else:
        p = list(injections)
        if len(p) != net.n:
            raise ImbalanceError(
                f"injection vector has {len(p)} entries for {net.n} nodes")

    degree: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {}
    for idx in edge_list:
        u, v, _ = net.edges[idx]
        adj.setdefault(u, []).append((v, idx))
        adj.setdefault(v, []).append((u, idx))
        degree[u] = degree.get(u, 0) + 1
        degree[v] = degree.get(v, 0) + 1

    covered = sorted(adj)
    tol = balance_tolerance(p)

    oriented: dict[int, tuple[int, int]] = {}
    flow: dict[int, float] = {}
    done: set[int] = set()
    queue: deque[int] = deque(v for v in covered if degree[v] == 1)

    while queue:
        i = queue.popleft()
        if degree[i] != 1:
            continue
        j = -1
        eidx = -1
        for nb, k in adj[i]:
            if k not in done:
                j, eidx = nb, k
                break
        if eidx < 0:
            continue
        if p[i] >= 0:
            oriented[eidx] = (i, j)
            flow[eidx] = p[i]
        else:
            oriented[eidx] = (j, i)
            flow[eidx] = -p[i]
        p[j] += p[i]
        p[i] = 0.0
        done.add(eidx)
        degree[i] -= 1
        degree[j] -= 1
        if degree[j] == 1:
            queue.append(j)

    if len(done) != len(edge_list):
        leftover = [idx for idx in edge_list if idx not in done]
        u, v, _ = net.edges[leftover[0]]
        raise CycleError(
            f"edge subset is not a forest: cycle through ({net.names[u]}, {net.names[v]})")

    worst = max((abs(p[v]) for v in covered), default=0.0)
    if worst > tol:
        bad = max(covered, key=lambda v: abs(p[v]))
        raise ImbalanceError(
            f"component injections do not cancel: residual {p[bad]!r} at {net.names[bad]}")

    indeg: dict[int, int] = {v: 0 for v in covered}
    for idx in edge_list:
        _, head = oriented[idx]
        indeg[head] += 1
    roots = tuple(v for v in covered if indeg[v] == 0)

    flows = tuple(flow[idx] for idx in edge_list)
    cost = math.fsum(net.edges[idx][2] * flow[idx] ** 2 for idx in edge_list)
    zero = tuple(i for i, x in enumerate(flows) if x == 0.0)
    return ForestFlowSolution(tuple(oriented[idx] for idx in edge_list), flows,
                              tuple(edge_list), cost, roots, zero)


def evaluate_cost(net: DistributionNetwork,
                  flows: Mapping[int | tuple[int, int], float]) -> float:
    """Quadratic cost of a flow assignment keyed by edge index or node pair.

    Raises:
        UnknownEdge: If a key does not identify an edge of the network.
    """
    pair_index = net.edge_index_map()
    total = 0.0
    for key, x in flows.items():
        if isinstance(key, tuple):
            a, b = key
            idx = pair_index.get((min(a, b), max(a, b)))
            if idx is None:
                raise UnknownEdge(f"no edge between node ids {a} and {b}")
        else:
            idx = key
            if not (0 <= idx < net.m):
                raise UnknownEdge(f"edge index {idx} out of range")
        total += net.edges[idx][2] * x ** 2
    return total
