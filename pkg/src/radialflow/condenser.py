"""Condensation of a partially grown forest into supply and demand sides.

Every node belongs to a polytree (untouched nodes count as singletons).  A
tree sits on the supply side while its residual injection is positive and on
the demand side once drained.  Same-side connected groups collapse into super
nodes; only edges crossing sides survive, and parallel crossings are kept as
distinct entries so the sampler can weigh each one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .network_model import GraphView


@dataclass(frozen=True)
class SuperNode:
    """A maximal same-side group of polytrees.

    ``residual`` is the exact sum of member injections, positive for supply
    (``kind == "source"``) and non-positive for demand (``kind == "sink"``).
    """

    members: tuple[int, ...]
    residual: float
    kind: str


@dataclass(frozen=True)
class CondensedView:
    """Super nodes, the crossing edges between them, and node membership."""

    super_nodes: tuple[SuperNode, ...]
    super_edges: tuple[tuple[int, int, int], ...]
    membership: dict[int, int]

    def neighbors(self, si: int) -> frozenset[int]:
        """Distinct super nodes adjacent to ``si`` through crossing edges."""
        out: set[int] = set()
        for su, sv, _ in self.super_edges:
            if su == si:
                out.add(sv)
            elif sv == si:
                out.add(su)
        return frozenset(out)

    def super_of(self, node: int) -> SuperNode:
        return self.super_nodes[self.membership[node]]


def net_concad(view: GraphView, injections: Mapping[int, float] | Sequence[float],
               polytrees: Mapping[int, int]) -> CondensedView:
    """Condense a graph around its current polytrees.

    Args:
        view: Graph being solved; all of its edges participate.
        injections: Per-node injection, indexable by parent node id.
        polytrees: Tree id per touched node; nodes missing from the mapping
            are treated as singleton trees of themselves.

    Returns:
        A :class:`CondensedView` with super nodes ordered by smallest member
        id, so output is deterministic for a fixed input.
    """
    tree_of = {v: polytrees.get(v, v) for v in view.nodes}
    members_of: dict[int, list[int]] = {}
    for v in sorted(view.nodes):
        members_of.setdefault(tree_of[v], []).append(v)
    tree_residual = {t: math.fsum(injections[v] for v in vs)
                     for t, vs in members_of.items()}
    side = {v: tree_residual[tree_of[v]] > 0 for v in view.nodes}

    adj = view.adjacency()
    comp: dict[int, int] = {}
    groups: list[list[int]] = []
    for start in sorted(view.nodes):
        if start in comp:
            continue
        ci = len(groups)
        comp[start] = ci
        group = [start]
        stack = [start]
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if y not in comp and side[y] == side[x]:
                    comp[y] = ci
                    group.append(y)
                    stack.append(y)
        groups.append(sorted(group))

    supers = tuple(
        SuperNode(tuple(g), math.fsum(injections[v] for v in g),
                  "source" if side[g[0]] else "sink")
        for g in groups)

    super_edges: list[tuple[int, int, int]] = []
    for idx in view.edge_indices:
        u, v, _ = view.net.edges[idx]
        if side[u] != side[v]:
            super_edges.append((comp[u], comp[v], idx))
    return CondensedView(supers, tuple(super_edges), comp)


def assert_irreducible(cond: CondensedView) -> bool:
    """Check that no supply super node is a cut vertex of the condensed graph.

    A supply group that separates the condensed graph could have been split
    further upstream; construction keeps this from happening, and the check
    exists so tests and debug runs can confirm it.
    """
    n = len(cond.super_nodes)
    if n <= 2:
        return True
    simple: dict[int, set[int]] = {i: set() for i in range(n)}
    for su, sv, _ in cond.super_edges:
        simple[su].add(sv)
        simple[sv].add(su)

    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    artics: set[int] = set()
    clock = 0
    for start in range(n):
        if start in disc:
            continue
        disc[start] = low[start] = clock
        clock += 1
        root_children = 0
        stack: list[tuple[int, int, list[int]]] = [(start, -1, sorted(simple[start]))]
        heads = [0]
        while stack:
            v, pv, nbrs = stack[-1]
            i = heads[-1]
            advanced = False
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if w == pv:
                    continue
                if w not in disc:
                    disc[w] = low[w] = clock
                    clock += 1
                    heads[-1] = i
                    stack.append((w, v, sorted(simple[w])))
                    heads.append(0)
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            heads[-1] = i
            stack.pop()
            heads.pop()
            if not stack:
                continue
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if stack[-1][1] == -1:
                root_children += 1
            if low[v] >= disc[u] and stack[-1][1] != -1:
                artics.add(u)
        if root_children > 1:
            artics.add(start)
    return not any(cond.super_nodes[a].kind == "source" for a in artics)
