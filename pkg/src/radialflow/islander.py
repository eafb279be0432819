"""Partitioning at articulation sources.

A supply node whose removal disconnects the graph can be split: each side
receives a replica of the node carrying just the injection that side needs,
and the sides are solved independently.  Cut vertices that are not supply
nodes must not be split, so biconnected components sharing such a vertex are
merged into one partition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exceptions import InfeasibleSplit
from .network_model import GraphView, balance_tolerance


@dataclass(frozen=True)
class PartitionView:
    """One independently solvable piece of a graph.

    Attributes:
        index: Position in the partition list (blocks sorted by min node id).
        graph: Nodes and edges of the partition, in parent-network ids.
        injections: Per-node injection used inside this partition; replicated
            nodes carry their branch share rather than the original value.
        sources: Nodes with positive injection inside this partition.
        replicated_nodes: For each node shared with other partitions, the
            sorted indices of all partitions containing it.
    """

    index: int
    graph: GraphView
    injections: dict[int, float]
    sources: frozenset[int]
    replicated_nodes: dict[int, tuple[int, ...]]


def _biconnected(view: GraphView) -> tuple[set[int], list[list[int]]]:
    """Articulation points and biconnected components (as edge index lists).

    Iterative lowpoint computation; components come out in stack-pop order,
    deterministic for a fixed view.
    """
    adj = view.adjacency()
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    artics: set[int] = set()
    comps: list[list[int]] = []
    clock = 0

    for start in sorted(view.nodes):
        if start in disc:
            continue
        disc[start] = low[start] = clock
        clock += 1
        estack: list[int] = []
        root_children = 0
        stack = [(start, -1, iter(sorted(adj[start])))]
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for w, eidx in it:
                if eidx == pe:
                    continue
                if w not in disc:
                    estack.append(eidx)
                    disc[w] = low[w] = clock
                    clock += 1
                    stack.append((w, eidx, iter(sorted(adj[w]))))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append(eidx)
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if not stack:
                continue
            u = stack[-1][0]
            low[u] = min(low[u], low[v])
            if low[v] >= disc[u]:
                comp: list[int] = []
                while estack:
                    e = estack.pop()
                    comp.append(e)
                    if e == pe:
                        break
                comps.append(comp)
                if len(stack) > 1:
                    artics.add(u)
                else:
                    root_children += 1
        if root_children > 1:
            artics.add(start)
    return artics, comps


def find_articulation_points(view: GraphView) -> frozenset[int]:
    return frozenset(_biconnected(view)[0])


def find_articulation_sources(view: GraphView,
                              sources: Iterable[int]) -> frozenset[int]:
    """Articulation points that are also supply nodes."""
    return frozenset(_biconnected(view)[0]) & frozenset(sources)


def islander(view: GraphView, injections: Sequence[float]) -> list[PartitionView]:
    """Split a graph at its articulation supply nodes.

    Args:
        view: Connected graph to split.
        injections: Full-length injection vector (parent-network ids); supply
            nodes are those with a strictly positive entry.

    Returns:
        Partitions ordered by smallest contained node id.  Without any
        articulation source this is a single partition over the whole view.

    Raises:
        InfeasibleSplit: If a partition's injections fail to balance, which
            indicates corrupt input rather than a property of valid networks.
    """
    net = view.net
    sources = {v for v in view.nodes if injections[v] > 0}
    artics, comps = _biconnected(view)
    split_at = artics & sources

    if not split_at or len(comps) <= 1:
        inj = {v: float(injections[v]) for v in view.nodes}
        _check_balance(inj, 0)
        return [PartitionView(0, GraphView(net, tuple(sorted(view.nodes)),
                                           tuple(sorted(view.edge_indices))),
                              inj, frozenset(v for v in inj if inj[v] > 0), {})]

    # Merge biconnected components across cut vertices that are not supplies.
    comp_nodes: list[set[int]] = []
    for comp in comps:
        nodes: set[int] = set()
        for idx in comp:
            u, v, _ = net.edges[idx]
            nodes.add(u)
            nodes.add(v)
        comp_nodes.append(nodes)

    parent = list(range(len(comps)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    containing: dict[int, list[int]] = {}
    for ci, nodes in enumerate(comp_nodes):
        for v in nodes:
            containing.setdefault(v, []).append(ci)
    for a in sorted(artics - split_at):
        members = containing[a]
        for ci in members[1:]:
            ra, rb = find(members[0]), find(ci)
            if ra != rb:
                parent[rb] = ra

    groups: dict[int, list[int]] = {}
    for ci in range(len(comps)):
        groups.setdefault(find(ci), []).append(ci)
    blocks: list[tuple[set[int], list[int]]] = []
    for members in groups.values():
        nodes: set[int] = set()
        edges: list[int] = []
        for ci in members:
            nodes |= comp_nodes[ci]
            edges.extend(comps[ci])
        blocks.append((nodes, sorted(edges)))
    blocks.sort(key=lambda b: min(b[0]))

    # Bipartite block / articulation-source tree, rooted per component at the
    # block holding the smallest node id.
    blocks_of: dict[int, list[int]] = {}
    for bi, (nodes, _) in enumerate(blocks):
        for a in sorted(nodes & split_at):
            blocks_of.setdefault(a, []).append(bi)

    parent_block: dict[int, int | None] = {}
    parent_artic: dict[int, int | None] = {}
    children_blocks: dict[int, list[int]] = {a: [] for a in blocks_of}
    order: list[int] = []
    seen_blocks: set[int] = set()
    for root in range(len(blocks)):
        if root in seen_blocks:
            continue
        parent_block[root] = None
        seen_blocks.add(root)
        queue = [root]
        while queue:
            bi = queue.pop(0)
            order.append(bi)
            for a in sorted(blocks[bi][0] & split_at):
                for nb in blocks_of[a]:
                    if nb in seen_blocks:
                        continue
                    seen_blocks.add(nb)
                    parent_block[nb] = bi
                    parent_artic[nb] = a
                    children_blocks[a].append(nb)
                    queue.append(nb)

    # Each node's injection is accounted at its hosting block: the unique one
    # for plain nodes, the parent-side block for replicated ones.
    host: dict[int, int] = {}
    for bi, (nodes, _) in enumerate(blocks):
        for v in nodes:
            if v not in split_at:
                host[v] = bi
    for a, bs in blocks_of.items():
        candidates = [bi for bi in bs if parent_artic.get(bi) != a]
        host[a] = candidates[0] if candidates else bs[0]

    weight = [0.0] * len(blocks)
    for v, bi in host.items():
        weight[bi] += injections[v]

    block_children: dict[int, list[int]] = {bi: [] for bi in range(len(blocks))}
    for bi, pb in parent_block.items():
        if pb is not None:
            block_children[pb].append(bi)
    subtotal = [0.0] * len(blocks)
    for bi in reversed(order):
        subtotal[bi] = weight[bi] + math.fsum(
            subtotal[c] for c in block_children[bi])

    partitions: list[PartitionView] = []
    for bi, (nodes, edges) in enumerate(blocks):
        inj: dict[int, float] = {}
        for v in sorted(nodes):
            if v not in split_at:
                inj[v] = float(injections[v])
            elif parent_artic.get(bi) == v:
                inj[v] = -subtotal[bi]
            else:
                inj[v] = injections[v] + math.fsum(
                    subtotal[c] for c in children_blocks[v])
        _check_balance(inj, bi)
        replicated = {a: tuple(sorted(blocks_of[a])) for a in sorted(nodes & split_at)
                      if len(blocks_of[a]) > 1}
        partitions.append(PartitionView(
            bi, GraphView(net, tuple(sorted(nodes)), tuple(edges)), inj,
            frozenset(v for v, p in inj.items() if p > 0), replicated))
    return partitions


def _check_balance(inj: dict[int, float], index: int) -> None:
    total = math.fsum(inj.values())
    if abs(total) > balance_tolerance(inj.values()):
        raise InfeasibleSplit(
            f"partition {index} injections sum to {total!r}, expected zero")
