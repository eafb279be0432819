"""Degree-one peeling: settle forced edges before the main construction.

A degree-one node has no routing choice, so its single edge is oriented
immediately from the sign of the node's accumulated injection and the value is
pushed onto the neighbor.  Peeling cascades until no degree-one node remains;
on a tree input this settles everything.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .network_model import DistributionNetwork, GraphView, full_view


@dataclass(frozen=True)
class PreprocessResult:
    """Forced orientations plus the reduced graph left for the sampler.

    Attributes:
        presampled: ``(tail, head)`` per settled edge, in peel order.
        presampled_edge_indices: Parent edge index per settled edge.
        reduced: View of the nodes and edges still unresolved.
        reduced_injections: Full-length injection vector after pushing; nodes
            outside the reduced view hold zero.
    """

    presampled: tuple[tuple[int, int], ...]
    presampled_edge_indices: tuple[int, ...]
    reduced: GraphView
    reduced_injections: tuple[float, ...]

    @property
    def fully_reduced(self) -> bool:
        return not self.reduced.edge_indices


def preprocess(net: DistributionNetwork,
               p0: Iterable[float] | None = None) -> PreprocessResult:
    """Peel degree-one nodes of the whole network."""
    return preprocess_view(full_view(net),
                           list(net.injections if p0 is None else p0))


def preprocess_view(view: GraphView, p: list[float]) -> PreprocessResult:
    """Peel degree-one nodes of a graph view.

    Nodes are processed in ascending id order, with cascade-created leaves
    appended behind, so results are deterministic.  The final node of a fully
    peeled component is dropped from the reduced view along with its (empty)
    edge set.
    """
    net = view.net
    p = list(p)
    adj = view.adjacency()
    degree = {v: len(adj[v]) for v in view.nodes}
    done: set[int] = set()
    presampled: list[tuple[int, int]] = []
    pre_idx: list[int] = []
    queue: deque[int] = deque(v for v in sorted(view.nodes) if degree[v] == 1)

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
            presampled.append((i, j))
        else:
            presampled.append((j, i))
        pre_idx.append(eidx)
        p[j] += p[i]
        p[i] = 0.0
        done.add(eidx)
        degree[i] -= 1
        degree[j] -= 1
        if degree[j] == 1:
            queue.append(j)

    remaining = tuple(idx for idx in view.edge_indices if idx not in done)
    keep: set[int] = set()
    for idx in remaining:
        u, v, _ = net.edges[idx]
        keep.add(u)
        keep.add(v)
    reduced = GraphView(net, tuple(sorted(keep)), remaining)
    full_p = [0.0] * net.n
    for v in keep:
        full_p[v] = p[v]
    return PreprocessResult(tuple(presampled), tuple(pre_idx), reduced,
                            tuple(full_p))
