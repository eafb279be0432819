"""Network data model, JSON serialization, and configuration validation.

A distribution network is an undirected, connected graph with one signed
injection per node (positive = supply, negative = demand) and one non-negative
quadratic cost coefficient per edge.  Injections must balance to zero within a
relative tolerance.  A radial configuration is a directed edge subset whose
undirected skeleton is a forest, together with its per-edge flows.

Node ids are contiguous integers assigned in sorted-name order at load time;
external files always refer to nodes by their string names.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping, Sequence

from .exceptions import DimensionMismatch, ParseError, ValidationError

NodeId = int

#: Relative tolerance for injection balance checks, scaled by total |p|.
BALANCE_RTOL = 1e-9
#: Absolute tolerance for per-node flow conservation residuals.
FLOW_ATOL = 1e-8


def balance_tolerance(values: Iterable[float]) -> float:
    """Absolute balance tolerance for a collection of injections."""
    return BALANCE_RTOL * max(1.0, math.fsum(abs(v) for v in values))


@dataclass(frozen=True)
class DistributionNetwork:
    """Immutable network: node names, normalized edges, and injections.

    Attributes:
        names: Node names indexed by node id.
        edges: Tuples ``(u, v, cost)`` with ``u < v``.
        injections: Per-node signed injection, indexed by node id.
        metadata: Optional free-form mapping preserved through serialization.
    """

    names: tuple[str, ...]
    edges: tuple[tuple[int, int, float], ...]
    injections: tuple[float, ...]
    metadata: dict | None = field(default=None, compare=False)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def m(self) -> int:
        return len(self.edges)

    def name_to_id(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.names)}

    def id_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ValidationError(f"unknown node {name!r}") from None

    @property
    def source_set(self) -> frozenset[int]:
        """Nodes with strictly positive injection."""
        return frozenset(i for i, p in enumerate(self.injections) if p > 0)

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Per-node list of ``(neighbor, edge_index)`` pairs."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.n)]
        for idx, (u, v, _) in enumerate(self.edges):
            adj[u].append((v, idx))
            adj[v].append((u, idx))
        return adj

    def edge_index_map(self) -> dict[tuple[int, int], int]:
        return {(u, v): idx for idx, (u, v, _) in enumerate(self.edges)}

    def balance_tolerance(self) -> float:
        return balance_tolerance(self.injections)


@dataclass(frozen=True)
class GraphView:
    """A subgraph of a network: node subset plus a subset of its edges.

    Node and edge ids always refer to the parent network, so views produced by
    different stages of the pipeline compose without re-mapping.
    """

    net: DistributionNetwork
    nodes: tuple[int, ...]
    edge_indices: tuple[int, ...]

    def adjacency(self) -> dict[int, list[tuple[int, int]]]:
        adj: dict[int, list[tuple[int, int]]] = {v: [] for v in self.nodes}
        for idx in self.edge_indices:
            u, v, _ = self.net.edges[idx]
            adj[u].append((v, idx))
            adj[v].append((u, idx))
        return adj

    def degrees(self) -> dict[int, int]:
        deg = {v: 0 for v in self.nodes}
        for idx in self.edge_indices:
            u, v, _ = self.net.edges[idx]
            deg[u] += 1
            deg[v] += 1
        return deg


def full_view(net: DistributionNetwork) -> GraphView:
    """The whole network as a view over itself."""
    return GraphView(net, tuple(range(net.n)), tuple(range(net.m)))


@dataclass
class InjectionState:
    """Mutable per-node injection vector tracked across pipeline stages."""

    values: list[float]
    iteration: int = 0

    def copy(self) -> "InjectionState":
        return InjectionState(list(self.values), self.iteration)


@dataclass(frozen=True)
class RadialConfiguration:
    """A directed forest with per-edge flows and its quadratic cost."""

    directed_edges: tuple[tuple[int, int], ...]
    flows: tuple[float, ...]
    total_cost: float


# ---------------------------------------------------------------------------
# Construction and validation
# ---------------------------------------------------------------------------

def build_network(names: Sequence[str], edges: Sequence[tuple[int, int, float]],
                  injections: Sequence[float],
                  metadata: dict | None = None) -> DistributionNetwork:
    """Validate raw network data and build a :class:`DistributionNetwork`.

    Args:
        names: Node names; ids are assigned by position.
        edges: ``(u, v, cost)`` triples over node ids, any endpoint order.
        injections: Signed injection per node id.
        metadata: Optional mapping carried through serialization.

    Raises:
        ValidationError: On duplicate names or edges, self-loops, negative or
            non-finite coefficients, injection imbalance, or a disconnected
            graph.
    """
    n = len(names)
    if n == 0:
        raise ValidationError("empty network: at least one node is required")
    if len(set(names)) != n:
        raise ValidationError("duplicate node name")
    if len(injections) != n:
        raise ValidationError("injection vector length does not match node count")
    for name, p in zip(names, injections):
        if not math.isfinite(p):
            raise ValidationError(f"non-finite injection at node {name!r}")

    normalized: list[tuple[int, int, float]] = []
    seen: set[tuple[int, int]] = set()
    for u, v, c in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"edge ({u}, {v}) references an unknown node id")
        if u == v:
            raise ValidationError(f"self-loop at node {names[u]!r}")
        if not math.isfinite(c) or c < 0:
            raise ValidationError(
                f"negative or non-finite cost coefficient on edge "
                f"({names[u]!r}, {names[v]!r})")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValidationError(
                f"duplicate edge ({names[key[0]]!r}, {names[key[1]]!r})")
        seen.add(key)
        normalized.append((key[0], key[1], float(c)))

    total = math.fsum(injections)
    if abs(total) > balance_tolerance(injections):
        raise ValidationError(f"injection imbalance: sum(p) = {total!r}")

    net = DistributionNetwork(tuple(names), tuple(normalized),
                              tuple(float(p) for p in injections), metadata)
    if n > 1:
        visited = [False] * n
        stack = [0]
        visited[0] = True
        count = 1
        adj = net.adjacency()
        while stack:
            x = stack.pop()
            for y, _ in adj[x]:
                if not visited[y]:
                    visited[y] = True
                    count += 1
                    stack.append(y)
        if count != n:
            raise ValidationError("disconnected network")
    return net


def load_network(source: str | bytes | IO) -> DistributionNetwork:
    """Parse and validate a network from JSON text, bytes, or a file object.

    The expected document shape is::

        {"nodes": [{"name": "a", "p": 2.0}, ...],
         "edges": [{"u": "a", "v": "b", "c": 1.0}, ...]}

    An optional top-level ``"meta"`` object is preserved as metadata.

    Raises:
        ParseError: If the document is not valid JSON or has the wrong shape.
        ValidationError: If the network violates a model invariant.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"network file is not valid UTF-8: {exc}") from exc
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc

    if not isinstance(doc, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("nodes", "edges"):
        if key not in doc or not isinstance(doc[key], list):
            raise ParseError(f"missing or non-list {key!r} entry")

    names: list[str] = []
    raw_p: dict[str, float] = {}
    for item in doc["nodes"]:
        if not isinstance(item, dict) or "name" not in item or "p" not in item:
            raise ParseError(f"node entry must have 'name' and 'p': {item!r}")
        name, p = item["name"], item["p"]
        if not isinstance(name, str):
            raise ParseError(f"node name must be a string: {name!r}")
        if isinstance(p, bool) or not isinstance(p, (int, float)):
            raise ParseError(f"injection must be a number at node {name!r}")
        if name in raw_p:
            raise ValidationError(f"duplicate node name {name!r}")
        names.append(name)
        raw_p[name] = float(p)

    names.sort()
    ids = {name: i for i, name in enumerate(names)}

    edges: list[tuple[int, int, float]] = []
    for item in doc["edges"]:
        if not isinstance(item, dict) or not {"u", "v", "c"} <= set(item):
            raise ParseError(f"edge entry must have 'u', 'v' and 'c': {item!r}")
        u, v, c = item["u"], item["v"], item["c"]
        if not isinstance(u, str) or not isinstance(v, str):
            raise ParseError(f"edge endpoints must be node names: {item!r}")
        if isinstance(c, bool) or not isinstance(c, (int, float)):
            raise ParseError(f"cost coefficient must be a number: {item!r}")
        if u not in ids or v not in ids:
            missing = u if u not in ids else v
            raise ValidationError(f"unknown node {missing!r} in edge list")
        edges.append((ids[u], ids[v], float(c)))

    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise ParseError("'meta' entry must be an object")
    return build_network(names, edges, [raw_p[name] for name in names], meta)


def serialize_network(net: DistributionNetwork) -> str:
    """Canonical JSON for a network: nodes sorted by name, edges by name pair.

    Loading the serialized text yields a network equal to the input, and
    serializing again reproduces the text byte for byte.
    """
    order = sorted(range(net.n), key=lambda i: net.names[i])
    nodes = [{"name": net.names[i], "p": net.injections[i]} for i in order]

    def edge_key(e: tuple[int, int, float]) -> tuple[str, str]:
        a, b = net.names[e[0]], net.names[e[1]]
        return (a, b) if a <= b else (b, a)

    edges = []
    for u, v, c in sorted(net.edges, key=edge_key):
        a, b = edge_key((u, v, c))
        edges.append({"u": a, "v": b, "c": c})
    doc: dict = {"nodes": nodes, "edges": edges}
    if net.metadata is not None:
        doc["meta"] = net.metadata
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# Radial configurations
# ---------------------------------------------------------------------------

def incidence_apply(cfg: RadialConfiguration, x: Sequence[float],
                    n_nodes: int | None = None) -> list[float]:
    """Apply the oriented incidence matrix of ``cfg`` to a flow vector.

    Entry ``i`` of the result is the net outflow of node ``i``: each edge
    ``(tail, head)`` contributes ``+x`` at its tail and ``-x`` at its head.
    For a conservative flow the result equals the injection vector.

    Raises:
        DimensionMismatch: If ``x`` has a different length than the edge list.
    """
    if len(x) != len(cfg.directed_edges):
        raise DimensionMismatch(
            f"flow vector has {len(x)} entries for {len(cfg.directed_edges)} edges")
    if n_nodes is None:
        n_nodes = max((max(t, h) for t, h in cfg.directed_edges), default=-1) + 1
    out = [0.0] * n_nodes
    for (tail, head), flow in zip(cfg.directed_edges, x):
        out[tail] += flow
        out[head] -= flow
    return out


def config_to_json(net: DistributionNetwork, cfg: RadialConfiguration) -> str:
    """Serialize a configuration as ``{"edges": [{u, v, flow}...], "cost": c}``.

    ``u`` is the tail name and ``v`` the head name of each directed edge;
    entries are sorted by (tail id, head id) so output is deterministic.
    """
    order = sorted(range(len(cfg.directed_edges)),
                   key=lambda i: cfg.directed_edges[i])
    edges = [{"u": net.names[cfg.directed_edges[i][0]],
              "v": net.names[cfg.directed_edges[i][1]],
              "flow": cfg.flows[i]} for i in order]
    return json.dumps({"edges": edges, "cost": cfg.total_cost}, indent=2) + "\n"


def config_from_json(net: DistributionNetwork, source: str | bytes | IO) -> RadialConfiguration:
    """Parse a configuration document produced by :func:`config_to_json`."""
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        source = source.decode("utf-8")
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "edges" not in doc or "cost" not in doc:
        raise ParseError("configuration document must have 'edges' and 'cost'")
    ids = net.name_to_id()
    directed: list[tuple[int, int]] = []
    flows: list[float] = []
    for item in doc["edges"]:
        if not isinstance(item, dict) or not {"u", "v", "flow"} <= set(item):
            raise ParseError(f"edge entry must have 'u', 'v' and 'flow': {item!r}")
        if item["u"] not in ids or item["v"] not in ids:
            raise ValidationError(f"unknown node in configuration edge: {item!r}")
        directed.append((ids[item["u"]], ids[item["v"]]))
        flows.append(float(item["flow"]))
    return RadialConfiguration(tuple(directed), tuple(flows), float(doc["cost"]))


# ---------------------------------------------------------------------------
# Validation of radial configurations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the six structural and flow checks for a configuration.

    ``zero_flow_edges`` lists positions (into the configuration's edge list)
    that carry exactly zero flow; these are legal but worth surfacing.
    """

    acyclic: bool
    edge_subset: bool
    spanning: bool
    root_source: bool
    kirchhoff: bool
    nonnegative_flows: bool
    max_residual: float
    zero_flow_edges: tuple[int, ...]
    messages: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return (self.acyclic and self.edge_subset and self.spanning
                and self.root_source and self.kirchhoff
                and self.nonnegative_flows)

    def summary(self) -> str:
        checks = [("acyclic", self.acyclic), ("edge-subset", self.edge_subset),
                  ("spanning", self.spanning), ("root-source", self.root_source),
                  ("kirchhoff", self.kirchhoff),
                  ("nonnegative-flows", self.nonnegative_flows)]
        parts = [f"{name}={'ok' if ok else 'FAIL'}" for name, ok in checks]
        return ", ".join(parts)


def validate_radial(net: DistributionNetwork, cfg: RadialConfiguration) -> ValidationReport:
    """Check that ``cfg`` is a feasible radial configuration of ``net``.

    The checks: the undirected skeleton is a forest and a subset of the
    network's edges, every node is covered, every in-degree-zero node has a
    non-negative injection, per-node conservation holds within ``FLOW_ATOL``,
    and all flows are non-negative.
    """
    messages: list[str] = []
    n = net.n
    edge_set = {(u, v) for u, v, _ in net.edges}

    edge_subset = True
    seen: set[tuple[int, int]] = set()
    acyclic = True
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for tail, head in cfg.directed_edges:
        if not (0 <= tail < n and 0 <= head < n):
            edge_subset = False
            messages.append(f"edge ({tail}, {head}) references an unknown node")
            continue
        key = (min(tail, head), max(tail, head))
        if key not in edge_set:
            edge_subset = False
            messages.append(
                f"edge ({net.names[key[0]]}, {net.names[key[1]]}) is not a network edge")
        if key in seen:
            acyclic = False
            messages.append(
                f"duplicate undirected edge ({net.names[key[0]]}, {net.names[key[1]]})")
            continue
        seen.add(key)
        ru, rv = find(key[0]), find(key[1])
        if ru == rv:
            acyclic = False
            messages.append(
                f"edge ({net.names[key[0]]}, {net.names[key[1]]}) closes a cycle")
        else:
            parent[ru] = rv

    covered = set()
    for tail, head in cfg.directed_edges:
        if 0 <= tail < n:
            covered.add(tail)
        if 0 <= head < n:
            covered.add(head)
    if n == 1:
        spanning = len(cfg.directed_edges) == 0
    else:
        spanning = len(covered) == n
    if not spanning:
        missing = sorted(set(range(n)) - covered)
        messages.append(
            "uncovered nodes: " + ", ".join(net.names[v] for v in missing[:5]))

    indeg = [0] * n
    for _, head in cfg.directed_edges:
        if 0 <= head < n:
            indeg[head] += 1
    root_source = True
    for v in covered:
        if indeg[v] == 0 and net.injections[v] < 0:
            root_source = False
            messages.append(
                f"root {net.names[v]} has negative injection {net.injections[v]!r}")

    try:
        residual = incidence_apply(cfg, cfg.flows, n)
    except DimensionMismatch as exc:
        messages.append(str(exc))
        return ValidationReport(acyclic, edge_subset, spanning, root_source,
                                False, False, math.inf, (), tuple(messages))
    max_residual = max((abs(r - p) for r, p in zip(residual, net.injections)),
                       default=0.0)
    kirchhoff = max_residual <= FLOW_ATOL
    if not kirchhoff:
        messages.append(f"conservation residual {max_residual:.3e} exceeds {FLOW_ATOL}")

    nonnegative = all(f >= 0 for f in cfg.flows)
    if not nonnegative:
        messages.append("negative flow present")
    zero_flow = tuple(i for i, f in enumerate(cfg.flows) if f == 0.0)

    return ValidationReport(acyclic, edge_subset, spanning, root_source,
                            kirchhoff, nonnegative, max_residual, zero_flow,
                            tuple(messages))


# ---------------------------------------------------------------------------
# DOT export
# ---------------------------------------------------------------------------

def export_dot(net: DistributionNetwork, cfg: RadialConfiguration | None = None) -> str:
    """Render the network (and optionally a solved configuration) as DOT.

    Configuration edges are drawn directed and labeled ``x=<flow>, C=<coeff>``;
    network edges not used by the configuration are drawn dashed without
    direction.  Source nodes are filled.
    """
    lines = ["digraph radial {"]
    for i, name in enumerate(net.names):
        attrs = [f'label="{name}\\np={net.injections[i]:g}"']
        if net.injections[i] > 0:
            attrs.append('style=filled')
            attrs.append('fillcolor="#9ecae1"')
        lines.append(f'  "{name}" [{", ".join(attrs)}];')
    cost_by_pair = {(u, v): c for u, v, c in net.edges}
    used: set[tuple[int, int]] = set()
    if cfg is not None:
        order = sorted(range(len(cfg.directed_edges)),
                       key=lambda i: cfg.directed_edges[i])
        for i in order:
            tail, head = cfg.directed_edges[i]
            key = (min(tail, head), max(tail, head))
            used.add(key)
            coeff = cost_by_pair.get(key, float("nan"))
            lines.append(
                f'  "{net.names[tail]}" -> "{net.names[head]}" '
                f'[label="x={cfg.flows[i]:g}, C={coeff:g}"];')
    for u, v, c in net.edges:
        if (u, v) in used:
            continue
        lines.append(
            f'  "{net.names[u]}" -> "{net.names[v]}" '
            f'[dir=none, style=dashed, label="C={c:g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
