"""Core data model for regression graphs.

A regression graph is a mixed graph over a block-ordered node set
``g_1 < g_2 < ... < g_J``: the blocks of *u* hold joint responses, an
optional single final block *v* holds the context (background)
variables.  Three edge types are allowed:

* an arrow points from a node in a later block (the past) to a response
  in an earlier block (the future),
* a dashed line couples two responses within one block of ``u``,
* a full line couples two context variables within ``v``.

Graphs are immutable after construction and all operations here are
pure functions of their inputs, so instances can be shared freely
across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Base class for graph construction/validation failures."""


class DuplicateEdge(GraphError):
    """More than one edge was supplied for the same node pair."""


class EdgeKindViolatesBlocks(GraphError):
    """Edge type not permitted between the two blocks (e.g. dashed inside v)."""


class ArrowPointsToPast(GraphError):
    """Arrow does not point from a strictly later block to an earlier one."""


class NodeNotInAnyBlock(GraphError):
    """An edge endpoint is missing from the block ordering."""


class EdgeKind(str, Enum):
    ARROW = "arrow"
    DASHED = "dashed"
    FULL = "full"


class End(str, Enum):
    """Mark of an edge end at one of its two nodes.

    HEAD and DASH ends are "arrowhead-like"; TAIL and FULL ends are
    "tail-like".  Collider status along a path depends only on this
    two-way split.
    """

    HEAD = "head"
    TAIL = "tail"
    DASH = "dash"
    FULL = "full"

    @property
    def is_head_like(self) -> bool:
        return self in (End.HEAD, End.DASH)


@dataclass(frozen=True)
class Edge:
    """A typed edge.  For arrows ``a`` is the tail and ``b`` the head;
    undirected edges are stored with endpoints in graph node order."""

    a: str
    b: str
    kind: EdgeKind

    @property
    def pair(self) -> frozenset:
        return frozenset((self.a, self.b))

    def end_at(self, node: str) -> End:
        if node not in (self.a, self.b):
            raise KeyError(f"{node} is not an endpoint of {self}")
        if self.kind is EdgeKind.ARROW:
            return End.TAIL if node == self.a else End.HEAD
        return End.DASH if self.kind is EdgeKind.DASHED else End.FULL

    def other(self, node: str) -> str:
        if node == self.a:
            return self.b
        if node == self.b:
            return self.a
        raise KeyError(f"{node} is not an endpoint of {self}")

    def __str__(self) -> str:
        sep = {EdgeKind.ARROW: "->", EdgeKind.DASHED: "~~", EdgeKind.FULL: "--"}[self.kind]
        return f"{self.a} {sep} {self.b}"


class VKind(str, Enum):
    COLLISION = "collision"
    TRANSMITTING = "transmitting"


@dataclass(frozen=True)
class VConfiguration:
    """A 2-edge subgraph on three nodes with uncoupled endpoints ``i, k``
    and inner node ``o``.  Collision iff both edge ends at ``o`` are
    arrowhead-like (an arrowhead or a dashed end)."""

    i: str
    o: str
    k: str
    edge_io: Edge
    edge_ok: Edge
    kind: VKind

    @property
    def endpoints(self) -> frozenset:
        return frozenset((self.i, self.k))

    def __str__(self) -> str:
        return f"V({self.i}, {self.o}, {self.k}) [{self.kind.value}]"


def classify_v(end_io: End, end_ok: End) -> VKind:
    """Classify a V from the two edge-end marks at its inner node."""
    if end_io.is_head_like and end_ok.is_head_like:
        return VKind.COLLISION
    return VKind.TRANSMITTING


def _as_edge_tuple(item) -> tuple[str, str, EdgeKind]:
    if isinstance(item, Edge):
        return item.a, item.b, item.kind
    a, b, kind = item
    return str(a), str(b), EdgeKind(kind)


class RegressionGraph:
    """Validated regression graph: nodes, block ordering, typed edges.

    ``response_blocks`` are the blocks of ``u`` in order g_1 < g_2 < ...;
    ``context`` is the (possibly empty) final block v.  Only a single
    context block is supported.
    """

    __slots__ = ("nodes", "response_blocks", "context", "_edges", "_block_of", "_incident")

    def __init__(
        self,
        response_blocks: Sequence[Sequence[str]],
        context: Sequence[str] = (),
        edges: Iterable = (),
    ):
        response_blocks = tuple(tuple(str(n) for n in blk) for blk in response_blocks)
        context = tuple(str(n) for n in context)
        blocks = response_blocks + ((context,) if context else ())
        nodes: list[str] = []
        block_of: dict[str, int] = {}
        for j, blk in enumerate(blocks):
            if not blk:
                raise GraphError("empty block in ordering")
            for n in blk:
                if n in block_of:
                    raise GraphError(f"node {n!r} appears in more than one block")
                block_of[n] = j
                nodes.append(n)

        edge_map: dict[frozenset, Edge] = {}
        order = {n: i for i, n in enumerate(nodes)}
        ctx = frozenset(context)
        for item in edges:
            a, b, kind = _as_edge_tuple(item)
            for n in (a, b):
                if n not in block_of:
                    raise NodeNotInAnyBlock(f"edge endpoint {n!r} is not in any block")
            if a == b:
                raise GraphError(f"self edge at {a!r}")
            pair = frozenset((a, b))
            if pair in edge_map:
                raise DuplicateEdge(f"more than one edge for pair ({a}, {b})")
            ja, jb = block_of[a], block_of[b]
            if kind is EdgeKind.ARROW:
                # tail must lie in a strictly later block than the head
                if ja <= jb:
                    raise ArrowPointsToPast(
                        f"arrow {a} -> {b}: tail block {ja} must come after head block {jb}"
                    )
                edge_map[pair] = Edge(a, b, kind)
            elif kind is EdgeKind.DASHED:
                if ja != jb or a in ctx:
                    raise EdgeKindViolatesBlocks(
                        f"dashed edge {a} ~~ {b} must lie within a single response block"
                    )
                lo, hi = sorted((a, b), key=order.__getitem__)
                edge_map[pair] = Edge(lo, hi, kind)
            else:
                if a not in ctx or b not in ctx:
                    raise EdgeKindViolatesBlocks(
                        f"full edge {a} -- {b} must lie within the context block"
                    )
                lo, hi = sorted((a, b), key=order.__getitem__)
                edge_map[pair] = Edge(lo, hi, kind)

        self.nodes: tuple[str, ...] = tuple(nodes)
        self.response_blocks = response_blocks
        self.context = context
        self._edges = edge_map
        self._block_of = block_of
        incident: dict[str, list[Edge]] = {n: [] for n in nodes}
        for e in edge_map.values():
            incident[e.a].append(e)
            incident[e.b].append(e)
        self._incident = incident

    # -- basic interrogation -------------------------------------------------

    @property
    def blocks(self) -> tuple[tuple[str, ...], ...]:
        """All blocks g_1 ... g_J in order, context last when present."""
        return self.response_blocks + ((self.context,) if self.context else ())

    def block_index(self, node: str) -> int:
        try:
            return self._block_of[node]
        except KeyError:
            raise NodeNotInAnyBlock(f"unknown node {node!r}") from None

    def block_future(self, j: int) -> frozenset:
        """Union of blocks after g_j (``g_{>j}``), empty for the last block."""
        blocks = self.blocks
        return frozenset(n for blk in blocks[j + 1 :] for n in blk)

    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted(self._edges.values(), key=lambda e: (e.a, e.b, e.kind.value)))

    def edge_between(self, a: str, b: str) -> Edge | None:
        return self._edges.get(frozenset((a, b)))

    def adjacent(self, a: str, b: str) -> bool:
        return frozenset((a, b)) in self._edges

    def incident_edges(self, node: str) -> tuple[Edge, ...]:
        return tuple(self._incident[node])

    def neighbors(self, node: str) -> tuple[str, ...]:
        return tuple(e.other(node) for e in self._incident[node])

    def children(self, node: str) -> tuple[str, ...]:
        """Heads of arrows with tail at ``node`` (its responses)."""
        return tuple(e.b for e in self._incident[node] if e.kind is EdgeKind.ARROW and e.a == node)

    def regressors(self, node: str) -> tuple[str, ...]:
        """Tails of arrows pointing at ``node``."""
        return tuple(e.a for e in self._incident[node] if e.kind is EdgeKind.ARROW and e.b == node)

    def descendants(self, node: str) -> frozenset:
        """Nodes reachable from ``node`` along arrows (tail to head), inclusive."""
        seen = {node}
        stack = [node]
        while stack:
            for ch in self.children(stack.pop()):
                if ch not in seen:
                    seen.add(ch)
                    stack.append(ch)
        return frozenset(seen)

    def skeleton(self) -> frozenset:
        """Set of coupled node pairs, ignoring edge type."""
        return frozenset(self._edges)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RegressionGraph):
            return NotImplemented
        return (
            set(self.nodes) == set(other.nodes)
            and tuple(frozenset(b) for b in self.response_blocks)
            == tuple(frozenset(b) for b in other.response_blocks)
            and frozenset(self.context) == frozenset(other.context)
            and self._edges == other._edges
        )

    def __hash__(self):
        return hash(
            (
                frozenset(self.nodes),
                tuple(frozenset(b) for b in self.response_blocks),
                frozenset(self.context),
                frozenset(self._edges.values()),
            )
        )

    def __repr__(self):
        return (
            f"RegressionGraph(blocks={[list(b) for b in self.response_blocks]}, "
            f"context={list(self.context)}, edges={len(self._edges)})"
        )


def build_graph(
    response_blocks: Sequence[Sequence[str]],
    context: Sequence[str] = (),
    edges: Iterable = (),
) -> RegressionGraph:
    """Construct and validate a regression graph.

    Raises DuplicateEdge, EdgeKindViolatesBlocks, ArrowPointsToPast or
    NodeNotInAnyBlock when an invariant is violated.
    """
    return RegressionGraph(response_blocks, context, edges)


def connected_components_undirected(g: RegressionGraph) -> list[frozenset]:
    """Connected components after deleting all arrows and keeping all nodes
    and undirected (dashed + full) edges.  Returns a partition of the node
    set, ordered by first node appearance."""
    seen: set[str] = set()
    components: list[frozenset] = []
    for start in g.nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            n = stack.pop()
            for e in g.incident_edges(n):
                if e.kind is EdgeKind.ARROW:
                    continue
                m = e.other(n)
                if m not in comp:
                    comp.add(m)
                    stack.append(m)
        seen |= comp
        components.append(frozenset(comp))
    return components


def enumerate_vs(g: RegressionGraph) -> list[VConfiguration]:
    """All V configurations: 3-node, 2-edge subgraphs with uncoupled endpoints.

    Endpoints are ordered by node position so the enumeration is
    deterministic.
    """
    order = {n: i for i, n in enumerate(g.nodes)}
    out: list[VConfiguration] = []
    for o in g.nodes:
        nbrs = sorted(set(g.neighbors(o)), key=order.__getitem__)
        for i, k in itertools.combinations(nbrs, 2):
            if g.adjacent(i, k):
                continue
            e_io = g.edge_between(i, o)
            e_ok = g.edge_between(o, k)
            kind = classify_v(e_io.end_at(o), e_ok.end_at(o))
            out.append(VConfiguration(i, o, k, e_io, e_ok, kind))
    out.sort(key=lambda v: (order[v.i], order[v.o], order[v.k]))
    return out


@dataclass(frozen=True)
class Factor:
    """One conditional density factor: a response set given a conditioning set."""

    response: tuple[str, ...]
    given: tuple[str, ...]

    def __str__(self) -> str:
        if self.given:
            return f"f({','.join(self.response)} | {','.join(self.given)})"
        return f"f({','.join(self.response)})"


def factorization(g: RegressionGraph, reduce: bool = False) -> list[Factor]:
    """Ordered density factorization of the graph, one factor per block.

    By default each response block g_j is conditioned on its full past
    g_{>j} and the context block is marginal.  With ``reduce=True`` the
    conditioning set of each response block is cut down to the nodes
    that actually carry an arrow into the block, which is the Markov
    form the defining independences justify.
    """
    blocks = g.blocks
    n_resp = len(g.response_blocks)
    factors = []
    for j, blk in enumerate(blocks):
        if j >= n_resp:
            factors.append(Factor(tuple(blk), ()))
            continue
        future = g.block_future(j)
        if reduce:
            parents = {p for n in blk for p in g.regressors(n)}
            future = future & parents
        order = {n: i for i, n in enumerate(g.nodes)}
        factors.append(Factor(tuple(blk), tuple(sorted(future, key=order.__getitem__))))
    return factors


def defining_statements(g: RegressionGraph):
    """The unique pairwise independence assigned to each missing edge.

    For an uncoupled pair i,k the statement is i _||_ k given

    * g_{>j} when both lie in response block g_j,
    * g_{>j} minus {k} when i is a response in g_j and k lies in its past,
    * v minus {i,k} when both are context nodes.

    Returns ``IndependenceStatement`` objects in deterministic order.
    """
    from .independence import IndependenceStatement

    ctx = frozenset(g.context)
    out = []
    for i, k in itertools.combinations(g.nodes, 2):
        if g.adjacent(i, k):
            continue
        ji, jk = g.block_index(i), g.block_index(k)
        if i in ctx and k in ctx:
            c = ctx - {i, k}
        elif ji == jk:
            c = g.block_future(ji)
        else:
            # earlier-block node is the response, the other is in its past
            if ji > jk:
                i, k = k, i
                ji = jk
            c = g.block_future(ji) - {k}
        out.append(IndependenceStatement(frozenset({i}), frozenset({k}), c))
    return out


def derive_block_ordering(
    nodes: Sequence[str], edges: Iterable[Edge]
) -> tuple[tuple[tuple[str, ...], ...], tuple[str, ...]]:
    """Derive a compatible block ordering from a typed edge structure.

    Dashed components become response blocks, all full-line nodes merge
    into a single final context block, and remaining nodes become
    singleton response blocks.  Blocks are ordered topologically so that
    every arrow points from a later block to an earlier one.  Raises
    GraphError when no compatible ordering exists.
    """
    nodes = [str(n) for n in nodes]
    order = {n: i for i, n in enumerate(nodes)}
    edges = list(edges)

    parent: dict[str, str] = {n: n for n in nodes}

    def find(x: str) -> str:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    full_nodes: set[str] = set()
    for e in edges:
        if e.kind is EdgeKind.DASHED:
            ra, rb = find(e.a), find(e.b)
            if ra != rb:
                parent[ra] = rb
        elif e.kind is EdgeKind.FULL:
            full_nodes.update((e.a, e.b))

    groups: dict[str, list[str]] = {}
    for n in nodes:
        if n in full_nodes:
            continue
        groups.setdefault(find(n), []).append(n)
    gid_of = {n: gid for gid, members in groups.items() for n in members}

    # precedence: an arrow's tail group must come after its head group
    after: dict[str, set] = {gid: set() for gid in groups}
    CTX = "__context__"
    if full_nodes:
        after[CTX] = set()
    for e in edges:
        if e.kind is not EdgeKind.ARROW:
            continue
        if e.a in full_nodes and e.b in full_nodes:
            raise GraphError(f"arrow {e} between two full-line nodes")
        if e.b in full_nodes:
            raise GraphError(f"arrow {e} points into a full-line node")
        tail = CTX if e.a in full_nodes else gid_of[e.a]
        head = gid_of[e.b]
        if tail == head:
            raise GraphError(f"arrow {e} inside one undirected component")
        after[tail].add(head)
    for e in edges:
        if e.kind is EdgeKind.DASHED and (e.a in full_nodes or e.b in full_nodes):
            raise GraphError(f"node of dashed edge {e} also carries a full line")

    # Kahn's algorithm: a block is ready once every block it must follow
    # (the heads of its outgoing arrows) has been emitted; deterministic ties
    remaining = set(after)
    blocks: list[str] = []
    while remaining:
        ready = [gid for gid in remaining if not (after[gid] & (remaining - {gid}))]
        # context goes last whenever possible
        ready_non_ctx = [g_ for g_ in ready if g_ != CTX]
        if ready_non_ctx:
            pick = min(ready_non_ctx, key=lambda gid: min(order[n] for n in groups[gid]))
        elif ready:
            pick = CTX
        else:
            raise GraphError("arrows create a cycle among undirected components")
        blocks.append(pick)
        remaining.discard(pick)
    if full_nodes and blocks[-1] != CTX:
        raise GraphError("context block cannot be placed last")

    response_blocks = tuple(
        tuple(sorted(groups[gid], key=order.__getitem__)) for gid in blocks if gid != CTX
    )
    context = tuple(sorted(full_nodes, key=order.__getitem__))
    return response_blocks, context
