"""Graph transformations: marginalization, Markov equivalence, and
hidden-variable expansion of undirected edges.

Marginalizing over a node set M repeatedly fires the five transmitting-V
edge-induction rules at inner nodes in M.  The induced edge keeps the
marks the V showed at its endpoints: two head-like outer ends give a
dashed line, one head-like end gives an arrow into it, two tail-like
ends give a full line.  Collision Vs never induce edges under
marginalization.  The fixpoint usually lands back inside the
regression-graph class; when it does not, the result is returned as a
summary-graph form with ``is_regression_graph`` false.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .graph import (
    Edge,
    EdgeKind,
    GraphError,
    RegressionGraph,
    VKind,
    classify_v,
    derive_block_ordering,
    enumerate_vs,
)
from .independence import structure_signature


class TransformError(ValueError):
    pass


class NodeSetMismatch(TransformError):
    pass


class EdgeNotDashed(TransformError):
    pass


class ConditioningNotSupported(TransformError):
    """Graph rewrites for a nonempty conditioning set are out of scope;
    condition at the independence-query level instead."""


_CERT_MAX_NODES = 9
_KIND_PRIORITY = {EdgeKind.ARROW: 0, EdgeKind.DASHED: 1, EdgeKind.FULL: 2}


@dataclass(frozen=True)
class InducedGraph:
    """Result of a graph transformation.

    ``edges`` hold one kind per pair after deduplication.  When the
    result leaves the regression-graph class, ``is_regression_graph``
    is false, the block layout is best effort, and ``multi_kind_pairs``
    records any pair for which distinct rules induced different kinds.
    """

    nodes: tuple
    edges: tuple
    response_blocks: tuple
    context: tuple
    is_regression_graph: bool
    multi_kind_pairs: tuple = field(default=())

    def graph(self) -> RegressionGraph:
        """The validated regression graph; raises GraphError when the
        result is out of class."""
        return RegressionGraph(self.response_blocks, self.context, self.edges)


def _induced_edge(mark_i, i: str, mark_k, k: str, order: dict) -> Edge:
    """Edge induced by a transmitting V with outer end marks at i and k."""
    if mark_i.is_head_like and mark_k.is_head_like:
        lo, hi = sorted((i, k), key=order.__getitem__)
        return Edge(lo, hi, EdgeKind.DASHED)
    if mark_i.is_head_like:
        return Edge(k, i, EdgeKind.ARROW)
    if mark_k.is_head_like:
        return Edge(i, k, EdgeKind.ARROW)
    lo, hi = sorted((i, k), key=order.__getitem__)
    return Edge(lo, hi, EdgeKind.FULL)


def marginalize(g: RegressionGraph, over, condition=()) -> InducedGraph:
    """Marginalize the graph over node set ``over`` (M); C must be empty.

    Fires the transmitting-V induction rules to a fixpoint (sweeps are
    synchronous and processed in deterministic node order, so the output
    is reproducible byte for byte), then deletes M.  Identical induced
    edges are kept once; distinct kinds induced for one pair are all
    retained until extraction, where they collapse by precedence
    arrow > dashed > full only if the collapse provably preserves the
    marginal independence structure, and otherwise flag the result out
    of class.
    """
    if condition:
        raise ConditioningNotSupported(
            "conditioning-set graph rewrites are not supported; query independence with c instead"
        )
    m = frozenset(str(n) for n in over)
    unknown = m - set(g.nodes)
    if unknown:
        raise TransformError(f"marginalization set contains unknown nodes: {sorted(unknown)}")

    order = {n: i for i, n in enumerate(g.nodes)}
    state: dict[frozenset, set] = {}
    for e in g.edges():
        state.setdefault(e.pair, set()).add(e)

    def incident(node: str) -> list:
        out = []
        for pair, eset in state.items():
            if node in pair:
                out.extend(eset)
        return out

    # The rule fires also when the endpoints are already coupled by a
    # different kind; induced kinds accumulate (the summary-graph double
    # edges), identical ones are kept once.  Dropping coupled firings
    # loses dependences: with 1 -> 3 present, marginalizing node 2 of
    # 1 <- 2 -> 3 must still record the induced dashed coupling, or the
    # projected graph wrongly separates 3 from 4 given 1 in graphs like
    # {1 -> 3, 2 -> 1, 2 -> 3, 4 -> 1}.
    while True:
        additions: set = set()
        for o in sorted(m, key=order.__getitem__):
            edges_at_o = incident(o)
            nbrs = sorted({e.other(o) for e in edges_at_o}, key=order.__getitem__)
            for i, k in itertools.combinations(nbrs, 2):
                for e_io in (e for e in edges_at_o if i in e.pair):
                    for e_ok in (e for e in edges_at_o if k in e.pair):
                        if classify_v(e_io.end_at(o), e_ok.end_at(o)) is VKind.TRANSMITTING:
                            additions.add(
                                _induced_edge(e_io.end_at(i), i, e_ok.end_at(k), k, order)
                            )
        new = {e for e in additions if e not in state.get(e.pair, set())}
        if not new:
            break
        for e in new:
            state.setdefault(e.pair, set()).add(e)

    keep_nodes = tuple(n for n in g.nodes if n not in m)
    collapsed = []
    flattened = []
    multi = []
    for pair in sorted(state, key=lambda p: tuple(sorted(order[n] for n in p))):
        if pair & m:
            continue
        ranked = sorted(state[pair], key=lambda e: (_KIND_PRIORITY[e.kind], e.a, e.b))
        collapsed.append(ranked[0])
        flattened.extend(ranked)
        if len(ranked) > 1:
            multi.append((pair, tuple(ranked)))

    return _classify_result(g, m, keep_nodes, tuple(collapsed), tuple(flattened), tuple(multi))


def _classify_result(g, m, keep_nodes, collapsed, flattened, multi) -> InducedGraph:
    inherited_resp = tuple(
        tuple(n for n in blk if n not in m) for blk in g.response_blocks
    )
    inherited_resp = tuple(blk for blk in inherited_resp if blk)
    inherited_ctx = tuple(n for n in g.context if n not in m)

    candidate = None
    for resp, ctx in (
        (inherited_resp, inherited_ctx),
        _safe_derived(keep_nodes, collapsed),
    ):
        if resp is None:
            continue
        try:
            RegressionGraph(resp, ctx, collapsed)
            candidate = (resp, ctx)
            break
        except GraphError:
            continue

    if candidate is not None:
        resp, ctx = candidate
        in_class = True
        if multi:
            # cross-kind clash: the single-edge collapse stands only when
            # certified to preserve the marginal independence structure
            in_class = len(g.nodes) <= _CERT_MAX_NODES and _collapse_preserves(
                g, RegressionGraph(resp, ctx, collapsed)
            )
        if in_class:
            return InducedGraph(keep_nodes, collapsed, resp, ctx, True, multi)

    # out of class: keep the multi-edge summary-graph form
    return InducedGraph(keep_nodes, flattened, inherited_resp, inherited_ctx, False, multi)


def _safe_derived(nodes, edges):
    try:
        return derive_block_ordering(nodes, edges)
    except GraphError:
        return None, None


def _collapse_preserves(g: RegressionGraph, result: RegressionGraph) -> bool:
    keep = set(result.nodes)
    expected = {
        (pair, c)
        for pair, c in structure_signature(g, max_nodes=_CERT_MAX_NODES)
        if pair <= keep and c <= keep
    }
    got = structure_signature(result, max_nodes=_CERT_MAX_NODES)
    return expected == got


def collision_pairs(g: RegressionGraph) -> frozenset:
    """Endpoint pairs {i, k} possessing at least one collision V."""
    return frozenset(v.endpoints for v in enumerate_vs(g) if v.kind is VKind.COLLISION)


def collision_locations(g: RegressionGraph) -> frozenset:
    """The V locations ({i, k}, o) classified as collisions.

    The specific collision form at a location may differ between
    equivalent graphs; only where the collisions sit matters.
    """
    return frozenset(
        (v.endpoints, v.o) for v in enumerate_vs(g) if v.kind is VKind.COLLISION
    )


def markov_equivalent(g1: RegressionGraph, g2: RegressionGraph) -> bool:
    """Two regression graphs imply the same independence structure iff
    they share the skeleton and their collision Vs sit at identical
    locations.

    Comparing collision endpoint pairs alone is not enough: with
    skeleton {1-3, 1-4, 2-3, 2-4}, orienting all four arrows inward
    versus flipping 3 -> 1 leaves {1, 2} as the only collision pair in
    both graphs, yet only the first implies 1 _||_ 2; the flip turns the
    V at inner node 3 transmitting.  Certified against brute-force
    structure comparison over every graph pair on <= 5 nodes.
    """
    if set(g1.nodes) != set(g2.nodes):
        raise NodeSetMismatch("graphs are over different node sets")
    if g1.skeleton() != g2.skeleton():
        return False
    return collision_locations(g1) == collision_locations(g2)


def _fresh_latent_names(g: RegressionGraph, count: int, prefix: str) -> list:
    taken = set(g.nodes)
    out = []
    i = 1
    while len(out) < count:
        name = f"{prefix}{i}"
        if name not in taken:
            taken.add(name)
            out.append(name)
        i += 1
    return out


def expand_hidden(g: RegressionGraph, edges, prefix: str = "L") -> RegressionGraph:
    """Replace each selected dashed edge i ~~ k by a hidden common source
    i <- L -> k.

    The latents form one new response block behind all existing response
    blocks, so the result is again a valid regression graph, and
    marginalizing the latents recovers each dashed edge.  An empty
    selection returns the graph unchanged.
    """
    selected = []
    for item in edges:
        a, b = (item.a, item.b) if isinstance(item, Edge) else tuple(item)
        e = g.edge_between(a, b)
        if e is None or e.kind is not EdgeKind.DASHED:
            raise EdgeNotDashed(f"({a}, {b}) is not a dashed edge of the graph")
        if e not in selected:
            selected.append(e)
    if not selected:
        return g

    latents = _fresh_latent_names(g, len(selected), prefix)
    new_edges = [e for e in g.edges() if e not in selected]
    for latent, e in zip(latents, selected):
        new_edges.append(Edge(latent, e.a, EdgeKind.ARROW))
        new_edges.append(Edge(latent, e.b, EdgeKind.ARROW))
    blocks = list(g.response_blocks) + [tuple(latents)]
    return RegressionGraph(blocks, g.context, new_edges)


def expand_full_line(g: RegressionGraph, edge, prefix: str = "L") -> InducedGraph:
    """The common-source construction for a full line: replace i -- k by
    i <- L -> k.

    When either endpoint keeps other full lines the result leaves the
    regression-graph class (a full end meeting an arrowhead cannot occur
    in one), so it is returned flagged rather than validated; otherwise
    the endpoints move out of the context block and the result is a
    plain regression graph.
    """
    a, b = (edge.a, edge.b) if isinstance(edge, Edge) else tuple(edge)
    e = g.edge_between(a, b)
    if e is None or e.kind is not EdgeKind.FULL:
        raise TransformError(f"({a}, {b}) is not a full edge of the graph")

    latent = _fresh_latent_names(g, 1, prefix)[0]
    new_edges = [x for x in g.edges() if x != e]
    new_edges.append(Edge(latent, e.a, EdgeKind.ARROW))
    new_edges.append(Edge(latent, e.b, EdgeKind.ARROW))
    nodes = g.nodes + (latent,)

    resp, ctx = _safe_derived(nodes, new_edges)
    if resp is not None:
        try:
            RegressionGraph(resp, ctx, new_edges)
            return InducedGraph(nodes, tuple(new_edges), resp, ctx, True)
        except GraphError:
            pass
    loose_resp = tuple(g.response_blocks) + ((latent,),)
    return InducedGraph(nodes, tuple(new_edges), loose_resp, g.context, False)
