"""Deciding which conditional independences a regression graph implies.

The criterion is path blocking over the mixed graph: dashed-edge ends
and arrowheads count as head-like, full-line ends and arrow tails as
tail-like.  A path between a and b is active given c when every
non-collider inner node lies outside c and every collider inner node
either lies in c or reaches c along arrows (tail to head).  A statement
a _||_ b | c is implied when no active path exists.

Two interchangeable evaluators are provided: a memoized walk-reachability
search (default, linear in the state space) and a brute-force simple-path
enumeration kept as the reference implementation.  Both are validated
against the exact Gaussian oracle on every small graph in the test
suite, which is the arbiter for the criterion's correctness.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graph import Edge, EdgeKind, RegressionGraph, VConfiguration, VKind


class IndependenceError(ValueError):
    pass


class NodesNotDisjoint(IndependenceError):
    pass


class UnknownNode(IndependenceError):
    pass


class GraphTooLarge(IndependenceError):
    pass


class NoWitnessFound(RuntimeError):
    """No Theorem-1 witness set exists; signals a separation-criterion bug."""


@dataclass(frozen=True)
class IndependenceStatement:
    """a _||_ b | c over disjoint node sets, a and b nonempty."""

    a: frozenset
    b: frozenset
    c: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))
        object.__setattr__(self, "c", frozenset(self.c))
        if not self.a or not self.b:
            raise IndependenceError("both sides of an independence statement must be nonempty")
        if self.a & self.b or self.a & self.c or self.b & self.c:
            raise NodesNotDisjoint(f"sets not disjoint: {self}")

    def flipped(self) -> "IndependenceStatement":
        return IndependenceStatement(self.b, self.a, self.c)

    def __str__(self) -> str:
        fmt = lambda s: ",".join(sorted(s))
        base = f"{fmt(self.a)} _||_ {fmt(self.b)}"
        return f"{base} | {fmt(self.c)}" if self.c else base


def parse_statement(text: str) -> IndependenceStatement:
    """Parse ``"A,B _||_ C | D,E"``; the conditioning part is optional."""
    if "_||_" not in text:
        raise IndependenceError(f"missing _||_ in statement: {text!r}")
    left, _, rest = text.partition("_||_")
    if "|" in rest:
        mid, _, cond = rest.partition("|")
    else:
        mid, cond = rest, ""
    split = lambda s: frozenset(n.strip() for n in s.split(",") if n.strip())
    return IndependenceStatement(split(left), split(mid), split(cond))


class SeparationEngine:
    """Separation queries over one fixed edge structure.

    Works for any node/edge list with the regression-graph end marks, so
    transform internals can query slightly larger graph classes; for
    validated regression graphs use :func:`implies`.
    """

    def __init__(self, nodes, edges):
        self.nodes = tuple(nodes)
        self._node_set = frozenset(self.nodes)
        adj: dict[str, list[tuple[str, bool, bool]]] = {n: [] for n in self.nodes}
        children: dict[str, list[str]] = {n: [] for n in self.nodes}
        for e in edges:
            ha, hb = e.end_at(e.a).is_head_like, e.end_at(e.b).is_head_like
            adj[e.a].append((e.b, ha, hb))
            adj[e.b].append((e.a, hb, ha))
            if e.kind is EdgeKind.ARROW:
                children[e.a].append(e.b)
        self._adj = adj
        self._children = children

    @classmethod
    def for_graph(cls, g: RegressionGraph) -> "SeparationEngine":
        return cls(g.nodes, g.edges())

    def _activated(self, c: frozenset) -> frozenset:
        """Nodes in c or with a directed route into c along arrows."""
        act = set(c)
        changed = True
        while changed:
            changed = False
            for n in self.nodes:
                if n not in act and any(ch in act for ch in self._children[n]):
                    act.add(n)
                    changed = True
        return frozenset(act)

    def separated(self, a, b, c, method: str = "reach") -> bool:
        a, b, c = frozenset(a), frozenset(b), frozenset(c)
        for s in (a, b, c):
            unknown = s - self._node_set
            if unknown:
                raise UnknownNode(f"unknown node(s): {sorted(unknown)}")
        if not a or not b:
            raise IndependenceError("a and b must be nonempty")
        if a & b or a & c or b & c:
            raise NodesNotDisjoint("query sets must be disjoint")
        if method == "reach":
            return not self._connected_reach(a, b, c)
        if method == "paths":
            return not self._connected_paths(a, b, c)
        raise ValueError(f"unknown method {method!r}")

    def _connected_reach(self, a, b, c) -> bool:
        act = self._activated(c)
        seen: set[tuple[str, bool]] = set()
        stack: list[tuple[str, bool]] = []
        for x in a:
            for w, _end_x, end_w in self._adj[x]:
                if w in b:
                    return True
                if (w, end_w) not in seen:
                    seen.add((w, end_w))
                    stack.append((w, end_w))
        while stack:
            w, in_head = stack.pop()
            for z, end_w, end_z in self._adj[w]:
                collider = in_head and end_w
                passable = (w in act) if collider else (w not in c)
                if not passable:
                    continue
                if z in b:
                    return True
                if (z, end_z) not in seen:
                    seen.add((z, end_z))
                    stack.append((z, end_z))
        return False

    def _connected_paths(self, a, b, c) -> bool:
        act = self._activated(c)

        def extend(node: str, in_head: bool | None, used: set) -> bool:
            for z, end_node, end_z in self._adj[node]:
                if z in used:
                    continue
                if in_head is not None:
                    collider = in_head and end_node
                    if collider and node not in act:
                        continue
                    if not collider and node in c:
                        continue
                if z in b:
                    return True
                used.add(z)
                if extend(z, end_z, used):
                    return True
                used.discard(z)
            return False

        for x in a:
            if extend(x, None, {x}):
                return True
        return False


def implies(g: RegressionGraph, statement: IndependenceStatement, method: str = "reach") -> bool:
    """True iff the graph implies ``statement`` under the blocking criterion."""
    return SeparationEngine.for_graph(g).separated(
        statement.a, statement.b, statement.c, method=method
    )


def implied_structure(
    g: RegressionGraph, max_nodes: int = 8, method: str = "reach"
) -> list[IndependenceStatement]:
    """All implied pairwise statements (i _||_ k | c), every uncoupled pair
    and every c; brute force, bounded by ``max_nodes``.

    Set-valued statements follow from the pairwise ones by composition
    and are not materialized.
    """
    if len(g.nodes) > max_nodes:
        raise GraphTooLarge(f"{len(g.nodes)} nodes exceeds brute-force bound {max_nodes}")
    eng = SeparationEngine.for_graph(g)
    out = []
    for i, k in itertools.combinations(g.nodes, 2):
        if g.adjacent(i, k):
            continue
        rest = [n for n in g.nodes if n not in (i, k)]
        for r in range(len(rest) + 1):
            for c in itertools.combinations(rest, r):
                if eng.separated({i}, {k}, c, method=method):
                    out.append(IndependenceStatement(frozenset({i}), frozenset({k}), frozenset(c)))
    return out


def structure_signature(g: RegressionGraph, max_nodes: int = 8) -> frozenset:
    """Canonical hashable form of the implied structure, for comparisons.

    Pairwise statements are symmetric in (a, b), so each is recorded as
    an unordered pair plus its conditioning set.
    """
    return frozenset(
        (s.a | s.b, s.c) for s in implied_structure(g, max_nodes=max_nodes)
    )


def theorem1_witness(g: RegressionGraph, v: VConfiguration):
    """Find c with the separation flip guaranteed for every V.

    For a transmitting V some c has i _||_ k | {o} u c implied but
    i _||_ k | c not; for a collision V the roles swap.  Returns
    ``(c, separated_without_o)``; raises NoWitnessFound if the exhaustive
    search fails, which signals a criterion bug for valid graphs.
    """
    eng = SeparationEngine.for_graph(g)
    i, o, k = v.i, v.o, v.k
    rest = [n for n in g.nodes if n not in (i, o, k)]
    for r in range(len(rest) + 1):
        for c in itertools.combinations(rest, r):
            with_o = eng.separated({i}, {k}, set(c) | {o})
            without_o = eng.separated({i}, {k}, c)
            if v.kind is VKind.TRANSMITTING and with_o and not without_o:
                return frozenset(c), False
            if v.kind is VKind.COLLISION and without_o and not with_o:
                return frozenset(c), True
    raise NoWitnessFound(f"no witness for {v}")
