"""Exhaustive enumeration of small regression graphs up to isomorphism.

Graphs are generated constructively (ordered block partitions with a
context flag, then every subset of the permitted edges), so every
instance is valid by definition; the typed edge structures are then
deduplicated under node relabeling.  One canonical representative per
class is rebuilt with a block ordering derived from its own structure.
Used by the certification suites that sweep all graphs on <= 5 nodes.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np

from .graph import RegressionGraph, derive_block_ordering, Edge, EdgeKind

# pair state codes: 0 none, 1 arrow lo->hi, 2 arrow hi->lo, 3 dashed, 4 full
_NONE, _ARROW_AB, _ARROW_BA, _DASHED, _FULL = range(5)


def ordered_partitions(items):
    """All ordered partitions of ``items`` into nonempty blocks."""
    items = list(items)
    if not items:
        yield ()
        return
    first, rest = items[0], items[1:]
    for sub in ordered_partitions(rest):
        for j, blk in enumerate(sub):
            yield sub[:j] + ((first,) + blk,) + sub[j + 1 :]
        for j in range(len(sub) + 1):
            yield sub[:j] + ((first,),) + sub[j:]


def _edges_from_states(nodes, pairs, states):
    edges = []
    for (a, b), s in zip(pairs, states):
        if s == _NONE:
            continue
        na, nb = nodes[a], nodes[b]
        if s == _ARROW_AB:
            edges.append(Edge(na, nb, EdgeKind.ARROW))
        elif s == _ARROW_BA:
            edges.append(Edge(nb, na, EdgeKind.ARROW))
        elif s == _DASHED:
            edges.append(Edge(na, nb, EdgeKind.DASHED))
        else:
            edges.append(Edge(na, nb, EdgeKind.FULL))
    return edges


@functools.lru_cache(maxsize=None)
def all_graphs(n: int) -> tuple:
    """All valid regression graphs on n labeled nodes, one representative
    per isomorphism class of the typed edge structure."""
    if n < 1:
        return ()
    nodes = tuple(str(i + 1) for i in range(n))
    pairs = list(itertools.combinations(range(n), 2))
    n_pairs = len(pairs)
    if n == 1:
        return (RegressionGraph([nodes], (), ()),)
    pair_index = {p: t for t, p in enumerate(pairs)}
    pow5 = 5 ** np.arange(n_pairs, dtype=np.int64)

    subsets = np.zeros((2**n_pairs, n_pairs), dtype=np.int8)
    for t in range(n_pairs):
        subsets[:, t] = (np.arange(2**n_pairs) >> t) & 1

    chunks = []
    for blocks in ordered_partitions(range(n)):
        for context_last in (False, True):
            type_vec = np.zeros(n_pairs, dtype=np.int8)
            block_of = {x: j for j, blk in enumerate(blocks) for x in blk}
            for t, (a, b) in enumerate(pairs):
                ja, jb = block_of[a], block_of[b]
                if ja == jb:
                    is_last = ja == len(blocks) - 1
                    type_vec[t] = _FULL if (context_last and is_last) else _DASHED
                elif ja > jb:
                    type_vec[t] = _ARROW_AB  # a sits in the later block: tail
                else:
                    type_vec[t] = _ARROW_BA
            chunks.append(subsets * type_vec[None, :])
    states = np.concatenate(chunks, axis=0)

    ids = states @ pow5
    _, keep = np.unique(ids, return_index=True)
    states = states[keep]

    flip_lut = np.array([0, 2, 1, 3, 4], dtype=np.int8)
    canon = states @ pow5
    for perm in itertools.permutations(range(n)):
        dest = np.empty(n_pairs, dtype=np.int64)
        flip = np.empty(n_pairs, dtype=bool)
        for t, (a, b) in enumerate(pairs):
            u, v = perm[a], perm[b]
            dest[t] = pair_index[(min(u, v), max(u, v))]
            flip[t] = u > v
        remapped = np.where(flip[None, :], flip_lut[states], states)
        permuted = np.empty_like(states)
        permuted[:, dest] = remapped
        canon = np.minimum(canon, permuted @ pow5)

    out = []
    for cid in np.unique(canon):
        digits = [(int(cid) // 5**t) % 5 for t in range(n_pairs)]
        edges = _edges_from_states(nodes, pairs, digits)
        resp, ctx = derive_block_ordering(nodes, edges)
        out.append(RegressionGraph(resp, ctx, edges))
    return tuple(out)


def all_graphs_up_to(n: int) -> tuple:
    """Catalog over every node count from 2 through n."""
    out = []
    for k in range(2, n + 1):
        out.extend(all_graphs(k))
    return tuple(out)


def random_graph(n: int, seed: int, p_edge: float = 0.5) -> RegressionGraph:
    """Random valid regression graph: random ordered partition, random
    context flag, each permitted edge kept with probability p_edge."""
    rng = np.random.default_rng(seed)
    nodes = [str(i + 1) for i in range(n)]
    perm = list(rng.permutation(n))
    cuts = sorted(rng.choice(range(1, n), size=rng.integers(0, n), replace=False)) if n > 1 else []
    bounds = [0] + list(cuts) + [n]
    blocks = [tuple(nodes[perm[i]] for i in range(lo, hi)) for lo, hi in zip(bounds, bounds[1:])]
    context_last = bool(rng.integers(0, 2)) and len(blocks) >= 1

    block_of = {x: j for j, blk in enumerate(blocks) for x in blk}
    edges = []
    for a, b in itertools.combinations(nodes, 2):
        if rng.random() >= p_edge:
            continue
        ja, jb = block_of[a], block_of[b]
        if ja == jb:
            last = ja == len(blocks) - 1
            kind = "full" if (context_last and last) else "dashed"
            edges.append((a, b, kind))
        elif ja > jb:
            edges.append((a, b, "arrow"))
        else:
            edges.append((b, a, "arrow"))
    if context_last:
        return RegressionGraph(blocks[:-1], blocks[-1], edges)
    return RegressionGraph(blocks, (), edges)
