import itertools

import pytest

from reggraph import (
    EdgeNotDashed,
    NodeSetMismatch,
    build_graph,
    expand_full_line,
    expand_hidden,
    marginalize,
    markov_equivalent,
    structure_signature,
)
from reggraph.catalog import all_graphs, random_graph
from reggraph.graph import Edge, EdgeKind
from reggraph.independence import SeparationEngine
from reggraph.transform import ConditioningNotSupported, TransformError


RULES = [
    ("i<-o<-k", [("o", "i", "arrow"), ("k", "o", "arrow")], [["i"], ["o"], ["k"]], [], ["k -> i"]),
    ("i<-o--k", [("o", "i", "arrow"), ("o", "k", "full")], [["i"]], ["o", "k"], ["k -> i"]),
    ("i--o--k", [("i", "o", "full"), ("o", "k", "full")], [], ["i", "o", "k"], ["i -- k"]),
    ("i<-o~k", [("o", "i", "arrow"), ("o", "k", "dashed")], [["i"], ["o", "k"]], [], ["i ~~ k"]),
    ("i<-o->k", [("o", "i", "arrow"), ("o", "k", "arrow")], [["i"], ["k"], ["o"]], [], ["i ~~ k"]),
]


@pytest.mark.parametrize("name,edges,blocks,context,expected", RULES)
def test_five_induction_rules(name, edges, blocks, context, expected):
    g = build_graph(blocks, context, edges)
    res = marginalize(g, ["o"])
    assert res.is_regression_graph
    assert [str(e) for e in res.edges] == expected


def test_collision_inner_node_induces_nothing():
    g = build_graph([["o"], ["i"], ["k"]], [], [("i", "o", "arrow"), ("k", "o", "arrow")])
    res = marginalize(g, ["o"])
    assert res.edges == ()


def test_marginalize_empty_set_is_identity(study_graph):
    assert marginalize(study_graph, []).graph() == study_graph


def test_marginalize_study_cognitive_removed(study_graph):
    """Removing the cognitive scores leaves exactly the induced subgraph."""
    res = marginalize(study_graph, ["Y8", "Y4"])
    keep = set(study_graph.nodes) - {"Y8", "Y4"}
    induced = [e for e in study_graph.edges() if {e.a, e.b} <= keep]
    expected = build_graph([["X8"], ["X4"]], ["Yr", "Xr", "E", "H"], induced)
    assert res.is_regression_graph
    assert res.graph() == expected


def test_marginalize_study_motor_removed(study_graph):
    """Removing the motor scores adds exactly two arrows, from both early
    risks to the cognitive outcome at age 8."""
    res = marginalize(study_graph, ["X8", "X4"])
    keep = set(study_graph.nodes) - {"X8", "X4"}
    induced = [e for e in study_graph.edges() if {e.a, e.b} <= keep]
    expected = build_graph(
        [["Y8"], ["Y4"]],
        ["Yr", "Xr", "E", "H"],
        induced + [Edge("Yr", "Y8", EdgeKind.ARROW), Edge("Xr", "Y8", EdgeKind.ARROW)],
    )
    assert res.is_regression_graph
    assert res.graph() == expected


def test_marginalize_all_nodes(study_graph):
    res = marginalize(study_graph, study_graph.nodes)
    assert res.is_regression_graph
    assert res.nodes == () and res.edges == ()


def test_conditioning_rejected(study_graph):
    with pytest.raises(ConditioningNotSupported):
        marginalize(study_graph, ["Y8"], condition=["E"])


def test_unknown_marginal_node(study_graph):
    with pytest.raises(TransformError):
        marginalize(study_graph, ["nope"])


def _marginal_signature(sig, keep):
    return {(p, c) for (p, c) in sig if p <= keep and c <= keep}


def test_independence_preservation_small(catalog4):
    """Marginal graphs in the regression class imply exactly the original's
    statements over the kept nodes; out-of-class results are flagged."""
    for g in catalog4:
        sig = structure_signature(g)
        for msize in (1, 2):
            for m in itertools.combinations(g.nodes, msize):
                res = marginalize(g, m)
                if not res.is_regression_graph:
                    continue
                expected = _marginal_signature(sig, set(res.nodes))
                assert structure_signature(res.graph()) == expected


def test_independence_preservation_five_nodes(catalog5):
    for g in catalog5[::8]:
        sig = structure_signature(g)
        for m in itertools.combinations(g.nodes, 2):
            res = marginalize(g, m)
            if not res.is_regression_graph:
                continue
            expected = _marginal_signature(sig, set(res.nodes))
            assert structure_signature(res.graph()) == expected


def test_independence_preservation_random_six_nodes():
    for seed in range(12):
        g = random_graph(6, seed=seed)
        sig = structure_signature(g)
        for m in itertools.combinations(g.nodes, 2):
            res = marginalize(g, m)
            if not res.is_regression_graph:
                continue
            expected = _marginal_signature(sig, set(res.nodes))
            assert structure_signature(res.graph()) == expected


def test_out_of_class_marginal_keeps_summary_form():
    # marginalizing node 2 must record the induced dashed coupling on the
    # already-coupled pair (1, 3); a single-edge graph would wrongly imply
    # 3 _||_ 4 | 1
    g = build_graph(
        [["3"], ["1"], ["2", "4"]],
        [],
        [("1", "3", "arrow"), ("2", "1", "arrow"), ("2", "3", "arrow"), ("4", "1", "arrow")],
    )
    res = marginalize(g, ["2"])
    assert not res.is_regression_graph
    assert res.multi_kind_pairs
    pair, kinds = res.multi_kind_pairs[0]
    assert pair == frozenset({"1", "3"})
    assert {e.kind for e in kinds} == {EdgeKind.ARROW, EdgeKind.DASHED}
    with pytest.raises(Exception):
        res.graph()


def test_marginalization_composes(catalog4):
    for g in catalog4[::4]:
        if len(g.nodes) < 3:
            continue
        m1, m2 = g.nodes[0], g.nodes[1]
        once = marginalize(g, [m1, m2])
        first = marginalize(g, [m1])
        if not first.is_regression_graph:
            continue
        twice = marginalize(first.graph(), [m2])
        if not (once.is_regression_graph and twice.is_regression_graph):
            continue
        assert markov_equivalent(once.graph(), twice.graph())


def test_markov_equivalence_examples():
    coll_arrows = build_graph([["o"], ["i"], ["k"]], [], [("i", "o", "arrow"), ("k", "o", "arrow")])
    coll_dash = build_graph([["i", "o"], ["k"]], [], [("i", "o", "dashed"), ("k", "o", "arrow")])
    assert markov_equivalent(coll_arrows, coll_dash)

    chain = build_graph([["i"], ["o"], ["k"]], [], [("o", "i", "arrow"), ("k", "o", "arrow")])
    fork = build_graph([["i"], ["k"], ["o"]], [], [("o", "i", "arrow"), ("o", "k", "arrow")])
    assert markov_equivalent(chain, fork)
    assert not markov_equivalent(coll_arrows, chain)


def test_markov_equivalence_node_set_mismatch(chain5, study_graph):
    with pytest.raises(NodeSetMismatch):
        markov_equivalent(chain5, study_graph)


def test_markov_equivalence_is_equivalence_relation(catalog4):
    graphs = catalog4[::6]
    for g in graphs:
        assert markov_equivalent(g, g)
    same_nodes = [gs for gs in graphs if len(gs.nodes) == 4]
    for g1, g2 in itertools.combinations(same_nodes, 2):
        assert markov_equivalent(g1, g2) == markov_equivalent(g2, g1)


def test_markov_equivalence_matches_brute_force(catalog4):
    by_skeleton = {}
    for g in catalog4:
        by_skeleton.setdefault((len(g.nodes), g.skeleton()), []).append(g)
    for group in by_skeleton.values():
        sigs = [structure_signature(g) for g in group]
        for (i1, g1), (i2, g2) in itertools.combinations(enumerate(group), 2):
            assert markov_equivalent(g1, g2) == (sigs[i1] == sigs[i2])


def test_expand_hidden_roundtrip():
    g = build_graph([["a", "b"]], ["c"], [("a", "b", "dashed"), ("c", "a", "arrow")])
    ex = expand_hidden(g, [("a", "b")])
    latents = [n for n in ex.nodes if n not in g.nodes]
    assert len(latents) == 1
    back = marginalize(ex, latents)
    assert back.graph() == g
    assert markov_equivalent(back.graph(), g)


def test_expand_hidden_multiple_edges(study_graph):
    dashed = [("Y8", "X8"), ("Y4", "X4")]
    ex = expand_hidden(study_graph, dashed)
    latents = [n for n in ex.nodes if n not in study_graph.nodes]
    assert len(latents) == 2
    back = marginalize(ex, latents)
    assert back.graph() == study_graph


def test_expand_hidden_empty_selection(study_graph):
    assert expand_hidden(study_graph, []) == study_graph


def test_expand_hidden_rejects_non_dashed(study_graph):
    with pytest.raises(EdgeNotDashed):
        expand_hidden(study_graph, [("Yr", "E")])
    with pytest.raises(EdgeNotDashed):
        expand_hidden(study_graph, [("Y4", "Y8")])


def test_expand_full_line_isolated_edge_stays_in_class():
    g = build_graph([["r"]], ["E", "X"], [("E", "r", "arrow"), ("E", "X", "full")])
    res = expand_full_line(g, ("E", "X"))
    assert res.is_regression_graph
    latent = [n for n in res.nodes if n not in g.nodes][0]
    back = marginalize(res.graph(), [latent])
    # the recovered coupling is dashed rather than full: same skeleton, no
    # collision V locations on two nodes, hence Markov equivalent
    assert back.graph().skeleton() == g.skeleton()
    assert markov_equivalent(back.graph(), g)


def test_expand_full_line_with_other_full_lines_leaves_class(study_graph):
    res = expand_full_line(study_graph, ("Xr", "E"))
    assert not res.is_regression_graph


def test_expand_full_line_requires_full_edge(study_graph):
    with pytest.raises(TransformError):
        expand_full_line(study_graph, ("Y8", "X8"))


def test_concentration_chain_latent_expansion_criterion_level():
    """The full-line chain, the dashed-middle mixed form, and the hidden
    common-source expansion imply the same structure over the four context
    nodes (checked with the raw separation engine since two of the three
    lie outside the regression-graph class)."""
    nodes = ("Yr", "E", "Xr", "H")
    chain = build_graph([], nodes, [("Yr", "E", "full"), ("E", "Xr", "full"), ("Xr", "H", "full")])
    eng_chain = SeparationEngine.for_graph(chain)
    eng_dashed = SeparationEngine(
        nodes,
        [
            Edge("Yr", "E", EdgeKind.FULL),
            Edge("E", "Xr", EdgeKind.DASHED),
            Edge("Xr", "H", EdgeKind.FULL),
        ],
    )
    expanded = expand_full_line(chain, ("E", "Xr"))
    eng_latent = SeparationEngine(expanded.nodes, expanded.edges)

    def sig(eng):
        out = set()
        for i, k in itertools.combinations(nodes, 2):
            rest = [x for x in nodes if x not in (i, k)]
            for r in range(len(rest) + 1):
                for c in itertools.combinations(rest, r):
                    if eng.separated({i}, {k}, c):
                        out.add((frozenset((i, k)), frozenset(c)))
        return out

    assert sig(eng_chain) == sig(eng_dashed) == sig(eng_latent)
