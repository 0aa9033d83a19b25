import itertools

import pytest

from reggraph import (
    ArrowPointsToPast,
    DuplicateEdge,
    EdgeKind,
    EdgeKindViolatesBlocks,
    GraphError,
    NodeNotInAnyBlock,
    RegressionGraph,
    VKind,
    build_graph,
    connected_components_undirected,
    defining_statements,
    derive_block_ordering,
    enumerate_vs,
    factorization,
)
from reggraph.catalog import all_graphs, random_graph
from reggraph.independence import IndependenceStatement


def test_chain_builds(chain5):
    assert chain5.nodes == ("1", "2", "3", "4", "5")
    assert len(chain5.edges()) == 4
    assert chain5.regressors("1") == ("2",)


def test_empty_edge_set_is_valid():
    g = build_graph([["a", "b"], ["c"]], ["d"], [])
    assert g.edges() == ()


def test_dashed_edge_in_context_rejected():
    with pytest.raises(EdgeKindViolatesBlocks):
        build_graph([["a"]], ["c", "d"], [("c", "d", "dashed")])


def test_dashed_edge_across_blocks_rejected():
    with pytest.raises(EdgeKindViolatesBlocks):
        build_graph([["a"], ["b"]], [], [("a", "b", "dashed")])


def test_full_edge_outside_context_rejected():
    with pytest.raises(EdgeKindViolatesBlocks):
        build_graph([["a", "b"]], [], [("a", "b", "full")])


def test_arrow_must_point_to_earlier_block():
    with pytest.raises(ArrowPointsToPast):
        build_graph([["a"], ["b"]], [], [("a", "b", "arrow")])
    with pytest.raises(ArrowPointsToPast):
        build_graph([["a", "b"]], [], [("a", "b", "arrow")])


def test_duplicate_edge_rejected():
    with pytest.raises(DuplicateEdge):
        build_graph([["a"], ["b"]], [], [("b", "a", "arrow"), ("b", "a", "arrow")])


def test_unknown_node_rejected():
    with pytest.raises(NodeNotInAnyBlock):
        build_graph([["a"]], [], [("a", "zz", "arrow")])


def test_self_edge_rejected():
    with pytest.raises(GraphError):
        build_graph([["a"]], [], [("a", "a", "arrow")])


def test_node_in_two_blocks_rejected():
    with pytest.raises(GraphError):
        build_graph([["a"], ["a"]], [], [])


def test_components_study_graph(study_graph):
    comps = {frozenset(c) for c in connected_components_undirected(study_graph)}
    assert comps == {
        frozenset({"Y8", "X8"}),
        frozenset({"Y4", "X4"}),
        frozenset({"Yr", "Xr", "E", "H"}),
    }


def test_components_edgeless_and_chain(chain5):
    g = build_graph([["1"], ["2"], ["3"]], [], [])
    assert [set(c) for c in connected_components_undirected(g)] == [{"1"}, {"2"}, {"3"}]
    assert len(connected_components_undirected(chain5)) == 5


def test_components_are_a_partition(catalog4):
    for g in catalog4:
        comps = connected_components_undirected(g)
        seen = set()
        for c in comps:
            assert not (c & seen)
            seen |= c
        assert seen == set(g.nodes)


@pytest.mark.parametrize(
    "edges,blocks,context,kind",
    [
        ([("i", "o", "arrow"), ("k", "o", "arrow")], [["o"], ["i"], ["k"]], [], VKind.COLLISION),
        ([("o", "i", "arrow"), ("k", "o", "arrow")], [["i"], ["o"], ["k"]], [], VKind.TRANSMITTING),
        ([("i", "o", "dashed"), ("k", "o", "arrow")], [["i", "o"], ["k"]], [], VKind.COLLISION),
        ([("o", "i", "arrow"), ("o", "k", "dashed")], [["i"], ["o", "k"]], [], VKind.TRANSMITTING),
        ([("i", "o", "full"), ("o", "k", "full")], [], ["i", "o", "k"], VKind.TRANSMITTING),
    ],
)
def test_v_classification(edges, blocks, context, kind):
    g = build_graph(blocks, context, edges)
    vs = enumerate_vs(g)
    assert len(vs) == 1
    assert vs[0].kind is kind
    assert vs[0].o == "o"


def test_exactly_eight_v_forms():
    """Across every 3-node class, the inner-node end-mark combinations of Vs
    come in exactly 8 forms: 3 collision and 5 transmitting."""
    forms = set()
    for g in all_graphs(3):
        for v in enumerate_vs(g):
            forms.add((frozenset((v.edge_io.end_at(v.o), v.edge_ok.end_at(v.o))), v.kind))
    kinds = [kind for _marks, kind in forms]
    assert len(forms) == 8
    assert kinds.count(VKind.COLLISION) == 3
    assert kinds.count(VKind.TRANSMITTING) == 5


def test_vs_have_uncoupled_endpoints(catalog4):
    for g in catalog4:
        for v in enumerate_vs(g):
            assert not g.adjacent(v.i, v.k)
            assert g.adjacent(v.i, v.o) and g.adjacent(v.o, v.k)


def test_factorization_chain(chain5):
    full = [str(f) for f in factorization(chain5)]
    assert full == ["f(1 | 2,3,4,5)", "f(2 | 3,4,5)", "f(3 | 4,5)", "f(4 | 5)", "f(5)"]
    reduced = [str(f) for f in factorization(chain5, reduce=True)]
    assert reduced == ["f(1 | 2)", "f(2 | 3)", "f(3 | 4)", "f(4 | 5)", "f(5)"]


def test_factorization_study_graph(study_graph):
    factors = factorization(study_graph)
    assert [f.response for f in factors] == [("Y8", "X8"), ("Y4", "X4"), ("Yr", "Xr", "E", "H")]
    assert set(factors[0].given) == {"Y4", "X4", "Yr", "Xr", "E", "H"}
    assert set(factors[1].given) == {"Yr", "Xr", "E", "H"}
    assert factors[2].given == ()


def test_factorization_reduced_study_graph(study_graph):
    factors = factorization(study_graph, reduce=True)
    # Yr carries no arrow into {Y8, X8}; E and H carry none into {Y4, X4}
    assert set(factors[0].given) == {"Y4", "X4", "Xr", "E", "H"}
    assert set(factors[1].given) == {"Yr", "Xr"}


def test_factorization_single_context_block():
    g = build_graph([], ["a", "b"], [("a", "b", "full")])
    factors = factorization(g)
    assert len(factors) == 1 and factors[0].given == ()


def test_factorization_mentions_every_node_once(catalog4):
    for g in catalog4:
        responses = [n for f in factorization(g) for n in f.response]
        assert sorted(responses) == sorted(g.nodes)


def test_defining_statements_chain(chain5):
    got = {str(s) for s in defining_statements(chain5)}
    assert got == {
        "1 _||_ 3 | 2,4,5",
        "1 _||_ 4 | 2,3,5",
        "1 _||_ 5 | 2,3,4",
        "2 _||_ 4 | 3,5",
        "2 _||_ 5 | 3,4",
        "3 _||_ 5 | 4",
    }


def test_defining_statement_for_missing_arrow(study_graph):
    stmts = defining_statements(study_graph)
    want = IndependenceStatement(
        frozenset({"X8"}), frozenset({"Y4"}), frozenset({"X4", "Yr", "Xr", "E", "H"})
    )
    assert any(s.a | s.b == {"X8", "Y4"} and s.c == want.c for s in stmts)


def test_defining_statements_complete_graph_empty():
    g = build_graph([["a"], ["b"]], ["c"], [("b", "a", "arrow"), ("c", "a", "arrow"), ("c", "b", "arrow")])
    assert defining_statements(g) == []


def test_defining_statements_one_per_missing_edge(catalog4):
    for g in catalog4:
        stmts = defining_statements(g)
        missing = [
            (i, k)
            for i, k in itertools.combinations(g.nodes, 2)
            if not g.adjacent(i, k)
        ]
        assert len(stmts) == len(missing)
        pairs = {frozenset(s.a | s.b) for s in stmts}
        assert pairs == {frozenset(p) for p in missing}


def test_context_statement_conditions_on_rest():
    g = build_graph([], ["a", "b", "c"], [("a", "b", "full")])
    stmts = defining_statements(g)
    by_pair = {frozenset(s.a | s.b): s.c for s in stmts}
    assert by_pair[frozenset({"a", "c"})] == {"b"}
    assert by_pair[frozenset({"b", "c"})] == {"a"}


def test_derive_block_ordering_roundtrip():
    for seed in range(40):
        g = random_graph(6, seed=seed)
        resp, ctx = derive_block_ordering(g.nodes, g.edges())
        rebuilt = RegressionGraph(resp, ctx, g.edges())
        assert rebuilt.skeleton() == g.skeleton()
        assert {e for e in rebuilt.edges()} == {e for e in g.edges()}


def test_graphs_are_immutable_value_objects(study_graph):
    h = build_graph(
        [list(b) for b in study_graph.response_blocks],
        list(study_graph.context),
        study_graph.edges(),
    )
    assert h == study_graph
    assert hash(h) == hash(study_graph)
    assert study_graph.edge_between("Y8", "X8").kind is EdgeKind.DASHED
