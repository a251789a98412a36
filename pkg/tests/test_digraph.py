import json

import pytest
from hypothesis import given, settings, strategies as st

from mpss import digraph as dg
from mpss.digraph import INF, DiGraph, GraphMap

import oracle


@st.composite
def digraphs(draw, max_n=6):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return DiGraph.from_edges(n, edges)


def test_infinity_saturates_and_dominates():
    assert INF + 3 is INF and 3 + INF is INF
    assert INF > 10**9 and not INF < 5
    assert dg.Infinity() is INF


def test_point_metric():
    assert dg.point().dist == ((0,),)


def test_cycle_metric_and_diameter():
    Z4 = dg.directed_cycle(4)
    assert Z4.distance(0, 1) == 1 and Z4.distance(1, 0) == 3
    assert Z4.diameter() == 3


def test_unreachable_is_inf():
    G = DiGraph.from_edges(2, [(0, 1)])
    assert G.distance(1, 0) is INF


@given(digraphs())
@settings(max_examples=60, deadline=None)
def test_bfs_matches_floyd_warshall(G):
    ref = oracle.distances(G.n, G.edges)
    for u in range(G.n):
        for v in range(G.n):
            d = G.distance(u, v)
            assert (d is INF and ref[u][v] == oracle.INF) or d == ref[u][v]


@given(digraphs(max_n=5))
@settings(max_examples=40, deadline=None)
def test_triangle_inequality(G):
    d = G.dist
    for a in range(G.n):
        for b in range(G.n):
            for c in range(G.n):
                assert not d[a][c] > d[a][b] + d[b][c]


def test_box_product_metric_is_additive():
    Z3 = dg.directed_cycle(3)
    P, pg, ph = dg.box_product(Z3, Z3)
    assert P.n == 9 and len(P.proper_edges) == 18
    for x in range(9):
        for y in range(9):
            assert P.distance(x, y) == Z3.distance(pg(x), pg(y)) + Z3.distance(ph(x), ph(y))


def test_box_with_point_is_identity_on_indices():
    H = dg.bidirected_cycle(2, 1)
    P, _, _ = dg.box_product(dg.point(), H)
    assert P.edges == H.edges


def test_single_vertex_cycle_is_point():
    P, _, _ = dg.box_product(dg.directed_cycle(1), dg.directed_cycle(1))
    assert P.n == 1 and not P.proper_edges


def test_family_shapes():
    assert sorted(dg.directed_cycle(3).edges) == [(0, 1), (1, 2), (2, 0)]
    C21 = dg.bidirected_cycle(2, 1)
    assert C21.n == 3 and len(C21.edges) == 3
    assert all(C21.distance(0, v) is not INF for v in range(3))
    assert all(C21.distance(v, 2) is not INF for v in range(3))
    S1 = dg.sphere(1)
    assert S1.n == 4 and len(S1.edges) == 4
    sources = {u for u, _ in S1.edges}
    assert len(sources) == 2 and all(sum(1 for u, _ in S1.edges if u == s) == 2 for s in sources)


def test_bidirected_cycle_paths():
    C = dg.bidirected_cycle(4, 3)
    assert C.n == 7 and len(C.edges) == 7
    assert C.distance(0, 4) == 3   # the bottom path is shorter
    assert dg.bidirected_cycle(2, 2).distance(0, 2) == 2


def test_suspension_and_spheres():
    S0 = dg.suspension(dg.empty_graph())
    assert S0.n == 2 and not S0.edges
    assert len(dg.suspension(S0).edges) == 4
    Sp = dg.suspension(dg.point())
    assert Sp.n == 3 and len(Sp.edges) == 2


def test_cone_shapes():
    C, inc = dg.cone(dg.point())
    assert C.n == 3 and len(C.edges) == 2
    assert {v for _, v in C.edges} == {1}          # both ends point at the middle vertex
    C3, inc3 = dg.cone(dg.directed_cycle(3))
    assert C3.n == 7
    assert dg.validate_map(inc3) == (True, None)


def test_cone_pushout_is_suspension():
    for X in (dg.sphere(0), dg.sphere(1), dg.directed_cycle(3)):
        P, g, j, iso = dg.cone_pushout_to_suspension(X)
        assert dg.validate_map(iso)[0]
        assert len(set(iso.images)) == P.n == iso.target.n
        assert {(iso(u), iso(v)) for u, v in P.proper_edges} == set(iso.target.proper_edges)


def test_reach():
    X = dg.bidirected_cycle(4, 3)
    assert dg.reach(X, X.vertices) == frozenset(X.vertices)
    assert dg.reach(X, [0]) == frozenset(range(7))
    Z = dg.directed_cycle(3)
    C, inc = dg.cone(Z)
    assert dg.reach(C, inc.images) == frozenset(range(6))


def test_cofibrations():
    X = dg.directed_cycle(4)
    C, inc = dg.cone(X)
    assert dg.is_cofibration(C, inc.images).ok
    v = dg.is_cofibration(X, X.vertices)
    assert v.ok and v.projection == {x: x for x in X.vertices}
    big = dg.bidirected_cycle(4, 3)
    A = dg.bicycle_short_path(4, 3)
    verdict = dg.is_cofibration(big, A)
    assert verdict.ok
    assert set(verdict.projection) == set(range(7))
    bad = dg.is_cofibration(dg.directed_cycle(3), [1])
    assert not bad.ok and bad.violation == "edge enters the subgraph"


def test_pushout_along_identity():
    X = dg.directed_cycle(3)
    A, _ = X.induced_subgraph([0, 1])
    i = GraphMap(A, X, (0, 1))
    P, g, j = dg.pushout(i, dg.identity_map(A))
    assert P.n == X.n and len(P.proper_edges) == len(X.proper_edges)


def test_bicycle_pushout_gives_short_bicycle():
    big = dg.bidirected_cycle(4, 3)
    vs = dg.bicycle_short_path(4, 3)
    A, _ = big.induced_subgraph(vs)
    P, g, j = dg.pushout(GraphMap(A, big, tuple(vs)), dg.constant_map(A, dg.point(), 0))
    target = dg.bidirected_cycle(4, 1)
    assert P.n == target.n
    # same distance profile as C(4,1)
    assert sorted(sorted(r for r in row if r is not INF) for row in P.dist) == \
        sorted(sorted(r for r in row if r is not INF) for row in target.dist)


def test_pushout_rejects_non_induced():
    X = dg.directed_cycle(3)
    A = DiGraph.from_edges(2, [])
    with pytest.raises(ValueError):
        dg.pushout(GraphMap(A, X, (0, 1)), dg.identity_map(A))


def test_homotopy_gaps():
    S0 = dg.sphere(0)
    assert dg.r_homotopy_gap(dg.identity_map(S0), GraphMap(S0, S0, (1, 0))) is INF
    X = dg.directed_cycle(3)
    C, _ = dg.cone(X)
    fold = dg.cone_fold_map(X)
    assert dg.r_homotopy_gap(dg.identity_map(C), fold) == 1
    assert dg.r_homotopy_gap(dg.constant_map(C, C, 2 * X.n), fold) == 1
    f = dg.identity_map(X)
    assert dg.r_homotopy_gap(f, f) == 0


def test_validate_map():
    Z3 = dg.directed_cycle(3)
    assert dg.validate_map(dg.identity_map(Z3)) == (True, None)
    assert dg.validate_map(dg.constant_map(Z3, Z3, 1))[0]
    ok, edge = dg.validate_map(GraphMap(Z3, Z3, (0, 2, 1)))
    assert not ok and edge in Z3.edges


def test_map_rejects_bad_images():
    with pytest.raises(ValueError):
        GraphMap(dg.point(), dg.point(), (1,))
    with pytest.raises(ValueError):
        GraphMap(dg.directed_cycle(2), dg.point(), (0,))


def test_parallel_edges_rejected():
    with pytest.raises(ValueError):
        DiGraph.from_edges(2, [(0, 1), (0, 1)])


def test_loops_are_ignored_by_the_metric():
    G = DiGraph.from_edges(2, [(0, 0), (0, 1)])
    assert tuple(G.proper_edges) == ((0, 1),)
    assert G.dist == DiGraph.from_edges(2, [(0, 1)]).dist


def test_graph_file_formats(tmp_path):
    G = dg.bidirected_cycle(2, 1)
    p = tmp_path / "g.json"
    p.write_text(json.dumps(dg.graph_to_json(G)))
    assert dg.load_graph(str(p)).edges == G.edges
    t = tmp_path / "g.txt"
    t.write_text("digraph 3\n0 1\n1 2  # comment\n0 2\n")
    assert dg.load_graph(str(t)).edges == G.edges
    with pytest.raises(ValueError):
        dg.parse_graph_text("graph 3\n")
    with pytest.raises(ValueError):
        dg.parse_graph_json('{"vertices": 2}')


def test_collapse_and_contraction_are_graph_maps():
    for m, n in ((3, 1), (3, 2), (2, 2), (4, 3), (5, 2)):
        assert dg.validate_map(dg.bicycle_collapse(m, n))[0]
    assert dg.validate_map(dg.cycle_contraction(4, 3))[0]
