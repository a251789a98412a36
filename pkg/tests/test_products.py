import pytest
from hypothesis import given, settings, strategies as st

from mpss import digraph as dg
from mpss.chains import enumerate_trails, magnitude_homology, trail_length
from mpss.digraph import DiGraph
from mpss.homalg import QQ, ZZ, HomologyGroup
from mpss.products import (aw_chain, aw_map, check_aw_after_ez, check_ez_chain_map, ez_map,
                           ez_pairing_on_page, kunneth_check, lattice_paths)


@st.composite
def small_digraphs(draw, max_n=3):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return DiGraph.from_edges(n, edges)


# -- lattice paths and signs ------------------------------------------------------------------


def test_lattice_path_counts():
    from math import comb
    for k in range(5):
        for k2 in range(5):
            assert sum(1 for _ in lattice_paths(k, k2)) == comb(k + k2, k)


def test_sign_readings_agree():
    for k in range(9):
        for k2 in range(9 - k):
            for path in lattice_paths(k, k2):
                assert path.points_below() == path.points_below_by_pairs()


def test_sign_of_two_step_paths():
    signs = {tuple(p): p.sign() for p in lattice_paths(1, 1)}
    assert signs[((0, 0), (1, 0), (1, 1))] == 1
    assert signs[((0, 0), (0, 1), (1, 1))] == -1


# -- shuffle and front/back maps --------------------------------------------------------------------


G2 = DiGraph.from_edges(2, [(0, 1)], name="I1")


def idx(g, h, m=2):
    return g * m + h


def test_shuffle_examples():
    assert ez_map(G2, G2, (0,), (0, 1)) == {(idx(0, 0), idx(0, 1)): 1}
    assert ez_map(G2, G2, (0,), (0,)) == {(idx(0, 0),): 1}
    assert ez_map(G2, G2, (0, 1), (0, 1)) == {
        (idx(0, 0), idx(1, 0), idx(1, 1)): 1,
        (idx(0, 0), idx(0, 1), idx(1, 1)): -1,
    }


def test_front_back_examples():
    assert aw_map(G2, G2, (idx(0, 0),)) == {((0,), (0,)): 1}
    P, _, _ = dg.box_product(G2, G2)
    # a diagonal step of the product metric space
    assert aw_map(G2, G2, (idx(0, 0), idx(1, 1))) == {((0,), (0, 1)): 1, ((0, 1), (1,)): 1}
    assert aw_chain(G2, G2, ez_map(G2, G2, (0, 1), (0, 1))) == {((0, 1), (0, 1)): 1}


def test_shuffle_preserves_length():
    G, H = dg.directed_cycle(3), dg.bidirected_cycle(2, 1)
    P, _, _ = dg.box_product(G, H)
    for x in enumerate_trails(G, None, 3)[(2, 3)]:
        for y in enumerate_trails(H, None, 2)[(1, 1)]:
            for t in ez_map(G, H, x, y):
                assert trail_length(P, t) == 4


@given(small_digraphs(), small_digraphs())
@settings(max_examples=25, deadline=None)
def test_shuffle_is_a_chain_map(G, H):
    assert check_ez_chain_map(G, H, 3)
    assert check_ez_chain_map(G, H, 3, magnitude=True)


@given(small_digraphs(max_n=4), small_digraphs(max_n=4))
@settings(max_examples=20, deadline=None)
def test_front_back_after_shuffle_is_identity(G, H):
    assert check_aw_after_ez(G, H, 4)


def test_front_back_does_not_increase_length():
    G, H = dg.directed_cycle(3), dg.directed_cycle(3)
    P, _, _ = dg.box_product(G, H)
    for t in [t for v in enumerate_trails(P, None, 3).values() for t in v]:
        for (a, b) in aw_map(G, H, t):
            assert trail_length(G, a) + trail_length(H, b) <= trail_length(P, t)


# -- Künneth -------------------------------------------------------------------------------------------


def test_unit_factor():
    H = dg.bidirected_cycle(2, 1)
    for level in ("MH", "PH_ordinary", "PH_bigraded"):
        assert kunneth_check(dg.point(), H, level, QQ, 4).ok


def test_torus_like_product():
    Z3 = dg.directed_cycle(3)
    P, _, _ = dg.box_product(Z3, Z3)
    assert magnitude_homology(P, 2, QQ)[(2, 2)] == HomologyGroup(9)
    rep = kunneth_check(Z3, Z3, "PH_ordinary", QQ, 4)
    assert rep.ok
    assert [r.product for r in rep.rows if (r.p, r.q) == (2, 0)] == [HomologyGroup(1)]


def test_integer_kunneth_small():
    rep = kunneth_check(dg.directed_cycle(3), dg.bidirected_cycle(2, 1), "MH", ZZ, 4)
    assert rep.ok and rep.rows


def test_page_level_needs_r():
    with pytest.raises(ValueError):
        kunneth_check(dg.point(), dg.point(), "page", QQ, 2)
    with pytest.raises(ValueError):
        kunneth_check(dg.point(), dg.point(), "bogus", QQ, 2)


@pytest.mark.parametrize("r", [1, 2])
def test_shuffle_pairing_is_iso(r):
    out = ez_pairing_on_page(dg.directed_cycle(3), dg.sphere(1), r, QQ, 4)
    assert all(e.map.is_isomorphism for e in out.values() if e.exact)
