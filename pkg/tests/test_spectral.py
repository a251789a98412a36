import pytest
from hypothesis import given, settings, strategies as st

from mpss import digraph as dg
from mpss.chains import reachability_complex
from mpss.digraph import DiGraph, GraphMap
from mpss.homalg import QQ, ZZ, HomologyGroup, PrimeField
from mpss.spectral import (SpectralSequence, bigraded_path_homology, compute_page,
                           convergence_report, d1_on_class, induced_page_map, octant,
                           r_homotopy_page_agreement, reachability_homology, relative_page)

import oracle


@st.composite
def small_digraphs(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    pairs = [(u, v) for u in range(n) for v in range(n) if u != v]
    edges = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return DiGraph.from_edges(n, edges)


def ss_of(G, L, R=QQ):
    return SpectralSequence(reachability_complex(G, L), R)


def nonzero(page):
    return {pq: e.rank for pq, e in page.entries.items() if e.rank}


# -- pages against the brute-force oracle ---------------------------------------------------


@given(small_digraphs(), st.integers(2, 5))
@settings(max_examples=40, deadline=None)
def test_both_routes_match_oracle(G, L):
    ss = ss_of(G, L)
    ref = oracle.NaivePages(G.n, G.edges, L)
    for r in range(0, L + 2):
        ranks = ss.rank_table(r)
        for p, q in octant(L):
            want = ref.dim(r, p, q)
            assert ranks[(p, q)] == want
            assert ss.group(r, p, q).free_rank == want


@given(small_digraphs())
@settings(max_examples=25, deadline=None)
def test_integer_pages_agree_with_rationals_when_free(G):
    sz, sq = ss_of(G, 3, ZZ), ss_of(G, 3, QQ)
    for r in range(0, 4):
        for p, q in octant(3):
            g = sz.group(r, p, q)
            if g.is_free():
                assert g.free_rank == sq.group(r, p, q).free_rank


@given(small_digraphs(), st.integers(0, 4))
@settings(max_examples=25, deadline=None)
def test_dr_squares_to_zero(G, r):
    ss = ss_of(G, 4)
    for p, q in octant(4):
        tp, tq = p - r, q + r - 1
        if tp < 0 or tq > 0 or tp + tq < 0:
            continue
        a, b = ss.differential(r, p, q), ss.differential(r, tp, tq)
        assert (b @ a).is_zero()


# -- golden pages ------------------------------------------------------------------------------


def test_page_zero_is_magnitude_chains():
    G = dg.directed_cycle(3)
    page = compute_page(G, 0, 4)
    T = reachability_complex(G, 4)
    for (p, q), e in page.entries.items():
        assert e.rank == sum(1 for t in T.basis.get(p + q, []) if T.level(t) == p)


def test_cycle3_page_one():
    assert nonzero(compute_page(dg.directed_cycle(3), 1, 7)) == {
        (0, 0): 3, (1, 0): 3, (3, -1): 3, (4, -1): 3, (6, -2): 3, (7, -2): 3}


@pytest.mark.parametrize("m", [3, 4])
def test_cycle_page_m_is_trivial(m):
    ss = ss_of(dg.directed_cycle(m), 2 * m + 2)
    ranks = ss.rank_table(m)
    assert {pq: v for pq, v in ranks.items() if v and ss.is_exact(m, *pq)} == {(0, 0): 1}


def test_page_two_examples():
    p2 = compute_page(dg.sphere(2), 2, 6)
    assert {pq: v for pq, v in nonzero(p2).items() if p2.exact(*pq)} == {(0, 0): 1, (2, 0): 1}
    p2 = compute_page(dg.bidirected_cycle(4, 3), 2, 8)
    assert {pq: v for pq, v in nonzero(p2).items() if p2.exact(*pq)} == {(0, 0): 1, (1, 0): 1, (4, -2): 1}


def test_bigraded_path_homology():
    ph = bigraded_path_homology(dg.directed_cycle(5), 12)
    cells = {(2 * i, 5 * i) for i in range(3)} | {(2 * i + 1, 5 * i + 1) for i in range(3)}
    got = {kl for kl, v in ph.nonzero().items() if v and ph.exact[kl]}
    assert got == {c for c in cells if ph.exact.get(c)}
    assert (3, 6) in got
    S2 = bigraded_path_homology(dg.sphere(2), 6)
    assert {kl for kl, v in S2.nonzero().items() if v} >= {(0, 0), (2, 2)}


def test_exactness_flags():
    ss = ss_of(dg.directed_cycle(3), 5)
    assert ss.is_exact(2, 4, -1) and not ss.is_exact(2, 5, -1)
    assert ss.degree_complete(1) and not ss.degree_complete(2)


def test_integer_pages_are_groups():
    ss = ss_of(dg.directed_cycle(3), 5, ZZ)
    assert ss.group(2, 3, -1) == HomologyGroup(1)
    assert ss.group(1, 3, -1) == HomologyGroup(3)


def test_prime_field_pages():
    ss = ss_of(dg.bidirected_cycle(3, 2), 6, PrimeField(3))
    assert ss.rank_table(2) == ss_of(dg.bidirected_cycle(3, 2), 6).rank_table(2)


# -- first differential ---------------------------------------------------------------------------


def test_first_differential_on_small_bicycle():
    G = dg.bidirected_cycle(2, 1)
    ss = ss_of(G, 2, ZZ)
    D = ss.differential(1, 1, 0)
    K = [ss.class_of(1, 0, 0, {(v,): 1}) for v in range(3)]
    assert K == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert D.dense() == [[-1, -1, 0], [1, 0, -1], [0, 1, 1]]
    img, c = d1_on_class(G, {(0, 1, 2): 1}, 2, 0, ZZ, ss=ss)
    assert img == {(1, 2): 1, (0, 2): -1, (0, 1): 1}
    assert c == [1, -1, 1]


def test_d1_recipe_rejects_bad_input():
    G = dg.bidirected_cycle(2, 1)
    with pytest.raises(ValueError):
        d1_on_class(G, {(0, 1): 1}, 2, 0)
    with pytest.raises(ValueError):
        d1_on_class(dg.directed_cycle(3), {(0, 1, 2): 1}, 2, 0)


def test_class_of_rejects_foreign_trail():
    ss = ss_of(dg.directed_cycle(3), 3)
    with pytest.raises(ValueError):
        ss.class_of(1, 1, 0, {(0, 2): 1})


# -- induced maps ------------------------------------------------------------------------------------


def test_identity_induces_identity():
    G = dg.bidirected_cycle(3, 2)
    pm = induced_page_map(dg.identity_map(G), 2, 6)
    for pq, m in pm.maps.items():
        n = m.matrix.nrows
        assert m.matrix.dense() == [[int(i == j) for j in range(n)] for i in range(n)]


def test_collapse_iso_on_page_two():
    assert induced_page_map(dg.bicycle_collapse(4, 3), 2, 8).iso_on_exact()


def test_contraction_distinguishes_pages():
    pm = induced_page_map(dg.cycle_contraction(4, 3), 2, 6)
    assert (pm.is_iso(0, 0), pm.is_iso(1, 0), pm.is_iso(3, -1)) == (True, True, False)


def test_induced_map_rejects_non_maps():
    Z3 = dg.directed_cycle(3)
    with pytest.raises(ValueError):
        induced_page_map(GraphMap(Z3, Z3, (0, 2, 1)), 1, 3)


def test_relative_pages_match_quotient():
    big = dg.bidirected_cycle(4, 3)
    A = dg.bicycle_short_path(4, 3)
    rel = relative_page(big, A, 1, 6)
    small = relative_page(dg.bidirected_cycle(4, 1), [0], 1, 6)
    assert nonzero(rel) == nonzero(small)


# -- homotopy ---------------------------------------------------------------------------------------


def test_homotopic_maps_agree_on_page_two():
    X = dg.directed_cycle(3)
    C, _ = dg.cone(X)
    ag = r_homotopy_page_agreement(dg.identity_map(C), dg.cone_fold_map(X), 1, 2, 5)
    assert ag.gap == 1 and ag.all_agree
    f = dg.identity_map(X)
    assert r_homotopy_page_agreement(f, f, 0, 0, 4).all_agree


def test_adjacent_constants_differ_on_page_one():
    Z3 = dg.directed_cycle(3)
    a, b = dg.constant_map(Z3, Z3, 0), dg.constant_map(Z3, Z3, 1)
    assert not r_homotopy_page_agreement(a, b, 1, 1, 4).all_agree
    assert r_homotopy_page_agreement(a, b, 1, 2, 4).all_agree


def test_homotopy_claim_is_checked():
    S0 = dg.sphere(0)
    with pytest.raises(ValueError):
        r_homotopy_page_agreement(dg.identity_map(S0), GraphMap(S0, S0, (1, 0)), 3, 4, 3)


# -- reachability homology and convergence -------------------------------------------------------


@pytest.mark.parametrize("G", [dg.point(), dg.directed_cycle(3), dg.directed_cycle(4),
                               dg.bidirected_cycle(3, 2)], ids=lambda G: G.name)
def test_reachability_homology_trivial(G):
    rh = reachability_homology(G, 4)
    assert {n: g for n, g in rh.items() if not g.is_zero()} == {0: HomologyGroup(1)}


def test_reachability_homology_counts_components():
    assert reachability_homology(dg.sphere(0), 2)[0] == HomologyGroup(2)


def test_convergence():
    rep = convergence_report(dg.directed_cycle(3), 7)
    assert rep.agree
    assert all(v == 0 for pq, v in rep.infinity_ranks.items() if pq != (0, 0) and sum(pq) <= 1)
    assert max(rep.stable_from[pq] for pq in [(1, 0), (3, -1), (4, -1)]) == 3
    assert convergence_report(dg.point(), 2).stable_from[(0, 0)] == 0


@given(small_digraphs())
@settings(max_examples=20, deadline=None)
def test_infinity_page_matches_reachability_homology(G):
    assert convergence_report(G, 6).agree
