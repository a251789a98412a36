"""Verification suites over the standard graph families.

Each suite returns a list of :class:`Check` records; the command line runs
them with ``mpss verify <suite>`` and the acceptance tests assert on them.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from . import digraph as dg
from .chains import (_mc_faces, _op_faces, _walk, cycle_to_partition, degree_truncated_rc,
                     enumerate_trails, magnitude_homology, op_complex, op_generator,
                     reachability_complex, relative_complex)
from .digraph import GraphMap, box_product, cone, directed_cycle, bidirected_cycle, point, sphere
from .homalg import (ExactMatrix, QQ, ZZ, Ring, class_generates, in_boundary_span,
                     matrix_rank)
from .products import (check_aw_after_ez, check_ez_chain_map, ez_pairing_on_page, kunneth_check)
from .spectral import (SpectralSequence, convergence_report, d1_on_class, induced_map_between,
                       octant, r_homotopy_page_agreement, reachability_homology)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.ok else 'FAIL'}] {self.name}" + (f": {self.detail}" if self.detail else "")


def _mismatch(got: dict, want: dict) -> str:
    bad = {k: (got.get(k, 0), want.get(k, 0)) for k in set(got) | set(want)
           if got.get(k, 0) != want.get(k, 0)}
    return "" if not bad else "mismatch (got, want): " + ", ".join(
        f"{k}: {v}" for k, v in sorted(bad.items())[:6])


def _ss(G, L, R=QQ) -> SpectralSequence:
    return SpectralSequence(reachability_complex(G, L), R)


def _nonzero_ranks(ss: SpectralSequence, r: int, max_p: int | None = None) -> dict:
    """Nonzero ranks of exact entries of page ``r`` with ``p <= max_p``."""
    out = {}
    for (p, q), v in ss.rank_table(r).items():
        if v and ss.is_exact(r, p, q) and (max_p is None or p <= max_p):
            out[(p, q)] = v
    return out


def _exact_entries(ss, r, max_p=None):
    return [(p, q) for p, q in octant(ss.L) if ss.is_exact(r, p, q) and (max_p is None or p <= max_p)]


# -- directed cycles ------------------------------------------------------------------


def cycle_cells(m: int, l_max: int) -> set:
    """``(k, l)`` cells ``(2i, mi)`` and ``(2i+1, mi+1)`` with ``l <= l_max``."""
    out = set()
    for i in range(l_max + 1):
        for k, l in ((2 * i, m * i), (2 * i + 1, m * i + 1)):
            if l <= l_max:
                out.add((k, l))
    return out


def check_cycle_mh(m: int, R: Ring) -> Check:
    L = 2 * m + 1
    mh = magnitude_homology(directed_cycle(m), L, R)
    want = {kl: m for kl in cycle_cells(m, L)}
    got = {kl: g.free_rank for kl, g in mh.items() if g.free_rank}
    torsion = [kl for kl, g in mh.items() if g.torsion]
    ok = got == want and not torsion
    return Check(f"MH(Z{m}) over {R.name}: rank {m} on the (2i,mi),(2i+1,mi+1) cells, l<={L}", ok,
                 _mismatch(got, want) + (f" torsion at {torsion}" if torsion else ""))


def check_cycle_ph(m: int) -> Check:
    window = 2 * m + 1
    ss = _ss(directed_cycle(m), window + 1)
    got = {(p + q, p): v for (p, q), v in _nonzero_ranks(ss, 2, window).items()}
    if m >= 3:
        want = {kl: 1 for kl in cycle_cells(m, window)}
    else:
        want = {(0, 0): 1}
    label = "rank 1 on the cycle cells" if m >= 3 else "trivial (only R at (0,0))"
    return Check(f"PH(Z{m}) {label}, l<={window}", got == want, _mismatch(got, want))


def check_cycle_pages(m: int) -> Check:
    """``E^2 = ... = E^{m-1}`` and ``E^m`` is ``R`` at ``(0,0)``, on exact entries."""
    L = 2 * m + 2
    ss = _ss(directed_cycle(m), L)
    problems = []
    e2 = ss.rank_table(2)
    for r in range(3, m):
        er = ss.rank_table(r)
        for pq in _exact_entries(ss, r):
            if er[pq] != e2[pq]:
                problems.append(f"E^{r}{pq}={er[pq]} vs E^2={e2[pq]}")
    em = _nonzero_ranks(ss, m)
    if em != {(0, 0): 1}:
        problems.append(f"E^{m} nonzero at {em}")
    chain = f"E^2=...=E^{m - 1}, " if m >= 4 else ""
    return Check(f"pages of Z{m}: {chain}E^{m} trivial", not problems, "; ".join(problems[:4]))


def check_rh_trivial(G, k_max: int = 4) -> Check:
    rh = reachability_homology(G, k_max, QQ)
    got = {n: g.free_rank for n, g in rh.items() if g.free_rank}
    return Check(f"RH({G.name}) trivial in degrees <= {k_max}", got == {0: 1}, str(got))


def _cols_mul(A: ExactMatrix, B: ExactMatrix) -> list:
    return (A @ B).dense()


def _coords(ss, r, p, q, chains):
    return ExactMatrix(len(ss.entry(r, p, q).sq), len(chains), ss.R,
                       [{i: v for i, v in enumerate(ss.class_of(r, p, q, c)) if v != 0}
                        for c in chains])


def check_d1_golden_cycle(m: int, i_max: int, R: Ring = ZZ) -> Check:
    """``d^1(λ^i_e) = κ^i_y - κ^i_x`` and ``d^1(κ^i_x) = 0`` on ``Z_m``."""
    L = m * i_max + 1
    G = directed_cycle(m)
    ss = _ss(G, L, R)
    problems = []
    edges = [(x, (x + 1) % m) for x in range(m)]
    inc = ExactMatrix(m, m, R, [{x: -1, y: 1} for x, y in edges])
    for i in range(i_max + 1):
        kappa = [{tuple([x, (x + 1) % m] * i + [x]): 1} for x in range(m)]
        lam = [{tuple([x, y] * (i + 1)): 1} for x, y in edges]
        p, q = m * i, 2 * i - m * i
        K = _coords(ss, 1, p, q, kappa)
        Lm = _coords(ss, 1, p + 1, q, lam)
        if matrix_rank(K, QQ) != m or matrix_rank(Lm, QQ) != m or K.nrows != m or Lm.nrows != m:
            problems.append(f"i={i}: κ/λ classes are not bases")
            continue
        D = ss.differential(1, p + 1, q)
        if (D @ Lm).dense() != (K @ inc).dense():
            problems.append(f"i={i}: d1(λ) != κ_y - κ_x")
        for e, ch in zip(edges, lam):
            _, c = d1_on_class(G, ch, p + 1, q, R, ss=ss)
            want = [row[edges.index(e)] for row in (K @ inc).dense()]
            if list(c) != want:
                problems.append(f"i={i}: recipe disagrees on {e}")
        if p >= 1:
            Dk = ss.differential(1, p, q)
            if not (Dk @ K).is_zero():
                problems.append(f"i={i}: d1(κ) != 0")
    return Check(f"d1 on κ/λ classes of Z{m} over {R.name}, i<={i_max}", not problems, "; ".join(problems))


def check_d1_golden_bicycle(m: int, R: Ring = ZZ) -> Check:
    """On ``C(m,1)``: ``d^1(λ_e) = κ_b - κ_a``, ``d^1(κ) = 0`` and ``d^1(μ)``."""
    G = bidirected_cycle(m, 1)
    ss = _ss(G, m, R)
    problems = []
    verts = list(range(m + 1))
    edges = sorted(G.proper_edges)
    K = _coords(ss, 1, 0, 0, [{(v,): 1} for v in verts])
    Lm = _coords(ss, 1, 1, 0, [{e: 1} for e in edges])
    inc = ExactMatrix(len(verts), len(edges), R, [{a: -1, b: 1} for a, b in edges])
    if (ss.differential(1, 1, 0) @ Lm).dense() != (K @ inc).dense():
        problems.append("d1(λ) != κ_b - κ_a")
    mu = {(0, 1, m): 1}
    img, c = d1_on_class(G, mu, m, 2 - m, R, ss=ss)
    if m == 2:
        want = {(0, 1): 1, (1, 2): 1, (0, 2): -1}
        if img != want:
            problems.append(f"d1(μ) chain {img}")
        wc = [row[0] for row in (Lm @ ExactMatrix(len(edges), 1, R, [
            {edges.index(e): v for e, v in want.items()}])).dense()]
        if list(c) != wc:
            problems.append("d1(μ) class mismatch")
    else:
        if any(c):
            problems.append("d1(μ) != 0")
        if ss.group(1, m, 2 - m).free_rank != 1 or not any(ss.class_of(1, m, 2 - m, mu)):
            problems.append("μ does not span MH_{2,m}")
    return Check(f"d1 on κ/λ/μ classes of C{m},1 over {R.name}", not problems, "; ".join(problems))


# -- ordered partitions ----------------------------------------------------------------


def check_op_oracle(m: int, R: Ring = ZZ) -> Check:
    """Homology of ``OP(l, m)`` for ``l <= 3m + 1`` with generators."""
    problems = []
    for l in range(0, 3 * m + 2):
        C = op_complex(l, m)
        top = max(C.degrees, default=-1)
        for k in range(0, top + 1):
            h = C.homology(k, R)
            i, rem = divmod(l, m)
            expect = (rem == 0 and k == 2 * i) or (rem == 1 and k == 2 * i + 1)
            if h.torsion or h.free_rank != (1 if expect else 0):
                problems.append(f"H_{k}(OP({l},{m}))={h}")
                continue
            if expect:
                d_up = C.boundary_matrix(k + 1, R)
                odd = rem == 1
                g = op_generator(i, m, odd)
                z = {C.index[k][g]: 1}
                if not class_generates(d_up, z, R):
                    problems.append(f"{g} does not generate H_{k}(OP({l},{m}))")
                if not odd and i > 0:
                    g2 = (m - 1, 1) * i
                    diff = {C.index[k][g]: 1}
                    j = C.index[k][g2]
                    diff[j] = diff.get(j, 0) - 1
                    if not in_boundary_span(d_up, diff, R):
                        problems.append(f"[{g}] != [{g2}]")
    return Check(f"OP(l,{m}) homology and generators, l<={3 * m + 1}, over {R.name}",
                 not problems, "; ".join(problems[:4]))


def check_mc_is_op(m: int, l_max: int) -> Check:
    """``MC(Z_m, l)`` splits by start vertex into copies of ``OP(l, m)``, term by term."""
    G = directed_cycle(m)
    d = G.dist
    opf = _op_faces(m)
    counts: dict = {}
    problems = []
    for t, L in _walk(G, l_max, l_max):
        a = cycle_to_partition(m, t)
        key = (t[0], L, len(a))
        counts[key] = counts.get(key, 0) + 1
        mc = {}
        for f, s in _mc_faces(d, t):
            mc[cycle_to_partition(m, f)] = s
        if mc != dict(opf(a)):
            problems.append(f"{t}")
            if len(problems) > 3:
                break
    for l in range(l_max + 1):
        C = op_complex(l, m)
        for k in range(0, l + 1):
            for x in range(m):
                if counts.get((x, l, k), 0) != C.dim(k):
                    problems.append(f"dim MC_{k},{l}({x}) != dim OP_{k}({l},{m})")
    return Check(f"MC(Z{m}, l) = {m} copies of OP(l,{m}) with equal differentials, l<={l_max}",
                 not problems, "; ".join(problems[:4]))


def suite_cycles(ms=range(2, 7)) -> list:
    out = []
    for m in ms:
        out.append(check_cycle_mh(m, QQ))
        out.append(check_cycle_mh(m, ZZ))
        out.append(check_cycle_ph(m))
        out.append(check_cycle_pages(m))
    out.append(check_rh_trivial(directed_cycle(3)))
    out.append(check_rh_trivial(directed_cycle(4)))
    out.append(check_d1_golden_cycle(4, 1, ZZ))
    out.append(check_d1_golden_cycle(4, 2, QQ))
    return out


def suite_oracle(ms=(3, 4, 5)) -> list:
    out = []
    for m in ms:
        out.append(check_op_oracle(m, ZZ))
        out.append(check_mc_is_op(m, 3 * m + 1))
    return out


# -- bi-directed cycles --------------------------------------------------------------------


BICYCLES = ((3, 1), (3, 2), (2, 2), (4, 3), (5, 2))


def _trivial(ranks: dict) -> bool:
    return ranks == {(0, 0): 1}


def check_bicycle(m: int, n: int) -> list:
    big = max(m, n)
    window = 2 * big + 1
    G = bidirected_cycle(m, n)
    ss = _ss(G, window + 1)
    got = _nonzero_ranks(ss, 2, window)
    want = {(0, 0): 1, (1, 0): 1, (big, 2 - big): 1} if big >= 3 else {(0, 0): 1}
    out = [Check(f"PH(C{m},{n}) concentrated at (0,0),(1,0),({big},{2 - big})"
                 if big >= 3 else f"PH(C{m},{n}) trivial", got == want, _mismatch(got, want))]
    flags = {r: _trivial(_nonzero_ranks(ss, r)) for r in range(1, big + 2)}
    first = min((r for r, t in flags.items() if t), default=None)
    later = all(flags[r] for r in flags if first is not None and r >= first)
    out.append(Check(f"first trivial page of C{m},{n} is {big}", first == big and later, f"first={first}"))
    f = dg.bicycle_collapse(m, n)
    ss_t = _ss(f.target, window + 1)
    pm = induced_map_between(ss, ss_t, f, 2)
    bad = [pq for pq, mp in pm.maps.items() if pm.exact[pq] and not mp.is_isomorphism]
    out.append(Check(f"collapse C{m},{n} -> C{big},1 is an isomorphism on page 2", not bad, f"fails at {bad[:4]}"
                     if bad else ""))
    return out


def suite_bicycles() -> list:
    out = []
    for m, n in BICYCLES:
        out += check_bicycle(m, n)
        out.append(check_rh_trivial(bidirected_cycle(m, n)))
    out.append(check_d1_golden_bicycle(4, ZZ))
    out.append(check_d1_golden_bicycle(2, ZZ))
    return out


# -- spheres and suspension -------------------------------------------------------------------


def _ph_kl(G, window: int) -> dict:
    ss = _ss(G, window + 1)
    return {(p + q, p): v for (p, q), v in _nonzero_ranks(ss, 2, window).items()}


def check_sphere(n: int) -> Check:
    window = n + 3
    got = _ph_kl(sphere(n), window)
    want = {(0, 0): 2} if n == 0 else {(0, 0): 1, (n, n): 1}
    label = "R^2 at (0,0)" if n == 0 else f"R at (0,0) and ({n},{n})"
    return Check(f"PH(S^{n}) = {label}, l<={window}", got == want, _mismatch(got, want))


def _reduced(ph: dict) -> dict:
    out = dict(ph)
    out[(0, 0)] = out.get((0, 0), 0) - 1
    return {k: v for k, v in out.items() if v}


def check_suspension_shift(X, window: int = 5) -> Check:
    rx = _reduced(_ph_kl(X, window))
    rs = _reduced(_ph_kl(dg.suspension(X), window + 1))
    shifted = {(k + 1, l + 1): v for (k, l), v in rx.items()}
    return Check(f"reduced PH(S({X.name})) is reduced PH({X.name}) shifted by (1,1)", rs == shifted,
                 _mismatch(rs, shifted))


def suite_spheres() -> list:
    out = [check_sphere(n) for n in range(4)]
    for X in (sphere(0), sphere(1), directed_cycle(3)):
        out.append(check_suspension_shift(X))
    return out


# -- pushouts: excision and Mayer–Vietoris ----------------------------------------------------------


def pushout_corpus() -> list:
    """``(name, i: A -> X, f: A -> Y)`` with ``i`` a cofibration."""
    out = []
    for X in (sphere(0), sphere(1), directed_cycle(3)):
        C, inc = cone(X)
        out.append((f"suspension pushout of {X.name}", inc, dg.constant_map(X, point(), 0)))
    big = dg.bidirected_cycle(4, 3)
    A_vs = dg.bicycle_short_path(4, 3)
    A, _ = big.induced_subgraph(A_vs)
    out.append(("C4,3 pushout", GraphMap(A, big, tuple(A_vs)), dg.constant_map(A, point(), 0)))
    S0 = sphere(0)
    C, inc = cone(S0)
    out.append(("cone of S^0 glued to Z3", inc, GraphMap(S0, directed_cycle(3), (0, 1))))
    return out


def check_excision(name, i, f, l_max: int = 6) -> list:
    X = i.target
    verdict = dg.is_cofibration(X, i.images)
    out = [Check(f"{name}: inclusion is a cofibration", verdict.ok, verdict.violation or "")]
    P, g, j = dg.pushout(i, f)
    src = SpectralSequence(relative_complex(X, i.images, l_max), QQ)
    tgt = SpectralSequence(relative_complex(P, j.images, l_max), QQ)
    for r in (1, 2):
        pm = induced_map_between(src, tgt, g, r)
        bad = [pq for pq, mp in pm.maps.items() if pm.exact[pq] and not mp.is_isomorphism]
        out.append(Check(f"{name}: excision map iso on relative E^{r}", not bad,
                         f"fails at {bad[:4]}" if bad else ""))
    return out


def suite_excision() -> list:
    out = []
    for name, i, f in pushout_corpus():
        out += check_excision(name, i, f)
    return out


def check_mv(name, i, f, l_max: int = 6) -> list:
    A, X, Y = i.source, i.target, f.target
    P, g, j = dg.pushout(i, f)
    mA = magnitude_homology(A, l_max, QQ)
    mX = magnitude_homology(X, l_max, QQ)
    mY = magnitude_homology(Y, l_max, QQ)
    mP = magnitude_homology(P, l_max, QQ)
    keys = set(mA) | set(mX) | set(mY) | set(mP)

    def rk(mh, kl):
        return mh[kl].rank if kl in mh else 0
    bad = sorted(kl for kl in keys if rk(mA, kl) + rk(mP, kl) != rk(mX, kl) + rk(mY, kl))
    out = [Check(f"{name}: rank MH(A) + rank MH(P) = rank MH(X) + rank MH(Y)", not bad,
                 f"fails at {bad[:4]}" if bad else "")]
    sA, sX, sY, sP = (_ss(G, l_max) for G in (A, X, Y, P))
    tA, tX, tY, tP = (s.rank_table(2) for s in (sA, sX, sY, sP))
    p_top = l_max - 1
    problems = []
    for q in range(0, -p_top - 1, -1):
        total = sum((-1) ** (p_top - p)
                    * (tA.get((p, q), 0) - tX.get((p, q), 0) - tY.get((p, q), 0) + tP.get((p, q), 0))
                    for p in range(0, p_top + 1))
        dim_a = tA.get((p_top, q), 0)
        if dim_a:
            mi = induced_map_between(sA, sX, i, 2, entries=[(p_top, q)]).maps[(p_top, q)].matrix
            mf = induced_map_between(sA, sY, f, 2, entries=[(p_top, q)]).maps[(p_top, q)].matrix
            stacked = ExactMatrix(mi.nrows + mf.nrows, mi.ncols, QQ,
                                  [dict(list(a.items()) + [(mi.nrows + k, -v) for k, v in b.items()])
                                   for a, b in zip(mi.cols, mf.cols)])
            kernel = dim_a - matrix_rank(stacked, QQ)
        else:
            kernel = 0
        if total != kernel:
            problems.append(f"q={q}: sum {total} vs cut {kernel}")
    out.append(Check(f"{name}: PH Mayer–Vietoris sequence is exact in rank along each line k-l=const",
                     not problems, "; ".join(problems[:4])))
    return out


def suite_mv() -> list:
    out = []
    for name, i, f in pushout_corpus():
        out += check_mv(name, i, f)
    return out


# -- Künneth ------------------------------------------------------------------------------------


def kunneth_pairs():
    corpus = [directed_cycle(3), sphere(1), bidirected_cycle(2, 1), point()]
    for a in range(len(corpus)):
        for b in range(a, len(corpus)):
            yield corpus[a], corpus[b]


def suite_kunneth(l_max: int = 6) -> list:
    out = []
    for G, H in kunneth_pairs():
        for r in (1, 2):
            rep = kunneth_check(G, H, "page", QQ, l_max, r=r)
            out.append(Check(f"E^{r}({G.name})⊗E^{r}({H.name}) = E^{r}({G.name}□{H.name}) over Q",
                             rep.ok and bool(rep.rows),
                             "; ".join(f"({x.p},{x.q})" for x in rep.mismatches()[:4])))
        rep = kunneth_check(G, H, "MH", ZZ, l_max)
        out.append(Check(f"MH Künneth sequence for {G.name}□{H.name} over Z", rep.ok and bool(rep.rows),
                         "; ".join(f"({x.p},{x.q})" for x in rep.mismatches()[:4])))
        rep = kunneth_check(G, H, "PH_ordinary", QQ, l_max)
        out.append(Check(f"ordinary PH Künneth for {G.name}□{H.name}", rep.ok and bool(rep.rows)))
    G, H = directed_cycle(3), bidirected_cycle(2, 1)
    for r in (1, 2):
        pe = ez_pairing_on_page(G, H, r, QQ, 4)
        bad = [pq for pq, e in pe.items() if e.exact and not e.map.is_isomorphism]
        out.append(Check(f"shuffle pairing E^{r}(Z3)⊗E^{r}(C2,1) -> E^{r}(Z3□C2,1) is an isomorphism", not bad,
                         f"fails at {bad[:4]}" if bad else ""))
    return out


# -- homotopy ---------------------------------------------------------------------------------------


CONE_BASES = (point(), sphere(0), sphere(1), directed_cycle(3), bidirected_cycle(2, 1))


def suite_homotopy(l_max: int = 5) -> list:
    out = []
    for X in CONE_BASES:
        C, _ = cone(X)
        fold = dg.cone_fold_map(X)
        ident = dg.identity_map(C)
        apex = dg.constant_map(C, C, 2 * X.n)
        for name, a in (("identity", ident), ("apex constant", apex)):
            ag = r_homotopy_page_agreement(a, fold, 1, 2, l_max, QQ)
            out.append(Check(f"cone({X.name}): {name} and fold map agree on page 2", ag.all_agree,
                             f"gap {ag.gap}"))
        got = _nonzero_ranks(_ss(C, l_max), 2)
        out.append(Check(f"cone({X.name}) has the page-2 table of a point", got == {(0, 0): 1}, str(got)))
    Z3 = directed_cycle(3)
    ag = r_homotopy_page_agreement(dg.constant_map(Z3, Z3, 0), dg.constant_map(Z3, Z3, 1), 1, 2, l_max, QQ)
    out.append(Check("constant maps at adjacent vertices of Z3 agree on page 2", ag.all_agree))
    f = dg.cycle_contraction(4, 3)
    pm = induced_map_between(_ss(f.source, 6), _ss(f.target, 6), f, 2)
    verdicts = (pm.is_iso(0, 0), pm.is_iso(1, 0), pm.is_iso(3, -1))
    out.append(Check("Z4 -> Z3 contraction on page 2: iso at (0,0),(1,0), not at (3,-1)",
                     verdicts == (True, True, False), str(verdicts)))
    ordinary = all(pm.is_iso(p, 0) for p in range(6) if pm.exact[(p, 0)])
    out.append(Check("Z4 -> Z3 contraction is an isomorphism on ordinary PH", ordinary))
    return out


# -- properties over random graphs -----------------------------------------------------------------------


def random_digraph(rng: random.Random, max_vertices: int = 6, density: float = 0.45):
    n = rng.randint(1, max_vertices)
    edges = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < density]
    return dg.DiGraph.from_edges(n, edges, name=f"rand{n}")


def random_corpus(count: int = 50, seed: int = 20240611, max_vertices: int = 6):
    rng = random.Random(seed)
    return [random_digraph(rng, max_vertices) for _ in range(count)]


def check_dd_all_modes(G, l_max: int) -> bool:
    from .chains import magnitude_complex
    if not reachability_complex(G, l_max).check_dd():
        return False
    if not relative_complex(G, [0], l_max).check_dd():
        return False
    return all(magnitude_complex(G, l).check_dd() for l in range(l_max + 1))


def check_drdr(ss: SpectralSequence, r: int) -> bool:
    for p, q in octant(ss.L):
        tp, tq = p - r, q + r - 1
        if tp < 0 or tq > 0 or tp + tq < 0 or not ss.is_exact(r, p, q):
            continue
        a = ss.differential(r, p, q)
        b = ss.differential(r, tp, tq)
        if b.ncols and a.nrows and not (b @ a).is_zero():
            return False
    return True


def page_homology_rank(ss: SpectralSequence, r: int, p: int, q: int) -> int:
    """Rank of ``ker d^r / im d^r`` at ``(p, q)`` over a field."""
    dim = len(ss.entry(r, p, q).sq)
    out = ss.differential(r, p, q)
    sp, sq_ = p + r, q - r + 1
    if sp <= ss.L and sq_ <= 0 and sp + sq_ >= 0:
        inc = ss.differential(r, sp, sq_)
        rin = matrix_rank(inc, ss.R) if inc.ncols and inc.nrows else 0
    else:
        rin = 0
    rout = matrix_rank(out, ss.R) if out.ncols and out.nrows else 0
    return dim - rout - rin


def check_page_recurrence(ss: SpectralSequence, r: int) -> bool:
    for p, q in octant(ss.L):
        if p + 2 * r - 1 > ss.L:
            continue
        if page_homology_rank(ss, r, p, q) != ss.group(r + 1, p, q).free_rank:
            return False
    return True


def check_octant(G, l_max: int) -> bool:
    K = G.diameter()
    for (k, l), ts in enumerate_trails(G, None, l_max).items():
        if not ts:
            continue
        if k > l or k < 0 or (k == 0 and l > 0):
            return False
        if K and k * K < l:
            return False
    return True


def suite_properties(count: int = 50, seed: int = 20240611) -> list:
    graphs = random_corpus(count, seed)
    out = []
    out.append(Check(f"d∘d = 0 in full, magnitude and relative modes on {count} random graphs",
                     all(check_dd_all_modes(G, 4) for G in graphs)))
    out.append(Check("d∘d = 0 on ordered-partition complexes",
                     all(op_complex(l, m).check_dd() for m in (2, 3, 4, 5) for l in range(9))))
    ok = True
    for G in graphs:
        ss = _ss(G, 4)
        if not all(check_drdr(ss, r) for r in range(0, 6)):
            ok = False
            break
    out.append(Check(f"d^r∘d^r = 0 for r<=5 on {count} random graphs", ok))
    out.append(Check(f"octant and slope vanishing on {count} random graphs",
                     all(check_octant(G, 5) for G in graphs)))
    diag_ok = True
    for G in graphs[:25]:
        mh = magnitude_homology(G, 4, ZZ)
        if any(mh[(k, k)].torsion for k in range(5)):
            diag_ok = False
    out.append(Check("diagonal MH is torsion-free over Z on random graphs", diag_ok))
    pairs = list(zip(graphs[:8], graphs[8:16]))
    out.append(Check("shuffle map is a chain map on random pairs",
                     all(check_ez_chain_map(a, b, 3) and check_ez_chain_map(a, b, 3, True) for a, b in pairs)))
    out.append(Check("front/back map after shuffle map is the identity on random pairs",
                     all(check_aw_after_ez(a, b, 3) for a, b in pairs)))
    rec = True
    for G in graphs[:20]:
        ss = _ss(G, 5)
        if not all(check_page_recurrence(ss, r) for r in range(0, 3)):
            rec = False
            break
    out.append(Check("H(E^r, d^r) = E^(r+1) on random graphs", rec))
    for G in (directed_cycle(3), directed_cycle(4), bidirected_cycle(3, 2), bidirected_cycle(4, 3)):
        out.append(check_rh_trivial(G))
    conv = [convergence_report(G, 6, QQ).agree for G in graphs[:20]]
    conv += [convergence_report(G, 7, QQ).agree for G in (directed_cycle(3), bidirected_cycle(3, 2),
                                                           sphere(1))]
    out.append(Check("E^inf totals agree with reachability homology", all(conv)))
    return out


SUITES = {
    "cycles": suite_cycles,
    "oracle": suite_oracle,
    "bicycles": suite_bicycles,
    "spheres": suite_spheres,
    "kunneth": suite_kunneth,
    "excision": suite_excision,
    "mv": suite_mv,
    "homotopy": suite_homotopy,
    "properties": suite_properties,
}
