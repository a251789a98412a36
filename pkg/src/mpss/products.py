"""Box products: shuffle (Eilenberg–Zilber) and front/back (Alexander–Whitney) maps,
tensor pages and Künneth comparisons.

A chain on ``G□H`` is a dict ``{trail: coefficient}`` whose trails use the
product indexing ``(g, h) -> g * |V(H)| + h``.  A tensor chain is a dict
``{(trail_G, trail_H): coefficient}``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterator

from .chains import magnitude_homology, reachability_complex
from .digraph import DiGraph, box_product
from .homalg import (ExactMatrix, HomologyGroup, InducedMap, QQ, Ring, direct_sum, group_tensor,
                     group_tor, quotient_map_is_iso)
from .spectral import SpectralSequence, octant


# -- lattice paths ------------------------------------------------------------------


class LatticePath(tuple):
    """Monotone staircase ``(0,0) -> (k,k')`` as its sequence of lattice points."""

    @property
    def k(self) -> int:
        return self[-1][0]

    @property
    def k2(self) -> int:
        return self[-1][1]

    def points_below(self) -> int:
        """Lattice points ``(i, j)`` with ``j >= 0`` strictly below the path."""
        first_height = {}
        for i, j in self:
            first_height.setdefault(i, j)
        return sum(first_height[i] for i in first_height)

    def points_below_by_pairs(self) -> int:
        """Same count, read as: pairs ``(i, j)`` such that ``i = i_s`` forces ``j < j_s``."""
        count = 0
        for i in range(self.k + 1):
            for j in range(self.k2 + 1):
                if all(j < js for (is_, js) in self if is_ == i):
                    count += 1
        return count

    def sign(self) -> int:
        return -1 if self.points_below() % 2 else 1


def lattice_paths(k: int, k2: int) -> Iterator[LatticePath]:
    """All staircase paths, in lexicographic order of their step words (``0`` = horizontal)."""
    total = k + k2
    for ups in itertools.combinations(range(total), k2):
        ups = set(ups)
        i = j = 0
        pts = [(0, 0)]
        for s in range(total):
            if s in ups:
                j += 1
            else:
                i += 1
            pts.append((i, j))
        yield LatticePath(pts)


# -- chain-level maps -------------------------------------------------------------------


def ez_map(G: DiGraph, H: DiGraph, xi: tuple, eta: tuple) -> dict:
    """Shuffle map ``xi ⊗ eta -> sum over paths of ± ((g_i, h_j))``."""
    m = H.n
    out: dict = {}
    for path in lattice_paths(len(xi) - 1, len(eta) - 1):
        t = tuple(xi[i] * m + eta[j] for i, j in path)
        out[t] = out.get(t, 0) + path.sign()
    return {t: c for t, c in out.items() if c}


def _nondegenerate(t: tuple) -> bool:
    return all(a != b for a, b in zip(t, t[1:]))


def aw_map(G: DiGraph, H: DiGraph, t: tuple) -> dict:
    """``sum_i (g_0..g_i) ⊗ (h_i..h_k)``, degenerate factors dropped."""
    m = H.n
    gs = [v // m for v in t]
    hs = [v % m for v in t]
    out: dict = {}
    for i in range(len(t)):
        a, b = tuple(gs[:i + 1]), tuple(hs[i:])
        if _nondegenerate(a) and _nondegenerate(b):
            out[(a, b)] = out.get((a, b), 0) + 1
    return out


def ez_tensor(G: DiGraph, H: DiGraph, chain: dict) -> dict:
    out: dict = {}
    for (x, y), c in chain.items():
        for t, s in ez_map(G, H, x, y).items():
            out[t] = out.get(t, 0) + c * s
    return {t: v for t, v in out.items() if v}


def aw_chain(G: DiGraph, H: DiGraph, chain: dict) -> dict:
    out: dict = {}
    for t, c in chain.items():
        for key, s in aw_map(G, H, t).items():
            out[key] = out.get(key, 0) + c * s
    return {k: v for k, v in out.items() if v}


def _faces(t: tuple, d=None, magnitude=False):
    k = len(t) - 1
    for i in range(k + 1):
        if magnitude:
            if i == 0 or i == k:
                continue
            a, b, c = t[i - 1], t[i], t[i + 1]
            if a == c or d[a][c] != d[a][b] + d[b][c]:
                continue
        elif 0 < i < k and t[i - 1] == t[i + 1]:
            continue
        yield t[:i] + t[i + 1:], (-1 if i % 2 else 1)


def boundary(G: DiGraph, chain: dict, magnitude: bool = False) -> dict:
    d = G.dist
    out: dict = {}
    for t, c in chain.items():
        if len(t) == 1:
            continue
        for f, s in _faces(t, d, magnitude):
            out[f] = out.get(f, 0) + c * s
    return {t: v for t, v in out.items() if v}


def tensor_boundary(G: DiGraph, H: DiGraph, chain: dict, magnitude: bool = False) -> dict:
    """``d(x ⊗ y) = dx ⊗ y + (-1)^{deg x} x ⊗ dy``."""
    out: dict = {}
    for (x, y), c in chain.items():
        for f, s in boundary(G, {x: 1}, magnitude).items():
            out[(f, y)] = out.get((f, y), 0) + c * s
        sign = -1 if (len(x) - 1) % 2 else 1
        for f, s in boundary(H, {y: 1}, magnitude).items():
            out[(x, f)] = out.get((x, f), 0) + c * s * sign
    return {k: v for k, v in out.items() if v}


# -- tensor pages and Künneth comparisons --------------------------------------------------


@dataclass
class TensorPage:
    r: int
    entries: dict   # (p, q) -> HomologyGroup

    def rank(self, p, q):
        g = self.entries.get((p, q))
        return g.free_rank if g else 0


def tensor_page(groups_g: dict, groups_h: dict, r: int, l_max: int) -> TensorPage:
    out = {}
    for p, q in octant(l_max):
        parts = []
        for (m, n), A in groups_g.items():
            B = groups_h.get((p - m, q - n))
            if B is not None:
                parts.append(group_tensor(A, B))
        out[(p, q)] = direct_sum(parts)
    return TensorPage(r, out)


def _page_groups(G: DiGraph, r: int, ring: Ring, l_max: int):
    """``(groups, exact)`` of page ``r`` keyed by ``(p, q)``."""
    if r == 1 and not ring.is_field:
        mh = magnitude_homology(G, l_max, ring)
        ss = SpectralSequence(reachability_complex(G, l_max), ring)
        groups = {(l, k - l): g for (k, l), g in mh.items()}
        return groups, {pq: ss.is_exact(1, *pq) for pq in groups}
    ss = SpectralSequence(reachability_complex(G, l_max), ring)
    page = ss.page(r)
    return ({pq: e.group for pq, e in page.entries.items()},
            {pq: e.exact for pq, e in page.entries.items()})


LEVELS = ("MH", "PH_ordinary", "PH_bigraded", "page")


@dataclass
class KunnethRow:
    p: int
    q: int
    product: HomologyGroup
    expected: HomologyGroup
    ok: bool


@dataclass
class KunnethReport:
    level: str
    page: int
    ring: str
    hypothesis: bool
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.hypothesis and all(row.ok for row in self.rows)

    def mismatches(self) -> list:
        return [row for row in self.rows if not row.ok]


def kunneth_check(G: DiGraph, H: DiGraph, level: str, ring: Ring = QQ, l_max: int = 4,
                  r: int | None = None) -> KunnethReport:
    """Compare the page of ``G□H`` with the Künneth prediction from ``G`` and ``H``.

    ``level`` is ``MH`` (page 1), ``PH_ordinary`` (page 2, bottom row),
    ``PH_bigraded`` (page 2) or ``page`` (page ``r``).  The prediction is the
    tensor term plus the Tor term; over a P.I.D. the sequences split, so the
    product entry must be isomorphic to their sum.  Only entries whose
    inputs are all exact are compared.
    """
    if level not in LEVELS:
        raise ValueError(f"unknown level {level!r}")
    s = {"MH": 1, "PH_ordinary": 2, "PH_bigraded": 2}.get(level, r)
    if s is None or s < 1:
        raise ValueError("page level needs r >= 1")
    P, _, _ = box_product(G, H)
    gg, eg = _page_groups(G, s, ring, l_max)
    gh, eh = _page_groups(H, s, ring, l_max)
    gp, ep = _page_groups(P, s, ring, l_max)
    hypothesis = True
    if not ring.is_field and level in ("PH_bigraded", "page"):
        for t in range(1, s):
            groups, _ = _page_groups(G, t, ring, l_max)
            if any(g.torsion for g in groups.values()):
                hypothesis = False
    report = KunnethReport(level, s, ring.name, hypothesis)
    for p, q in octant(l_max):
        if level == "PH_ordinary" and q != 0:
            continue
        ok_inputs = ep.get((p, q), False)
        tens, tors = [], []
        for m in range(p + 1):
            for n in range(-m, 1):
                u, v = p - m, q - n
                if (u, v) in gh:
                    ok_inputs &= eg[(m, n)] and eh[(u, v)]
                    tens.append(group_tensor(gg[(m, n)], gh[(u, v)]))
                w = (u - s + 1, v + s - 2)
                if w in gh:
                    ok_inputs &= eg[(m, n)] and eh[w]
                    tors.append(group_tor(gg[(m, n)], gh[w]))
        if not ok_inputs:
            continue
        expected = direct_sum(tens + tors)
        got = gp[(p, q)]
        report.rows.append(KunnethRow(p, q, got, expected, got == expected))
    return report


# -- the pairing on pages --------------------------------------------------------------------


@dataclass
class PairingEntry:
    p: int
    q: int
    map: InducedMap
    exact: bool
    sources: list   # [((s, t), i, (u, v), j)] column labels


def ez_pairing_on_page(G: DiGraph, H: DiGraph, r: int, ring: Ring = QQ, l_max: int = 4,
                       entries=None) -> dict:
    """Matrix of ``E^r(G) ⊗ E^r(H) -> E^r(G□H)`` induced by the shuffle map.

    Columns are pairs of generators ``(x_i, y_j)`` ordered by bidegrees then
    indices; the verdict is an isomorphism check (fields, or free groups).
    """
    P, _, _ = box_product(G, H)
    sG = SpectralSequence(reachability_complex(G, l_max), ring)
    sH = SpectralSequence(reachability_complex(H, l_max), ring)
    sP = SpectralSequence(reachability_complex(P, l_max), ring)
    out = {}
    for p, q in (entries or octant(l_max)):
        T = sP.entry(r, p, q)
        cols, labels, orders = [], [], []
        for m in range(p + 1):
            for n in range(-m, 1):
                u, v = p - m, q - n
                if v > 0 or v < -u:
                    continue
                A = sG.entry(r, m, n)
                B = sH.entry(r, u, v)
                if not len(A.sq) or not len(B.sq):
                    continue
                reps_a = sG.representatives(r, m, n)
                reps_b = sH.representatives(r, u, v)
                for i, x in enumerate(reps_a):
                    for j, y in enumerate(reps_b):
                        chain = {(a, b): c * e for a, c in x.items() for b, e in y.items()}
                        img = ez_tensor(G, H, chain)
                        idx = sP.C.index[p + q]
                        vec = {idx[t]: c for t, c in img.items()}
                        c = T.coordinates(vec)
                        cols.append({k: val for k, val in enumerate(c) if val != 0})
                        labels.append(((m, n), i, (u, v), j))
                        oa, ob = A.sq.orders[i], B.sq.orders[j]
                        orders.append(0 if oa == ob == 0 else -1)
        M = ExactMatrix(len(T.sq), len(cols), ring, cols)
        if all(o == 0 for o in orders) and T.group.is_free():
            iso = quotient_map_is_iso(M, orders, T.sq.orders, ring)
        else:
            iso = None
        exact = sP.is_exact(r, p, q)
        out[(p, q)] = PairingEntry(p, q, InducedMap(M, iso), exact, labels)
    return out


def check_ez_chain_map(G: DiGraph, H: DiGraph, l_max: int, magnitude: bool = False) -> bool:
    """``d ∇ = ∇ d`` on every pair of trails of total length ``<= l_max``."""
    from .chains import enumerate_trails
    tg = [t for v in enumerate_trails(G, None, l_max).values() for t in v]
    th = [t for v in enumerate_trails(H, None, l_max).values() for t in v]
    P, _, _ = box_product(G, H)
    dg, dh = G.dist, H.dist
    for x in tg:
        lx = sum(dg[a][b] for a, b in zip(x, x[1:]))
        for y in th:
            ly = sum(dh[a][b] for a, b in zip(y, y[1:]))
            if lx + ly > l_max:
                continue
            lhs = boundary(P, ez_map(G, H, x, y), magnitude)
            rhs = ez_tensor(G, H, tensor_boundary(G, H, {(x, y): 1}, magnitude))
            if lhs != rhs:
                return False
    return True


def check_aw_after_ez(G: DiGraph, H: DiGraph, l_max: int) -> bool:
    """``Δ ∘ ∇`` is the identity on tensor generators of total length ``<= l_max``."""
    from .chains import enumerate_trails
    tg = [t for v in enumerate_trails(G, None, l_max).values() for t in v]
    th = [t for v in enumerate_trails(H, None, l_max).values() for t in v]
    dg, dh = G.dist, H.dist
    for x in tg:
        lx = sum(dg[a][b] for a, b in zip(x, x[1:]))
        for y in th:
            ly = sum(dh[a][b] for a, b in zip(y, y[1:]))
            if lx + ly <= l_max and aw_chain(G, H, ez_map(G, H, x, y)) != {(x, y): 1}:
                return False
    return True
