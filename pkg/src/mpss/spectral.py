"""Pages of the spectral sequence of the length filtration on reachability chains.

Spectral coordinates: ``E^r_{p,q}`` sits in filtration ``p`` and total degree
``n = p + q``; ``d^r`` goes from ``(p, q)`` to ``(p - r, q + r - 1)``.  In
``(k, l)`` coordinates, ``k = p + q`` and ``l = p``.

Two independent routes compute the same groups:

* ``SpectralSequence.entry`` builds each ``E^r_{p,q}`` as an explicit
  subquotient ``Z^r_p / (Z^{r-1}_{p-1} + d Z^{r-1}_{p+r-1})``, working modulo
  ``F_{p-r}`` so that only generators in a band of ``r`` consecutive lengths
  take part.  It works over any ring and supplies differentials,
  representatives and induced maps.
* ``SpectralSequence.rank_table`` (fields only) reduces the whole filtered
  complex once, persistence style, and reads every page's ranks off the
  birth and death levels of the resulting pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .chains import FilteredComplex, reachability_complex, relative_complex, degree_truncated_rc
from .digraph import INF, DiGraph, GraphMap, r_homotopy_gap, validate_map
from .homalg import (ExactMatrix, HomologyGroup, InducedMap, QQ, Ring, Subquotient, _field_kernel,
                     _field_reduce, kernel_basis, quotient_map_is_iso, subquotient)


@dataclass
class PageEntry:
    p: int
    q: int
    group: HomologyGroup
    exact: bool
    representatives: list | None = None

    @property
    def k(self) -> int:
        return self.p + self.q

    @property
    def l(self) -> int:
        return self.p

    @property
    def rank(self) -> int:
        return self.group.free_rank


@dataclass
class Page:
    r: int
    l_max: int
    entries: dict
    differentials: dict = field(default_factory=dict)

    def rank(self, p: int, q: int) -> int:
        e = self.entries.get((p, q))
        return e.group.free_rank if e else 0

    def group(self, p: int, q: int) -> HomologyGroup:
        e = self.entries.get((p, q))
        return e.group if e else HomologyGroup()

    def exact(self, p: int, q: int) -> bool:
        e = self.entries.get((p, q))
        return e.exact if e else True

    def nonzero(self) -> dict:
        return {pq: e for pq, e in self.entries.items() if not e.group.is_zero()}


def octant(l_max: int):
    for p in range(l_max + 1):
        for q in range(0, -p - 1, -1):
            yield p, q


def _max_distance(G: DiGraph) -> int:
    return G.diameter()


class _Entry:
    """One subquotient ``E^r_{p,q}`` with the band it lives in."""

    def __init__(self, sq: Subquotient, n: int, lo: int, hi: int, first: int):
        self.sq = sq
        self.n = n
        self.lo = lo        # components with level <= lo are dropped
        self.hi = hi
        self.first = first  # first global index with level > lo

    @property
    def group(self):
        return self.sq.group

    def coordinates(self, vec: dict) -> list:
        return self.sq.coordinates({i: c for i, c in vec.items() if i >= self.first})


class SpectralSequence:
    """Spectral sequence of a truncated filtered complex ``F_L C``."""

    def __init__(self, C: FilteredComplex, ring: Ring):
        self.C = C
        self.R = ring
        self.L = C.l_max
        self.K = _max_distance(C.graph)
        self._entries: dict = {}
        self._intervals = None

    # -- exactness ---------------------------------------------------------

    def is_exact(self, r: int, p: int, q: int) -> bool:
        """Whether the truncation at ``L`` leaves the entry unchanged.

        The deepest generators touched by ``E^r_{p,q}`` have length ``p + r - 1``.
        """
        return p + r - 1 <= self.L

    def degree_complete(self, n: int) -> bool:
        """Whether every generator of degree ``<= n + 1`` survives the truncation.

        A trail of degree ``j`` has length at most ``j K`` (``K`` the largest
        finite distance), so this holds once ``(n + 1) K <= L``; in such
        degrees every page of the truncated complex is the true one.
        """
        return (n + 1) * self.K <= self.L

    # -- the subquotient route ---------------------------------------------

    def entry(self, r: int, p: int, q: int) -> _Entry:
        key = (r, p, q)
        e = self._entries.get(key)
        if e is None:
            e = self._build(r, p, q)
            self._entries[key] = e
        return e

    def _build(self, r: int, p: int, q: int) -> _Entry:
        C, R = self.C, self.R
        n = p + q
        if r == 0:
            band = C.band(n, p - 1, p)
            lifts = [{i: 1} for i in band]
            s = band.start

            def coords(vec, band=band, s=s):
                out = [0] * len(band)
                for i, c in vec.items():
                    if i in band:
                        out[i - s] = c
                    elif i >= band.stop:
                        raise ValueError("vector has components above the filtration level")
                return out

            sq = Subquotient(R, lifts, [0] * len(band), coords)
            return _Entry(sq, n, p - 1, p, band.start)
        lo = p - r
        band = C.band(n, lo, p)
        row_first = C.band(n - 1, lo, lo).stop if n >= 1 else 0
        cols_all = C.boundary_columns(n) if n >= 1 else []
        d1 = [{i: c for i, c in cols_all[j].items() if i >= row_first} if n >= 1 else {}
              for j in band]
        prefix = len(C.band(n, lo, p - 1))
        base = band.start
        if R.is_field:
            ker, counts = _field_kernel(d1, R)
            Zk = ker
            Bk = ker[:counts[prefix]]
        else:
            Zk = kernel_basis(d1, R)
            Bk = kernel_basis(d1[:prefix], R)
        Z = [{base + j: c for j, c in v.items()} for v in Zk]
        B = [{base + j: c for j, c in v.items()} for v in Bk]
        ybase = C.band(n + 1, p - 1, p + r - 1)
        if len(ybase):
            up = C.boundary_columns(n + 1)
            above = C.band(n, p, p).stop
            d3 = [{i: c for i, c in up[j].items() if i >= above} for j in ybase]
            K3 = _field_kernel(d3, R)[0] if R.is_field else kernel_basis(d3, R)
            for v in K3:
                acc: dict = {}
                for j, c in v.items():
                    for i, w in up[ybase.start + j].items():
                        if i >= band.start:
                            acc[i] = acc.get(i, 0) + c * w
                acc = {i: x for i, x in acc.items() if x != 0}
                if acc:
                    B.append(acc)
        sq = subquotient(None, Z, B, R, check=False)
        return _Entry(sq, n, lo, p, band.start)

    def group(self, r: int, p: int, q: int) -> HomologyGroup:
        return self.entry(r, p, q).group

    def representatives(self, r: int, p: int, q: int) -> list:
        """Lifts of the generators as ``{trail: coefficient}``."""
        basis = self.C.basis.get(p + q, [])
        return [{basis[i]: c for i, c in v.items()} for v in self.entry(r, p, q).sq.lifts]

    def apply_boundary(self, n: int, vec: dict) -> dict:
        cols = self.C.boundary_columns(n)
        acc: dict = {}
        for j, c in vec.items():
            for i, w in cols[j].items():
                acc[i] = acc.get(i, 0) + c * w
        return {i: x for i, x in acc.items() if x != 0}

    def differential(self, r: int, p: int, q: int) -> ExactMatrix:
        """Matrix of ``d^r: E^r_{p,q} -> E^r_{p-r, q+r-1}`` in the chosen bases."""
        src = self.entry(r, p, q)
        tp, tq = p - r, q + r - 1
        tgt_len = len(self.entry(r, tp, tq).sq) if tp >= 0 and tq <= 0 and tp + tq >= 0 else 0
        cols = []
        n = p + q
        for lift in src.sq.lifts:
            if tgt_len == 0 or n == 0:
                cols.append({})
                continue
            img = self.apply_boundary(n, lift)
            c = self.entry(r, tp, tq).coordinates(img)
            cols.append({i: v for i, v in enumerate(c) if v != 0})
        return ExactMatrix(tgt_len, len(src.sq), self.R, cols)

    def class_of(self, r: int, p: int, q: int, chain: dict) -> list:
        """Coordinates of a chain ``{trail: coefficient}`` in ``E^r_{p,q}``."""
        n = p + q
        idx = self.C.index.get(n, {})
        vec = {}
        for t, c in chain.items():
            if t not in idx:
                raise ValueError(f"{t} is not a generator in degree {n}")
            vec[idx[t]] = c
        return self.entry(r, p, q).coordinates(vec)

    # -- the persistence route ---------------------------------------------

    def intervals(self) -> dict:
        """Degree -> list of ``(birth, death)`` levels; ``death`` is ``None`` if unpaired."""
        if self._intervals is not None:
            return self._intervals
        if not self.R.is_field:
            raise ValueError("persistence ranks need a field")
        C, F = self.C, self.R
        degs = C.degrees
        out = {n: [] for n in degs}
        cleared = {n: set() for n in degs}
        for n in sorted(degs, reverse=True):
            lv = C._level_lists[n]
            dead = cleared[n]
            if n >= 1:
                cols = C.boundary_columns(n)
                lower = C._level_lists.get(n - 1, [])
                pivots: dict = {}
                for j in range(len(lv)):
                    if j in dead:
                        continue
                    vec = {i: F.coerce(c) for i, c in cols[j].items()}
                    low = _field_reduce(F, vec, pivots, None)
                    if low is None:
                        out[n].append((lv[j], None))
                    else:
                        pivots[low] = (vec, {})
                        out.setdefault(n - 1, []).append((lower[low], lv[j]))
                        cleared.setdefault(n - 1, set()).add(low)
            else:
                for j in range(len(lv)):
                    if j not in dead:
                        out[n].append((lv[j], None))
        self._intervals = out
        return out

    def rank_table(self, r: int) -> dict:
        """``(p, q) -> rank of E^r_{p,q}`` over the octant of the window."""
        ranks = {pq: 0 for pq in octant(self.L)}
        for n, ivs in self.intervals().items():
            for b, d in ivs:
                if d is None or d - b >= r:
                    key = (b, n - b)
                    if key in ranks:
                        ranks[key] += 1
                    if d is not None:
                        key = (d, n + 1 - d)
                        if key in ranks:
                            ranks[key] += 1
        return ranks

    # -- pages -------------------------------------------------------------

    def page(self, r: int, *, differentials: bool = False, representatives: bool = False,
             fast: bool = True) -> Page:
        use_ranks = fast and self.R.is_field and not differentials and not representatives
        entries = {}
        if use_ranks:
            ranks = self.rank_table(r)
            for (p, q), k in ranks.items():
                entries[(p, q)] = PageEntry(p, q, HomologyGroup(k), self.is_exact(r, p, q))
        else:
            for p, q in octant(self.L):
                reps = self.representatives(r, p, q) if representatives else None
                entries[(p, q)] = PageEntry(p, q, self.group(r, p, q), self.is_exact(r, p, q), reps)
        diffs = {}
        if differentials:
            for p, q in octant(self.L):
                diffs[(p, q)] = self.differential(r, p, q)
        return Page(r, self.L, entries, diffs)


# -- module-level operations ------------------------------------------------------


def spectral_sequence(G: DiGraph, l_max: int, ring: Ring) -> SpectralSequence:
    return SpectralSequence(reachability_complex(G, l_max), ring)


def compute_page(G: DiGraph, r: int, l_max: int, ring: Ring = QQ, *, differentials: bool = False,
                 representatives: bool = False) -> Page:
    return spectral_sequence(G, l_max, ring).page(r, differentials=differentials,
                                                  representatives=representatives)


def relative_page(X: DiGraph, A, r: int, l_max: int, ring: Ring = QQ, *,
                  differentials: bool = False) -> Page:
    ss = SpectralSequence(relative_complex(X, A, l_max), ring)
    return ss.page(r, differentials=differentials)


@dataclass
class BigradedPH:
    """``PH_{k,l}``: the second page in ``(k, l)`` coordinates."""

    table: dict   # (k, l) -> HomologyGroup
    exact: dict   # (k, l) -> bool

    def rank(self, k: int, l: int) -> int:
        g = self.table.get((k, l))
        return g.free_rank if g else 0

    def nonzero(self) -> dict:
        return {kl: g for kl, g in self.table.items() if not g.is_zero()}

    def ordinary(self, k: int) -> HomologyGroup:
        return self.table.get((k, k), HomologyGroup())


def bigraded_path_homology(G: DiGraph, l_max: int, ring: Ring = QQ) -> BigradedPH:
    page = compute_page(G, 2, l_max, ring)
    table = {(e.k, e.l): e.group for e in page.entries.values()}
    exact = {(e.k, e.l): e.exact for e in page.entries.values()}
    return BigradedPH(table, exact)


def d1_on_class(G: DiGraph, chain: dict, p: int, q: int, ring: Ring = QQ,
                ss: SpectralSequence | None = None) -> tuple:
    """First differential of a magnitude cycle given as ``{trail: coefficient}``.

    The chain must be a cycle in ``MC_{p+q, p}``.  Its full reachability
    boundary is taken, terms shorter than ``p - 1`` are discarded (the terms
    of length ``p`` cancel because the chain is a magnitude cycle), and the
    result is returned both as a chain in ``MC_{p+q-1, p-1}`` and as its
    coordinates in ``E^1_{p-1, q}``.
    """
    n = p + q
    d = G.dist
    for t in chain:
        if len(t) - 1 != n or sum(d[a][b] for a, b in zip(t, t[1:])) != p:
            raise ValueError(f"{t} is not a generator of bidegree ({n}, {p})")
    full: dict = {}
    for t, c in chain.items():
        k = len(t) - 1
        faces = [(t[1:], 1)] if k else []
        for i in range(1, k):
            if t[i - 1] != t[i + 1]:
                faces.append((t[:i] + t[i + 1:], -1 if i % 2 else 1))
        if k:
            faces.append((t[:-1], -1 if k % 2 else 1))
        for f, s in faces:
            full[f] = full.get(f, 0) + s * c
    by_len: dict = {}
    for f, c in full.items():
        if c:
            L = sum(d[a][b] for a, b in zip(f, f[1:]))
            by_len.setdefault(L, {})[f] = c
    if by_len.get(p):
        raise ValueError("chain is not a magnitude cycle")
    image = by_len.get(p - 1, {})
    if p == 0:
        return image, []
    if ss is None:
        ss = spectral_sequence(G, p, ring)
    return image, ss.class_of(1, p - 1, q, image)


# -- induced maps -------------------------------------------------------------------


def chain_map(src: FilteredComplex, tgt: FilteredComplex, f: GraphMap) -> Callable[[int, dict], dict]:
    """Chain map on global indices induced by a graph map (degenerate images vanish)."""
    def apply(n: int, vec: dict) -> dict:
        sb = src.basis[n]
        ti = tgt.index.get(n, {})
        out: dict = {}
        for i, c in vec.items():
            img = tuple(f(v) for v in sb[i])
            if any(a == b for a, b in zip(img, img[1:])):
                continue
            j = ti.get(img)
            if j is None:
                if tgt.subgraph is not None and all(v in tgt.subgraph for v in img):
                    continue
                raise ValueError(f"image {img} is not a generator of the target complex")
            out[j] = out.get(j, 0) + c
        return {j: c for j, c in out.items() if c != 0}
    return apply


@dataclass
class PageMap:
    r: int
    maps: dict      # (p, q) -> InducedMap
    exact: dict     # (p, q) -> bool

    def is_iso(self, p: int, q: int) -> bool:
        return self.maps[(p, q)].is_isomorphism

    def iso_on_exact(self) -> bool:
        return all(m.is_isomorphism for pq, m in self.maps.items() if self.exact[pq])


def induced_map_between(ss_src: SpectralSequence, ss_tgt: SpectralSequence, f: GraphMap, r: int,
                        entries=None) -> PageMap:
    ok, bad = validate_map(f)
    if not ok:
        raise ValueError(f"not a graph map: edge {bad}")
    src_sub, tgt_sub = ss_src.C.subgraph, ss_tgt.C.subgraph
    if src_sub is not None:
        if tgt_sub is None or any(f(a) not in tgt_sub for a in src_sub):
            raise ValueError("map does not send the subgraph into the target subgraph")
    fm = chain_map(ss_src.C, ss_tgt.C, f)
    R = ss_src.R
    maps, exact = {}, {}
    L = min(ss_src.L, ss_tgt.L)
    for p, q in (entries or octant(L)):
        S = ss_src.entry(r, p, q)
        T = ss_tgt.entry(r, p, q)
        n = p + q
        cols = []
        for lift in S.sq.lifts:
            c = T.coordinates(fm(n, lift))
            cols.append({i: v for i, v in enumerate(c) if v != 0})
        M = ExactMatrix(len(T.sq), len(S.sq), R, cols)
        maps[(p, q)] = InducedMap(M, quotient_map_is_iso(M, S.sq.orders, T.sq.orders, R))
        exact[(p, q)] = ss_src.is_exact(r, p, q) and ss_tgt.is_exact(r, p, q)
    return PageMap(r, maps, exact)


def induced_page_map(f: GraphMap, r: int, l_max: int, ring: Ring = QQ, *,
                     source_sub=None, target_sub=None) -> PageMap:
    """Map on ``E^r`` induced by ``f``; pass subgraphs for a map of pairs."""
    if source_sub is None and target_sub is None:
        C1 = reachability_complex(f.source, l_max)
        C2 = reachability_complex(f.target, l_max)
    else:
        C1 = relative_complex(f.source, source_sub or (), l_max)
        C2 = relative_complex(f.target, target_sub or (), l_max)
    return induced_map_between(SpectralSequence(C1, ring), SpectralSequence(C2, ring), f, r)


@dataclass
class HomotopyAgreement:
    gap: object
    page: int
    agree: dict     # (p, q) -> bool (exact entries only)

    @property
    def all_agree(self) -> bool:
        return all(self.agree.values())


def r_homotopy_page_agreement(f: GraphMap, g: GraphMap, r_claim: int, s: int, l_max: int,
                              ring: Ring = QQ) -> HomotopyAgreement:
    """Compare the maps induced by ``f`` and ``g`` on page ``s``.

    Raises ``ValueError`` if the maps are further apart than ``r_claim``.
    """
    gap = r_homotopy_gap(f, g)
    if gap is INF or gap > r_claim:
        raise ValueError(f"maps are {gap} apart, more than {r_claim}")
    ss1 = SpectralSequence(reachability_complex(f.source, l_max), ring)
    ss2 = SpectralSequence(reachability_complex(f.target, l_max), ring)
    mf = induced_map_between(ss1, ss2, f, s)
    mg = induced_map_between(ss1, ss2, g, s)
    agree = {pq: mf.maps[pq].matrix == mg.maps[pq].matrix for pq in mf.maps if mf.exact[pq]}
    return HomotopyAgreement(gap, s, agree)


# -- reachability homology and convergence -----------------------------------------------


def reachability_homology(G: DiGraph, k_max: int, ring: Ring = QQ) -> dict:
    C = degree_truncated_rc(G, k_max + 1)
    return {n: C.homology(n, ring) for n in range(k_max + 1)}


@dataclass
class ConvergenceReport:
    l_max: int
    infinity_page: int
    stable_from: dict        # (p, q) -> first page from which the rank is constant
    infinity_ranks: dict     # (p, q) -> rank of E^inf
    totals: dict             # n -> sum of E^inf ranks in total degree n (reliable degrees)
    reachability: dict       # n -> rank of RH_n
    agree: bool


def convergence_report(G: DiGraph, l_max: int, ring: Ring = QQ) -> ConvergenceReport:
    """Compare ``E^inf`` (page ``l_max + 1``) with reachability homology.

    Only total degrees ``n`` with ``(n + 1) * diameter <= l_max`` are
    compared: there the truncated complex agrees with the full one in
    degrees ``n - 1 .. n + 1``, so its pages have converged.
    """
    ss = spectral_sequence(G, l_max, ring)
    top = l_max + 1
    tables = [ss.rank_table(r) for r in range(top + 1)]
    stable = {}
    for pq in tables[0]:
        r0 = top
        while r0 > 0 and tables[r0 - 1][pq] == tables[top][pq]:
            r0 -= 1
        stable[pq] = r0
    degrees = [n for n in range(l_max + 1) if ss.degree_complete(n)]
    totals = {n: sum(v for (p, q), v in tables[top].items() if p + q == n) for n in degrees}
    rh = reachability_homology(G, max(degrees, default=0), ring)
    reach = {n: rh[n].free_rank for n in degrees}
    return ConvergenceReport(l_max, top, stable, tables[top], totals, reach, totals == reach)
