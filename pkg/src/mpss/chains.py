"""Reachability chains, magnitude chains, relative and ordered-partition complexes.

A trail is a tuple of vertices with consecutive entries distinct and each
reachable from the previous one.  Its length is the sum of consecutive
distances; its degree is one less than the number of entries.
"""

from __future__ import annotations

from bisect import bisect_right
from functools import cached_property
from typing import Callable, Iterable, NamedTuple

from .digraph import INF, DiGraph
from .homalg import (ExactMatrix, HomologyGroup, Ring, ZZ, direct_sum, homology_from_columns,
                     sparse_invariant_factors)

MODES = ("full_RC", "MC", "relative", "OP")


class Trail(NamedTuple):
    vertices: tuple
    length: int

    @property
    def degree(self) -> int:
        return len(self.vertices) - 1


def trail_length(G: DiGraph, t: tuple):
    d = G.dist
    return sum((d[a][b] for a, b in zip(t, t[1:])), 0)


def make_trail(G: DiGraph, vertices: Iterable[int]) -> Trail:
    t = tuple(vertices)
    if not t:
        raise ValueError("a trail needs at least one vertex")
    for a, b in zip(t, t[1:]):
        if a == b:
            raise ValueError(f"repeated consecutive entry in {t}")
        if G.dist[a][b] is INF:
            raise ValueError(f"{b} is not reachable from {a}")
    return Trail(t, trail_length(G, t))


def _walk(G: DiGraph, k_max: int, l_max: int, starts=None):
    """Yield ``(trail, length)`` for every trail within the bounds."""
    dist = G.dist
    reach = G.reachable_pairs
    for x in (range(G.n) if starts is None else starts):
        stack = [((x,), 0)]
        while stack:
            t, L = stack.pop()
            yield t, L
            if len(t) <= k_max:
                last = t[-1]
                row = dist[last]
                for y in reach[last]:
                    nl = L + row[y]
                    if nl <= l_max:
                        stack.append((t + (y,), nl))


def enumerate_trails(G: DiGraph, k_max: int | None = None, l_max: int = 0) -> dict:
    """Trails of degree ``<= k_max`` and length ``<= l_max``, keyed by ``(k, l)``, lexicographic."""
    if k_max is None:
        k_max = l_max
    out: dict = {}
    for t, L in _walk(G, k_max, l_max):
        out.setdefault((len(t) - 1, L), []).append(t)
    for v in out.values():
        v.sort()
    return dict(sorted(out.items()))


def rc_boundary(G: DiGraph, t: tuple, mode: str = "full_RC", A: frozenset | None = None) -> dict:
    """Boundary of a trail as ``{trail: coefficient}``.

    ``full_RC`` keeps every nondegenerate face, ``MC`` keeps only faces of the
    same length, ``relative`` drops faces lying wholly in ``A``.
    """
    if mode not in ("full_RC", "MC", "relative"):
        raise ValueError(f"unknown mode {mode!r}")
    k = len(t) - 1
    if k == 0:
        return {}
    d = G.dist
    out: dict = {}
    for i in range(k + 1):
        if 0 < i < k:
            a, b, c = t[i - 1], t[i], t[i + 1]
            if a == c:
                continue
            if mode == "MC" and d[a][c] != d[a][b] + d[b][c]:
                continue
        elif mode == "MC":
            continue
        face = t[:i] + t[i + 1:]
        if mode == "relative" and A is not None and all(v in A for v in face):
            continue
        out[face] = out.get(face, 0) + (-1 if i % 2 else 1)
    return {f: c for f, c in out.items() if c}


def _mc_faces(d, t: tuple):
    """Faces of ``t`` in the magnitude differential, with signs."""
    for i in range(1, len(t) - 1):
        a, b, c = t[i - 1], t[i], t[i + 1]
        if a != c and d[a][c] == d[a][b] + d[b][c]:
            yield t[:i] + t[i + 1:], (-1 if i % 2 else 1)


def _rc_faces(t: tuple):
    k = len(t) - 1
    if k == 0:
        return
    yield t[1:], 1
    for i in range(1, k):
        if t[i - 1] != t[i + 1]:
            yield t[:i] + t[i + 1:], (-1 if i % 2 else 1)
    yield t[:-1], (-1 if k % 2 else 1)


# -- complexes -------------------------------------------------------------------


class ChainComplex:
    """Free chain complex with ordered bases ``basis[n]`` and integer differential.

    ``faces(key)`` yields ``(face, sign)``; faces missing from the basis of
    the degree below are dropped, which is how truncation and quotients act.
    """

    def __init__(self, basis: dict, faces: Callable, mode: str, levels: dict | None = None,
                 description: str = ""):
        self.mode = mode
        self.basis = {n: list(v) for n, v in basis.items()}
        self.levels = levels
        self._faces = faces
        self.description = description
        self.index = {n: {t: i for i, t in enumerate(v)} for n, v in self.basis.items()}
        self._cols: dict = {}

    @property
    def degrees(self) -> list:
        return sorted(n for n, v in self.basis.items() if v)

    def dim(self, n: int) -> int:
        return len(self.basis.get(n, ()))

    def level(self, t) -> int:
        return self.levels[t] if self.levels is not None else 0

    def boundary_of(self, t) -> dict:
        n = len(t) - 1 if self.mode != "OP" else len(t)
        below = self.index.get(n - 1, {})
        out: dict = {}
        for f, s in self._faces(t):
            if f in below:
                out[f] = out.get(f, 0) + s
        return {f: c for f, c in out.items() if c}

    def boundary_columns(self, n: int) -> list:
        """Columns of ``d_n: C_n -> C_{n-1}`` over basis indices."""
        cols = self._cols.get(n)
        if cols is None:
            below = self.index.get(n - 1, {})
            cols = []
            for t in self.basis.get(n, ()):
                col: dict = {}
                for f, s in self._faces(t):
                    j = below.get(f)
                    if j is not None:
                        col[j] = col.get(j, 0) + s
                cols.append({j: c for j, c in col.items() if c})
            self._cols[n] = cols
        return cols

    def boundary_matrix(self, n: int, ring: Ring = ZZ) -> ExactMatrix:
        return ExactMatrix(self.dim(n - 1), self.dim(n), ring, self.boundary_columns(n))

    def check_dd(self) -> bool:
        for n in self.degrees:
            if n < 2:
                continue
            lower = self.boundary_columns(n - 1)
            for col in self.boundary_columns(n):
                acc: dict = {}
                for j, c in col.items():
                    for i, w in lower[j].items():
                        acc[i] = acc.get(i, 0) + c * w
                if any(acc.values()):
                    return False
        return True

    def homology(self, n: int, ring: Ring) -> HomologyGroup:
        return homology_from_columns(self.dim(n), self.boundary_columns(n), self.dim(n - 1),
                                     self.boundary_columns(n + 1), self.dim(n), ring)

    def homology_table(self, ring: Ring) -> dict:
        top = max(self.degrees, default=-1)
        return {n: self.homology(n, ring) for n in range(0, top + 1)}


class FilteredComplex(ChainComplex):
    """Chain complex whose generators carry a filtration level (the trail length).

    Bases in each degree are ordered by ``(level, vertex tuple)``; the
    lexicographic per-``(k, l)`` blocks are available as ``graded_basis``.
    """

    def __init__(self, graph: DiGraph, basis: dict, faces: Callable, mode: str, levels: dict,
                 l_max: int, subgraph: frozenset | None = None, description: str = ""):
        ordered = {n: sorted(v, key=lambda t: (levels[t], t)) for n, v in basis.items()}
        super().__init__(ordered, faces, mode, levels, description)
        self.graph = graph
        self.l_max = l_max
        self.subgraph = subgraph
        self._level_lists = {n: [levels[t] for t in v] for n, v in self.basis.items()}

    @cached_property
    def graded_basis(self) -> dict:
        out: dict = {}
        for n, v in self.basis.items():
            for t in v:
                out.setdefault((n, self.levels[t]), []).append(t)
        return dict(sorted(out.items()))

    def band(self, n: int, lo: int, hi: int) -> range:
        """Indices of degree-``n`` generators with ``lo < level <= hi``."""
        lv = self._level_lists.get(n, [])
        return range(bisect_right(lv, lo), bisect_right(lv, hi))

    def level_of_index(self, n: int, i: int) -> int:
        return self._level_lists[n][i]

    def differential_block(self, k: int, l_src: int, l_tgt: int, ring: Ring = ZZ) -> ExactMatrix:
        """Component of ``d_k`` from length ``l_src`` generators to length ``l_tgt`` ones."""
        src = self.band(k, l_src - 1, l_src)
        tgt = self.band(k - 1, l_tgt - 1, l_tgt)
        cols = self.boundary_columns(k)
        t0 = tgt.start
        out = [{i - t0: c for i, c in cols[j].items() if i in tgt} for j in src]
        return ExactMatrix(len(tgt), len(src), ring, out)


def reachability_complex(G: DiGraph, l_max: int, k_max: int | None = None) -> FilteredComplex:
    """``F_{l_max} RC(G)`` with every generator of degree ``<= k_max``."""
    if k_max is None:
        k_max = l_max
    basis: dict = {}
    levels: dict = {}
    for t, L in _walk(G, k_max, l_max):
        basis.setdefault(len(t) - 1, []).append(t)
        levels[t] = L
    return FilteredComplex(G, basis, _rc_faces, "full_RC", levels, l_max,
                           description=f"RC({G.name}) up to length {l_max}")


def degree_truncated_rc(G: DiGraph, k_max: int) -> ChainComplex:
    """Reachability complex in degrees ``<= k_max`` (no length bound)."""
    basis: dict = {}
    for t, _ in _walk(G, k_max, float("inf")):
        basis.setdefault(len(t) - 1, []).append(t)
    for v in basis.values():
        v.sort()
    return ChainComplex(basis, _rc_faces, "full_RC", description=f"RC({G.name}) up to degree {k_max}")


def magnitude_complex(G: DiGraph, l: int) -> FilteredComplex:
    """Magnitude chain complex ``MC_{*, l}(G)``."""
    d = G.dist
    basis: dict = {}
    levels: dict = {}
    for t, L in _walk(G, l, l):
        if L == l:
            basis.setdefault(len(t) - 1, []).append(t)
            levels[t] = L
    return FilteredComplex(G, basis, lambda t: _mc_faces(d, t), "MC", levels, l,
                           description=f"MC({G.name}, {l})")


def endpoint_decomposition(G: DiGraph, l: int) -> dict:
    """``MC_{*, l}(G)`` split by (first vertex, last vertex)."""
    d = G.dist
    blocks: dict = {}
    for t, L in _walk(G, l, l):
        if L == l:
            blocks.setdefault((t[0], t[-1]), {}).setdefault(len(t) - 1, []).append(t)
    out = {}
    for key in sorted(blocks):
        b = blocks[key]
        levels = {t: l for v in b.values() for t in v}
        out[key] = FilteredComplex(G, b, lambda t: _mc_faces(d, t), "MC", levels, l,
                                   description=f"MC({G.name}, {l}; {key[0]}->{key[1]})")
    return out


def magnitude_homology(G: DiGraph, l_max: int, ring: Ring, k_max: int | None = None) -> dict:
    """``MH_{k, l}(G)`` for ``0 <= k <= l <= l_max`` (and ``k <= k_max``).

    Computed one (start, end, length) block at a time, since the magnitude
    differential preserves endpoints and length.
    """
    if k_max is None:
        k_max = l_max
    d = G.dist
    blocks: dict = {}
    for t, L in _walk(G, k_max + 1, l_max):
        blocks.setdefault((L, t[0], t[-1]), {}).setdefault(len(t) - 1, []).append(t)
    parts: dict = {}
    for (L, _, _), b in blocks.items():
        index = {n: {t: i for i, t in enumerate(v)} for n, v in b.items()}
        cols = {}
        for n, v in b.items():
            below = index.get(n - 1, {})
            cs = []
            for t in v:
                col = {}
                for f, s in _mc_faces(d, t):
                    col[below[f]] = col.get(below[f], 0) + s
                cs.append(col)
            cols[n] = cs
        for k in range(0, min(L, k_max) + 1):
            if k not in b:
                continue
            h = homology_from_columns(len(b[k]), cols[k], len(b.get(k - 1, ())),
                                      cols.get(k + 1, []), len(b[k]), ring)
            if not h.is_zero():
                parts.setdefault((k, L), []).append(h)
    return {(k, L): direct_sum(parts.get((k, L), ()))
            for L in range(l_max + 1) for k in range(0, min(L, k_max) + 1)}


# -- relative complexes -------------------------------------------------------------


def is_convex(X: DiGraph, A: Iterable[int]) -> bool:
    """Induced metric on ``A`` agrees with the metric of ``X``."""
    A = sorted(set(A))
    sub, _ = X.induced_subgraph(A)
    for i, a in enumerate(A):
        for j, b in enumerate(A):
            if sub.dist[i][j] != X.dist[a][b]:
                return False
    return True


def relative_complex(X: DiGraph, A: Iterable[int], l_max: int, *, with_splitting: bool = False,
                     k_max: int | None = None) -> FilteredComplex:
    """``F_{l_max} RC(X) / RC(A)`` for a convex induced subgraph ``A``.

    With ``with_splitting`` the no-entry condition is verified as well and
    the complex gets a ``splitting`` attribute: the map sending a magnitude
    generator of ``X`` to itself when its last vertex is in ``A`` and to
    ``None`` otherwise.
    """
    A = frozenset(A)
    if any(not 0 <= a < X.n for a in A):
        raise ValueError("subgraph vertex outside the graph")
    if not is_convex(X, A):
        raise ValueError("subgraph is not convex")
    if with_splitting:
        for u, v in X.proper_edges:
            if u not in A and v in A:
                raise ValueError(f"edge ({u}, {v}) enters the subgraph")
    if k_max is None:
        k_max = l_max
    basis: dict = {}
    levels: dict = {}
    for t, L in _walk(X, k_max, l_max):
        if all(v in A for v in t):
            continue
        basis.setdefault(len(t) - 1, []).append(t)
        levels[t] = L
    C = FilteredComplex(X, basis, _rc_faces, "relative", levels, l_max, subgraph=A,
                        description=f"RC({X.name}, A) up to length {l_max}")
    if with_splitting:
        C.splitting = lambda t: t if t[-1] in A else None
    return C


# -- ordered partitions -------------------------------------------------------------------


class OrderedPartition(NamedTuple):
    parts: tuple
    bound: int

    @property
    def total(self) -> int:
        return sum(self.parts)


def ordered_partitions(l: int, m: int) -> list:
    """Tuples of positive integers ``< m`` summing to ``l``, lexicographic."""
    if l < 0:
        return []
    out = []

    def rec(prefix, rest):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for a in range(1, min(m - 1, rest) + 1):
            prefix.append(a)
            rec(prefix, rest - a)
            prefix.pop()

    rec([], l)
    out.sort()
    return out


def _op_faces(m: int):
    def faces(a: tuple):
        for i in range(1, len(a)):
            s = a[i - 1] + a[i]
            if s < m:
                yield a[:i - 1] + (s,) + a[i + 1:], (-1 if i % 2 else 1)
    return faces


def op_complex(l: int, m: int) -> ChainComplex:
    """Ordered-partition complex: degree = number of parts, merge adjacent parts below ``m``."""
    if m < 2:
        raise ValueError("bound must be at least 2")
    basis: dict = {}
    for a in ordered_partitions(l, m):
        basis.setdefault(len(a), []).append(a)
    return ChainComplex(basis, _op_faces(m), "OP", description=f"OP({l}, {m})")


def op_homology(l: int, m: int, ring: Ring) -> dict:
    C = op_complex(l, m)
    top = max(C.degrees, default=-1)
    return {n: C.homology(n, ring) for n in range(0, top + 1)}


def op_generator(i: int, m: int, odd: bool) -> tuple:
    """``(1, m-1, ..., 1, m-1)`` with ``2i`` entries, followed by ``1`` when ``odd``."""
    return (1, m - 1) * i + ((1,) if odd else ())


def cycle_to_partition(m: int, t: tuple) -> tuple:
    """Bijection from ``MC(Z_m)`` generators to ordered partitions."""
    return tuple((b - a) % m for a, b in zip(t, t[1:]))
