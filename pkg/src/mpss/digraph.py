"""Finite directed graphs, their shortest-path metric, and graph constructions.

Vertices are the integers ``0 .. n-1``.  Loops may be stored but are ignored
by the metric and by every chain complex built on top of a graph.  Parallel
edges do not exist: the edge set is a set.
"""

from __future__ import annotations

import itertools
import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, Sequence


@total_ordering
class Infinity:
    """Distance between vertices with no directed path.

    Saturates under addition and compares above every integer.
    """

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("mpss-infinity")

    def __lt__(self, other):
        return False

    def __gt__(self, other):
        return other is not self

    def __add__(self, other):
        return self

    __radd__ = __add__


INF = Infinity()


def is_finite(d) -> bool:
    return d is not INF


@dataclass(frozen=True)
class DiGraph:
    """A finite digraph on vertices ``0 .. n-1``.

    ``layout`` is a human-readable description of how the vertex indices
    were assigned by the constructor that built the graph.
    """

    n: int
    edges: frozenset
    labels: tuple | None = None
    name: str = field(default="", compare=False)
    layout: str = field(default="", compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
        if self.labels is not None and len(self.labels) != self.n:
            raise ValueError("labels must have one entry per vertex")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels=None, name="", layout=""):
        """Build a graph, rejecting repeated edges."""
        seen = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if (u, v) in seen:
                raise ValueError(f"parallel edge ({u}, {v})")
            seen.add((u, v))
        return cls(n, frozenset(seen), tuple(labels) if labels is not None else None, name, layout)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    @cached_property
    def proper_edges(self) -> tuple:
        """Edges that are not loops, sorted."""
        return tuple(sorted((u, v) for u, v in self.edges if u != v))

    @cached_property
    def successors(self) -> tuple:
        out = [[] for _ in range(self.n)]
        for u, v in self.proper_edges:
            out[u].append(v)
        return tuple(tuple(s) for s in out)

    @cached_property
    def dist(self) -> tuple:
        """Shortest-path distances as a tuple of rows; unreachable is ``INF``."""
        rows = []
        for s in range(self.n):
            row = [INF] * self.n
            row[s] = 0
            queue = deque([s])
            while queue:
                u = queue.popleft()
                for v in self.successors[u]:
                    if row[v] is INF:
                        row[v] = row[u] + 1
                        queue.append(v)
            rows.append(tuple(row))
        return tuple(rows)

    def distance(self, x: int, y: int):
        return self.dist[x][y]

    def diameter(self) -> int:
        """Largest finite distance (0 for graphs with at most one vertex)."""
        return max((d for row in self.dist for d in row if d is not INF), default=0)

    @cached_property
    def reachable_pairs(self) -> tuple:
        """For each vertex, the vertices at finite positive distance."""
        return tuple(
            tuple(y for y in range(self.n) if y != x and self.dist[x][y] is not INF)
            for x in range(self.n)
        )

    def induced_subgraph(self, vertices: Iterable[int]) -> tuple["DiGraph", tuple]:
        """Induced subgraph on ``vertices`` (kept in increasing order) and the inclusion."""
        vs = sorted(set(vertices))
        pos = {v: i for i, v in enumerate(vs)}
        edges = frozenset((pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos)
        labels = tuple(self.label(v) for v in vs)
        sub = DiGraph(len(vs), edges, labels, name=f"{self.name}[{','.join(map(str, vs))}]")
        return sub, tuple(vs)

    def __repr__(self):
        tag = self.name or "DiGraph"
        return f"<{tag}: {self.n} vertices, {len(self.proper_edges)} edges>"


def shortest_path_metric(G: DiGraph) -> tuple:
    return G.dist


@dataclass(frozen=True)
class GraphMap:
    """A vertex map between digraphs; validity is checked by :func:`validate_map`."""

    source: DiGraph
    target: DiGraph
    images: tuple

    def __post_init__(self):
        if len(self.images) != self.source.n:
            raise ValueError("a map needs one image per source vertex")
        for v in self.images:
            if not 0 <= v < self.target.n:
                raise ValueError(f"image {v} is not a target vertex")

    def __call__(self, v: int) -> int:
        return self.images[v]

    def compose(self, after: "GraphMap") -> "GraphMap":
        """``after ∘ self``."""
        if after.source != self.target:
            raise ValueError("maps are not composable")
        return GraphMap(self.source, after.target, tuple(after.images[v] for v in self.images))


def identity_map(G: DiGraph) -> GraphMap:
    return GraphMap(G, G, tuple(G.vertices))


def constant_map(G: DiGraph, H: DiGraph, v: int) -> GraphMap:
    return GraphMap(G, H, (v,) * G.n)


def inclusion_map(A: DiGraph, X: DiGraph, vertices: Sequence[int]) -> GraphMap:
    return GraphMap(A, X, tuple(vertices))


def validate_map(f: GraphMap) -> tuple[bool, tuple | None]:
    """Check that every edge goes to an edge or collapses to a vertex.

    Returns ``(True, None)`` or ``(False, offending_edge)``.
    """
    for u, v in sorted(f.source.edges):
        a, b = f(u), f(v)
        if a != b and not f.target.has_edge(a, b):
            return False, (u, v)
    return True, None


def r_homotopy_gap(f: GraphMap, g: GraphMap):
    """``max_x d(f(x), g(x))``; ``INF`` if some pair is unreachable."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps have different sources or targets")
    dist = f.target.dist
    return max((dist[f(x)][g(x)] for x in f.source.vertices), default=0)


def transpose(G: DiGraph) -> DiGraph:
    return DiGraph(G.n, frozenset((v, u) for u, v in G.edges), G.labels,
                   name=f"transpose({G.name})", layout=G.layout)


# -- products -----------------------------------------------------------------


def box_product(G: DiGraph, H: DiGraph) -> tuple[DiGraph, GraphMap, GraphMap]:
    """Cartesian product; vertex ``(g, h)`` has index ``g * H.n + h``."""
    m = H.n

    def idx(g, h):
        return g * m + h

    edges = set()
    for g, g2 in G.edges:
        for h in H.vertices:
            edges.add((idx(g, h), idx(g2, h)))
    for h, h2 in H.edges:
        for g in G.vertices:
            edges.add((idx(g, h), idx(g, h2)))
    labels = tuple(f"({G.label(g)},{H.label(h)})" for g in G.vertices for h in H.vertices)
    P = DiGraph(G.n * H.n, frozenset(edges), labels, name=f"{G.name or 'G'}□{H.name or 'H'}",
                layout="(g, h) -> g * |V(H)| + h")
    pg = GraphMap(P, G, tuple(g for g in G.vertices for _ in H.vertices))
    ph = GraphMap(P, H, tuple(h for _ in G.vertices for h in H.vertices))
    return P, pg, ph


def strong_product(G: DiGraph, H: DiGraph) -> DiGraph:
    """Strong product, same vertex layout as :func:`box_product`."""
    P, _, _ = box_product(G, H)
    edges = set(P.edges)
    for g, g2 in G.proper_edges:
        for h, h2 in H.proper_edges:
            edges.add((g * H.n + h, g2 * H.n + h2))
    return DiGraph(P.n, frozenset(edges), P.labels, name=f"{G.name}⊠{H.name}", layout=P.layout)


# -- standard families --------------------------------------------------------


def point() -> DiGraph:
    return DiGraph(1, frozenset(), ("*",), name="point", layout="single vertex")


def empty_graph() -> DiGraph:
    return DiGraph(0, frozenset(), (), name="empty")


def directed_cycle(m: int) -> DiGraph:
    """Vertices ``0 .. m-1`` with edges ``i -> i+1 mod m``; ``m = 1`` is a point."""
    if m < 1:
        raise ValueError("cycle length must be at least 1")
    edges = frozenset((i, (i + 1) % m) for i in range(m)) if m > 1 else frozenset()
    return DiGraph(m, edges, None, name=f"Z{m}", layout="i -> i+1 mod m")


def bidirected_cycle(m: int, n: int) -> DiGraph:
    """Two directed paths of lengths ``m`` (top) and ``n`` (bottom) with shared ends.

    Vertex 0 is the common initial vertex, ``1 .. m-1`` the top interior,
    ``m`` the common terminal vertex, and ``m+1 .. m+n-1`` the bottom
    interior in path order.  With ``n = 1`` the bottom path is the edge
    ``0 -> m``, so ``C(m, 1)`` has vertices ``a_i = i``.
    """
    if m < 1 or n < 1:
        raise ValueError("path lengths must be at least 1")
    top = list(range(m + 1))
    bottom = [0] + list(range(m + 1, m + n)) + [m]
    edges = set(zip(top, top[1:])) | set(zip(bottom, bottom[1:]))
    return DiGraph(m + n, frozenset(edges), None, name=f"C{m},{n}",
                   layout="0 initial; 1..m-1 top interior; m terminal; m+1..m+n-1 bottom interior")


def interval_I() -> DiGraph:
    """``-1 -> 0 <- +1`` as indices 0, 1, 2."""
    return DiGraph(3, frozenset({(0, 1), (2, 1)}), ("-1", "0", "+1"), name="I",
                   layout="-1,0,+1 -> 0,1,2")


def interval_J() -> DiGraph:
    """``-2 -> -1 <- 0 -> 1 <- 2`` as indices 0 .. 4."""
    return DiGraph(5, frozenset({(0, 1), (2, 1), (2, 3), (4, 3)}), ("-2", "-1", "0", "1", "2"),
                   name="J", layout="-2..2 -> 0..4")


def suspension(X: DiGraph) -> DiGraph:
    """Add two vertices with an edge from each of them to every old vertex.

    Old vertices keep their indices; the new ``-1`` is ``n`` and ``+1`` is ``n+1``.
    """
    n = X.n
    edges = set(X.edges)
    for s in (n, n + 1):
        for v in range(n):
            edges.add((s, v))
    labels = tuple(X.label(v) for v in range(n)) + (f"-1[{n}]", f"+1[{n + 1}]")
    return DiGraph(n + 2, frozenset(edges), labels, name=f"S({X.name})",
                   layout="old vertices first, then -1, then +1")


def sphere(n: int) -> DiGraph:
    """The ``(n+1)``-fold suspension of the empty graph."""
    if n < 0:
        raise ValueError("sphere dimension must be non-negative")
    G = empty_graph()
    for _ in range(n + 1):
        G = suspension(G)
    return DiGraph(G.n, G.edges, G.labels, name=f"S^{n}", layout="iterated suspension of the empty graph")


def cone(X: DiGraph) -> tuple[DiGraph, GraphMap]:
    """Cone with the base at level -1.

    ``(x, -1) -> x``, ``(x, 0) -> n + x``, apex ``+1 -> 2n``.  Returns the
    cone and the inclusion of ``X`` as the level -1 copy.
    """
    n = X.n
    edges = set()
    for u, v in X.edges:
        if u != v:
            edges.add((u, v))
            edges.add((n + u, n + v))
    for x in range(n):
        edges.add((x, n + x))
        edges.add((2 * n, n + x))
    labels = tuple(f"({X.label(x)},-1)" for x in range(n)) + tuple(
        f"({X.label(x)},0)" for x in range(n)) + ("+1",)
    C = DiGraph(2 * n + 1, frozenset(edges), labels, name=f"C({X.name})",
                layout="(x,-1) -> x; (x,0) -> n+x; apex -> 2n")
    return C, GraphMap(X, C, tuple(range(n)))


def cone_fold_map(X: DiGraph) -> GraphMap:
    """``(x, j) -> (x, max(j, 0))`` on the cone, apex fixed."""
    C, _ = cone(X)
    n = X.n
    return GraphMap(C, C, tuple(n + x for x in range(n)) + tuple(n + x for x in range(n)) + (2 * n,))


def cycle_contraction(n: int, m: int) -> GraphMap:
    """``Z_n -> Z_m`` collapsing the last ``n - m`` edges (``n >= m``)."""
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    return GraphMap(directed_cycle(n), directed_cycle(m), tuple(min(i, m - 1) for i in range(n)))


def bicycle_short_path(m: int, n: int) -> tuple:
    """Vertices of the first ``min(m,n) - 1`` edges of the shorter path of ``C(m, n)``."""
    if m >= n:
        return (0,) + tuple(range(m + 1, m + n))
    return tuple(range(m))


def bicycle_collapse(m: int, n: int) -> GraphMap:
    """``C(m, n) -> C(max, 1)`` contracting all edges of the shorter path but its last."""
    src = bidirected_cycle(m, n)
    big = max(m, n)
    tgt = bidirected_cycle(big, 1)
    if m >= n:
        images = tuple(range(m + 1)) + (0,) * (n - 1)
    else:
        images = (0,) + (0,) * (m - 1) + (n,) + tuple(range(1, n))
    return GraphMap(src, tgt, images)


FAMILIES = ("directed_cycle", "bidirected_cycle", "interval_I", "interval_J", "sphere", "point")


def standard_family(kind: str, *params: int) -> DiGraph:
    if kind == "directed_cycle":
        return directed_cycle(*params)
    if kind == "bidirected_cycle":
        return bidirected_cycle(*params)
    if kind == "interval_I":
        return interval_I()
    if kind == "interval_J":
        return interval_J()
    if kind == "sphere":
        return sphere(*params)
    if kind == "point":
        return point()
    raise ValueError(f"unknown family {kind!r}")


# -- reach, cofibrations, pushouts -------------------------------------------


def reach(X: DiGraph, A: Iterable[int]) -> frozenset:
    """Vertices of ``X`` at finite distance from some vertex of ``A``."""
    A = set(A)
    return frozenset(x for x in X.vertices if any(X.dist[a][x] is not INF for a in A))


@dataclass(frozen=True)
class CofibrationVerdict:
    ok: bool
    projection: dict | None = None
    violation: str | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


def is_cofibration(X: DiGraph, A: Iterable[int]) -> CofibrationVerdict:
    """Decide whether the induced subgraph on ``A`` is a cofibration into ``X``.

    Condition (1): no edge enters ``A`` from outside.  Condition (2): every
    vertex ``x`` reachable from ``A`` has a vertex ``π(x)`` in ``A`` through
    which every shortest path from ``A`` to ``x`` may be routed.  The search
    for ``π`` is exhaustive; the first candidate in vertex order is recorded.
    """
    A = frozenset(A)
    for u, v in sorted(X.proper_edges):
        if u not in A and v in A:
            return CofibrationVerdict(False, violation="edge enters the subgraph", witness=(u, v))
    d = X.dist
    proj = {}
    for x in sorted(reach(X, A)):
        if x in A:
            proj[x] = x
            continue
        found = None
        for c in sorted(A):
            if all(d[a][x] == d[a][c] + d[c][x] for a in A):
                found = c
                break
        if found is None:
            return CofibrationVerdict(False, violation="no projection vertex", witness=(x,))
        proj[x] = found
    return CofibrationVerdict(True, projection=proj)


def pushout(i: GraphMap, f: GraphMap) -> tuple[DiGraph, GraphMap, GraphMap]:
    """Pushout of ``X <-i- A -f-> Y`` for an induced inclusion ``i``.

    Vertices: ``V(Y)`` in order, then ``V(X) \\ i(A)`` in order.  Edges are
    all images of edges of ``X`` and ``Y``; collapsed edges become loops
    (which every metric construction ignores).  Returns ``(P, g, j)`` with
    ``g: X -> P`` and ``j: Y -> P``.
    """
    A, X, Y = i.source, i.target, f.target
    if f.source != A:
        raise ValueError("the two maps must share their source")
    img = i.images
    if len(set(img)) != len(img):
        raise ValueError("i is not injective")
    for u, v in A.edges:
        if not X.has_edge(img[u], img[v]):
            raise ValueError("i is not a graph map")
    inv = {x: a for a, x in enumerate(img)}
    for u, v in X.edges:
        if u in inv and v in inv and not A.has_edge(inv[u], inv[v]):
            raise ValueError("i is not an induced inclusion")
    rest = [x for x in X.vertices if x not in inv]
    g_img = []
    pos = {x: Y.n + k for k, x in enumerate(rest)}
    for x in X.vertices:
        g_img.append(f(inv[x]) if x in inv else pos[x])
    edges = set(Y.edges)
    for u, v in X.edges:
        edges.add((g_img[u], g_img[v]))
    labels = tuple(Y.label(y) for y in Y.vertices) + tuple(X.label(x) for x in rest)
    P = DiGraph(Y.n + len(rest), frozenset(edges), labels, name=f"pushout({X.name},{Y.name})",
                layout="V(Y) first, then V(X) minus A in order")
    return P, GraphMap(X, P, tuple(g_img)), GraphMap(Y, P, tuple(range(Y.n)))


def cone_pushout_to_suspension(X: DiGraph) -> tuple[DiGraph, GraphMap, GraphMap, GraphMap]:
    """Pushout of the cone inclusion along ``X -> point``.

    Returns ``(P, g, j, iso)`` where ``iso: P -> S(X)`` is the evident
    identification (a graph map that is bijective on vertices).
    """
    C, inc = cone(X)
    P, g, j = pushout(inc, constant_map(X, point(), 0))
    n = X.n
    S = suspension(X)
    # P: 0 is the collapsed base, 1..n the level-0 copy, n+1 the apex
    iso = GraphMap(P, S, (n,) + tuple(range(n)) + (n + 1,))
    return P, g, j, iso


def loop_free(G: DiGraph) -> DiGraph:
    return DiGraph(G.n, frozenset(G.proper_edges), G.labels, G.name, G.layout)


# -- file formats ------------------------------------------------------------


def parse_graph_text(text: str) -> DiGraph:
    """Parse ``digraph <n>`` followed by one ``u v`` edge per line."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 2 or head[0] != "digraph":
        raise ValueError("first line must be 'digraph <n>'")
    n = int(head[1])
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise ValueError(f"bad edge line {ln!r}")
        edges.append((int(parts[0]), int(parts[1])))
    return DiGraph.from_edges(n, edges, name="input")


def parse_graph_json(text: str) -> DiGraph:
    data = json.loads(text)
    try:
        n = int(data["vertices"])
        edges = [tuple(e) for e in data["edges"]]
    except (KeyError, TypeError) as exc:
        raise ValueError("graph JSON needs 'vertices' and 'edges'") from exc
    if any(len(e) != 2 for e in edges):
        raise ValueError("edges must be pairs")
    return DiGraph.from_edges(n, edges, data.get("labels"), name="input")


def load_graph(path: str) -> DiGraph:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return parse_graph_json(text)
    return parse_graph_text(text)


def graph_to_json(G: DiGraph) -> dict:
    out = {"vertices": G.n, "edges": [list(e) for e in sorted(G.edges)]}
    if G.labels is not None:
        out["labels"] = list(G.labels)
    return out


def all_maps(G: DiGraph, H: DiGraph):
    """Every valid graph map ``G -> H`` (brute force, for tiny graphs)."""
    for images in itertools.product(range(H.n), repeat=G.n):
        f = GraphMap(G, H, images)
        if validate_map(f)[0]:
            yield f
