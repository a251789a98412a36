"""Brute-force reference computations, independent of the package internals.

Tuples are enumerated with ``itertools.product`` over all vertex sequences,
distances come from Floyd–Warshall, and dimensions of the spectral sequence
pages follow from ranks of dense rational matrices via

    dim E^r_p = dim Z^r_p - dim Z^(r-1)_(p-1) - dim B^(r-1)_p + dim B^r_(p-1)

with ``Z^r_p = {x in F_p : dx in F_(p-r)}`` and ``B^s_p = F_p ∩ d F_(p+s)``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

INF = float("inf")


def distances(n: int, edges) -> list:
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in edges:
        if u != v:
            d[u][v] = 1
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][k] + d[k][j] < d[i][j]:
                    d[i][j] = d[i][k] + d[k][j]
    return d


def tuples(n: int, edges, l_max: int) -> dict:
    """Degree ``k`` -> list of ``(tuple, length)`` with length ``<= l_max``."""
    d = distances(n, edges)
    out: dict = {}
    for k in range(l_max + 1):
        rows = []
        for t in itertools.product(range(n), repeat=k + 1):
            if any(a == b for a, b in zip(t, t[1:])):
                continue
            L = sum(d[a][b] for a, b in zip(t, t[1:]))
            if L <= l_max:
                rows.append((t, int(L)))
        out[k] = rows
    return out


def faces(t: tuple):
    k = len(t) - 1
    for i in range(k + 1):
        f = t[:i] + t[i + 1:]
        if all(a != b for a, b in zip(f, f[1:])) and k > 0:
            yield f, (-1) ** i


def rank(rows: list, p: int | None = None) -> int:
    """Rank of a list of row vectors over Q (or GF(p) when ``p`` is given)."""
    m = [list(map(Fraction, r)) if p is None else [x % p for x in r] for r in rows]
    rk, col = 0, 0
    ncols = len(m[0]) if m else 0
    while rk < len(m) and col < ncols:
        piv = next((i for i in range(rk, len(m)) if m[i][col] != 0), None)
        if piv is None:
            col += 1
            continue
        m[rk], m[piv] = m[piv], m[rk]
        inv = 1 / m[rk][col] if p is None else pow(m[rk][col], -1, p)
        for i in range(len(m)):
            if i != rk and m[i][col] != 0:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[rk])]
                if p is not None:
                    m[i] = [x % p for x in m[i]]
        rk += 1
        col += 1
    return rk


def magnitude_ranks(n: int, edges, l_max: int, p: int | None = None) -> dict:
    """``(k, l) -> rank MH_{k,l}`` over Q or GF(p)."""
    T = tuples(n, edges, l_max)
    out = {}
    for l in range(l_max + 1):
        basis = {k: [t for t, L in T[k] if L == l] for k in T}

        def dmat(k):
            if k == 0 or not basis.get(k) or not basis.get(k - 1):
                return None
            idx = {t: i for i, t in enumerate(basis[k - 1])}
            rows = []
            for t in basis[k]:
                row = [0] * len(basis[k - 1])
                for f, s in faces(t):
                    if f in idx:
                        row[idx[f]] += s
                rows.append(row)
            return rows

        for k in range(l + 1):
            dim = len(basis.get(k, []))
            if not dim:
                continue
            a, b = dmat(k), dmat(k + 1)
            rk_out = rank(a, p) if a else 0
            rk_in = rank(b, p) if b else 0
            h = dim - rk_out - rk_in
            if h:
                out[(k, l)] = h
    return out


class NaivePages:
    """Dimensions of ``E^r_{p,q}`` of the length filtration truncated at ``l_max``."""

    def __init__(self, n: int, edges, l_max: int):
        self.L = l_max
        T = tuples(n, edges, l_max)
        self.gens = {k: sorted(T[k], key=lambda x: (x[1], x[0])) for k in T}
        self.idx = {k: {t: i for i, (t, _) in enumerate(v)} for k, v in self.gens.items()}
        self._cache: dict = {}

    def _image_rows(self, k: int, hi: int, above: int) -> list:
        """Rows ``d(x)`` for generators ``x`` of degree ``k`` with level ``<= hi``,
        keeping only coordinates with level ``> above``."""
        if k == 0 or k not in self.gens or k - 1 not in self.gens:
            return []
        tgt = self.gens[k - 1]
        rows = []
        for t, L in self.gens[k]:
            if L > hi:
                continue
            row = [0] * len(tgt)
            for f, s in faces(t):
                j = self.idx[k - 1].get(f)
                if j is not None and tgt[j][1] > above:
                    row[j] += s
            rows.append(row)
        return rows

    def _rank(self, k, hi, above):
        key = (k, hi, above)
        if key not in self._cache:
            rows = self._image_rows(k, hi, above)
            self._cache[key] = rank(rows) if rows and rows[0] else 0
        return self._cache[key]

    def _dimF(self, k, p):
        return sum(1 for _, L in self.gens.get(k, []) if L <= p)

    def Z(self, k, r, p):
        if p < 0:
            return 0
        return self._dimF(k, p) - self._rank(k, p, p - r)

    def B(self, k, s, p):
        if p < 0:
            return 0
        hi = min(p + s, self.L)
        return self._rank(k + 1, hi, -1) - self._rank(k + 1, hi, p)

    def dim(self, r: int, p: int, q: int) -> int:
        k = p + q
        if r == 0:
            return sum(1 for _, L in self.gens.get(k, []) if L == p)
        return self.Z(k, r, p) - self.Z(k, r - 1, p - 1) - self.B(k, r - 1, p) + self.B(k, r, p - 1)
