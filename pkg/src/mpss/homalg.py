"""Exact linear algebra over Z, Q and F_p.

Matrices are stored as sparse columns (``dict`` row -> value).  Homology
ranks use sparse elimination; Smith forms with transforms and subquotients
over Z use dense arithmetic and are meant for small blocks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence


# -- rings ---------------------------------------------------------------------


class Ring:
    name = "?"
    is_field = False

    def coerce(self, x):
        raise NotImplementedError

    def div(self, a, b):
        """Exact division ``a / b`` (caller guarantees it exists)."""
        raise NotImplementedError

    def divmod(self, a, b):
        raise NotImplementedError

    def is_unit(self, x) -> bool:
        raise NotImplementedError

    def size(self, x) -> int:
        """Euclidean size used for pivot choice; 0 only for zero."""
        raise NotImplementedError

    def normalize_unit(self, x):
        """Unit ``u`` such that ``u * x`` is the canonical associate of ``x``."""
        raise NotImplementedError

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return type(self) is type(other) and self.name == other.name

    def __hash__(self):
        return hash(self.name)


class Integers(Ring):
    name = "Z"

    def coerce(self, x):
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not an integer")
            return x.numerator
        return int(x)

    def div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError(f"{b} does not divide {a}")
        return q

    def divmod(self, a, b):
        return divmod(a, b)

    def is_unit(self, x):
        return x == 1 or x == -1

    def size(self, x):
        return abs(x)

    def normalize_unit(self, x):
        return -1 if x < 0 else 1


def _q(x):
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


class Rationals(Ring):
    name = "Q"
    is_field = True

    def coerce(self, x):
        return _q(Fraction(x))

    def div(self, a, b):
        if b == 1:
            return a
        if b == -1:
            return -a
        return _q(Fraction(a) / b)

    def divmod(self, a, b):
        return self.div(a, b), 0

    def is_unit(self, x):
        return x != 0

    def size(self, x):
        return 0 if x == 0 else 1

    def normalize_unit(self, x):
        return self.div(1, x)


class PrimeField(Ring):
    is_field = True

    def __init__(self, p: int):
        if p < 2 or any(p % k == 0 for k in range(2, int(math.isqrt(p)) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"F{p}"

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def div(self, a, b):
        return a * pow(b, -1, self.p) % self.p

    def divmod(self, a, b):
        return self.div(a, b), 0

    def is_unit(self, x):
        return x % self.p != 0

    def size(self, x):
        return 0 if x % self.p == 0 else 1

    def normalize_unit(self, x):
        return pow(x, -1, self.p)


ZZ = Integers()
QQ = Rationals()


def parse_ring(text: str) -> Ring:
    """``Z``, ``Q``, ``Fp:<p>`` (also ``F<p>``)."""
    s = text.strip()
    if s in ("Z", "ZZ"):
        return ZZ
    if s in ("Q", "QQ"):
        return QQ
    if s.startswith("Fp:"):
        return PrimeField(int(s[3:]))
    if s.startswith("F") and s[1:].isdigit():
        return PrimeField(int(s[1:]))
    raise ValueError(f"unknown ring {text!r}")


def ring_label(R: Ring) -> str:
    return f"Fp:{R.p}" if isinstance(R, PrimeField) else R.name


def _reduce(R: Ring, x):
    return x % R.p if isinstance(R, PrimeField) else x


# -- homology groups -------------------------------------------------------------


@dataclass(frozen=True)
class HomologyGroup:
    """``R^free_rank ⊕ ⊕ R/(t)`` with ``t_1 | t_2 | ...`` all > 1."""

    free_rank: int = 0
    torsion: tuple = ()

    @property
    def rank(self) -> int:
        return self.free_rank

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def is_free(self) -> bool:
        return not self.torsion

    def order_list(self) -> list:
        """Orders of the cyclic summands, 0 for a free summand."""
        return [0] * self.free_rank + list(self.torsion)

    def __add__(self, other: "HomologyGroup") -> "HomologyGroup":
        return HomologyGroup(self.free_rank + other.free_rank,
                             divisibility_chain(self.torsion + other.torsion))

    def describe(self, R: Ring | None = None) -> str:
        sym = R.name if R is not None else "R"
        parts = []
        if self.free_rank:
            parts.append(sym if self.free_rank == 1 else f"{sym}^{self.free_rank}")
        parts += [f"{sym}/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.describe()


def divisibility_chain(orders: Iterable[int]) -> tuple:
    """Invariant factors (> 1) of a direct sum of cyclic groups of the given orders."""
    ns = [abs(int(n)) for n in orders if abs(int(n)) > 1]
    for i in range(len(ns)):
        for j in range(i + 1, len(ns)):
            g = math.gcd(ns[i], ns[j])
            ns[i], ns[j] = g, ns[i] * ns[j] // g
    return tuple(sorted(n for n in ns if n > 1))


def group_tensor(A: HomologyGroup, B: HomologyGroup) -> HomologyGroup:
    tors = [d for d in A.torsion for _ in range(B.free_rank)]
    tors += [e for e in B.torsion for _ in range(A.free_rank)]
    tors += [math.gcd(d, e) for d in A.torsion for e in B.torsion]
    return HomologyGroup(A.free_rank * B.free_rank, divisibility_chain(tors))


def group_tor(A: HomologyGroup, B: HomologyGroup) -> HomologyGroup:
    return HomologyGroup(0, divisibility_chain(math.gcd(d, e) for d in A.torsion for e in B.torsion))


def direct_sum(groups: Iterable[HomologyGroup]) -> HomologyGroup:
    out = HomologyGroup()
    for g in groups:
        out = out + g
    return out


# -- matrices --------------------------------------------------------------------


class ExactMatrix:
    """Sparse matrix with entries in ``ring``; ``cols[j]`` maps row -> value."""

    __slots__ = ("nrows", "ncols", "ring", "cols")

    def __init__(self, nrows: int, ncols: int, ring: Ring, cols: Sequence[dict] | None = None):
        self.nrows, self.ncols, self.ring = nrows, ncols, ring
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError("column count mismatch")
        clean = []
        for c in cols:
            d = {}
            for i, v in c.items():
                if not 0 <= i < nrows:
                    raise ValueError(f"row index {i} out of range")
                v = _reduce(ring, ring.coerce(v))
                if v != 0:
                    d[i] = v
            clean.append(d)
        self.cols = clean

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence], ring: Ring = ZZ, ncols: int | None = None):
        nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        cols = [{i: rows[i][j] for i in range(nrows) if rows[i][j] != 0} for j in range(ncols)]
        return cls(nrows, ncols, ring, cols)

    @classmethod
    def zero(cls, nrows, ncols, ring):
        return cls(nrows, ncols, ring)

    @classmethod
    def identity(cls, n, ring):
        return cls(n, n, ring, [{j: 1} for j in range(n)])

    def dense(self) -> list:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i][j] = v
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other):
        return (isinstance(other, ExactMatrix) and self.nrows == other.nrows
                and self.ncols == other.ncols and self.cols == other.cols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        R = self.ring
        cols = []
        for c in other.cols:
            acc = {}
            for k, v in c.items():
                for i, w in self.cols[k].items():
                    acc[i] = acc.get(i, 0) + v * w
            cols.append({i: _q(x) for i, x in acc.items()})
        return ExactMatrix(self.nrows, other.ncols, R, cols)

    def apply(self, vec: dict) -> dict:
        acc = {}
        for k, v in vec.items():
            for i, w in self.cols[k].items():
                acc[i] = acc.get(i, 0) + v * w
        return {i: x for i, x in ((i, _reduce(self.ring, _q(x))) for i, x in acc.items()) if x != 0}

    def transpose(self) -> "ExactMatrix":
        cols = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return ExactMatrix(self.ncols, self.nrows, self.ring, cols)

    def to_json(self) -> str:
        ents = [[_json_scalar(x) for x in row] for row in self.dense()]
        return json.dumps({"rows": self.nrows, "cols": self.ncols, "entries": ents})

    @classmethod
    def from_json(cls, text: str, ring: Ring = ZZ) -> "ExactMatrix":
        data = json.loads(text)
        rows = [[ring.coerce(Fraction(str(x))) for x in r] for r in data["entries"]]
        if len(rows) != data["rows"]:
            raise ValueError("row count does not match entries")
        return cls.from_dense(rows, ring, ncols=data["cols"])

    def __repr__(self):
        return f"ExactMatrix({self.nrows}x{self.ncols} over {self.ring}, {self.dense()})"


def _json_scalar(x):
    return x if isinstance(x, int) else str(x)


# -- Smith normal form (dense) ---------------------------------------------------------


def _identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def smith_normal_form(M: ExactMatrix):
    """Return ``(D, U, V)`` with ``U @ M @ V == D`` diagonal, ``d_i | d_{i+1}``.

    Pivot rule: smallest Euclidean size in the active block, ties broken by
    lowest row then lowest column.
    """
    D, U, V = _snf_dense(M.dense(), M.ring, with_transforms=True)
    R = M.ring
    return (ExactMatrix.from_dense(D, R, M.ncols), ExactMatrix.from_dense(U, R, M.nrows),
            ExactMatrix.from_dense(V, R, M.ncols))


def _snf_dense(A, R: Ring, with_transforms=False):
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U = _identity(m) if with_transforms else None
    V = _identity(n) if with_transforms else None
    red = (lambda x: x % R.p) if isinstance(R, PrimeField) else _q

    def row_op(dst, src, f):  # row dst -= f * row src
        if f == 0:
            return
        rs, rd = A[src], A[dst]
        for j in range(n):
            if rs[j]:
                rd[j] = red(rd[j] - f * rs[j])
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(m):
                if us[j]:
                    ud[j] = red(ud[j] - f * us[j])

    def col_op(dst, src, f):  # col dst -= f * col src
        if f == 0:
            return
        for row in A:
            if row[src]:
                row[dst] = red(row[dst] - f * row[src])
        if V is not None:
            for row in V:
                if row[src]:
                    row[dst] = red(row[dst] - f * row[src])

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    if row[j]:
                        s = R.size(row[j])
                        if best is None or s < best[0]:
                            best = (s, i, j)
            if best is None:
                break
            _, i, j = best
            if i != t:
                swap_rows(i, t)
            if j != t:
                swap_cols(j, t)
            p = A[t][t]
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, R.divmod(A[i][t], p)[0])
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, R.divmod(A[t][j], p)[0])
            if any(A[i][t] for i in range(t + 1, m)) or any(A[t][j] for j in range(t + 1, n)):
                continue
            bad = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] and R.divmod(A[i][j], p)[1] != 0:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_op(t, bad, -1)
        if best is None:
            break
        u = R.normalize_unit(A[t][t])
        if u != 1:
            A[t] = [red(x * u) for x in A[t]]
            if U is not None:
                U[t] = [red(x * u) for x in U[t]]
    return A, U, V


def invariant_factors_dense(A, R: Ring) -> list:
    D, _, _ = _snf_dense(A, R)
    out = []
    for i in range(min(len(D), len(D[0]) if D else 0)):
        if D[i][i] == 0:
            break
        out.append(D[i][i])
    return out


# -- sparse elimination ------------------------------------------------------------------


def _columns_of(M) -> tuple[list, int]:
    if isinstance(M, ExactMatrix):
        return M.cols, M.nrows
    cols, nrows = M
    return cols, nrows


def sparse_invariant_factors(cols: Sequence[dict], nrows: int, R: Ring) -> list:
    """Nonzero invariant factors of the matrix with the given sparse columns.

    Unit pivots are eliminated sparsely first (fewest-entry rows preferred);
    whatever is left is handed to the dense Smith form.  Over a field every
    factor is 1, so the length of the result is the rank.
    """
    rows: dict = {}
    colrows: dict = {}
    red = (lambda x: x % R.p) if isinstance(R, PrimeField) else _q
    for j, c in enumerate(cols):
        for i, v in c.items():
            v = red(v)
            if v != 0:
                rows.setdefault(i, {})[j] = v
                colrows.setdefault(j, set()).add(i)
    units = 0
    progress = True
    while progress and colrows:
        progress = False
        for j in sorted(colrows, key=lambda c: len(colrows[c])):
            rs = colrows.get(j)
            if not rs:
                colrows.pop(j, None)
                continue
            piv = None
            for i in rs:
                v = rows[i][j]
                if R.is_unit(v):
                    key = (0 if v in (1, -1) else 1, len(rows[i]), i)
                    if piv is None or key < piv[0]:
                        piv = (key, i)
            if piv is None:
                continue
            p = piv[1]
            prow = rows.pop(p)
            pv = prow[j]
            for i in list(rs):
                if i == p:
                    continue
                row = rows[i]
                f = R.div(row[j], pv)
                for k, w in prow.items():
                    x = red(row.get(k, 0) - f * w)
                    if x != 0:
                        if k not in row:
                            colrows.setdefault(k, set()).add(i)
                        row[k] = x
                    else:
                        if k in row:
                            del row[k]
                            colrows[k].discard(i)
                if not row:
                    del rows[i]
            for k in prow:
                if k in colrows:
                    colrows[k].discard(p)
            colrows.pop(j, None)
            units += 1
            progress = True
        colrows = {c: s for c, s in colrows.items() if s}
    rest = [1] * units
    if rows:
        if R.is_field:
            # the remainder has no units only if it is empty over a field
            raise AssertionError("field elimination left a nonzero remainder")
        ri = sorted(rows)
        ci = sorted({k for r in rows.values() for k in r})
        cpos = {c: t for t, c in enumerate(ci)}
        dense = [[0] * len(ci) for _ in ri]
        for a, i in enumerate(ri):
            for k, v in rows[i].items():
                dense[a][cpos[k]] = v
        rest += [abs(x) for x in invariant_factors_dense(dense, R)]
    return sorted(rest)


def matrix_rank(M, R: Ring | None = None) -> int:
    cols, nrows = _columns_of(M)
    R = R or M.ring
    field = R if R.is_field else QQ
    return len(sparse_invariant_factors(cols, nrows, field))


def check_composable_zero(dk: ExactMatrix, dk1: ExactMatrix):
    if dk.ncols != dk1.nrows:
        raise ValueError("boundary maps are not composable")
    if not (dk @ dk1).is_zero():
        raise ValueError("d∘d is not zero")


def homology_of_pair(dk: ExactMatrix, dk1: ExactMatrix, R: Ring | None = None,
                     check: bool = True) -> HomologyGroup:
    """Homology at the middle of ``C_{k+1} --dk1--> C_k --dk--> C_{k-1}``."""
    R = R or dk.ring
    if check:
        check_composable_zero(dk, dk1)
    n = dk.ncols
    rk = len(sparse_invariant_factors(dk.cols, dk.nrows, R))
    f1 = sparse_invariant_factors(dk1.cols, dk1.nrows, R)
    free = n - rk - len(f1)
    return HomologyGroup(free, tuple(t for t in f1 if t != 1) if not R.is_field else ())


def homology_from_columns(ncells: int, dk_cols, dk_rows: int, dk1_cols, dk1_rows: int,
                          R: Ring) -> HomologyGroup:
    rk = len(sparse_invariant_factors(dk_cols, dk_rows, R))
    f1 = sparse_invariant_factors(dk1_cols, dk1_rows, R)
    return HomologyGroup(ncells - rk - len(f1), tuple(t for t in f1 if t != 1) if not R.is_field else ())


def class_generates(dk1: ExactMatrix, z: dict, R: Ring) -> bool:
    """True if ``[z]`` generates the homology at ``C_k``, assumed to be ``R`` (rank one, no torsion).

    Over Z: ``[z]`` generates exactly when ``C_k / (B + Rz)`` is torsion-free of
    rank ``dim C_k - rank B - 1``, which is read off the invariant factors
    of the boundary matrix augmented by ``z``.
    """
    base = sparse_invariant_factors(dk1.cols, dk1.nrows, R)
    aug = sparse_invariant_factors(list(dk1.cols) + [z], dk1.nrows, R)
    return len(aug) == len(base) + 1 and all(t == 1 for t in aug)


# -- kernels ----------------------------------------------------------------------------


def _field_reduce(F: Ring, vec: dict, pivots: dict, track: dict | None):
    """Subtract pivot vectors until the largest index of ``vec`` is not a pivot."""
    red = (lambda x: x % F.p) if isinstance(F, PrimeField) else _q
    while vec:
        low = max(vec)
        entry = pivots.get(low)
        if entry is None:
            return low
        pvec, pcombo = entry
        f = F.div(vec[low], pvec[low])
        for k, w in pvec.items():
            x = red(vec.get(k, 0) - f * w)
            if x != 0:
                vec[k] = x
            else:
                vec.pop(k, None)
        if track is not None:
            for k, w in pcombo.items():
                x = red(track.get(k, 0) - f * w)
                if x != 0:
                    track[k] = x
                else:
                    track.pop(k, None)
    return None


def kernel_basis(cols: Sequence[dict], R: Ring) -> list:
    """Basis of ``{x : sum_j x_j cols[j] = 0}`` as sparse vectors over column indices.

    Over a field the basis comes from column reduction in index order, so
    the vectors found among the first ``t`` columns span the kernel of
    that prefix.  Over Z it comes from a dense Smith form.
    """
    if R.is_field:
        return _field_kernel(cols, R)[0]
    n = len(cols)
    rows_used = sorted({i for c in cols for i in c})
    if n == 0:
        return []
    pos = {i: t for t, i in enumerate(rows_used)}
    dense = [[0] * n for _ in rows_used]
    for j, c in enumerate(cols):
        for i, v in c.items():
            dense[pos[i]][j] = v
    if not rows_used:
        return [{j: 1} for j in range(n)]
    D, _, V = _snf_dense(dense, R, with_transforms=True)
    rho = sum(1 for t in range(min(len(D), n)) if D[t][t] != 0)
    return [{i: V[i][j] for i in range(n) if V[i][j] != 0} for j in range(rho, n)]


def _field_kernel(cols: Sequence[dict], F: Ring):
    """Column reduction; returns ``(kernel vectors, prefix counts)``.

    ``counts[t]`` is the number of kernel vectors found among columns ``< t``.
    """
    pivots: dict = {}
    kernel = []
    counts = [0]
    for j, c in enumerate(cols):
        vec = {i: F.coerce(v) for i, v in c.items() if v != 0}
        combo = {j: 1}
        low = _field_reduce(F, vec, pivots, combo)
        if low is None:
            kernel.append(combo)
        else:
            pivots[low] = (vec, combo)
        counts.append(len(kernel))
    return kernel, counts


# -- subquotients --------------------------------------------------------------------------


class Subquotient:
    """``span(Z) / span(B)`` inside a free module with sparse vectors.

    ``lifts[k]`` is an ambient vector representing generator ``k``;
    ``orders[k]`` is 0 for a free generator and the order otherwise.
    Free generators come first.
    """

    def __init__(self, ring: Ring, lifts: list, orders: list, coords: Callable[[dict], list]):
        self.ring = ring
        self.lifts = lifts
        self.orders = orders
        self._coords = coords
        self.group = HomologyGroup(sum(1 for o in orders if o == 0),
                                   tuple(o for o in orders if o != 0))

    def __len__(self):
        return len(self.lifts)

    def coordinates(self, vec: dict) -> list:
        """Coordinates of the class of ``vec`` (which must lie in ``span Z``)."""
        return self._coords(vec)

    def is_zero_class(self, vec: dict) -> bool:
        return all(c == 0 for c in self.coordinates(vec))


def _drop_zero(vec: dict) -> dict:
    return {k: v for k, v in vec.items() if v != 0}


def subquotient(ambient_rank: int | None, Z_gens: Sequence[dict], B_gens: Sequence[dict],
                R: Ring, check: bool = True) -> Subquotient:
    """Quotient ``span Z / span B``; raises ``ValueError`` unless ``B ⊆ Z``.

    Vectors are dicts from ambient index to scalar.  ``ambient_rank`` is only
    used to validate indices.
    """
    if ambient_rank is not None:
        for v in list(Z_gens) + list(B_gens):
            if any(not 0 <= k < ambient_rank for k in v):
                raise ValueError("vector index outside the ambient module")
    if R.is_field:
        return _field_subquotient(Z_gens, B_gens, R, check)
    return _pid_subquotient(Z_gens, B_gens, R)


def _field_subquotient(Z_gens, B_gens, F: Ring, check: bool) -> Subquotient:
    rows: dict = {}
    for b in B_gens:
        vec = {k: F.coerce(v) for k, v in b.items() if v != 0}
        low = _field_reduce(F, vec, rows, None)
        if low is not None:
            rows[low] = (vec, {})
    nb = len(rows)
    lifts = []
    zrows: dict = {} if check else None
    for z in Z_gens:
        zv = {k: F.coerce(v) for k, v in z.items() if v != 0}
        if check:
            tmp = dict(zv)
            low = _field_reduce(F, tmp, zrows, None)
            if low is not None:
                zrows[low] = (tmp, {})
        vec = dict(zv)
        combo: dict = {}
        low = _field_reduce(F, vec, rows, combo)
        if low is None:
            continue
        k = len(lifts)
        lifts.append(zv)
        expr = dict(combo)
        expr[k] = 1
        rows[low] = (vec, _drop_zero(expr))
    if check and nb + len(lifts) != len(zrows):
        raise ValueError("B is not contained in Z")

    def coords(v: dict) -> list:
        vec = {k: F.coerce(x) for k, x in v.items() if x != 0}
        combo: dict = {}
        low = _field_reduce(F, vec, rows, combo)
        if low is not None:
            raise ValueError("vector is not in the cycle module")
        return [_reduce(F, -combo.get(k, 0)) for k in range(len(lifts))]

    return Subquotient(F, lifts, [0] * len(lifts), coords)


def _pid_subquotient(Z_gens, B_gens, R: Ring) -> Subquotient:
    keys = sorted({k for v in list(Z_gens) + list(B_gens) for k in v})
    pos = {k: t for t, k in enumerate(keys)}
    n = len(keys)
    s = len(Z_gens)
    if s == 0 or n == 0:
        for b in B_gens:
            if any(v != 0 for v in b.values()):
                raise ValueError("B is not contained in Z")

        def coords0(v):
            if any(x != 0 for x in v.values()):
                raise ValueError("vector is not in the cycle module")
            return []
        return Subquotient(R, [], [], coords0)
    Zd = [[0] * s for _ in range(n)]
    for j, z in enumerate(Z_gens):
        for k, v in z.items():
            Zd[pos[k]][j] = v
    D, U, _ = _snf_dense(Zd, R, with_transforms=True)
    rho = sum(1 for t in range(min(n, s)) if D[t][t] != 0)
    diag = [D[t][t] for t in range(rho)]

    def zcoords(v: dict) -> list:
        dv = [0] * n
        for k, x in v.items():
            if x != 0:
                if k not in pos:
                    raise ValueError("vector is not in the cycle module")
                dv[pos[k]] = x
        uv = [sum(U[i][t] * dv[t] for t in range(n) if dv[t]) for i in range(n)]
        if any(uv[i] != 0 for i in range(rho, n)):
            raise ValueError("vector is not in the cycle module")
        out = []
        for i in range(rho):
            q, r = divmod(uv[i], diag[i])
            if r:
                raise ValueError("vector is not in the cycle module")
            out.append(q)
        return out

    try:
        Bc = [zcoords(b) for b in B_gens]
    except ValueError as exc:
        raise ValueError("B is not contained in Z") from exc
    Cb = [[Bc[j][i] for j in range(len(Bc))] for i in range(rho)]
    if Bc and rho:
        E, P, _ = _snf_dense(Cb, R, with_transforms=True)
        sig = sum(1 for t in range(min(rho, len(Bc))) if E[t][t] != 0)
        efs = [E[t][t] for t in range(sig)]
    else:
        P = _identity(rho)
        sig, efs = 0, []
    Pinv = _snf_inverse(P, R)
    Uinv = _snf_inverse(U, R)
    # generator j of the quotient: sum_i Pinv[i][j] * (basis vector i of span Z)
    # basis vector i of span Z = diag[i] * column i of Uinv
    orders_all = [efs[j] if j < sig else 0 for j in range(rho)]
    keep = [j for j in range(rho) if orders_all[j] != 1]
    keep.sort(key=lambda j: (orders_all[j] != 0, j))
    lifts = []
    for j in keep:
        vec = {}
        for i in range(rho):
            c = Pinv[i][j] * diag[i]
            if c:
                for t in range(n):
                    if Uinv[t][i]:
                        vec[keys[t]] = vec.get(keys[t], 0) + c * Uinv[t][i]
        lifts.append(_drop_zero(vec))
    orders = [orders_all[j] for j in keep]

    def coords(v: dict) -> list:
        c = zcoords(v)
        y = [sum(P[j][i] * c[i] for i in range(rho)) for j in range(rho)]
        return [y[j] % orders_all[j] if orders_all[j] else y[j] for j in keep]

    return Subquotient(R, lifts, orders, coords)


def _snf_inverse(U, R: Ring):
    """Inverse of a unimodular dense matrix."""
    n = len(U)
    if n == 0:
        return []
    aug = [list(U[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(i for i in range(c, n) if aug[i][c] != 0 and R.is_unit(aug[i][c])) \
            if any(aug[i][c] != 0 and R.is_unit(aug[i][c]) for i in range(c, n)) else None
        if p is None:
            # Euclid on the column to expose a unit
            while True:
                nz = [i for i in range(c, n) if aug[i][c] != 0]
                i0 = min(nz, key=lambda i: R.size(aug[i][c]))
                for i in nz:
                    if i != i0:
                        q = R.divmod(aug[i][c], aug[i0][c])[0]
                        aug[i] = [a - q * b for a, b in zip(aug[i], aug[i0])]
                if sum(1 for i in range(c, n) if aug[i][c] != 0) == 1:
                    p = i0
                    break
        aug[c], aug[p] = aug[p], aug[c]
        inv = R.div(1, aug[c][c])
        aug[c] = [_reduce(R, a * inv) for a in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [_reduce(R, _q(a - f * b)) for a, b in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


@dataclass
class InducedMap:
    matrix: ExactMatrix
    is_isomorphism: bool


def induced_subquotient_map(src: Subquotient, tgt: Subquotient,
                            ambient_map: Callable[[dict], dict] | ExactMatrix,
                            src_boundaries: Sequence[dict] = ()) -> InducedMap:
    """Matrix of the map on subquotients induced by an ambient map.

    Columns are images of source generators in target coordinates.  When
    ``src_boundaries`` is given, well-definedness is checked on them.
    """
    R = src.ring
    f = ambient_map.apply if isinstance(ambient_map, ExactMatrix) else ambient_map
    for b in src_boundaries:
        if not tgt.is_zero_class(f(b)):
            raise ValueError("ambient map does not send boundaries to boundaries")
    cols = []
    for lift in src.lifts:
        c = tgt.coordinates(f(lift))
        cols.append({i: v for i, v in enumerate(c) if v != 0})
    M = ExactMatrix(len(tgt), len(src), R, cols)
    return InducedMap(M, quotient_map_is_iso(M, src.orders, tgt.orders, R))


def quotient_map_is_iso(M: ExactMatrix, src_orders: Sequence[int], tgt_orders: Sequence[int],
                        R: Ring) -> bool:
    """Decide bijectivity of ``⊕ R/(a_j) -> ⊕ R/(b_i)`` given by ``M``."""
    a, b = len(src_orders), len(tgt_orders)
    if R.is_field:
        return a == b and matrix_rank(M, R) == a
    src_g = HomologyGroup(sum(1 for o in src_orders if o == 0), tuple(o for o in src_orders if o))
    tgt_g = HomologyGroup(sum(1 for o in tgt_orders if o == 0), tuple(o for o in tgt_orders if o))
    if src_g != tgt_g:
        return False
    if a == 0:
        return True
    # surjective: columns of [M | diag(tgt orders)] generate R^b
    rel = [{i: o} for i, o in enumerate(tgt_orders) if o]
    fac = sparse_invariant_factors(list(M.cols) + rel, b, R)
    if len(fac) != b or any(t != 1 for t in fac):
        return False
    # injective: the kernel of R^a -> target lies in span diag(src orders)
    ker = kernel_basis(list(M.cols) + rel, R)
    for v in ker:
        for j in range(a):
            x = v.get(j, 0)
            o = src_orders[j]
            if (o == 0 and x != 0) or (o and x % o):
                return False
    return True


def in_boundary_span(dk1: ExactMatrix, v: dict, R: Ring) -> bool:
    """True if ``v`` lies in the column span of ``dk1`` over ``R``.

    Adding a column inside the span leaves the invariant factors unchanged;
    adding one outside either raises the rank or refines the factors.
    """
    base = sparse_invariant_factors(dk1.cols, dk1.nrows, R)
    aug = sparse_invariant_factors(list(dk1.cols) + [v], dk1.nrows, R)
    return aug == base
