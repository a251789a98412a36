"""Command-line front end: ``mpss magnitude | pages | verify``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import digraph as dg
from .chains import magnitude_homology
from .homalg import HomologyGroup, Ring, parse_ring, ring_label
from .spectral import octant, spectral_sequence

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


# -- graph family syntax ------------------------------------------------------------


class _FamilyParser:
    """Recursive descent over ``Zm:3``, ``Cmn:4,3``, ``Sn:2``, ``cone:X``, ``susp:X``,
    ``box:AxB`` (parenthesize nested operands), ``point``, ``I`` and ``J``."""

    def __init__(self, text: str):
        self.s = text.replace(" ", "")
        self.i = 0

    def parse(self) -> dg.DiGraph:
        G = self.graph()
        if self.i != len(self.s):
            raise InputError(f"unexpected {self.s[self.i:]!r} in family spec")
        return G

    def _eat(self, token: str) -> bool:
        if self.s.startswith(token, self.i):
            self.i += len(token)
            return True
        return False

    def _int(self) -> int:
        j = self.i
        while j < len(self.s) and self.s[j].isdigit():
            j += 1
        if j == self.i:
            raise InputError(f"expected an integer at position {self.i} of {self.s!r}")
        v = int(self.s[self.i:j])
        self.i = j
        return v

    def graph(self) -> dg.DiGraph:
        if self._eat("("):
            G = self.graph()
            if not self._eat(")"):
                raise InputError("unbalanced parentheses in family spec")
            return G
        if self._eat("Zm:"):
            m = self._int()
            if m < 1:
                raise InputError("Zm needs m >= 1")
            return dg.directed_cycle(m)
        if self._eat("Cmn:"):
            m = self._int()
            if not self._eat(","):
                raise InputError("Cmn needs two integers 'm,n'")
            n = self._int()
            if m < 1 or n < 1:
                raise InputError("Cmn needs m, n >= 1")
            return dg.bidirected_cycle(m, n)
        if self._eat("Sn:"):
            return dg.sphere(self._int())
        if self._eat("cone:"):
            return dg.cone(self.graph())[0]
        if self._eat("susp:"):
            return dg.suspension(self.graph())
        if self._eat("box:"):
            A = self.graph()
            if not self._eat("x"):
                raise InputError("box needs 'AxB'")
            B = self.graph()
            return dg.box_product(A, B)[0]
        if self._eat("point"):
            return dg.point()
        if self._eat("I"):
            return dg.interval_I()
        if self._eat("J"):
            return dg.interval_J()
        raise InputError(f"unknown family at {self.s[self.i:]!r}")


def parse_family(text: str) -> dg.DiGraph:
    try:
        return _FamilyParser(text).parse()
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _load(args) -> tuple[dg.DiGraph, str]:
    if args.family and args.input:
        raise InputError("give either --family or --input, not both")
    if args.family:
        return parse_family(args.family), args.family
    if args.input:
        try:
            return dg.load_graph(args.input), os.path.basename(args.input)
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc.strerror}") from exc
        except ValueError as exc:
            raise InputError(f"{args.input}: {exc}") from exc
    raise InputError("one of --family or --input is required")


def _ring(text: str) -> Ring:
    try:
        return parse_ring(text)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _lmax(args, G) -> int:
    if args.lmax is None:
        return 2 * G.diameter() + 1
    if args.lmax < 0:
        raise InputError("--lmax must be >= 0")
    return args.lmax


def _page_range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise InputError(f"bad page range {text!r}; use r0..r1") from exc
    if lo < 0 or hi < lo:
        raise InputError(f"bad page range {text!r}")
    return range(lo, hi + 1)


# -- rendering -----------------------------------------------------------------------


def _scalar(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return int(x)


def _cell(g: HomologyGroup) -> str:
    if g.is_zero():
        return "."
    parts = [str(g.free_rank)] if g.free_rank else []
    parts += [f"T{t}" for t in g.torsion]
    return "+".join(parts)


def _grid(rows: list) -> str:
    widths = [max(len(r[j]) for r in rows) for j in range(len(rows[0]))]
    return "\n".join("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def render_magnitude(table: dict, l_max: int, fmt: str, meta: dict) -> str:
    entries = [{"k": k, "l": l, "rank": g.free_rank, "torsion": list(g.torsion)}
               for (k, l), g in sorted(table.items()) if not g.is_zero()]
    if fmt == "json":
        return json.dumps({**meta, "magnitude": entries}, indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "l", "rank", "torsion"])
        for e in entries:
            w.writerow([e["k"], e["l"], e["rank"], " ".join(map(str, e["torsion"]))])
        return buf.getvalue()
    rows = [["k\\l"] + [str(l) for l in range(l_max + 1)]]
    for k in range(l_max, -1, -1):
        rows.append([str(k)] + [_cell(table.get((k, l), HomologyGroup())) for l in range(l_max + 1)])
    head = f"magnitude homology of {meta['graph']} over {meta['ring']}, l <= {l_max}"
    return head + "\n" + _grid(rows) + "\n" + "(Tn: torsion summand R/n)\n"


def render_pages(pages: list, l_max: int, fmt: str, meta: dict) -> str:
    if fmt == "json":
        out = dict(meta)
        out["pages"] = [{"r": r, "entries": [
            dict({"p": p, "q": q, "rank": g.free_rank, "torsion": list(g.torsion), "exact": ex},
                 **({"representatives": reps.get((p, q), [])} if reps is not None else {}))
            for (p, q), (g, ex) in sorted(cells.items())]} for r, cells, reps in pages]
        return json.dumps(out, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "p", "q", "k", "l", "rank", "torsion", "exact"])
        for r, cells, _ in pages:
            for (p, q), (g, ex) in sorted(cells.items()):
                w.writerow([r, p, q, p + q, p, g.free_rank, " ".join(map(str, g.torsion)),
                            "true" if ex else "false"])
        return buf.getvalue()
    out = []
    for r, cells, reps in pages:
        rows = [["q\\p"] + [str(p) for p in range(l_max + 1)]]
        for q in range(0, -l_max - 1, -1):
            row = [str(q)]
            for p in range(l_max + 1):
                if (p, q) not in cells:
                    row.append("")
                    continue
                g, ex = cells[(p, q)]
                row.append(_cell(g) + ("" if ex else "~"))
            rows.append(row)
        out.append(f"E^{r} of {meta['graph']} over {meta['ring']}, l <= {l_max}")
        out.append(_grid(rows))
        if reps is not None:
            for (p, q), rs in sorted(reps.items()):
                for i, rep in enumerate(rs):
                    terms = " ".join(f"{'+' if not str(t['coef']).startswith('-') else ''}{t['coef']}"
                                     f"{tuple(t['trail'])}" for t in rep)
                    out.append(f"  ({p},{q}) #{i}: {terms}")
        out.append("")
    out.append("(~: entry not determined by the truncation; Tn: torsion summand R/n)")
    return "\n".join(out) + "\n"


# -- commands -----------------------------------------------------------------------------


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_magnitude(args) -> int:
    G, label = _load(args)
    R = _ring(args.ring)
    L = _lmax(args, G)
    table = magnitude_homology(G, L, R)
    meta = {"graph": label, "ring": ring_label(R), "l_max": L}
    _emit(render_magnitude(table, L, args.format, meta), args)
    return EXIT_OK


def cmd_pages(args) -> int:
    G, label = _load(args)
    R = _ring(args.ring)
    L = _lmax(args, G)
    ss = spectral_sequence(G, L, R)
    pages = []
    for r in _page_range(args.pages):
        cells = {}
        if R.is_field and not args.representatives:
            ranks = ss.rank_table(r)
            for pq in octant(L):
                cells[pq] = (HomologyGroup(ranks[pq]), ss.is_exact(r, *pq))
        else:
            for pq in octant(L):
                cells[pq] = (ss.group(r, *pq), ss.is_exact(r, *pq))
        reps = None
        if args.representatives:
            reps = {}
            for pq, (g, _) in cells.items():
                if not g.is_zero():
                    reps[pq] = [[{"trail": list(t), "coef": _scalar(c)} for t, c in sorted(v.items())]
                                for v in ss.representatives(r, *pq)]
        pages.append((r, cells, reps))
    meta = {"graph": label, "ring": ring_label(R), "l_max": L}
    _emit(render_pages(pages, L, args.format, meta), args)
    return EXIT_OK


def _run_suite(name: str) -> list:
    from .suites import SUITES
    return [(c.name, c.ok, c.detail) for c in SUITES[name]()]


def cmd_verify(args) -> int:
    from .suites import SUITES
    names = list(SUITES) if args.suite == "all" else [args.suite]
    threads = int(os.environ.get("MPSS_THREADS", "1") or 1)
    if threads > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_suite, names))
    else:
        results = [_run_suite(n) for n in names]
    lines, failed, total = [], 0, 0
    for name, checks in zip(names, results):
        lines.append(f"== {name}")
        for cname, ok, detail in checks:
            total += 1
            failed += not ok
            lines.append(f"[{'PASS' if ok else 'FAIL'}] {cname}" + (f": {detail}" if detail else ""))
    lines.append(f"{total - failed}/{total} checks passed")
    _emit("\n".join(lines) + "\n", args)
    return EXIT_FAIL if failed else EXIT_OK


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    from .suites import SUITES
    ap = argparse.ArgumentParser(prog="mpss", description="Magnitude-path spectral sequences of digraphs.")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_opts(p):
        p.add_argument("--family", help="builtin family, e.g. Zm:3, Cmn:4,3, Sn:2, cone:Zm:3, box:(Zm:3)x(Sn:1)")
        p.add_argument("--input", help="graph file: JSON {vertices, edges} or 'digraph n' edge list")
        p.add_argument("--ring", default="Q", help="Z, Q or Fp:<p> (default Q)")
        p.add_argument("--lmax", type=int, default=None, help="length bound (default 2*diameter+1)")
        p.add_argument("--format", choices=("text", "csv", "json"), default="text")
        p.add_argument("--out", help="write output to this path")

    p = sub.add_parser("magnitude", help="magnitude homology table in (k, l) coordinates")
    graph_opts(p)
    p.set_defaults(func=cmd_magnitude)
    p = sub.add_parser("pages", help="spectral sequence pages in (p, q) coordinates")
    graph_opts(p)
    p.add_argument("--pages", default="1..3", help="page range r0..r1 (default 1..3)")
    p.add_argument("--representatives", action="store_true", help="include cycle representatives")
    p.set_defaults(func=cmd_pages)
    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES) + ["all"])
    p.add_argument("--out", help="write the report to this path")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"mpss: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
