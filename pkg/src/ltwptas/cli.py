"""Batch command line: solve, decompose, ltw, bench, generate.

Every command prints a record of ``key=value`` lines in a fixed order.
Exit status is 0 on success, 2 when the answer is negative (infeasible,
rejected, a failed check or bound) and 1 on usage or input errors.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import generators
from .dp import BRUTE_FORCE_CEILING, ProblemKind, brute_force, solve_exact_tw
from .graph import Graph, GraphFormatError, parse_graph, parse_vertex_list, serialize_graph
from .ltw import check_linear_bound, local_treewidth
from .overclass import decompose_over_class, predicate_by_name
from .ptas import PtasConfig, ptas_apex, ptas_cliquesum, ptas_local
from .sqrtdecomp import sqrt_decomposition, sqrt_decomposition_apex
from .treedecomp import (
    DecompositionError,
    exact_treewidth,
    heuristic_decomposition,
    parse_csd,
    serialize_csd,
    serialize_td,
    validate,
    width,
)

EXIT_OK, EXIT_USAGE, EXIT_NEGATIVE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class RunRecord:
    """Ordered ``key=value`` lines; timing keys are kept apart at the end."""

    def __init__(self, command: str):
        self.fields: list[tuple[str, str]] = [("command", command)]
        self.timings: list[tuple[str, float]] = []
        self.tail: list[str] = []

    def add(self, key: str, value) -> None:
        self.fields.append((key, _fmt(value)))

    def time(self, phase: str, seconds: float) -> None:
        self.timings.append((phase, seconds))

    def graph(self, g: Graph) -> None:
        self.add("n", g.n)
        self.add("m", g.m)
        self.add("digest", hashlib.sha256(serialize_graph(g).encode()).hexdigest()[:16])

    def render(self) -> str:
        lines = [f"{k}={v}" for k, v in self.fields]
        lines += [f"time_{p}_ms={s * 1000:.1f}" for p, s in self.timings]
        return "\n".join(lines + self.tail) + "\n"


def _fmt(value) -> str:
    if isinstance(value, bool):
        return str(value).lower()
    if value is None:
        return "none"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, (list, tuple, frozenset, set)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return ",".join(str(x) for x in items)
    return str(value)


class _Timer:
    def __init__(self, rec: RunRecord, phase: str):
        self.rec, self.phase = rec, phase

    def __enter__(self):
        self.t0 = time.perf_counter()

    def __exit__(self, *exc):
        self.rec.time(self.phase, time.perf_counter() - self.t0)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror or e}") from None


def _load_graph(path: str, rec: RunRecord) -> Graph:
    with _Timer(rec, "parse"):
        text = _read_text(path)
        g = parse_graph(text)
    rec.graph(g)
    return g


def _ids(xs) -> list[int]:
    return [v + 1 for v in sorted(xs)]


def _emit(rec: RunRecord, out: str | None) -> None:
    text = rec.render()
    if out:
        Path(out).write_text(text)
    sys.stdout.write(text)


# -- solve ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    kind = ProblemKind.parse(args.problem)
    if args.csd_file and args.ptas is None:
        raise UsageError("--csd-file needs --ptas")
    if args.apex_file and args.ptas is None:
        raise UsageError("--apex-file needs --ptas")
    if args.apex_file and args.csd_file:
        raise UsageError("--apex-file and --csd-file are exclusive")
    rec = RunRecord("solve")
    g = _load_graph(args.graph, rec)
    rec.add("problem", kind.value)
    if args.oracle or args.oracle_compare:
        if g.n > BRUTE_FORCE_CEILING:
            raise UsageError(f"n={g.n} exceeds brute-force ceiling {BRUTE_FORCE_CEILING}")

    if args.oracle:
        rec.add("mode", "oracle")
        with _Timer(rec, "solve"):
            sol = brute_force(g, kind)
    elif args.ptas is not None:
        eps = Fraction(args.ptas)
        apex = frozenset()
        if args.apex_file:
            apex = parse_vertex_list(_read_text(args.apex_file), g)
        mu = args.mu if args.mu is not None else len(apex)
        cfg = PtasConfig(eps, kind, lam=args.lam, mu=mu, center_rule=args.center_rule)
        rec.add("mode", "ptas")
        rec.add("epsilon", str(eps))
        rec.add("k", cfg.k)
        rec.add("lambda", cfg.lam)
        rec.add("mu", cfg.mu)
        rec.add("center_rule", cfg.center_rule)
        with _Timer(rec, "solve"):
            if args.csd_file:
                csd = parse_csd(_read_text(args.csd_file), g)
                sol = ptas_cliquesum(g, csd, kind, cfg)
            elif args.apex_file:
                sol = ptas_apex(g, apex, kind, cfg)
            else:
                sol = ptas_local(g, kind, cfg)
    else:
        rec.add("mode", "exact")
        with _Timer(rec, "decompose"):
            td = heuristic_decomposition(g, "min-fill")
        rec.add("td_width", width(td))
        with _Timer(rec, "solve"):
            sol = solve_exact_tw(g, td, kind)

    rec.add("value", sol.value)
    rec.add("vertices", _ids(sol.vertices))
    rec.add("feasible", sol.feasible)
    prov = sol.provenance
    for key in ("operation", "strips", "max_strip_width", "strips_over_lambda_bound", "guarantee",
                "shift_values", "shift_strip_sums"):
        if key in prov:
            rec.add(key, prov[key])
    if "chosen" in prov:
        rec.add("chosen_shifts", [f"{c['center'] + 1}:{c['shift']}" for c in prov["chosen"]])
    if args.oracle_compare:
        with _Timer(rec, "oracle"):
            opt = brute_force(g, kind).value
        rec.add("opt", opt)
        ratio = Fraction(sol.value, opt) if opt else (Fraction(1) if sol.value == 0 else None)
        rec.add("ratio", None if ratio is None else f"{float(ratio):.6f}")
        if args.ptas is not None:
            bound = 1 + Fraction(args.ptas) if kind.minimize else 1 - Fraction(args.ptas)
            ok = sol.value <= bound * opt if kind.minimize else sol.value >= bound * opt
            rec.add("ratio_bound", f"{float(bound):.6f}")
            rec.add("within_bound", ok)
    _emit(rec, args.out)
    return EXIT_OK if sol.feasible else EXIT_NEGATIVE


# -- decompose -----------------------------------------------------------------------

def cmd_decompose(args) -> int:
    rec = RunRecord("decompose")
    g = _load_graph(args.graph, rec)
    status = EXIT_OK
    td = None
    if args.exact:
        rec.add("mode", "exact")
        with _Timer(rec, "decompose"):
            res = exact_treewidth(g)
        td = res.decomposition
        rec.add("exact", res.exact)
        rec.add("lower_bound", res.lower)
        rec.add("search_nodes", res.nodes)
    elif args.sqrt is not None:
        rec.add("mode", "sqrt")
        with _Timer(rec, "decompose"):
            if args.apex:
                mu, path = args.apex
                apex = parse_vertex_list(_read_text(path), g)
                res = sqrt_decomposition_apex(g, args.sqrt, int(mu), apex, v=_center(args, g))
            else:
                res = sqrt_decomposition(g, args.sqrt, v=_center(args, g))
        td = res.decomposition
        for line in res.report_lines():
            k, v = line.split("=", 1)
            if k == "center":
                v = res.center + 1
            rec.add(f"sqrt_{k}", v)
        if not res.within_bound:
            status = EXIT_NEGATIVE
    elif args.over_class:
        rec.add("mode", "over-class")
        pred = predicate_by_name(args.over_class)
        rec.add("class", pred.name)
        rec.add("omega", pred.omega)
        with _Timer(rec, "decompose"):
            res = decompose_over_class(g, pred)
        rec.add("separators_tried", res.separators_tried)
        rec.add("predicate_calls", res.predicate_calls)
        rec.add("accepted", res.accepted)
        if not res.accepted:
            rec.add("reason", res.notes[0] if res.notes else "rejected")
            _emit(rec, None)
            return EXIT_NEGATIVE
        td = res.decomposition
        rec.add("nodes", len(td))
        rec.add("adhesion", max((len(td.adhesion_set(t)) for t in td.nodes), default=0))
    else:
        strategy = args.heuristic or "min-fill"
        rec.add("mode", f"heuristic:{strategy}")
        with _Timer(rec, "decompose"):
            td = heuristic_decomposition(g, strategy)
    report = validate(td, g)
    rec.add("width", width(td))
    rec.add("valid", report.valid)
    for line in report.lines():
        rec.add("violation", line)
    text = serialize_td(td, g.n)
    if args.out:
        Path(args.out).write_text(text)
        rec.add("td_file", args.out)
    else:
        rec.tail = ["begin td"] + text.splitlines() + ["end td"]
    _emit(rec, None)
    if not report.valid:
        return EXIT_NEGATIVE
    return status


def _center(args, g: Graph) -> int | None:
    if args.center is None:
        return None
    if not 1 <= args.center <= g.n:
        raise UsageError(f"center {args.center} out of range 1..{g.n}")
    return args.center - 1


# -- ltw ---------------------------------------------------------------------------

def cmd_ltw(args) -> int:
    rec = RunRecord("ltw")
    g = _load_graph(args.graph, rec)
    mode = "upper" if args.upper else "exact"
    rec.add("rmax", args.rmax)
    rec.add("mode", mode)
    status = EXIT_OK
    with _Timer(rec, "ltw"):
        if args.check is not None:
            chk = check_linear_bound(g, args.check, args.rmax, mode, minors=args.minors, seed=args.seed)
            prof = chk.profile
        else:
            chk = None
            prof = local_treewidth(g, args.rmax, mode)
    for e in prof.entries:
        rec.add(f"r{e.radius}", f"ltw={e.value} vertex={e.vertex + 1} size={e.size} exact={str(e.exact).lower()}")
    if chk is not None:
        rec.add("lambda", args.check)
        for e in prof.entries:
            ok = e.value <= args.check * e.radius
            rec.add(f"check_r{e.radius}", "pass" if ok else f"fail witness={e.vertex + 1}")
        rec.add("minors_checked", chk.minors_checked)
        for m in chk.minor_failures:
            rec.add("minor_fail", m)
        rec.add("passed", chk.passed)
        if not chk.passed:
            status = EXIT_NEGATIVE
    _emit(rec, args.out)
    return status


# -- bench ---------------------------------------------------------------------------

SUITES = ("ratio-vc", "ratio-ds", "ratio-is", "exact-dp", "ltw", "sqrt")


def cmd_bench(args) -> int:
    corpus = Path(args.corpus)
    if not corpus.is_dir():
        raise UsageError(f"corpus directory {corpus} not found")
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    files = sorted(p for p in corpus.iterdir() if p.suffix in (".col", ".gr", ".txt", ".edges"))
    rec = RunRecord("bench")
    rec.add("suite", args.suite)
    rec.add("seed", args.seed)
    rec.add("epsilon", str(Fraction(args.eps)))
    passed = failed = skipped = 0
    t0 = time.perf_counter()
    for path in files:
        try:
            g = parse_graph(path.read_text())
        except GraphFormatError as e:
            rec.add("row", f"instance={path.name} error={e}")
            failed += 1
            continue
        row, ok = _bench_row(args, g)
        if ok is None:
            skipped += 1
        elif ok:
            passed += 1
        else:
            failed += 1
        rec.add("row", f"instance={path.name} n={g.n} {row} ok={_fmt(ok)}")
    rec.time("bench", time.perf_counter() - t0)
    rec.add("instances", len(files))
    rec.add("passed", passed)
    rec.add("failed", failed)
    rec.add("skipped", skipped)
    _emit(rec, args.out)
    return EXIT_NEGATIVE if failed else EXIT_OK


def _bench_row(args, g: Graph):
    suite = args.suite
    if suite.startswith("ratio-"):
        kind = ProblemKind.parse(suite.split("-")[1])
        if g.n > BRUTE_FORCE_CEILING:
            return "opt=skipped", None
        eps = Fraction(args.eps)
        sol = ptas_local(g, kind, PtasConfig(eps, kind, lam=args.lam))
        opt = brute_force(g, kind).value
        bound = (1 + eps) * opt if kind.minimize else (1 - eps) * opt
        ok = sol.feasible and (sol.value <= bound if kind.minimize else sol.value >= bound)
        ratio = f"{sol.value / opt:.4f}" if opt else "n/a"
        return f"opt={opt} value={sol.value} ratio={ratio} bound={float(1 + eps if kind.minimize else 1 - eps):.4f}", ok
    if suite == "exact-dp":
        if g.n > BRUTE_FORCE_CEILING:
            return "skipped", None
        parts, ok = [], True
        td = heuristic_decomposition(g)
        for kind in ProblemKind:
            a, b = solve_exact_tw(g, td, kind).value, brute_force(g, kind).value
            parts.append(f"{kind.value}={a}/{b}")
            ok &= a == b
        return " ".join(parts), ok
    if suite == "ltw":
        chk = check_linear_bound(g, args.lam, args.rmax, "exact")
        return "values=" + ",".join(map(str, chk.profile.values)), chk.passed
    res = sqrt_decomposition(g, args.lam)
    return f"width={res.width} bound={res.bound}", res.within_bound


# -- generate ------------------------------------------------------------------------

GENERATE_KINDS = ("grid", "path", "cycle", "complete", "star", "wheel", "tree", "k-tree", "planar",
                  "random", "regular", "clique-sum")


def cmd_generate(args) -> int:
    kind, p, seed = args.kind, args.params, args.seed
    csd = None
    try:
        if kind == "grid":
            g = generators.grid(*_need(p, 2))
        elif kind in ("path", "cycle", "complete", "star", "wheel"):
            g = getattr(generators, kind)(*_need(p, 1))
        elif kind == "tree":
            g = generators.random_tree(*_need(p, 1), seed)
        elif kind == "k-tree":
            g = generators.k_tree(*_need(p, 2), seed)
        elif kind == "planar":
            g = generators.planar(*_need(p, 1), seed, drop=args.drop)
        elif kind == "random":
            g = generators.random_connected(*_need(p, 1), args.p, seed)
        elif kind == "regular":
            g = generators.random_regular(*_need(p, 2), seed)
        elif kind == "clique-sum":
            parts_n, size = _need(p, 2)
            parts = [generators.planar(size, seed * 1000 + i) for i in range(parts_n)]
            g, csd = generators.clique_sum_of(parts, args.adhesion, seed)
        else:
            raise UsageError(f"unknown kind {kind!r}; choose from {', '.join(GENERATE_KINDS)}")
    except ValueError as e:
        raise UsageError(str(e)) from None
    apex = frozenset()
    if args.mu:
        if csd is not None:
            raise UsageError("--mu is not supported with clique-sum")
        g, apex = generators.apex_over(g, args.mu, seed, universal=args.universal)
    text = serialize_graph(g)
    header = f"c generated kind={kind} params={','.join(map(str, p))} seed={seed}\n"
    if args.out:
        Path(args.out).write_text(header + text)
    else:
        sys.stdout.write(header + text)
    if args.csd_out:
        if csd is None:
            raise UsageError("--csd-out needs kind clique-sum")
        Path(args.csd_out).write_text(serialize_csd(csd))
    if args.apex_out:
        Path(args.apex_out).write_text(" ".join(str(v) for v in _ids(apex)) + "\n")
    return EXIT_OK


def _need(params, count):
    if len(params) != count:
        raise UsageError(f"expected {count} integer parameter(s), got {len(params)}")
    return params


# -- entry point -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="ltwptas", description="Shifting approximation schemes and tree decompositions.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="vertex cover, dominating set or independent set")
    s.add_argument("problem", choices=["vc", "ds", "is"])
    s.add_argument("graph")
    how = s.add_mutually_exclusive_group()
    how.add_argument("--exact", action="store_true", help="tree-decomposition DP (default)")
    how.add_argument("--ptas", metavar="EPS", type=_positive_fraction, help="shifting scheme with this epsilon")
    how.add_argument("--oracle", action="store_true", help="exhaustive search")
    s.add_argument("--lambda", dest="lam", type=int, default=3)
    s.add_argument("--mu", type=int, default=None)
    s.add_argument("--apex-file")
    s.add_argument("--csd-file")
    s.add_argument("--center-rule", choices=["first", "best"], default="first")
    s.add_argument("--oracle-compare", action="store_true", help="also report the exhaustive optimum")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    d = sub.add_parser("decompose", help="tree decompositions")
    dm = d.add_mutually_exclusive_group()
    dm.add_argument("--exact", action="store_true")
    dm.add_argument("--heuristic", choices=["min-fill", "min-degree"])
    dm.add_argument("--sqrt", metavar="LAMBDA", type=int)
    dm.add_argument("--over-class", metavar="NAME", help="tw<w> or apex<mu>tw<w>")
    d.add_argument("graph")
    d.add_argument("--apex", nargs=2, metavar=("MU", "FILE"), help="with --sqrt: apex budget and vertex file")
    d.add_argument("--center", type=int, help="BFS root for --sqrt (1-based)")
    d.add_argument("--out", help="write the decomposition here")
    d.set_defaults(func=cmd_decompose)

    l = sub.add_parser("ltw", help="local tree-width profile")
    l.add_argument("graph")
    l.add_argument("--rmax", type=int, required=True)
    lm = l.add_mutually_exclusive_group()
    lm.add_argument("--exact", action="store_true", help="exact neighbourhood widths (default)")
    lm.add_argument("--upper", action="store_true", help="heuristic upper bounds")
    l.add_argument("--check", metavar="LAMBDA", type=int)
    l.add_argument("--minors", type=int, default=0, help="sampled ball contractions to check as well")
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--out")
    l.set_defaults(func=cmd_ltw)

    b = sub.add_parser("bench", help="run a check suite over a directory of graphs")
    b.add_argument("corpus")
    b.add_argument("suite", help=", ".join(SUITES))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--eps", type=_positive_fraction, default=Fraction(1, 2))
    b.add_argument("--lambda", dest="lam", type=int, default=3)
    b.add_argument("--rmax", type=int, default=3)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    gn = sub.add_parser("generate", help="write a generated graph")
    gn.add_argument("kind", help=", ".join(GENERATE_KINDS))
    gn.add_argument("params", type=int, nargs="*")
    gn.add_argument("--seed", type=int, default=0)
    gn.add_argument("--p", type=float, default=0.3, help="edge probability for random")
    gn.add_argument("--drop", type=float, default=0.0, help="edge drop rate for planar")
    gn.add_argument("--adhesion", type=int, default=2)
    gn.add_argument("--mu", type=int, default=0)
    gn.add_argument("--universal", action="store_true")
    gn.add_argument("--out")
    gn.add_argument("--csd-out")
    gn.add_argument("--apex-out")
    gn.set_defaults(func=cmd_generate)
    return ap


def _positive_fraction(text: str) -> Fraction:
    try:
        val = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if val <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return val


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, DecompositionError, ValueError, IndexError) as e:
        print(f"ltwptas {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"ltwptas {args.command}: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
