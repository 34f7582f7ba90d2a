"""Command-line front end: ``fractree <subcommand> --tree FILE ...``.

Exit status is 0 on success, 1 when a library check or validation fails
(the error class name goes to stderr) and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys

from . import coding, dimension, graph, parry
from .errors import FractreeError
from .tree import FractalTreeSpec, as_word, depth_profile, format_word

SCHEMA = "fractree/1"


def _num(v):
    if isinstance(v, float):
        return float(f"{v:.12g}")
    return v


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "tolist"):
        return _jsonable(obj.tolist())
    return _num(obj)


class Output:
    def __init__(self, stream, as_json: bool, command: str):
        self.stream = stream
        self.as_json = as_json
        self.command = command

    def emit(self, fields: dict):
        if self.as_json:
            doc = {"schema": SCHEMA, "command": self.command, **_jsonable(fields)}
            json.dump(doc, self.stream, indent=2)
            self.stream.write("\n")
        else:
            for key, value in fields.items():
                self.stream.write(f"{key}: {_fmt(value)}\n")


class UsageError(Exception):
    pass


def _default_tol() -> float:
    raw = os.environ.get("FRACTREE_TOL")
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"FRACTREE_TOL={raw!r} is not a number") from None
    if not tol > 0:
        raise UsageError("FRACTREE_TOL must be positive")
    return tol


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_tree(args) -> FractalTreeSpec:
    if not args.tree:
        raise UsageError("--tree is required")
    return FractalTreeSpec.from_json(_read_json(args.tree), keep_order=args.keep_order)


def _read_symbols(text: str):
    if text.startswith("@"):
        try:
            with open(text[1:]) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {text[1:]}: {exc.strerror}") from None
    return as_word("".join(text.split()))


# --- subcommands -------------------------------------------------------------


def cmd_validate(args, out):
    spec = _load_tree(args)
    out.emit({
        "alphabet_size": spec.alphabet_size,
        "terminal_nodes": [format_word(t) for t in spec.terminal_nodes],
        "k": spec.k,
        "non_terminal_count": spec.nodes.non_terminal_count,
        "depth_profile": depth_profile(spec),
    })
    return 0


def cmd_capacity(args, out):
    spec = _load_tree(args)
    cap = coding.channel_capacity(coding.LengthFunction.from_spec(spec))
    out.emit({"alpha": cap.alpha, "r": cap.r, "sdim": cap.sdim, "residual": cap.residual})
    return 0


def cmd_sdim(args, out):
    spec = _load_tree(args)
    beta = coding.similarity_dimension(spec)
    alpha = coding.channel_capacity(coding.LengthFunction.from_spec(spec)).alpha
    gap = abs(alpha - math.log2(spec.alphabet_size) * beta)
    out.emit({"sdim": beta, "alpha": alpha, "capacity_gap": gap})
    return 0 if gap <= args.tol else 1


def cmd_measure(args, out):
    spec = _load_tree(args)
    lf = coding.LengthFunction.from_spec(spec)
    dm = coding.derived_measure(coding.channel_capacity(lf), lf)
    fields = {"symbol_probs": list(dm.symbol_probs), "costs": list(dm.costs)}
    if args.word is not None:
        mu, neg = coding.measure_of_coded_word(dm, _read_symbols(args.word))
        fields.update({"mu": mu, "neg_log2_mu": neg})
    out.emit(fields)
    return 0


def cmd_encode(args, out):
    spec = _load_tree(args)
    tseq, rem = coding.encode(spec, _read_symbols(args.input))
    out.emit({
        "code_symbols": format_word(tseq.code_symbols),
        "cut_points": list(tseq.cut_points),
        "remainder": format_word(rem),
    })
    return 0


def cmd_decode(args, out):
    spec = _load_tree(args)
    y = _read_symbols(args.input)
    x = coding.decode(spec, y)
    out.emit({"word": format_word(x), "length": len(x)})
    return 0


def cmd_graph(args, out):
    g = graph.graph_from_tree(_load_tree(args))
    if args.format == "json" or args.json:
        json.dump(g.to_json(), out.stream, indent=2)
        out.stream.write("\n")
    else:
        out.stream.write(g.to_dot())
    return 0


def cmd_tree_from_graph(args, out):
    g = graph.PointedGraph.from_json(_read_json(args.graph))
    cond = graph.graph_conditions(g)
    spec = graph.tree_from_graph(g)
    fields = spec.to_json()
    if cond.notes:
        fields["notes"] = list(cond.notes)
    if args.json:
        out.emit(fields)
    else:
        json.dump(spec.to_json(), out.stream)
        out.stream.write("\n")
        for note in cond.notes:
            sys.stderr.write(f"note: {note}\n")
    return 0


def cmd_charpoly(args, out):
    g = graph.graph_from_tree(_load_tree(args))
    cp = graph.charpoly_leverrier(g.adjacency)
    out.emit({"polynomial": str(cp), "coefficients": list(cp.coeffs)})
    return 0


def cmd_perron(args, out):
    g = graph.graph_from_tree(_load_tree(args))
    rho = graph.perron_eigenvalue(graph.charpoly_leverrier(g.adjacency))
    out.emit({"rho": rho, "log2_rho": math.log2(rho)})
    return 0


def cmd_parry(args, out):
    g = graph.graph_from_tree(_load_tree(args))
    pm = parry.build_parry(g)
    edges = [
        {"from": e.source + 1, "to": e.target + 1, "label": format_word([e.label]), "p": float(p)}
        for e, p in zip(g.edges, pm.transitions)
    ]
    fields = {
        "rho": pm.rho,
        "right_eigvec": [float(x) for x in pm.right],
        "left_eigvec": [float(x) for x in pm.left],
        "stationary": [float(x) for x in pm.stationary],
        "entropy": parry.measure_entropy(pm),
    }
    if args.json:
        out.emit({**fields, "transitions": edges})
    else:
        out.emit(fields)
        for e in edges:
            out.stream.write(f"edge v{e['from']} -> v{e['to']} [{e['label']}]: {_fmt(e['p'])}\n")
    return 0


def cmd_entropy(args, out):
    g = graph.graph_from_tree(_load_tree(args))
    h_p, h_top = graph.entropy_estimate(g, args.n, max_length=args.max_length)
    rho = graph.perron_eigenvalue(graph.charpoly_leverrier(g.adjacency))
    out.emit({"n": args.n, "h_p": h_p, "h_top": h_top, "log2_rho": math.log2(rho)})
    return 0


def cmd_dimension(args, out):
    spec = _load_tree(args)
    x = _read_symbols(args.input)
    lf = coding.LengthFunction.from_spec(spec)
    dm = coding.derived_measure(coding.channel_capacity(lf), lf)
    if args.coded:
        word, m, measure = coding.encode(spec, x)[0].code_symbols, spec.k, dm
    else:
        word, m, measure = x, spec.alphabet_size, None
    if args.backend == "table":
        if not args.table:
            raise UsageError("--backend table needs --table FILE")
        C = dimension.table_from_json(_read_json(args.table))
    elif args.backend == "lz78":
        C = dimension.lz78_backend(m)
    else:
        C = dimension.ideal_mu_backend(dm if args.coded else [1.0 / m] * m)
    trace = dimension.dimension_trace(C, word, m, measure=measure)
    fmt = "json" if args.json else args.format
    if fmt == "json":
        out.emit({
            "backend": C.name,
            "coded": args.coded,
            "n": list(trace.indices),
            "ratio": list(trace.ratios),
            "lower": trace.lower,
            "upper": trace.upper,
            "window_start_n": trace.indices[trace.window_start],
        })
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "ratio"])
        for n, r in zip(trace.indices, trace.ratios):
            writer.writerow([n, _fmt(r)])
        out.stream.write(buf.getvalue())
    return 0


def random_table(rng: random.Random, x, scale: float = 3.0) -> dimension.ComplexityFunction:
    """Random complexity values on every prefix of ``x``."""
    entries = {tuple(x[:n]): rng.uniform(0.0, scale * max(n, 1)) for n in range(len(x) + 1)}
    return dimension.table_backend(entries, name="random-table")


def random_point(rng: random.Random, spec: FractalTreeSpec, blocks: int):
    """Prefix of a point of the fractal: ``blocks`` full terminal nodes."""
    y = [rng.randrange(spec.k) for _ in range(blocks)]
    return coding.decode(spec, y)


def run_verification(spec, depth=5, tables=50, blocks=30, seed=0, tol=1e-9) -> list:
    """All identity checks for one tree as ``(name, passed, detail)`` rows."""
    rows = []
    lf = coding.LengthFunction.from_spec(spec)
    alpha = coding.channel_capacity(lf).alpha
    beta = coding.similarity_dimension(spec)
    gap1 = abs(alpha - math.log2(spec.alphabet_size) * beta)
    rows.append(("capacity = log2(m) * sdim", gap1 <= tol, f"gap {gap1:.3e}"))
    g = graph.graph_from_tree(spec)
    cp = graph.charpoly_leverrier(g.adjacency)
    ok4 = [-c for c in cp.coeffs] == depth_profile(spec)
    rows.append(("charpoly = -depth profile", ok4, str(cp)))
    rho = graph.perron_eigenvalue(cp)
    gap5 = abs(math.log2(rho) - alpha)
    rows.append(("log2(rho) = capacity", gap5 <= tol, f"gap {gap5:.3e}"))
    err6 = parry.pushforward_max_error(spec, depth)
    rows.append((f"Parry = pushforward (depth {depth})", err6 <= tol, f"max err {err6:.3e}"))
    rng = random.Random(seed)
    worst, violations = 0.0, 0
    for _ in range(tables):
        x = random_point(rng, spec, blocks)
        C = random_table(rng, x)
        for row in dimension.transfer_identity(spec, C, x):
            worst = max(worst, abs(row.lhs - row.rhs))
        if not dimension.sandwich_check(spec, C, x).holds:
            violations += 1
    rows.append((f"transfer identity ({tables} tables)", worst <= tol, f"max err {worst:.3e}"))
    rows.append(("sandwich inequalities", violations == 0, f"{violations} violations"))
    return rows


def cmd_verify(args, out):
    spec = _load_tree(args)
    rows = run_verification(spec, args.depth, args.tables, args.blocks, args.seed, args.tol)
    passed = all(ok for _, ok, _ in rows)
    if args.json:
        out.emit({
            "checks": [{"name": n, "pass": ok, "detail": d} for n, ok, d in rows],
            "all_pass": passed,
        })
    else:
        width = max(len(n) for n, _, _ in rows)
        for name, ok, detail in rows:
            out.stream.write(f"{name:<{width}}  {'PASS' if ok else 'FAIL'}  {detail}\n")
    return 0 if passed else 1


COMMANDS = {
    "validate": (cmd_validate, "validate a tree file"),
    "capacity": (cmd_capacity, "channel capacity of the induced length function"),
    "sdim": (cmd_sdim, "similarity dimension of the fractal tree"),
    "measure": (cmd_measure, "derived Bernoulli measure on coded sequences"),
    "encode": (cmd_encode, "parse a word into terminal-node blocks"),
    "decode": (cmd_decode, "concatenate terminal nodes named by a coded word"),
    "graph": (cmd_graph, "export the pointed graph (DOT or JSON)"),
    "tree-from-graph": (cmd_tree_from_graph, "recover the tree from a graph JSON file"),
    "charpoly": (cmd_charpoly, "characteristic polynomial (exact)"),
    "perron": (cmd_perron, "Perron eigenvalue"),
    "parry": (cmd_parry, "Parry measure"),
    "entropy": (cmd_entropy, "block-counting entropy estimates"),
    "dimension": (cmd_dimension, "complexity ratio trace"),
    "verify": (cmd_verify, "batch identity checks with a pass/fail table"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tree", metavar="FILE", help="tree JSON file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--tol", type=float, default=None, help="tolerance (default $FRACTREE_TOL or 1e-9)")
    common.add_argument("--keep-order", action="store_true",
                        help="keep terminal-node order from the file instead of length-lex")

    parser = argparse.ArgumentParser(prog="fractree", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    parsers = {}
    for name, (_, help_text) in COMMANDS.items():
        parsers[name] = sub.add_parser(name, parents=[common], help=help_text)

    parsers["measure"].add_argument("--word", help="coded word (or @file)")
    parsers["encode"].add_argument("--input", required=True, help="word over the tree alphabet (or @file)")
    parsers["decode"].add_argument("--input", required=True, help="coded word (or @file)")
    parsers["graph"].add_argument("--format", choices=["dot", "json"], default="dot")
    parsers["tree-from-graph"].add_argument("--graph", required=True, metavar="FILE", help="graph JSON file")
    parsers["entropy"].add_argument("--n", type=int, default=20, help="block length")
    parsers["entropy"].add_argument("--max-length", type=int, default=graph.MAX_BLOCK_LENGTH)
    dim = parsers["dimension"]
    dim.add_argument("--backend", choices=["table", "lz78", "ideal-mu"], default="lz78")
    dim.add_argument("--input", required=True, help="symbol string or @file")
    dim.add_argument("--table", metavar="FILE", help='complexity table JSON {"entries": {...}}')
    dim.add_argument("--coded", action="store_true",
                     help="trace the coded sequence against the derived measure")
    dim.add_argument("--format", choices=["csv", "json"], default="csv")
    ver = parsers["verify"]
    ver.add_argument("--depth", type=int, default=5, help="coded depth for the measure comparison")
    ver.add_argument("--tables", type=int, default=50, help="random complexity tables")
    ver.add_argument("--blocks", type=int, default=30, help="terminal blocks per random point")
    ver.add_argument("--seed", type=int, default=0)
    return parser


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.tol is None:
            args.tol = _default_tol()
        elif not args.tol > 0:
            raise UsageError("--tol must be positive")
        handler = COMMANDS[args.command][0]
        return handler(args, Output(stdout, args.json, args.command))
    except UsageError as exc:
        sys.stderr.write(f"fractree: error: {exc}\n")
        return 2
    except FractreeError as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return 1


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
