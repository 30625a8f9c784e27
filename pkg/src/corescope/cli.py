"""Command-line entry point.

Structured output is one JSON object per line, keys sorted, so identical
invocations produce byte-identical output. Exit status: 0 success, 1 usage
error, 2 data error (parse, arity, scope violations and the like).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__
from .canonical import CANONICAL_LIMIT, LABELLED_LIMIT, canonical_code, enumerate_connected
from .census import describe
from .errors import CorescopeError, ParseError
from .graph import CoreGraph, fingerprint, normalize_to_core, parse_edge_list
from .render import ENCODINGS, SERIATION_METHODS, render_view
from .render.layout import DEFAULT_ITERATIONS, DEFAULT_SEED
from .similarity import (DEFAULT_LINK_THRESHOLD, METRICS, compare_report, group_matrix, rank_matrix,
                         similarity_matrix)
from .tasks import TaskTriplet, chain_tasks, check_arity, parse_chain, run_task, validate_triplet


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: {message}")


def sanitize(value: Any) -> Any:
    """Make a value strict-JSON safe: non-finite floats become null, numpy scalars plain."""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, np.ndarray):
        return sanitize(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return x if math.isfinite(x) else None
    if isinstance(value, (frozenset, set)):
        return sorted(sanitize(v) for v in value)
    return value


# -- inputs ----------------------------------------------------------------------


def expand_inputs(paths: Sequence[str]) -> list[str]:
    out = []
    for p in paths:
        if os.path.isdir(p):
            out.extend(str(Path(p) / f) for f in sorted(os.listdir(p))
                       if not f.startswith(".") and os.path.isfile(os.path.join(p, f)))
        else:
            out.append(p)
    return out


def load(path: str) -> tuple[list[CoreGraph], dict]:
    """All components of one input file plus its provenance entry."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise CorescopeError(f"{path}: {exc.strerror or exc}") from exc
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorescopeError(f"{path}: not UTF-8 text") from exc
    try:
        parts = normalize_to_core(parse_edge_list(text))
    except ParseError as exc:
        raise ParseError(exc.line, f"{path}: {exc.reason}") from None
    if not parts:
        raise CorescopeError(f"{path}: no edges found")
    info = {"path": path, "sha256": hashlib.sha256(data).hexdigest(), "fingerprint": fingerprint(parts[0]),
            "components": len(parts)}
    return parts, info


def load_main(path: str) -> tuple[CoreGraph, dict]:
    """The largest component of an input file stands for the file."""
    parts, info = load(path)
    return parts[0], info


def _pool_map(fn: Callable, items: list, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# -- per-file work items (top level so they pickle) --------------------------------


def _describe_item(path: str) -> dict:
    g, info = load_main(path)
    return {"inputs": [info], "result": describe(g)}


def _task_item(args: tuple[str, str]) -> dict:
    triplet, path = args
    g, info = load_main(path)
    return {"inputs": [info], "result": run_task(TaskTriplet.parse(triplet), [g]).to_record()}


def _render_item(args: tuple[str, str, dict, str]) -> dict:
    path, encoding, options, out_dir = args
    g, info = load_main(path)
    doc = render_view(g, encoding, options)
    record = doc.to_record()
    if out_dir:
        target = Path(out_dir) / f"{Path(path).stem}.{doc.encoding}.svg"
        target.write_bytes(doc.svg)
        record["output"] = str(target)
    return {"inputs": [info], "result": record}


# -- subcommands -------------------------------------------------------------------


def _emit(records: list[dict], args, command: str, params: dict, triplet: str | None = None) -> None:
    for rec in records:
        out = {"command": command, "result": rec["result"],
               "provenance": {"params": params, "seed": args.seed, "inputs": rec["inputs"],
                              "triplet": triplet, "version": __version__}}
        clean = sanitize(out)
        if args.format == "json":
            line = json.dumps(clean, sort_keys=True, separators=(",", ":"), allow_nan=False)
        else:
            line = json.dumps(clean, sort_keys=True, indent=2, allow_nan=False)
        args.stdout.write(line + "\n")


def cmd_ingest(args) -> None:
    records = []
    for path in expand_inputs(args.inputs):
        parts, info = load(path)
        comps = []
        for i, g in enumerate(parts):
            entry = {"index": i, "node_count": g.node_count, "edge_count": g.edge_count,
                     "fingerprint": fingerprint(g),
                     "canonical": str(canonical_code(g)) if g.node_count <= CANONICAL_LIMIT else None}
            if args.out:
                target = Path(args.out) / f"{Path(path).stem}.{i}.txt"
                target.write_text(g.to_edge_list(), encoding="utf-8")
                entry["output"] = str(target)
            comps.append(entry)
        records.append({"inputs": [info], "result": {"components": comps}})
    _emit(records, args, "ingest", {})


def cmd_describe(args) -> None:
    _emit(_pool_map(_describe_item, expand_inputs(args.inputs), args.workers), args, "describe", {})


def cmd_task(args) -> None:
    paths = expand_inputs(args.inputs)
    if bool(args.triplet) == bool(args.chain):
        raise UsageError("task: give exactly one of --triplet or --chain")
    if args.chain:
        steps = parse_chain(args.chain)
        loaded = [load_main(p) for p in paths]
        result = chain_tasks(steps, [g for g, _ in loaded])
        _emit([{"inputs": [i for _, i in loaded], "result": result.to_record()}],
              args, "task", {"chain": args.chain}, None)
        return
    t = TaskTriplet.parse(args.triplet)
    validate_triplet(t)
    if t.scope in ("pair", "multiple"):
        check_arity(t.scope, len(paths))
        loaded = [load_main(p) for p in paths]
        result = run_task(t, [g for g, _ in loaded], ids=paths)
        records = [{"inputs": [i for _, i in loaded], "result": result.to_record()}]
    else:
        if not paths:
            raise UsageError("task: no input graphs")
        records = _pool_map(_task_item, [(str(t), p) for p in paths], args.workers)
    _emit(records, args, "task", t.param_dict, str(t))


def _collection(args) -> tuple[list[CoreGraph], list[dict], list[str]]:
    paths = expand_inputs(args.inputs)
    check_arity("multiple", len(paths))
    loaded = [load_main(p) for p in paths]
    return [g for g, _ in loaded], [i for _, i in loaded], paths


def cmd_compare(args) -> None:
    paths = expand_inputs(args.inputs)
    check_arity("pair", len(paths))
    (g1, i1), (g2, i2) = load_main(paths[0]), load_main(paths[1])
    _emit([{"inputs": [i1, i2], "result": compare_report(g1, g2).to_record()}], args, "compare", {})


def cmd_group(args) -> None:
    gs, infos, paths = _collection(args)
    matrix = similarity_matrix(gs, args.metric, ids=paths)
    result = {"grouping": group_matrix(matrix, args.threshold).to_record(), "matrix": matrix.to_record()}
    _emit([{"inputs": infos, "result": result}], args, "group",
          {"metric": args.metric, "threshold": args.threshold})


def cmd_rank(args) -> None:
    gs, infos, paths = _collection(args)
    matrix = similarity_matrix(gs, args.metric, ids=paths)
    ranking = rank_matrix(matrix)
    result = {"ranking": ranking.to_record(), "ranked_ids": [paths[i] for i in ranking.order]}
    _emit([{"inputs": infos, "result": result}], args, "rank", {"metric": args.metric})


def cmd_render(args) -> None:
    enc = args.encoding.upper()
    options: dict = {}
    if enc == "NL":
        options = {"seed": args.seed, "iterations": args.iterations}
    elif enc == "AM":
        options = {"seriation": args.seriation}
    elif enc in ("HC", "CC", "NP") and args.log is not None:
        options = {"log": args.log == "on"}
    if enc == "HC" and args.census:
        options["census"] = args.census
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    items = [(p, enc, options, args.out) for p in expand_inputs(args.inputs)]
    _emit(_pool_map(_render_item, items, args.workers), args, "render", {"encoding": enc, **options})


def cmd_enumerate(args) -> None:
    unl = enumerate_connected(args.n)
    result = {"n": args.n, "unlabelled": unl.count,
              "labelled": enumerate_connected(args.n, labelled=True).count if args.n <= LABELLED_LIMIT else None}
    if args.codes:
        result["codes"] = [str(c) for c in unl.codes]
    _emit([{"inputs": [], "result": result}], args, "enumerate", {"n": args.n})


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default %(default)s)")
    common.add_argument("--format", choices=("json", "text"), default="json",
                        help="json: one record per line; text: indented records")
    common.add_argument("--workers", type=int, default=1, help="parallel per-graph workers")

    parser = _Parser(prog="corescope", description="Unlabelled graph descriptors, tasks and views.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("ingest", parents=[common], help="normalize edge lists into core graphs")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--out", help="write each component as an edge list into this directory")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("describe", parents=[common], help="censuses, BMatrix, distances, k-core")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_describe)

    p = sub.add_parser("task", parents=[common], help="run a scope:action:target triplet or a chain")
    p.add_argument("inputs", nargs="*")
    p.add_argument("--triplet")
    p.add_argument("--chain", help="steps like 'a=subgraph:locate:clique; b=largest(a)'")
    p.set_defaults(func=cmd_task)

    p = sub.add_parser("compare", parents=[common], help="facet-by-facet comparison of two graphs")
    p.add_argument("inputs", nargs="+")
    p.set_defaults(func=cmd_compare)

    for name, func, helptext in (("group", cmd_group, "average-linkage grouping"),
                                 ("rank", cmd_rank, "rank graphs by total distance (medoid first)")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("inputs", nargs="+")
        p.add_argument("--metric", choices=METRICS, default="portrait")
        if name == "group":
            p.add_argument("--threshold", type=float, default=DEFAULT_LINK_THRESHOLD)
        p.set_defaults(func=func)

    p = sub.add_parser("render", parents=[common], help="write SVG views")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--encoding", required=True, type=str.upper, choices=ENCODINGS)
    p.add_argument("--out", help="directory for SVG files")
    p.add_argument("--iterations", type=int, default=DEFAULT_ITERATIONS)
    p.add_argument("--seriation", choices=SERIATION_METHODS, default="hierarchical")
    p.add_argument("--census", choices=("stub", "node"))
    p.add_argument("--log", choices=("on", "off"))
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("enumerate", parents=[common], help="count connected graphs on n nodes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--codes", action="store_true", help="also list canonical codes")
    p.set_defaults(func=cmd_enumerate)
    return parser


def run_command(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 1
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    args.stdout = stdout
    try:
        args.func(args)
    except UsageError as exc:
        stderr.write(f"{exc}\n")
        return 1
    except (CorescopeError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    return 0


def main() -> None:
    sys.exit(run_command())
