"""Command line driver: ``trihc {gen,filter,check,analyze,decompose,construct}``.

Graphs travel as planar_code on standard streams; reports are JSON lines.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import __version__
from .constructions import DEFAULT_ENUMERATION_CAP, TreeSpec, counterexample_from_tree, fixture, iter_triangulations
from .decomposition import decomposition_tree, tree_shape
from .hamsearch import RULE_IDS, PremiseLedger, RuleConfig, check_hc
from .plane import (
    PLANAR_CODE_HEADER,
    PlanarCodeError,
    Triangulation,
    TriangulationError,
    encode_planar_code,
    format_text,
    iter_planar_code,
    parse_text,
)
from .structure import DEFAULT_MAX_SUBSET, find_common_separating_edge, scattering_certificate_not_hc, separating_triangles

log = logging.getLogger("trihc")

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_ERROR = 2


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    input: str = "-"
    sep_triangles: int | None = None
    tree: str = "any"
    mode: str = "optimized"
    rotation_depth: int = 2
    inductive: bool = False
    witness: bool = False
    timing: bool = False
    jobs: int = 1
    cap: int = DEFAULT_ENUMERATION_CAP
    max_subset: int = DEFAULT_MAX_SUBSET
    disabled_rules: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.jobs < 1:
            raise ConfigError("--jobs must be at least 1")
        if self.rotation_depth < 0:
            raise ConfigError("--rotation-depth must be non-negative")
        if self.mode not in ("naive", "optimized", "audit"):
            raise ConfigError(f"unknown mode {self.mode}")
        parse_tree_filter(self.tree)
        for r in self.disabled_rules:
            if r not in RULE_IDS or r == "SEARCH":
                raise ConfigError(f"unknown rule {r}")


def parse_tree_filter(spec: str) -> Callable[[int], bool]:
    """Predicate on the tree's maximum degree for ``path``, ``any`` or ``maxdeg<K>``."""
    if spec == "any":
        return lambda md: True
    if spec == "path":
        return lambda md: md <= 2
    m = re.fullmatch(r"maxdeg(\d+)", spec)
    if m:
        k = int(m.group(1))
        return lambda md: md <= k
    raise ConfigError(f"bad --tree value {spec!r}; use path, any or maxdeg<K>")


# -- I/O --------------------------------------------------------------------


def _read_input(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def read_graphs(path: str, errors: list[PlanarCodeError] | None = None) -> list[Triangulation]:
    data = _read_input(path)
    if data.startswith(PLANAR_CODE_HEADER):
        return list(iter_planar_code(data, errors))
    try:
        return parse_text(data.decode("ascii"))
    except (UnicodeDecodeError, ValueError) as exc:
        raise PlanarCodeError(f"input is neither planar_code nor text rotation format ({exc})", 0, 0) from exc


def _write_graphs(out, graphs: Iterable[Triangulation], text: bool) -> None:
    if text:
        out.write(format_text(graphs).encode())
    else:
        out.write(encode_planar_code(graphs))
    out.flush()


def _emit(record: dict) -> None:
    sys.stdout.write(json.dumps(record) + "\n")


# -- per-graph workers (module level so they pickle) -------------------------------


def _check_task(args: tuple) -> dict:
    index, g, mode, config, witness, timing = args
    report = check_hc(g, mode, config, graph_id=index)
    return report.to_record(witness=witness, timing=timing)


def _analyze_task(args: tuple) -> dict:
    index, g, max_subset = args
    seps = separating_triangles(g)
    shape = tree_shape(decomposition_tree(g))
    common = find_common_separating_edge(g)
    w = scattering_certificate_not_hc(g, max_subset)
    return {
        "graph": index,
        "n": g.n,
        "edges": g.edge_count,
        "sep_triangles": len(seps),
        "tree": {"nodes": shape.node_count, "max_degree": shape.max_degree, "is_path": shape.is_path},
        "common_separating_edge": list(common) if common else None,
        "scattering_witness": None
        if w is None
        else {"X": sorted(w.X), "components": w.components, "bound": w.bound},
    }


def _decompose_task(args: tuple) -> dict:
    index, g = args
    tree = decomposition_tree(g)
    shape = tree_shape(tree)
    return {
        "graph": index,
        "n": g.n,
        "pieces": tree.node_count,
        "piece_orders": [p.n for p in tree.pieces],
        "piece_vertices": [list(o) for o in tree.origins],
        "edges": [{"a": a, "b": b, "triangle": list(t)} for a, b, t in tree.edges],
        "shape": {"max_degree": shape.max_degree, "is_path": shape.is_path, "key": shape.key},
    }


def _map(fn, tasks: Sequence, jobs: int) -> Iterable:
    if jobs <= 1 or len(tasks) <= 1:
        return map(fn, tasks)
    pool = ProcessPoolExecutor(max_workers=jobs)
    try:
        return list(pool.map(fn, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    finally:
        pool.shutdown()


# -- commands ---------------------------------------------------------------------


def cmd_gen(args) -> int:
    if args.n > args.cap:
        raise ConfigError(f"n={args.n} exceeds cap {args.cap}")
    try:
        graphs = list(iter_triangulations(args.n, cap=args.cap))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _write_graphs(sys.stdout.buffer, graphs, args.text)
    return EXIT_OK


def cmd_filter(args) -> int:
    errors: list[PlanarCodeError] = []
    graphs = read_graphs(args.input, errors)
    pred = parse_tree_filter(args.tree)
    kept = []
    for g in graphs:
        seps = len(separating_triangles(g))
        if args.sep_triangles is not None and seps != args.sep_triangles:
            continue
        if args.tree != "any" and not pred(tree_shape(decomposition_tree(g)).max_degree):
            continue
        kept.append(g)
    _write_graphs(sys.stdout.buffer, kept, args.text)
    for e in errors:
        log.error("skipped malformed graph: %s", e)
    return EXIT_ERROR if errors else EXIT_OK


def build_rule_config(cfg: RunConfig, orders: Iterable[int]) -> RuleConfig:
    rc = RuleConfig(rotation_depth=cfg.rotation_depth)
    flags = {
        "CYCLE_SEED": "cycle_seed",
        "ROTATION": "rotation",
        "PATH_TREE_ADJ": "path_tree_adj",
        "DIST2_DEG4": "dist2_deg4",
        "DIST2_DEG5": "dist2_deg5",
        "FLIP_SKIP": "flip_skip",
        "CONTRACT_SKIP": "contract_skip",
    }
    if cfg.inductive:
        top = max(orders, default=4)
        if top > cfg.cap:
            raise ConfigError(f"--inductive needs complete enumeration up to n={top}, above cap {cfg.cap}")
        log.info("filling premise ledger for orders 4..%d", top)
        rc.ledger = PremiseLedger.build(top)
        rc.flip_skip = rc.contract_skip = True
    for r in cfg.disabled_rules:
        setattr(rc, flags[r], False)
    return rc


def cmd_check(args) -> int:
    cfg = RunConfig(
        command="check",
        input=args.input,
        mode=args.mode,
        rotation_depth=args.rotation_depth,
        inductive=args.inductive,
        witness=args.witness,
        timing=args.timing,
        jobs=args.jobs,
        cap=args.cap,
        disabled_rules=args.disable or [],
    )
    errors: list[PlanarCodeError] = []
    graphs = read_graphs(cfg.input, errors)
    rc = build_rule_config(cfg, (g.n for g in graphs))
    tasks = [(i, g, cfg.mode, rc, cfg.witness, cfg.timing) for i, g in enumerate(graphs)]
    bad = []
    discrepancy = False
    for rec in _map(_check_task, tasks, cfg.jobs):
        _emit(rec)
        if not rec["hamiltonian_connected"]:
            bad.append(graphs[rec["graph"]])
        for d in rec.get("discrepancies", []):
            discrepancy = True
            log.error("graph %d: rule %s claimed pair %s without a hamiltonian path", rec["graph"], d["rule"], d["pair"])
    sys.stdout.flush()
    if bad and args.counterexamples:
        Path(args.counterexamples).write_bytes(encode_planar_code(bad))
    for e in errors:
        log.error("skipped malformed graph: %s", e)
    if errors or discrepancy:
        return EXIT_ERROR
    return EXIT_COUNTEREXAMPLE if bad else EXIT_OK


def cmd_analyze(args) -> int:
    errors: list[PlanarCodeError] = []
    graphs = read_graphs(args.input, errors)
    tasks = [(i, g, args.max_subset) for i, g in enumerate(graphs)]
    for rec in _map(_analyze_task, tasks, args.jobs):
        _emit(rec)
    for e in errors:
        log.error("skipped malformed graph: %s", e)
    return EXIT_ERROR if errors else EXIT_OK


def cmd_decompose(args) -> int:
    errors: list[PlanarCodeError] = []
    graphs = read_graphs(args.input, errors)
    for rec in _map(_decompose_task, [(i, g) for i, g in enumerate(graphs)], args.jobs):
        _emit(rec)
    for e in errors:
        log.error("skipped malformed graph: %s", e)
    return EXIT_ERROR if errors else EXIT_OK


def cmd_construct(args) -> int:
    if args.fixture:
        try:
            g = fixture(args.fixture)
        except (KeyError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
    else:
        try:
            tree = TreeSpec.parse(Path(args.counterexample_tree).read_text())
            g = counterexample_from_tree(tree)
        except (OSError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
    _write_graphs(sys.stdout.buffer, [g], args.text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="trihc", description="Hamiltonian-connectedness tools for plane triangulations")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def add_input(sp):
        sp.add_argument("input", nargs="?", default="-", help="planar_code or text file (default: stdin)")

    sp = sub.add_parser("gen", help="all triangulations on n vertices as planar_code")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    sp.add_argument("--text", action="store_true", help="emit the text rotation format")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("filter", help="keep graphs by separating-triangle count and tree shape")
    add_input(sp)
    sp.add_argument("--sep-triangles", type=int)
    sp.add_argument("--tree", default="any", help="path, maxdeg<K> or any")
    sp.add_argument("--text", action="store_true")
    sp.set_defaults(func=cmd_filter)

    sp = sub.add_parser("check", help="decide hamiltonian-connectedness")
    add_input(sp)
    sp.add_argument("--mode", choices=("naive", "optimized", "audit"), default="optimized")
    sp.add_argument("--rotation-depth", type=int, default=2)
    sp.add_argument("--inductive", action="store_true", help="enable FLIP_SKIP and CONTRACT_SKIP with a verified premise ledger")
    sp.add_argument("--disable", action="append", metavar="RULE", help="turn off a rule (repeatable)")
    sp.add_argument("--witness", action="store_true")
    sp.add_argument("--timing", action="store_true", help="include elapsed seconds (breaks byte-identical output)")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP)
    sp.add_argument("--counterexamples", metavar="FILE", help="write non-hamiltonian-connected graphs here as planar_code")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("analyze", help="structure summary and scattering certificate per graph")
    add_input(sp)
    sp.add_argument("--max-subset", type=int, default=DEFAULT_MAX_SUBSET)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("decompose", help="decomposition tree per graph")
    add_input(sp)
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("construct", help="emit a fixture or a counterexample built from a tree")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--fixture", metavar="NAME")
    g.add_argument("--counterexample-tree", metavar="FILE", help="edge list, one 'a b' pair per line")
    sp.add_argument("--text", action="store_true")
    sp.set_defaults(func=cmd_construct)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="trihc: %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return EXIT_ERROR
    except (PlanarCodeError, TriangulationError, OSError) as exc:
        log.error("input error: %s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
