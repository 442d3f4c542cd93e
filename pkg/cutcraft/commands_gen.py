import argparse
import logging
from pathlib import Path

from .clique_width import emit_cw, evaluate_cw, random_cograph_expression
from .commands_solve import read_graph, write_output
from .graph import emit_graph, random_connected_graph
from .reductions import (
    ReducedInstance,
    gen_maxcut_mmc_split,
    gen_pm3sat_cmc,
    gen_subdivision_mmc,
    gen_x3c_cmc,
    parse_family,
    parse_formula,
)

logger = logging.getLogger("cutcraft.reductions")


def register(subparsers) -> None:
    p = subparsers.add_parser("gen", help="generate instances")
    kinds = p.add_subparsers(dest="kind", required=True)

    sat = kinds.add_parser("pm3sat", help="planar bipartite CMC instance from a monotone 3-SAT formula")
    sat.add_argument("--formula", required=True, help="formula file ('p mono n m', then '+ a b c' / '- a b c')")
    sat.add_argument("--K", type=int, help="helper multiplicity, a perfect square above m^2 (default (m+1)^2)")
    sat.add_argument("--unsound-scale", action="store_true", help="allow parameters below the correctness bound")
    sat.add_argument("--out", required=True, help="output prefix: writes PREFIX.gr and PREFIX.json")
    sat.set_defaults(func=run_pm3sat)

    sub = kinds.add_parser("subdivision", help="subdivide every edge (bipartite MMC instance)")
    sub.add_argument("--graph", required=True)
    sub.add_argument("--k", type=int, help="threshold to record in the sidecar")
    sub.add_argument("--out", required=True)
    sub.set_defaults(func=run_subdivision)

    x3c = kinds.add_parser("x3c", help="split-graph CMC instance from exact cover by 3-sets")
    x3c.add_argument("--family", required=True, help="family file ('p x3c elements triples', then triples)")
    x3c.add_argument("--M", type=int, help="pendant block size (default 3n+1)")
    x3c.add_argument("--unsound-scale", action="store_true")
    x3c.add_argument("--out", required=True)
    x3c.set_defaults(func=run_x3c)

    split = kinds.add_parser("maxcut-split", help="split-graph MMC instance from max cut")
    split.add_argument("--graph", required=True)
    split.add_argument("--ell", type=int, help="copies per edge (default n^3)")
    split.add_argument("--k", type=int, help="max-cut target; the threshold becomes k*ell")
    split.add_argument("--out", required=True)
    split.set_defaults(func=run_maxcut_split)

    rnd = kinds.add_parser("random", help="seeded random connected graph")
    rnd.add_argument("--n", type=int, required=True)
    rnd.add_argument("--p", type=float, default=0.3)
    rnd.add_argument("--seed", type=int, default=0)
    rnd.add_argument("--out", help=".gr file (default stdout)")
    rnd.set_defaults(func=run_random)

    cog = kinds.add_parser("cograph", help="random connected cograph with its two-label expression")
    cog.add_argument("--n", type=int, required=True)
    cog.add_argument("--seed", type=int, default=0)
    cog.add_argument("--out", required=True, help="output prefix: writes PREFIX.gr and PREFIX.cwd")
    cog.set_defaults(func=run_cograph)


def _write_instance(instance: ReducedInstance, prefix: str) -> int:
    Path(f"{prefix}.gr").write_text(emit_graph(instance.graph))
    Path(f"{prefix}.json").write_text(instance.to_sidecar())
    logger.info(
        "wrote %s.gr (%d vertices, %d edges), threshold %s", prefix, instance.graph.n, instance.graph.m, instance.threshold
    )
    return 0


def run_pm3sat(args: argparse.Namespace) -> int:
    formula = parse_formula(Path(args.formula).read_text())
    return _write_instance(gen_pm3sat_cmc(formula, args.K, unsound_scale=args.unsound_scale), args.out)


def run_subdivision(args: argparse.Namespace) -> int:
    return _write_instance(gen_subdivision_mmc(read_graph(args.graph), args.k), args.out)


def run_x3c(args: argparse.Namespace) -> int:
    n_elements, triples = parse_family(Path(args.family).read_text())
    return _write_instance(gen_x3c_cmc(n_elements, triples, args.M, unsound_scale=args.unsound_scale), args.out)


def run_maxcut_split(args: argparse.Namespace) -> int:
    return _write_instance(gen_maxcut_mmc_split(read_graph(args.graph), args.ell, args.k), args.out)


def run_random(args: argparse.Namespace) -> int:
    write_output(emit_graph(random_connected_graph(args.n, args.p, args.seed)), args.out)
    return 0


def run_cograph(args: argparse.Namespace) -> int:
    expr, g = evaluate_cw(random_cograph_expression(args.n, args.seed))
    Path(f"{args.out}.gr").write_text(emit_graph(g))
    Path(f"{args.out}.cwd").write_text(emit_cw(expr))
    return 0
