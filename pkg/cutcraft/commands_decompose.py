import argparse
import logging

from .commands_solve import read_graph, vertex_pair, write_output
from .treedec import emit_td, heuristic_decompose, path_decompose, to_nice

logger = logging.getLogger("cutcraft.treedec")


def register(subparsers) -> None:
    p = subparsers.add_parser("decompose", help="heuristic tree or path decomposition")
    p.add_argument("--graph", required=True)
    p.add_argument("--path", action="store_true", help="path decomposition instead of min-fill")
    p.add_argument("--nice", action="store_true", help="print the anchored nice form instead of a .td file")
    p.add_argument("--anchors", help="anchors u,v (1-based) for --nice")
    p.add_argument("--out")
    p.set_defaults(func=run_decompose)


def run_decompose(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    g.require_connected()
    td = path_decompose(g) if args.path else heuristic_decompose(g)
    logger.info("decomposition of width %d with %d bags", td.width, len(td.bags))
    if args.nice:
        anchors = vertex_pair(args.anchors) if args.anchors else ()
        write_output(to_nice(g, td, anchors).describe(), args.out)
    else:
        write_output(emit_td(td), args.out)
    return 0
