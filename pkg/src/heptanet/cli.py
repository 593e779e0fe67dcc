"""Command-line front end: run experiments, query the grid, compute routes."""

from __future__ import annotations

import argparse
import sys

from .engine import Engine, SimConfig
from .heptagrid import Space, TileCoord
from .routing import route_walk, shortest


def _coord(text: str) -> TileCoord:
    try:
        return TileCoord.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _auto_depth(space_depth, *coords: TileCoord) -> int:
    if space_depth is not None:
        return space_depth
    need = 1
    for c in coords:
        if not c.is_central:
            need = max(need, len(c.word.bits) // 2)
    return need


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heptanet",
        description="Navigation and message traffic on the {7,3} tiling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a traffic simulation")
    run.add_argument("--depth", type=int, default=5)
    run.add_argument("--iterations", type=int, default=168)
    run.add_argument("--lambda-public", type=float, default=0.005)
    run.add_argument("--lambda-border", type=float, default=0.0025)
    run.add_argument("--lambda-reply", type=float, default=0.0025)
    run.add_argument("--lambda-write", type=float, default=0.001)
    run.add_argument("--lambda-radius", type=float, default=5.0)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", help="CSV output path (default stdout)")
    run.add_argument("--format", choices=("csv", "summary", "both"), default="summary")
    run.add_argument("--trace", action="store_true")
    run.add_argument("--trace-out", help="trace log path (implies --trace)")
    run.add_argument("--parallel", action="store_true",
                     help="process sectors in a permuted order each tick")

    path = sub.add_parser("path", help="shortest route between two tiles")
    path.add_argument("source", type=_coord)
    path.add_argument("target", type=_coord)
    path.add_argument("--depth", type=int)

    neigh = sub.add_parser("neighbors", help="the seven neighbours of a tile")
    neigh.add_argument("tile", type=_coord)
    neigh.add_argument("--depth", type=int)

    space = sub.add_parser("space", help="dump every tile record")
    space.add_argument("--depth", type=int, default=3)
    space.add_argument("--out", help="output path (default stdout)")
    return parser


def _cmd_run(args) -> int:
    config = SimConfig(
        depth=args.depth,
        iterations=args.iterations,
        lambda_public=args.lambda_public,
        lambda_border=args.lambda_border,
        lambda_reply=args.lambda_reply,
        lambda_write=args.lambda_write,
        lambda_radius=args.lambda_radius,
        seed=args.seed,
        trace=args.trace or bool(args.trace_out),
    )
    space = Space(config.depth)
    trace_lines: list[str] = []
    engine = Engine(space, config)
    if config.trace:
        engine.on_event = lambda a, t, m, c: trace_lines.append(
            engine.trace_line(a, t, m, c)
        )
    report = engine.run(parallel=args.parallel)
    if args.format in ("csv", "both"):
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(report.to_csv())
        else:
            sys.stdout.write(report.to_csv())
    if args.format in ("summary", "both"):
        sys.stdout.write(report.summary_text())
    if args.trace_out:
        with open(args.trace_out, "w") as fh:
            fh.write("\n".join(trace_lines) + "\n")
    return 0


def _cmd_path(args) -> int:
    depth = _auto_depth(args.depth, args.source, args.target)
    space = Space(depth)
    route = shortest(space, args.source, args.target)
    tiles = route_walk(space, args.source, route)
    print(f"route  {route}")
    print(f"tiles  {' '.join(str(t) for t in tiles)}")
    print(f"length {route.moves}")
    return 0


def _cmd_neighbors(args) -> int:
    depth = _auto_depth(args.depth, args.tile)
    rec = Space(depth).record(args.tile)
    print(f"tile {rec.coord} status={rec.status} branch={rec.branch} "
          f"level={rec.level} border={rec.border}")
    for i in range(1, 8):
        marker = " (outer)" if rec.outer[i - 1] else ""
        print(f"  side {i} -> {rec.gate(i)}  side there {rec.associate[i-1]}{marker}")
    return 0


def _cmd_space(args) -> int:
    space = Space(args.depth)
    lines = "\n".join(space.dump()) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(lines)
        print(f"{space.tile_count} tiles written to {args.out}")
    else:
        sys.stdout.write(lines)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": _cmd_run,
        "path": _cmd_path,
        "neighbors": _cmd_neighbors,
        "space": _cmd_space,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
