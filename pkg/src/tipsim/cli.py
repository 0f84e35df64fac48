"""Command-line entry point: every capability as a subcommand.

Reports go to stdout as JSON; human summaries to stderr (suppressed by
--quiet). Artifacts are written atomically (temp file + rename). Exit codes:
0 success, 2 no path, 3 budget exhausted, 64 usage, 65 data error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import Optional

from tipsim.errors import (
    BudgetExhausted,
    GeometryError,
    InconsistentTrace,
    NoPath,
    ParseError,
    SceneError,
    SchemaError,
    StartStateNotInMode,
    TipsimError,
)
from tipsim.geometry import Vec2
from tipsim.planner import astar_plan, bfs_plan
from tipsim.reachability import LocomotionMode, enumerate_reachable
from tipsim.robot import Configuration, StableState
from tipsim.statics import ContactSolid, landing_probabilities, max_slopes
from tipsim import traceio

EXIT_OK = 0
EXIT_NO_PATH = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64
EXIT_DATA = 65


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _atomic_write(path: str, data: bytes) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tipsim-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()


def _load_robot(path: Optional[str]) -> traceio.RobotConfigDoc:
    if path is None:
        return traceio.RobotConfigDoc()
    return traceio.load_robot_config(_read(path))


def _emit(report: dict, quiet: bool, summary: str) -> None:
    print(json.dumps(report, sort_keys=True))
    if not quiet:
        print(summary, file=sys.stderr)


def _cmd_reach(args) -> int:
    robot = _load_robot(args.robot)
    geom = robot.geometry()
    table = robot.table()
    arena = None
    if args.scene is not None:
        scene = traceio.load_scene(_read(args.scene))
        start = scene.start
        arena = scene.arena
    else:
        start = Configuration(Vec2(0.0, 0.0), StableState(args.start_state), 0.0)
    report, trace = enumerate_reachable(
        geom, table, start, LocomotionMode(args.mode), arena=arena, budget=args.max_flips
    )
    if args.out:
        records = traceio.enumeration_records(geom, trace)
        _atomic_write(args.out, traceio.dump_trace(geom, records))
    _emit(
        report.to_json(),
        args.quiet,
        f"{args.mode}: {report.visited} poses, "
        f"{'closure exhausted' if report.exhausted else 'budget hit'} "
        f"after {report.expansions} expansions",
    )
    return EXIT_OK


def _cmd_plan(args) -> int:
    robot = _load_robot(args.robot)
    geom = robot.geometry()
    table = robot.table()
    scene = traceio.load_scene(_read(args.scene))
    planner = bfs_plan if args.algo == "bfs" else astar_plan
    plan = planner(geom, table, scene, budget=args.budget, point_mode=args.point_mode)
    report = {
        "algo": args.algo,
        "flips": plan.flips,
        "path_length": plan.path_length,
        "expansions": plan.expansions,
        "steps": [
            {"edge": edge.value, "x": c.centroid.x, "y": c.centroid.y,
             "alpha": c.alpha, "state": c.state.value}
            for edge, c in plan.steps
        ],
    }
    if args.out:
        records = traceio.plan_records(geom, scene.start, plan.steps)
        _atomic_write(args.out, traceio.dump_trace(geom, records))
    _emit(
        report,
        args.quiet,
        f"{args.algo}: {plan.flips} flips, path {plan.path_length:.4f} m, "
        f"{plan.expansions} expansions",
    )
    return EXIT_OK


def _cmd_slope(args) -> int:
    robot = _load_robot(args.robot)
    geom = robot.geometry()
    solid = ContactSolid.from_geometry(geom)
    result = max_slopes(solid, robot.mass_model(), geom, robot.table())
    _emit(
        result.to_json(),
        args.quiet,
        f"alpha_c = {math.degrees(result.alpha_c):.3f} deg, "
        f"alpha_a = {math.degrees(result.alpha_a):.3f} deg "
        f"({result.iterations} bisection steps)",
    )
    return EXIT_OK


def _cmd_landing(args) -> int:
    robot = _load_robot(args.robot)
    solid = ContactSolid.from_geometry(robot.geometry())
    est = landing_probabilities(solid, robot.mass_model(), args.samples, args.seed)
    _emit(
        est.to_json(),
        args.quiet,
        f"{args.samples} samples: p_hu={est.p_hu:.4f} p_hd={est.p_hd:.4f} p_sd={est.p_sd:.4f}",
    )
    return EXIT_OK


def _cmd_render(args) -> int:
    header, records = traceio.parse_trace(_read(args.trace))
    scene_doc = None
    if args.scene is not None:
        scene_doc = traceio.load_scene_doc(_read(args.scene))
    svg = traceio.render_svg(records, scene_doc, size=args.size, header=header)
    out = args.out or (os.path.splitext(args.trace)[0] + ".svg")
    _atomic_write(out, svg)
    if not args.quiet:
        print(f"wrote {out} ({len(records)} footprints)", file=sys.stderr)
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from tipsim.service import create_app

    app = create_app(ui_dir=args.ui)
    if not args.quiet:
        print(f"serving on http://{args.host}:{args.port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def _cmd_validate(args) -> int:
    data = _read(args.file)
    head = data.lstrip()[:1]
    kind: str
    if head != b"{":
        raise ParseError("not a JSON document")
    first_line = data.splitlines()[0]
    try:
        first = json.loads(first_line)
    except json.JSONDecodeError:
        first = None
    if isinstance(first, dict) and first.get("format") == traceio.TRACE_FORMAT:
        header, records = traceio.parse_trace(data)
        traceio.validate_trace(header, records)
        kind = f"trace with {len(records)} records"
    else:
        try:
            obj = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from None
        if isinstance(obj, dict) and "start" in obj:
            traceio.load_scene(data)
            kind = "scene"
        else:
            traceio.load_robot_config(data)
            kind = "robot config"
    _emit({"valid": True, "kind": kind.split(" ")[0]}, args.quiet, f"{args.file}: valid {kind}")
    return EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="tipsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--robot", help="robot config JSON (defaults embedded)")
        p.add_argument("--out", "-o", help="artifact output path")
        p.add_argument("--quiet", action="store_true", help="suppress stderr summaries")

    p = sub.add_parser("reach", help="enumerate the reachable closure")
    common(p)
    p.add_argument("--mode", required=True,
                   choices=[m.value for m in LocomotionMode])
    p.add_argument("--max-flips", type=int, default=10_000,
                   help="expansion budget (default 10000)")
    p.add_argument("--scene", help="optional scene supplying start and arena")
    p.add_argument("--start-state", default="HU", choices=["HU", "HD", "SD"])
    p.set_defaults(func=_cmd_reach)

    p = sub.add_parser("plan", help="plan a flip sequence to a target")
    common(p)
    p.add_argument("--scene", required=True)
    p.add_argument("--algo", default="astar", choices=["bfs", "astar"])
    p.add_argument("--budget", type=int, default=1_000_000)
    p.add_argument("--point-mode", action="store_true",
                   help="check only the centroid against obstacles")
    p.set_defaults(func=_cmd_plan)

    p = sub.add_parser("slope", help="maximal climbable and descent slopes")
    common(p)
    p.set_defaults(func=_cmd_slope)

    p = sub.add_parser("landing", help="landing-state probabilities")
    common(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_landing)

    p = sub.add_parser("render", help="render a trace to SVG")
    common(p)
    p.add_argument("trace")
    p.add_argument("--scene", help="scene to draw obstacles/target from")
    p.add_argument("--size", type=int, default=800)
    p.set_defaults(func=_cmd_render)

    p = sub.add_parser("serve", help="run the interactive session service")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--ui", help="directory with the built web client")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("validate", help="schema-check a config/scene/trace file")
    common(p)
    p.add_argument("file")
    p.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NoPath as exc:
        print(f"tipsim: no path: {exc}", file=sys.stderr)
        return EXIT_NO_PATH
    except BudgetExhausted as exc:
        print(f"tipsim: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ParseError, SchemaError, GeometryError, InconsistentTrace,
            SceneError, StartStateNotInMode) as exc:
        print(f"tipsim: {exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"tipsim: {exc}", file=sys.stderr)
        return EXIT_DATA
    except TipsimError as exc:
        print(f"tipsim: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
