"""Record a server message stream for the frontend conformance test.

Drives a real SessionCore through a scripted follow-the-target episode and
stores every emitted message, interleaving a snapshot after each flip so the
client can check its animated footprint against server authority.
"""

import json
import math
import pathlib
import random
import sys

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from tipsim.reachability import LocomotionMode, allowed_moves
from tipsim.robot import StableState, revolve
from tipsim.service import SessionCore
from tipsim.traceio import RobotConfigDoc, SceneDoc, StartSpec


def main(out_path: str) -> None:
    robot = RobotConfigDoc(tri_side=1.0, rect_width=math.sqrt(3.0) / 2.0)
    scene = SceneDoc(
        start=StartSpec(0.0, 0.0, 0.0, StableState.HU),
        target=(0.0, 0.0),
        tolerance=0.45,
        arena=((-8.0, -8.0), (8.0, 8.0)),
        obstacles=(((1.6, -0.7), (2.6, -0.7), (2.6, 0.7), (1.6, 0.7)),),
    )
    core = SessionCore(scene, robot, tick_ms=250)
    rng = random.Random(20)

    messages = [core.snapshot_message()]

    def walk_goal(flips, heading):
        ray = (math.cos(heading), math.sin(heading))
        c = core.config
        for _ in range(flips):
            best = None
            for e in allowed_moves(core.table, LocomotionMode.TRISTATE, c.state):
                nx = revolve(core.geom, core.table, c, e)
                d = (nx.centroid.x - c.centroid.x) * ray[0] + (
                    nx.centroid.y - c.centroid.y
                ) * ray[1]
                if best is None or d > best[0]:
                    best = (d, nx)
            c = best[1]
        return c.centroid

    for leg_flips in (6, 5):
        goal = None
        for _ in range(40):  # pick a heading whose goal is actually plannable
            candidate = walk_goal(leg_flips, rng.uniform(0, 2 * math.pi))
            if candidate.dist(core.config.centroid) < core.tolerance * 1.5:
                continue
            probe = core._scene()
            probe = type(probe)(
                start=core.config, target=candidate, tolerance=core.tolerance,
                obstacles=probe.obstacles, arena=probe.arena,
            )
            from tipsim.errors import NoPath
            from tipsim.planner import astar_plan

            try:
                astar_plan(core.geom, core.table, probe, budget=50_000)
            except NoPath:
                continue
            goal = candidate
            break
        assert goal is not None
        messages.extend(
            core.apply_client_message({"type": "set_target", "x": goal.x, "y": goal.y})
        )
        for _ in range(100):
            msg = core.tick()
            if msg is None:
                break
            messages.append(msg)
            assert not (msg["type"] == "plan_status" and msg["status"] != "ok")
            if msg["type"] == "flip":
                messages.append(core.snapshot_message())

    fixture = {
        "tick_ms": core.tick_ms,
        "scene": {
            "tri_side": core.geom.tri_side,
            "rect_width": core.geom.rect_width,
            "tolerance": core.tolerance,
            "arena": {"min": [-8.0, -8.0], "max": [8.0, 8.0]},
            "obstacles": [[[1.6, -0.7], [2.6, -0.7], [2.6, 0.7], [1.6, 0.7]]],
            "tick_ms": core.tick_ms,
        },
        "messages": messages,
    }
    pathlib.Path(out_path).write_text(json.dumps(fixture, indent=1) + "\n")
    flips = sum(1 for m in messages if m["type"] == "flip")
    print(f"wrote {out_path}: {len(messages)} messages, {flips} flips")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "frontend/test/fixtures/stream.json")
