"""Benchmark the compiled kernels against the pure-Python twins.

Run as `python -m tipsim.bench [N]`. Spawns a TIPSIM_PURE=1 subprocess for
the pure lane so both backends run the same code paths end to end.
"""

from __future__ import annotations

import json
import math
import os
import random
import subprocess
import sys
import time


def _workloads(n: int):
    from tipsim.geometry import ConvexPolygon, Vec2, polygons_intersect
    from tipsim.reachability import LocomotionMode, enumerate_reachable
    from tipsim.robot import (
        Configuration,
        RobotGeometry,
        StableState,
        TransitionTable,
        revolve_ex,
    )

    geom = RobotGeometry.from_sides(1.0, math.sqrt(3.0) / 2.0)
    table = TransitionTable.default()
    rng = random.Random(0)

    def revolve_storm():
        c = Configuration(Vec2(0.0, 0.0), StableState.HU, 0.3)
        edges = table.allowed_edges(c.state)
        e = edges[0]
        for _ in range(n):
            c, e = revolve_ex(geom, table, c, e)
        return c.centroid.x

    def sat_pairs():
        polys = []
        for _ in range(64):
            cx, cy = rng.uniform(-2, 2), rng.uniform(-2, 2)
            r = rng.uniform(0.3, 1.0)
            polys.append(
                ConvexPolygon(
                    Vec2(cx + r * math.cos(a), cy + r * math.sin(a))
                    for a in [k * 2 * math.pi / 6 + 0.1 for k in range(6)]
                )
            )
        hits = 0
        for _ in range(n // 10):
            a = polys[rng.randrange(64)]
            b = polys[rng.randrange(64)]
            hits += polygons_intersect(a, b)
        return hits

    def tristate_flood():
        start = Configuration(Vec2(0.0, 0.0), StableState.HU, 0.0)
        report, _ = enumerate_reachable(
            geom, table, start, LocomotionMode.TRISTATE, budget=max(n // 20, 100)
        )
        return report.visited

    return [
        ("revolve", revolve_storm),
        ("sat-overlap", sat_pairs),
        ("enumerate", tristate_flood),
    ]


def run(n: int) -> dict:
    from tipsim.kernels import BACKEND

    results = {"backend": BACKEND, "n": n, "timings": {}}
    for name, fn in _workloads(n):
        t0 = time.perf_counter()
        fn()
        results["timings"][name] = time.perf_counter() - t0
    return results


def main() -> int:
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 200_000
    if os.environ.get("TIPSIM_BENCH_CHILD"):
        print(json.dumps(run(n)))
        return 0

    here = run(n)
    env = dict(os.environ, TIPSIM_PURE="1", TIPSIM_BENCH_CHILD="1")
    child = subprocess.run(
        [sys.executable, "-m", "tipsim.bench", str(n)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    pure = json.loads(child.stdout)

    if here["backend"] == "python":
        print("compiled kernels not built; showing pure-Python lane only\n")
    print(f"{'workload':<12} {'compiled (s)':>13} {'pure (s)':>10} {'speedup':>8}")
    for name in here["timings"]:
        a = here["timings"][name]
        b = pure["timings"][name]
        speedup = b / a if a > 0 else float("inf")
        print(f"{name:<12} {a:>13.4f} {b:>10.4f} {speedup:>7.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
