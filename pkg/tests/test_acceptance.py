"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines and timings.
"""

import json
import math
import random
import time

import numpy as np
import pytest

from conftest import angle_dist
from oracles import (
    brute_force_best,
    directed_walk_scene,
    flip_energy_oracle,
    landing_quadrature,
    lift_boundary_grid,
    solid_angle_fractions,
    walk_target_scene,
)
from tipsim import traceio
from tipsim.errors import InconsistentTrace
from tipsim.geometry import Vec2
from tipsim.planner import Scene, astar_plan, bfs_plan, check_move
from tipsim.reachability import LocomotionMode, enumerate_reachable
from tipsim.robot import (
    Configuration,
    EdgeLabel,
    SYMMETRY_PERIOD,
    StableState,
    pivot_segment,
    revolve,
    revolve_ex,
)
from tipsim.service import SessionCore, config_to_json
from tipsim.statics import (
    ContactSolid,
    LiftState,
    MassModel,
    MovableMass,
    can_tip,
    flip_energy,
    landing_probabilities,
    max_slopes,
    optimal_lift,
)
from tipsim.traceio import RobotConfigDoc, SceneDoc, StartSpec

STATES = (StableState.HU, StableState.HD, StableState.SD)


def _report(name: str, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: PASS ({detail})")


def tetra_masses(m, radius, body=1.0):
    dirs = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], float)
    dirs /= math.sqrt(3.0)
    return MassModel(
        body, tuple(MovableMass(m, (0.0, 0.0, 0.0), tuple(radius * d)) for d in dirs)
    )


def test_01_involution_and_coincidence(geom, table):
    """10^5 random revolves: double-revolve and pivot coincidence to 1e-9."""
    rng = random.Random(1_001)
    t0 = time.perf_counter()
    n = 100_000
    worst_pos = worst_ang = worst_pivot = 0.0
    for _ in range(n):
        state = rng.choice(STATES)
        c0 = Configuration(
            Vec2(rng.uniform(-10, 10), rng.uniform(-10, 10)),
            state,
            rng.uniform(0, 2 * math.pi),
        )
        edge = rng.choice(table.allowed_edges(state))
        p0, p1 = pivot_segment(geom, c0, edge)
        c1, arrival = revolve_ex(geom, table, c0, edge)
        q0, q1 = pivot_segment(geom, c1, arrival)
        worst_pivot = max(worst_pivot, p0.dist(q1), p1.dist(q0))
        c2 = revolve(geom, table, c1, arrival)
        worst_pos = max(worst_pos, c2.centroid.dist(c0.centroid))
        worst_ang = max(worst_ang, angle_dist(c2.alpha, c0.alpha, SYMMETRY_PERIOD[state]))
    elapsed = time.perf_counter() - t0
    assert worst_pos < 1e-9
    assert worst_ang < 1e-9
    assert worst_pivot < 1e-9
    assert elapsed < 10.0
    _report(
        "1 involution+coincidence",
        f"{n} revolves, pos {worst_pos:.1e}, ang {worst_ang:.1e}, "
        f"pivot {worst_pivot:.1e}, {elapsed:.2f}s",
    )


def test_02_transition_audit_and_bistate_finiteness(geom, table):
    """No HU<->HD edge; bistate closures terminate with exactly 4 poses."""
    for (state, _), entry in table.items():
        if entry.allowed:
            assert {state, entry.target} != {StableState.HU, StableState.HD}
    rng = random.Random(1_002)
    runs = 0
    for _ in range(10):
        state = rng.choice(STATES)
        mode = (
            LocomotionMode.BISTATE_HU_SD
            if state is StableState.HU
            else LocomotionMode.BISTATE_HD_SD
            if state is StableState.HD
            else rng.choice([LocomotionMode.BISTATE_HU_SD, LocomotionMode.BISTATE_HD_SD])
        )
        start = Configuration(
            Vec2(rng.uniform(-5, 5), rng.uniform(-5, 5)), state, rng.uniform(0, 2 * math.pi)
        )
        report, _ = enumerate_reachable(geom, table, start, mode, budget=10_000)
        assert report.exhausted, "bistate closure must terminate"
        assert report.distinct_poses == 4
        runs += 1
    _report("2 transition audit + bistate", f"{runs} random starts, all 4-pose closures")


def test_03_tristate_growth_and_mesh_render(geom, table, tmp_path):
    """Unbounded tristate: >500 positions at 10^4 budget, frontier alive."""
    start = Configuration(Vec2(0, 0), StableState.HU, 0.0)
    report, trace = enumerate_reachable(
        geom, table, start, LocomotionMode.TRISTATE, budget=10_000
    )
    assert not report.exhausted
    assert report.distinct_positions > 500
    records = traceio.enumeration_records(geom, trace.records and trace or trace)
    data = traceio.dump_trace(geom, records)
    header, parsed = traceio.parse_trace(data)
    traceio.validate_trace(header, parsed)
    svg = traceio.render_svg(parsed[:600], None, header=header)
    out = tmp_path / "tristate-mesh.svg"
    out.write_bytes(svg)
    # the mesh shows both footprint families, many of each
    tris = sum(1 for r in parsed[:600] if r.state is not StableState.SD)
    rects = sum(1 for r in parsed[:600] if r.state is StableState.SD)
    assert tris > 100 and rects > 100
    _report(
        "3 tristate growth",
        f"{report.distinct_positions} positions at budget 10^4, "
        f"mesh svg {len(svg)} bytes ({tris} triangles, {rects} rectangles)",
    )


def test_04_planner_optimality_vs_brute_force(geom, table):
    """25 seeded small scenes: BFS flips and A* lengths match depth-6 search."""
    rng = random.Random(1_004)
    scenes = 0
    while scenes < 25:
        scene = walk_target_scene(geom, table, rng, rng.randint(1, 4))
        if rng.random() < 0.4:  # sprinkle an off-path obstacle
            cx, cy = rng.uniform(2.5, 4.0), rng.uniform(2.5, 4.0)
            from tipsim.geometry import ConvexPolygon

            block = ConvexPolygon(
                [Vec2(cx, cy), Vec2(cx + 1, cy), Vec2(cx + 1, cy + 1), Vec2(cx, cy + 1)]
            )
            scene = Scene(
                start=scene.start, target=scene.target,
                tolerance=scene.tolerance, obstacles=(block,),
            )
        bf_flips, bf_len = brute_force_best(geom, table, scene, max_depth=6)
        if bf_flips is None:
            continue
        plan_b = bfs_plan(geom, table, scene)
        plan_a = astar_plan(geom, table, scene)
        assert plan_b.flips == bf_flips
        assert abs(plan_a.path_length - bf_len) < 1e-9
        for plan in (plan_b, plan_a):  # replay collision-free
            c = scene.start
            for edge, expected in plan.steps:
                c = revolve(geom, table, c, edge)
                assert c.centroid.dist(expected.centroid) < 1e-9
                assert check_move(geom, scene, c)
        scenes += 1
    _report("4 planner optimality", f"{scenes} scenes match depth-6 brute force")


def test_05_astar_beats_bfs(geom, table):
    """100 seeded far-target scenes: A* expands fewer nodes in >= 90."""
    rng = random.Random(1_005)
    t0 = time.perf_counter()
    wins = 0
    total_b = total_a = 0
    for _ in range(100):
        scene = directed_walk_scene(geom, table, rng, rng.randint(10, 16))
        plan_b = bfs_plan(geom, table, scene, budget=500_000)
        plan_a = astar_plan(geom, table, scene, budget=500_000)
        assert plan_a.path_length <= plan_b.path_length + 1e-9
        total_b += plan_b.expansions
        total_a += plan_a.expansions
        if plan_a.expansions < plan_b.expansions:
            wins += 1
    elapsed = time.perf_counter() - t0
    assert wins >= 90
    assert elapsed < 60.0
    _report(
        "5 A* vs BFS",
        f"A* won {wins}/100 (mean expansions {total_a / 100:.0f} vs "
        f"{total_b / 100:.0f}), {elapsed:.1f}s",
    )


def test_06_statics_solvers(geom, table):
    """Energy oracle, lift oracle, and slope monotonicity."""
    solid = ContactSolid.from_geometry(geom)
    rng = random.Random(1_006)

    # flip_energy vs fine-grid sweep oracle on 100 random feasible cases
    checked = 0
    worst = 0.0
    while checked < 100:
        k = rng.randint(1, 4)
        movable = []
        for _ in range(k):
            a = tuple(rng.uniform(-0.2, 0.2) for _ in range(3))
            b = tuple(rng.uniform(-2.2, 2.2) for _ in range(3))
            if math.dist(a, b) < 0.1:
                b = (a[0] + 1.0, a[1], a[2])
            movable.append(MovableMass(rng.uniform(0.2, 1.5), a, b))
        mm = MassModel(rng.uniform(0.5, 2.0), tuple(movable))
        lift = LiftState(tuple(rng.uniform(0, 1) for _ in range(k)))
        state = rng.choice(STATES)
        config = Configuration(
            Vec2(rng.uniform(-2, 2), rng.uniform(-2, 2)), state, rng.uniform(0, 2 * math.pi)
        )
        edge = rng.choice(
            (EdgeLabel.E0, EdgeLabel.E1, EdgeLabel.E2)
            if state is not StableState.SD
            else (EdgeLabel.HU_END, EdgeLabel.HD_END, EdgeLabel.LONG_A, EdgeLabel.LONG_B)
        )
        slope = rng.uniform(0, 0.4)
        uphill = rng.uniform(0, 2 * math.pi)
        if not can_tip(solid, mm, lift, config, edge, slope, uphill):
            continue
        got = flip_energy(solid, mm, lift, config, edge, slope, uphill)
        want = flip_energy_oracle(solid, mm, lift, config, edge, slope, uphill)
        worst = max(worst, abs(got - want))
        assert abs(got - want) < 1e-6
        checked += 1

    # single-mass optimal lift vs 1e-4 grid scan
    lifts = 0
    while lifts < 10:
        b = (rng.uniform(-2.5, -1.2), rng.uniform(-0.5, 0.5), rng.uniform(-2.5, -1.0))
        mm1 = MassModel(1.0, (MovableMass(rng.uniform(0.8, 2.0), (0, 0, 0), b),))
        config = Configuration(Vec2(0, 0), StableState.HU, rng.uniform(0, 2 * math.pi))
        if can_tip(solid, mm1, LiftState((0.0,)), config, EdgeLabel.E0, 0.0):
            continue
        if not can_tip(solid, mm1, LiftState((1.0,)), config, EdgeLabel.E0, 0.0):
            continue
        lift, _ = optimal_lift(solid, mm1, config, EdgeLabel.E0, 0.0)
        boundary = lift_boundary_grid(solid, mm1, config, EdgeLabel.E0, 0.0)
        assert abs(lift.t[0] - boundary) <= 1e-4
        lifts += 1

    # slopes: zero mass cannot climb; alpha_c non-decreasing over a mass grid
    res0 = max_slopes(solid, MassModel(1.0), geom, table)
    assert res0.alpha_c == 0.0
    prev = -1.0
    grid = (0.8, 1.0, 1.3, 1.7, 2.2)
    alphas = []
    for m in grid:
        res = max_slopes(solid, tetra_masses(m, 2.0), geom, table)
        assert res.converged
        assert res.alpha_c >= prev - 1e-12
        prev = res.alpha_c
        alphas.append(res.alpha_c)
    _report(
        "6 statics",
        f"energy oracle worst {worst:.2e} J over 100, 10 lift boundaries, "
        f"alpha_c grid {['%.3f' % a for a in alphas]} rad",
    )


def test_07_landing_probabilities(geom):
    """Seeded reproducibility, exact partition, symmetry, oracle agreement."""
    solid = ContactSolid.from_geometry(geom)
    mm = MassModel(1.0, solid.default_movable(0.25))
    est = landing_probabilities(solid, mm, 100_000, 1000)
    est2 = landing_probabilities(solid, mm, 100_000, 1000)
    assert est == est2  # bit-reproducible
    assert est.n_hu + est.n_hd + est.n_sd == est.samples
    assert abs(est.p_hu + est.p_hd + est.p_sd - 1.0) < 1e-12
    sigma_sym = math.sqrt(est.p_hu * (1 - est.p_hu) / est.samples)
    assert abs(est.p_hu - est.p_hd) <= 3 * sigma_sym
    frac = landing_quadrature(solid, mm, n=1_000_000)
    exact = solid_angle_fractions(solid, mm)
    for key in ("HU", "HD", "SD"):
        assert abs(frac[key] - exact[key]) < 2e-3  # quadrature sanity
    deltas = {}
    for key, p in (("HU", est.p_hu), ("HD", est.p_hd), ("SD", est.p_sd)):
        sigma = math.sqrt(frac[key] * (1 - frac[key]) / est.samples)
        assert abs(p - frac[key]) <= 3 * sigma
        deltas[key] = (p - frac[key]) / sigma
    _report(
        "7 landing",
        f"p=({est.p_hu:.4f},{est.p_hd:.4f},{est.p_sd:.4f}), oracle z-scores "
        + ", ".join(f"{k}:{v:+.2f}" for k, v in deltas.items()),
    )


def test_08_formats_and_figures(geom, table, tmp_path):
    """Round trips, trace validation, SVG determinism, fig-9 composition."""
    robot_doc = RobotConfigDoc(tri_side=1.0, rect_width=math.sqrt(3.0) / 2.0)
    assert traceio.load_robot_config(traceio.save_robot_config(robot_doc)) == robot_doc
    scene_json = {
        "start": {"x": -2.0, "y": 0.0, "alpha_deg": 0.0, "state": "HU"},
        "target": {"x": 2.5, "y": 0.4},
        "tolerance": 0.45,
        "obstacles": [{"polygon": [[0.4, -0.8], [1.2, -0.8], [1.2, 0.8], [0.4, 0.8]]}],
        "arena": {"min": [-4, -4], "max": [4, 4]},
    }
    scene_doc = traceio.load_scene_doc(json.dumps(scene_json))
    assert traceio.load_scene_doc(traceio.save_scene_doc(scene_doc)) == scene_doc

    scene = scene_doc.to_scene()
    plan = astar_plan(geom, table, scene)
    assert plan.flips > 0
    records = traceio.plan_records(geom, scene.start, plan.steps)
    data = traceio.dump_trace(geom, records)
    header, parsed = traceio.parse_trace(data)
    traceio.validate_trace(header, parsed)

    import dataclasses

    corrupted = list(parsed)
    corrupted[1] = dataclasses.replace(corrupted[1], alpha=corrupted[1].alpha + 1e-6)
    with pytest.raises(InconsistentTrace):
        traceio.validate_trace(header, corrupted)

    svg1 = traceio.render_svg(parsed, scene_doc, header=header)
    svg2 = traceio.render_svg(parsed, scene_doc, header=header)
    assert svg1 == svg2
    assert svg1.count(b"<polygon") == len(parsed) + 1  # footprints + obstacle
    assert svg1.count(b"<circle") == 1  # the target
    assert svg1.count(b"<polyline") == 1  # the centroid path
    (tmp_path / "astar-obstacle.svg").write_bytes(svg1)
    _report(
        "8 formats+figures",
        f"round trips exact, corrupt pose rejected, svg deterministic "
        f"({plan.flips}-flip plan around the obstacle)",
    )


def test_09_service_session(geom):
    """Scripted session reaches the target; fuzz leaves a valid snapshot."""
    robot_doc = RobotConfigDoc(tri_side=1.0, rect_width=math.sqrt(3.0) / 2.0)
    scene_doc = SceneDoc(
        start=StartSpec(0.0, 0.0, 0.0, StableState.HU),
        target=(0.0, 0.0),
        tolerance=0.45,
        arena=((-8.0, -8.0), (8.0, 8.0)),
    )
    core = SessionCore(scene_doc, robot_doc)
    rng = random.Random(1_009)
    goal = None
    c = core.config
    for _ in range(7):  # a lattice-reachable goal
        edges = core.table.allowed_edges(c.state)
        c = revolve(core.geom, core.table, c, rng.choice(edges))
    goal = c.centroid
    seqs = []
    for reply in core.apply_client_message({"type": "set_target", "x": goal.x, "y": goal.y}):
        seqs.append(reply["seq"])
    saw_ok = False
    flips = 0
    for _ in range(200):
        msg = core.tick()
        if msg is None:
            break
        seqs.append(msg["seq"])
        if msg["type"] == "plan_status":
            assert msg["status"] == "ok"
            saw_ok = True
        elif msg["type"] == "flip":
            flips += 1
    assert saw_ok and flips > 0
    assert core.config.centroid.dist(goal) <= core.tolerance
    assert all(b > a for a, b in zip(seqs, seqs[1:]))

    def junk():
        roll = rng.randrange(7)
        if roll == 0:
            return None
        if roll == 1:
            return []
        if roll == 2:
            return {"type": rng.choice(["warp", "", "flip", "snapshot"])}
        if roll == 3:
            return {"type": "set_target", "x": float("inf"), "y": 0}
        if roll == 4:
            return {"type": "reset", "config": {"x": 1}}
        if roll == 5:
            return {"type": "set_mode", "mode": 9}
        return {"type": "set_target", "y": 1.0}

    errors = 0
    for _ in range(10_000):
        for reply in core.apply_client_message(junk()):
            assert reply["type"] == "error"
            errors += 1
    snap = core.snapshot_message()
    assert snap["config"] == config_to_json(core.config)
    assert check_move(core.geom, core._scene(), core.config)
    _report(
        "9 service",
        f"target reached in {flips} flips after plan_status ok; "
        f"{errors} fuzz messages all answered with errors; snapshot valid",
    )
