"""Independent oracles used by the test suite.

Each oracle recomputes its answer through a different route than the code it
checks: 3D world-frame embedding + vertical-ray projection for tipping,
quaternion-rotation fine sweeps for flip energy, dense grid scans for optimal
lift, Fibonacci-lattice quadrature and an analytic spherical-polygon formula
for landing probabilities, and depth-bounded exhaustive search for plans.
"""

from __future__ import annotations

import math
from typing import Optional, Tuple

import numpy as np

from tipsim.geometry import Vec2
from tipsim.planner import Scene, check_move
from tipsim.reachability import LocomotionMode, allowed_moves
from tipsim.robot import (
    Configuration,
    RobotGeometry,
    StableState,
    TransitionTable,
    revolve,
)
from tipsim.statics import ContactSolid, LiftState, MassModel


# ---------------------------------------------------------------------------
# world-frame embedding (independent of statics' plane-coordinate shortcut)

def plane_to_world(pts_plane: np.ndarray, slope: float, uphill: float) -> np.ndarray:
    """Embed inclined-plane coordinates into world xyz (z vertical)."""
    u = np.array([math.cos(uphill), math.sin(uphill), 0.0])
    v = np.array([-math.sin(uphill), math.cos(uphill), 0.0])
    # tilt the (u, normal) pair by the slope about the level axis v
    u_w = u * math.cos(slope) + np.array([0.0, 0.0, 1.0]) * math.sin(slope)
    n_w = np.array([0.0, 0.0, 1.0]) * math.cos(slope) - u * math.sin(slope)
    basis = np.stack([u_w, v, n_w])

    local = np.stack(
        [
            pts_plane[:, 0] * math.cos(uphill) + pts_plane[:, 1] * math.sin(uphill),
            -pts_plane[:, 0] * math.sin(uphill) + pts_plane[:, 1] * math.cos(uphill),
            pts_plane[:, 2],
        ],
        axis=1,
    )
    return local @ basis


def mass_points_plane(
    solid: ContactSolid, masses: MassModel, lift: LiftState, config: Configuration
) -> Tuple[np.ndarray, np.ndarray]:
    from tipsim.statics import _mass_points, _to_plane

    pts, wts = _mass_points(solid, masses, lift)
    return _to_plane(solid, config, pts), wts


def com_projection_world(
    solid: ContactSolid,
    masses: MassModel,
    lift: LiftState,
    config: Configuration,
    slope: float,
    uphill: float = 0.0,
) -> Vec2:
    """Gravity projection of the COM computed wholly in world coordinates:
    embed everything in 3D, drop a vertical ray from the COM, intersect the
    inclined plane, then read the hit point back in plane coordinates."""
    pts_plane, wts = mass_points_plane(solid, masses, lift, config)
    world = plane_to_world(pts_plane, slope, uphill)
    com_w = (world * wts[:, None]).sum(axis=0) / wts.sum()
    u = np.array([math.cos(uphill), math.sin(uphill), 0.0])
    u_w = u * math.cos(slope) + np.array([0.0, 0.0, 1.0]) * math.sin(slope)
    v_w = np.array([-math.sin(uphill), math.cos(uphill), 0.0])
    n_w = np.array([0.0, 0.0, 1.0]) * math.cos(slope) - u * math.sin(slope)
    # vertical ray com_w + t*(0,0,-1) hits the plane n_w . p = 0
    t = (n_w @ com_w) / n_w[2]
    hit = com_w - t * np.array([0.0, 0.0, 1.0])
    uu = float(hit @ u_w)
    vv = float(hit @ v_w)
    # back to plane xy
    return Vec2(
        uu * math.cos(uphill) - vv * math.sin(uphill),
        uu * math.sin(uphill) + vv * math.cos(uphill),
    )


def can_tip_oracle(
    solid, masses, lift, config, edge, slope, uphill: float = 0.0
) -> bool:
    """Half-plane test against the world-projected COM."""
    from tipsim.robot import pivot_segment

    proj = com_projection_world(solid, masses, lift, config, slope, uphill)
    p0, p1 = pivot_segment(solid.geom, config, edge)
    cross = (p1.x - p0.x) * (proj.y - p0.y) - (p1.y - p0.y) * (proj.x - p0.x)
    return cross < -1e-12  # interior is left of p0->p1; outside is right


# ---------------------------------------------------------------------------
# fine-grid energy sweep (quaternion rotations, 1e-5 rad)

def _quat_rotate(axis: np.ndarray, angle: float, pts: np.ndarray) -> np.ndarray:
    half = 0.5 * angle
    w = math.cos(half)
    xyz = axis * math.sin(half)
    t = 2.0 * np.cross(np.broadcast_to(xyz, pts.shape), pts)
    return pts + w * t + np.cross(np.broadcast_to(xyz, t.shape), t)


def flip_energy_oracle(
    solid,
    masses,
    lift,
    config,
    edge,
    slope,
    uphill: float = 0.0,
    step: float = 1e-5,
) -> float:
    """Recompute the flip energy with a dense sweep in world coordinates."""
    from tipsim.robot import pivot_segment
    from tipsim.statics import _sweep_angle

    g = masses.gravity
    pts_plane, wts = mass_points_plane(solid, masses, lift, config)
    rest_plane, _ = mass_points_plane(
        solid, masses, LiftState.zeros(len(masses.movable)), config
    )
    world = plane_to_world(pts_plane, slope, uphill)
    world_rest = plane_to_world(rest_plane, slope, uphill)
    lift_work = 0.0
    for k, mv in enumerate(masses.movable):
        dh = world[k + 1, 2] - world_rest[k + 1, 2]
        if dh > 0:
            lift_work += mv.mass * g * dh

    p0, p1 = pivot_segment(solid.geom, config, edge)
    a = plane_to_world(np.array([[p0.x, p0.y, 0.0]]), slope, uphill)[0]
    b = plane_to_world(np.array([[p1.x, p1.y, 0.0]]), slope, uphill)[0]
    axis = (b - a) / np.linalg.norm(b - a)
    phi_f = _sweep_angle(config.state, edge)
    rel = world - a
    u0 = float(g * (world[:, 2] * wts).sum())
    u_max = u0
    phis = np.append(np.arange(0.0, phi_f, step), phi_f)
    # chunked to bound memory at 1e-5 resolution
    for lo in range(0, len(phis), 20000):
        chunk = phis[lo : lo + 20000]
        half = 0.5 * chunk
        wq = np.cos(half)[:, None]
        xyz = axis[None, :] * np.sin(half)[:, None]
        t = 2.0 * np.cross(xyz[:, None, :], rel[None, :, :])
        rot = rel[None, :, :] + wq[:, None, :] * t + np.cross(xyz[:, None, :], t)
        heights = rot[:, :, 2] + a[2]
        u = g * (heights * wts[None, :]).sum(axis=1)
        u_max = max(u_max, float(u.max()))
    return lift_work + max(0.0, u_max - u0)


# ---------------------------------------------------------------------------
# dense lift grid scan

def lift_boundary_grid(
    solid, masses, config, edge, slope, resolution: float = 1e-4
) -> Optional[float]:
    """Smallest feasible t on a dense grid (single movable mass)."""
    from tipsim.statics import can_tip

    n = int(round(1.0 / resolution))
    for i in range(n + 1):
        t = i * resolution
        if can_tip(solid, masses, LiftState((t,)), config, edge, slope):
            return t
    return None


# ---------------------------------------------------------------------------
# landing oracles

def fibonacci_directions(n: int) -> np.ndarray:
    """Deterministic, nearly uniform unit directions (no RNG involved)."""
    i = np.arange(n, dtype=float)
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    theta = 2.0 * math.pi * i / phi
    return np.stack([r * np.cos(theta), r * np.sin(theta), z], axis=1)


def landing_quadrature(solid, masses, n: int = 1_000_000) -> dict:
    """Landing fractions by ray quadrature over the settle basins."""
    from tipsim.statics import _exit_faces, _rest_com_body, settle_map

    com = _rest_com_body(solid, masses)
    dirs = fibonacci_directions(n)
    exit_idx = _exit_faces(solid, com, dirs)
    settle = settle_map(solid, masses)
    final = np.array([settle[i] for i in range(len(solid.faces))])[exit_idx]
    states = np.array([f.state.value for f in solid.faces])
    landed = states[final]
    return {
        "HU": float((landed == "HU").sum()) / n,
        "HD": float((landed == "HD").sum()) / n,
        "SD": float((landed == "SD").sum()) / n,
    }


def solid_angle_fractions(solid, masses) -> dict:
    """Analytic face solid angles at the COM (Van Oosterom-Strackee),
    accumulated over settle basins."""
    from tipsim.statics import _rest_com_body, settle_map

    com = _rest_com_body(solid, masses)
    settle = settle_map(solid, masses)
    totals = {"HU": 0.0, "HD": 0.0, "SD": 0.0}
    for fi, face in enumerate(solid.faces):
        verts = [solid.vertices[i] - com for i in face.indices]
        omega = 0.0
        for k in range(1, len(verts) - 1):
            a, b, c = verts[0], verts[k], verts[k + 1]
            na, nb, nc = (np.linalg.norm(x) for x in (a, b, c))
            numer = float(np.dot(a, np.cross(b, c)))
            denom = (
                na * nb * nc
                + float(np.dot(a, b)) * nc
                + float(np.dot(a, c)) * nb
                + float(np.dot(b, c)) * na
            )
            omega += 2.0 * math.atan2(numer, denom)
        target = solid.faces[settle[fi]].state.value
        totals[target] += abs(omega) / (4.0 * math.pi)
    return totals


# ---------------------------------------------------------------------------
# exhaustive planner oracle

def brute_force_best(
    geom: RobotGeometry,
    table: TransitionTable,
    scene: Scene,
    max_depth: int,
    mode: LocomotionMode = LocomotionMode.TRISTATE,
) -> Tuple[Optional[int], Optional[float]]:
    """Minimum flips and minimum path length over every legal sequence of at
    most max_depth revolves (no visited set, pure enumeration)."""
    best_flips: Optional[int] = None
    best_len: Optional[float] = None

    def goal(c: Configuration) -> bool:
        if scene.goal_state is not None and c.state is not scene.goal_state:
            return False
        return c.centroid.dist(scene.target) <= scene.tolerance

    def rec(c: Configuration, flips: int, length: float) -> None:
        nonlocal best_flips, best_len
        if goal(c):
            if best_flips is None or flips < best_flips:
                best_flips = flips
            if best_len is None or length < best_len:
                best_len = length
        if flips == max_depth:
            return
        for edge in allowed_moves(table, mode, c.state):
            nxt = revolve(geom, table, c, edge)
            if not check_move(geom, scene, nxt):
                continue
            rec(nxt, flips + 1, length + c.centroid.dist(nxt.centroid))

    rec(scene.start, 0, 0.0)
    return best_flips, best_len


# ---------------------------------------------------------------------------
# scene generators shared by planner tests and acceptance

def walk_target_scene(geom, table, rng, n_flips: int, tolerance: float = 0.25) -> Scene:
    """Scene whose target is the endpoint of a random walk from the start."""
    start = Configuration(Vec2(0.0, 0.0), StableState.HU, rng.uniform(0, 2 * math.pi))
    c = start
    for _ in range(n_flips):
        edges = allowed_moves(table, LocomotionMode.TRISTATE, c.state)
        c = revolve(geom, table, c, rng.choice(edges))
    return Scene(start=start, target=c.centroid, tolerance=tolerance)


def directed_walk_scene(geom, table, rng, n_flips: int, tolerance: float = 0.3) -> Scene:
    """Scene with a far target reached by greedy walking along a random ray."""
    heading = rng.uniform(0, 2 * math.pi)
    ray = (math.cos(heading), math.sin(heading))
    start = Configuration(Vec2(0.0, 0.0), StableState.HU, rng.uniform(0, 2 * math.pi))
    c = start
    for _ in range(n_flips):
        best = None
        for e in allowed_moves(table, LocomotionMode.TRISTATE, c.state):
            nx = revolve(geom, table, c, e)
            d = (nx.centroid.x - c.centroid.x) * ray[0] + (
                nx.centroid.y - c.centroid.y
            ) * ray[1]
            if best is None or d > best[0]:
                best = (d, nx)
        c = best[1]
    return Scene(start=start, target=c.centroid, tolerance=tolerance)
