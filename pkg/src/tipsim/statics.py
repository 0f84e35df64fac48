"""Quasi-static analysis: center of mass, tip feasibility, flip energy,
optimal lift, maximal slopes, and landing-state probabilities.

Model: the contact solid is the triangular prism behind the planar footprints
(two triangular end faces for HU/HD, three rectangular faces for SD). A body
mass sits at the solid centroid; movable masses ride lift segments [A_i, B_i]
(body frame) at fractions t_i in [0, 1]. Everything is quasi-static: a flip
happens iff the gravity projection of the COM falls strictly outside the
support polygon across the pivot edge; energy is lift work plus the potential
barrier along the tipping rotation.

Slope convention: configurations live in inclined-plane coordinates. The
plane rises at `slope` radians; the uphill (steepest ascent) direction makes
angle `uphill` with the plane's +x axis (default 0). Gravity projection of a
plane-coords point (u, v, n) lands at (u, v) - n*tan(slope)*(cos(uphill),
sin(uphill)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from tipsim.errors import DisallowedTransition, InfeasibleLift, NoFeasibleLift
from tipsim.geometry import Vec2
from tipsim.robot import (
    Configuration,
    EdgeLabel,
    RobotGeometry,
    StableState,
    TransitionTable,
    pivot_segment,
    revolve,
    world_footprint,
)

TIP_TOL = 1e-12  # strict-inequality guard for the half-plane tests
SWEEP_STEP = 1e-3  # rad, barrier sweep discretization
REFINE_TOL = 1e-8  # rad, golden-section refinement
BISECT_T_TOL = 1e-6  # lift fraction feasibility boundary
SLOPE_TOL = 1e-4  # rad, slope bisection bracket
COORD_DESCENT_TOL = 1e-9  # J

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class MovableMass:
    mass: float
    a: Tuple[float, float, float]  # rest position (t = 0), body frame
    b: Tuple[float, float, float]  # full-lift position (t = 1), body frame

    def __post_init__(self):
        if self.mass < 0:
            raise ValueError("movable mass must be non-negative")
        if math.dist(self.a, self.b) <= 1e-12:
            raise ValueError("degenerate lift segment")

    def position(self, t: float) -> Tuple[float, float, float]:
        return (
            self.a[0] + t * (self.b[0] - self.a[0]),
            self.a[1] + t * (self.b[1] - self.a[1]),
            self.a[2] + t * (self.b[2] - self.a[2]),
        )


@dataclass(frozen=True)
class MassModel:
    body_mass: float
    movable: Tuple[MovableMass, ...] = ()
    gravity: float = 9.81

    def __post_init__(self):
        if self.body_mass <= 0:
            raise ValueError("body_mass must be positive")
        if self.gravity <= 0:
            raise ValueError("gravity must be positive")

    @property
    def total(self) -> float:
        return self.body_mass + sum(m.mass for m in self.movable)


@dataclass(frozen=True)
class LiftState:
    t: Tuple[float, ...]

    def __post_init__(self):
        for ti in self.t:
            if not (0.0 <= ti <= 1.0):
                raise ValueError(f"lift fraction {ti} outside [0, 1]")

    @classmethod
    def zeros(cls, k: int) -> "LiftState":
        return cls((0.0,) * k)

    @classmethod
    def ones(cls, k: int) -> "LiftState":
        return cls((1.0,) * k)


@dataclass(frozen=True)
class SolidFace:
    state: StableState  # stable state when resting on this face
    indices: Tuple[int, ...]  # CCW viewed from outside


class ContactSolid:
    """Triangular prism realizing the planar footprints in 3D."""

    def __init__(self, geom: RobotGeometry):
        self.geom = geom
        s = geom.tri_side
        w = geom.rect_width
        r_in = geom.inradius
        self.tri_side = s
        self.prism_len = w
        self.vertices = np.array(
            [
                [w / 2, -s / 2, -r_in],
                [w / 2, s / 2, -r_in],
                [w / 2, 0.0, 2 * r_in],
                [-w / 2, -s / 2, -r_in],
                [-w / 2, s / 2, -r_in],
                [-w / 2, 0.0, 2 * r_in],
            ]
        )
        self.faces: Tuple[SolidFace, ...] = (
            SolidFace(StableState.HU, (0, 1, 2)),
            SolidFace(StableState.HD, (3, 5, 4)),
            SolidFace(StableState.SD, (0, 3, 4, 1)),
            SolidFace(StableState.SD, (1, 4, 5, 2)),
            SolidFace(StableState.SD, (2, 5, 3, 0)),
        )
        normals = []
        offsets = []
        for f in self.faces:
            p0, p1, p2 = (self.vertices[i] for i in f.indices[:3])
            n = np.cross(p1 - p0, p2 - p0)
            n /= np.linalg.norm(n)
            normals.append(n)
            offsets.append(float(n @ p0))
        self.normals = np.array(normals)
        self.offsets = np.array(offsets)

    @classmethod
    def from_geometry(cls, geom: RobotGeometry) -> "ContactSolid":
        return cls(geom)

    def default_movable(self, mass_each: float) -> Tuple[MovableMass, ...]:
        """Four segments from the centroid toward an inscribed tetrahedron."""
        radius = min(self.geom.inradius, self.prism_len / 2.0)
        dirs = np.array(
            [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
        ) / math.sqrt(3.0)
        return tuple(
            MovableMass(mass_each, (0.0, 0.0, 0.0), tuple(radius * d)) for d in dirs
        )


# body -> contact-plane rotation per resting state (column-vector convention)
_R_STATE = {
    StableState.SD: np.eye(3),
    StableState.HU: np.array([[0.0, 0.0, 1.0], [0.0, 1.0, 0.0], [-1.0, 0.0, 0.0]]),
    StableState.HD: np.array([[0.0, 0.0, 1.0], [0.0, -1.0, 0.0], [1.0, 0.0, 0.0]]),
}


def _rest_height(solid: ContactSolid, state: StableState) -> float:
    if state is StableState.SD:
        return solid.geom.inradius
    return solid.prism_len / 2.0


def _mass_points(
    solid: ContactSolid, masses: MassModel, lift: LiftState
) -> Tuple[np.ndarray, np.ndarray]:
    """Body-frame particle positions and weights: body mass then movables."""
    if len(lift.t) != len(masses.movable):
        raise ValueError("lift state length does not match movable mass count")
    pts = [np.zeros(3)]
    wts = [masses.body_mass]
    for mv, t in zip(masses.movable, lift.t):
        pts.append(np.array(mv.position(t)))
        wts.append(mv.mass)
    return np.array(pts), np.array(wts)


def _to_plane(
    solid: ContactSolid, config: Configuration, pts_body: np.ndarray
) -> np.ndarray:
    """Body points -> inclined-plane coordinates for a resting configuration."""
    rot = _R_STATE[config.state]
    lifted = pts_body @ rot.T
    lifted[:, 2] += _rest_height(solid, config.state)
    ca = math.cos(config.alpha)
    sa = math.sin(config.alpha)
    rz = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    out = lifted @ rz.T
    out[:, 0] += config.centroid.x
    out[:, 1] += config.centroid.y
    return out


def _world_heights(pts_plane: np.ndarray, slope: float, uphill: float) -> np.ndarray:
    """Vertical height of plane-coordinate points above the plane origin."""
    along = pts_plane[:, 0] * math.cos(uphill) + pts_plane[:, 1] * math.sin(uphill)
    return along * math.sin(slope) + pts_plane[:, 2] * math.cos(slope)


def _com_plane(
    solid: ContactSolid,
    masses: MassModel,
    lift: LiftState,
    config: Configuration,
) -> np.ndarray:
    pts, wts = _mass_points(solid, masses, lift)
    com_body = (pts * wts[:, None]).sum(axis=0) / wts.sum()
    return _to_plane(solid, config, com_body[None, :])[0]


def _project(com_plane: np.ndarray, slope: float, uphill: float) -> Vec2:
    shift = com_plane[2] * math.tan(slope)
    return Vec2(
        com_plane[0] - shift * math.cos(uphill),
        com_plane[1] - shift * math.sin(uphill),
    )


def com(
    solid: ContactSolid,
    masses: MassModel,
    lift: LiftState,
    resting: StableState,
    slope: float,
    uphill: float = 0.0,
) -> Tuple[Tuple[float, float, float], Vec2]:
    """Body-frame COM and its gravity projection onto the (inclined) plane.

    The projection is evaluated at the canonical pose (centroid at the plane
    origin, alpha = 0); can_tip handles arbitrary poses.
    """
    pts, wts = _mass_points(solid, masses, lift)
    com_body = (pts * wts[:, None]).sum(axis=0) / wts.sum()
    config = Configuration(Vec2(0.0, 0.0), resting, 0.0)
    cp = _to_plane(solid, config, com_body[None, :])[0]
    return (float(com_body[0]), float(com_body[1]), float(com_body[2])), _project(
        cp, slope, uphill
    )


def _tip_margin(
    solid: ContactSolid,
    masses: MassModel,
    lift: LiftState,
    config: Configuration,
    edge: EdgeLabel,
    slope: float,
    uphill: float,
) -> float:
    """Signed distance of the COM projection beyond the pivot edge's line.

    Positive means outside the support polygon across that edge. Affine in
    the lift fractions.
    """
    p0, p1 = pivot_segment(solid.geom, config, edge)
    proj = _project(_com_plane(solid, masses, lift, config), slope, uphill)
    dx = p1.x - p0.x
    dy = p1.y - p0.y
    length = math.hypot(dx, dy)
    # interior is left of p0->p1, so outward normal is (dy, -dx)
    return ((proj.x - p0.x) * dy - (proj.y - p0.y) * dx) / length


def can_tip(
    solid: ContactSolid,
    masses: MassModel,
    lift: LiftState,
    config: Configuration,
    edge: EdgeLabel,
    slope: float,
    uphill: float = 0.0,
) -> bool:
    """True iff the COM projection falls strictly beyond the pivot edge."""
    return _tip_margin(solid, masses, lift, config, edge, slope, uphill) > TIP_TOL


def rest_stability_margin(
    solid: ContactSolid,
    masses: MassModel,
    config: Configuration,
    slope: float,
    uphill: float = 0.0,
) -> float:
    """Smallest inside-distance of the rest (lift 0) COM projection.

    Positive means statically stable: the projection is strictly inside the
    support polygon.
    """
    lift = LiftState.zeros(len(masses.movable))
    proj = _project(_com_plane(solid, masses, lift, config), slope, uphill)
    fp = world_footprint(solid.geom, config)
    margin = math.inf
    verts = fp.vertices
    for i in range(len(verts)):
        p0 = verts[i]
        p1 = verts[(i + 1) % len(verts)]
        dx = p1.x - p0.x
        dy = p1.y - p0.y
        length = math.hypot(dx, dy)
        inside = ((proj.y - p0.y) * dx - (proj.x - p0.x) * dy) / length
        margin = min(margin, inside)
    return margin


def _sweep_angle(state: StableState, edge: EdgeLabel) -> float:
    # rotation carrying the solid from one resting face to the next:
    # pi minus the dihedral angle along the pivot edge
    if state is StableState.SD and edge in (EdgeLabel.LONG_A, EdgeLabel.LONG_B):
        return 2.0 * math.pi / 3.0
    return math.pi / 2.0


def _sweep_energy(
    pts0: np.ndarray,
    wts: np.ndarray,
    gravity: float,
    axis_pt: np.ndarray,
    axis_dir: np.ndarray,
    slope: float,
    uphill: float,
    phis: np.ndarray,
) -> np.ndarray:
    """Total potential energy at each rotation angle about the pivot axis."""
    rel = pts0 - axis_pt
    e = axis_dir
    cross = np.cross(np.broadcast_to(e, rel.shape), rel)
    dot = rel @ e
    cphi = np.cos(phis)[:, None, None]
    sphi = np.sin(phis)[:, None, None]
    rotated = (
        rel[None, :, :] * cphi
        + cross[None, :, :] * sphi
        + e[None, None, :] * dot[None, :, None] * (1.0 - cphi)
    )
    pts = rotated + axis_pt
    along = pts[:, :, 0] * math.cos(uphill) + pts[:, :, 1] * math.sin(uphill)
    heights = along * math.sin(slope) + pts[:, :, 2] * math.cos(slope)
    return gravity * (heights * wts[None, :]).sum(axis=1)


def flip_energy(
    solid: ContactSolid,
    masses: MassModel,
    lift: LiftState,
    config: Configuration,
    edge: EdgeLabel,
    slope: float,
    uphill: float = 0.0,
) -> float:
    """Energy of one flip: lift work plus the potential barrier of the tip.

    E = sum_i m_i g max(0, dh_i) + max(0, max_phi U(phi) - U(0)), the sweep
    discretized at 1e-3 rad with golden-section refinement near the maximum.
    """
    if not can_tip(solid, masses, lift, config, edge, slope, uphill):
        raise InfeasibleLift(f"cannot tip over {edge.name} with the given lift")
    g = masses.gravity

    # lift work at the start pose, masses raised from rest to `lift`
    rest = LiftState.zeros(len(masses.movable))
    pts_rest, _ = _mass_points(solid, masses, rest)
    pts_lift, wts = _mass_points(solid, masses, lift)
    h_rest = _world_heights(_to_plane(solid, config, pts_rest), slope, uphill)
    h_lift = _world_heights(_to_plane(solid, config, pts_lift), slope, uphill)
    lift_work = 0.0
    for k, mv in enumerate(masses.movable):
        dh = h_lift[k + 1] - h_rest[k + 1]
        if dh > 0.0:
            lift_work += mv.mass * g * dh

    # potential barrier along the tipping rotation
    p0, p1 = pivot_segment(solid.geom, config, edge)
    axis_pt = np.array([p0.x, p0.y, 0.0])
    d = np.array([p1.x - p0.x, p1.y - p0.y, 0.0])
    axis_dir = d / np.linalg.norm(d)
    pts_plane = _to_plane(solid, config, pts_lift)
    phi_f = _sweep_angle(config.state, edge)
    grid = np.arange(0.0, phi_f, SWEEP_STEP)
    grid = np.append(grid, phi_f)
    u = _sweep_energy(pts_plane, wts, g, axis_pt, axis_dir, slope, uphill, grid)
    k = int(np.argmax(u))
    u_max = float(u[k])
    if 0 < k < len(grid) - 1:
        lo = grid[k - 1]
        hi = grid[k + 1]

        def _u(phi: float) -> float:
            return float(
                _sweep_energy(
                    pts_plane, wts, g, axis_pt, axis_dir, slope, uphill,
                    np.array([phi]),
                )[0]
            )

        a, b = lo, hi
        c = b - _GOLDEN * (b - a)
        dd = a + _GOLDEN * (b - a)
        fc, fd = _u(c), _u(dd)
        while b - a > REFINE_TOL:
            if fc > fd:
                b, dd, fd = dd, c, fc
                c = b - _GOLDEN * (b - a)
                fc = _u(c)
            else:
                a, c, fc = c, dd, fd
                dd = a + _GOLDEN * (b - a)
                fd = _u(dd)
        u_max = max(u_max, fc, fd)
    barrier = u_max - float(u[0])
    return lift_work + max(0.0, barrier)


def _margin_fn(solid, masses, config, edge, slope, uphill):
    def margin(t: Sequence[float]) -> float:
        return _tip_margin(
            solid, masses, LiftState(tuple(t)), config, edge, slope, uphill
        )

    return margin


def max_feasibility_lift(
    solid: ContactSolid,
    masses: MassModel,
    config: Configuration,
    edge: EdgeLabel,
    slope: float,
    uphill: float = 0.0,
) -> Tuple[LiftState, float]:
    """Hypercube vertex maximizing the tip margin (exact: margin is affine)."""
    k = len(masses.movable)
    margin = _margin_fn(solid, masses, config, edge, slope, uphill)
    base = margin([0.0] * k)
    best = []
    for i in range(k):
        t = [0.0] * k
        t[i] = 1.0
        best.append(1.0 if margin(t) > base else 0.0)
    return LiftState(tuple(best)), margin(best)


def optimal_lift(
    solid: ContactSolid,
    masses: MassModel,
    config: Configuration,
    edge: EdgeLabel,
    slope: float,
    uphill: float = 0.0,
) -> Tuple[LiftState, float]:
    """Minimum-energy feasible lift for one flip.

    Single movable mass: bisection on t to the feasibility boundary, then one
    energy evaluation. Multiple masses: coordinate descent (a documented
    heuristic), seeded from full lift when feasible, else from the margin
    maximizing vertex.
    """
    k = len(masses.movable)
    margin = _margin_fn(solid, masses, config, edge, slope, uphill)
    vertex, vertex_margin = max_feasibility_lift(
        solid, masses, config, edge, slope, uphill
    )
    if vertex_margin <= TIP_TOL:
        raise NoFeasibleLift(f"no lift tips the robot over {edge.name}")

    def energy(t: Sequence[float]) -> float:
        return flip_energy(
            solid, masses, LiftState(tuple(t)), config, edge, slope, uphill
        )

    if k == 1:
        if margin([0.0]) > TIP_TOL:
            return LiftState((0.0,)), energy([0.0])
        lo, hi = 0.0, 1.0
        while hi - lo > BISECT_T_TOL:
            mid = 0.5 * (lo + hi)
            if margin([mid]) > TIP_TOL:
                hi = mid
            else:
                lo = mid
        return LiftState((hi,)), energy([hi])

    cur = [1.0] * k if margin([1.0] * k) > TIP_TOL else list(vertex.t)
    cur_e = energy(cur)
    for _ in range(50):  # sweeps; convergence usually takes 2-3
        improved = False
        for i in range(k):
            trial = list(cur)
            trial[i] = 0.0
            if margin(trial) > TIP_TOL:
                cand = 0.0
            else:
                trial[i] = cur[i]
                if margin(trial) <= TIP_TOL:
                    continue  # current coordinate is load-bearing; keep it
                lo, hi = 0.0, cur[i]
                while hi - lo > BISECT_T_TOL:
                    mid = 0.5 * (lo + hi)
                    trial[i] = mid
                    if margin(trial) > TIP_TOL:
                        hi = mid
                    else:
                        lo = mid
                cand = hi
            trial[i] = cand
            e = energy(trial)
            if e < cur_e - COORD_DESCENT_TOL:
                cur = trial
                cur_e = e
                improved = True
        if not improved:
            break
    return LiftState(tuple(cur)), cur_e


@dataclass(frozen=True)
class SlopeResult:
    alpha_c: float  # max climbable slope (rad)
    alpha_a: float  # max controlled-descent slope (rad)
    converged: bool
    iterations: int

    def to_json(self) -> dict:
        return {
            "alpha_c": self.alpha_c,
            "alpha_a": self.alpha_a,
            "converged": self.converged,
            "iterations": self.iterations,
        }


def _pick_edge(
    geom: RobotGeometry,
    table: TransitionTable,
    config: Configuration,
    direction: float,
) -> EdgeLabel:
    """Allowed edge whose tip direction is closest to `direction`."""
    best = None
    for edge in table.allowed_edges(config.state):
        p0, p1 = pivot_segment(geom, config, edge)
        mx = 0.5 * (p0.x + p1.x) - config.centroid.x
        my = 0.5 * (p0.y + p1.y) - config.centroid.y
        diff = abs(
            (math.atan2(my, mx) - direction + math.pi) % (2 * math.pi) - math.pi
        )
        if best is None or diff < best[0]:
            best = (diff, edge)
    if best is None:
        raise DisallowedTransition(f"no allowed edges from {config.state.name}")
    return best[1]


def gait_feasible(
    solid: ContactSolid,
    masses: MassModel,
    geom: RobotGeometry,
    table: TransitionTable,
    slope: float,
    downhill: bool = False,
) -> bool:
    """One period of the fall-line gait HU->SD->HD->SD->HU at the given slope.

    The cycle zigzags +-30 degrees about the fall line (a triangle footprint
    faces forward with a vertex, not an edge). Feasible iff every flip admits
    a tipping lift and every arrival pose is statically stable at lift zero.
    """
    base = math.pi if downhill else 0.0
    legs = (base - math.pi / 6.0, base + math.pi / 6.0)
    config = Configuration(
        Vec2(0.0, 0.0), StableState.HU, legs[0] + math.pi
    )
    for leg in legs:
        for _ in range(2):  # triangle tip, then SD end tip, same direction
            edge = _pick_edge(geom, table, config, leg)
            _, margin = max_feasibility_lift(solid, masses, config, edge, slope)
            if margin <= TIP_TOL:
                return False
            config = revolve(geom, table, config, edge)
            if rest_stability_margin(solid, masses, config, slope) <= TIP_TOL:
                return False
    return True


def max_slopes(
    solid: ContactSolid,
    masses: MassModel,
    geom: RobotGeometry,
    table: TransitionTable,
) -> SlopeResult:
    """Bisection on the slope for the uphill and downhill gaits (1e-4 rad)."""
    iterations = 0

    def solve(downhill: bool) -> float:
        nonlocal iterations
        if not gait_feasible(solid, masses, geom, table, 0.0, downhill):
            return 0.0
        lo, hi = 0.0, math.pi / 2.0  # the vertical plane always fails
        while hi - lo > SLOPE_TOL:
            mid = 0.5 * (lo + hi)
            iterations += 1
            if gait_feasible(solid, masses, geom, table, mid, downhill):
                lo = mid
            else:
                hi = mid
        return lo

    alpha_c = solve(downhill=False)
    alpha_a = solve(downhill=True)
    return SlopeResult(alpha_c, alpha_a, True, iterations)


@dataclass(frozen=True)
class LandingEstimate:
    n_hu: int
    n_hd: int
    n_sd: int
    samples: int
    seed: int

    @property
    def p_hu(self) -> float:
        return self.n_hu / self.samples

    @property
    def p_hd(self) -> float:
        return self.n_hd / self.samples

    @property
    def p_sd(self) -> float:
        return self.n_sd / self.samples

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "n_hu": self.n_hu,
            "n_hd": self.n_hd,
            "n_sd": self.n_sd,
            "p_hu": self.p_hu,
            "p_hd": self.p_hd,
            "p_sd": self.p_sd,
        }


def _rest_com_body(solid: ContactSolid, masses: MassModel) -> np.ndarray:
    pts, wts = _mass_points(solid, masses, LiftState.zeros(len(masses.movable)))
    com_body = (pts * wts[:, None]).sum(axis=0) / wts.sum()
    if np.any(solid.normals @ com_body >= solid.offsets - 1e-12):
        raise ValueError(
            "rest center of mass lies outside the contact solid; landing "
            "analysis needs the rest COM strictly inside the hull"
        )
    return com_body


def _face_neighbors(solid: ContactSolid):
    edge_map = {}
    for fi, face in enumerate(solid.faces):
        idx = face.indices
        for k in range(len(idx)):
            key = frozenset((idx[k], idx[(k + 1) % len(idx)]))
            edge_map.setdefault(key, []).append(fi)
    return edge_map


def settle_map(solid: ContactSolid, masses: MassModel) -> List[int]:
    """Final resting face for a body set down on each face.

    Rolls across the most violated edge while the COM projection (along the
    face normal) is outside the contact face; the COM height strictly
    decreases each roll and at most 20 rolls are allowed.
    """
    com_body = _rest_com_body(solid, masses)
    neighbors = _face_neighbors(solid)
    result = []
    for start in range(len(solid.faces)):
        face_i = start
        for _ in range(21):
            face = solid.faces[face_i]
            n = solid.normals[face_i]
            off = solid.offsets[face_i]
            height = off - float(n @ com_body)
            proj = com_body + (off - float(n @ com_body)) * n
            worst = None
            idx = face.indices
            for k in range(len(idx)):
                a = solid.vertices[idx[k]]
                b = solid.vertices[idx[(k + 1) % len(idx)]]
                out = float(np.cross(b - a, proj - a) @ n)
                if out < 0 and (worst is None or out < worst[0]):
                    worst = (out, frozenset((idx[k], idx[(k + 1) % len(idx)])))
            if worst is None:
                result.append(face_i)
                break
            nxt = [f for f in neighbors[worst[1]] if f != face_i][0]
            n2 = solid.normals[nxt]
            off2 = solid.offsets[nxt]
            if not off2 - float(n2 @ com_body) < height - 1e-15:
                raise RuntimeError("settling did not decrease the COM height")
            face_i = nxt
        else:
            raise RuntimeError("settling exceeded 20 rolls")
    return result


def _exit_faces(solid: ContactSolid, com_body: np.ndarray, dirs: np.ndarray) -> np.ndarray:
    """Face through which a ray from the COM leaves the solid, per direction."""
    denom = dirs @ solid.normals.T  # (n, faces)
    num = solid.offsets - solid.normals @ com_body  # > 0: COM strictly inside
    with np.errstate(divide="ignore"):
        t = np.where(denom > 1e-15, num[None, :] / denom, np.inf)
    return np.argmin(t, axis=1)


def landing_probabilities(
    solid: ContactSolid,
    masses: MassModel,
    samples: int,
    seed: int,
) -> LandingEstimate:
    """Monte Carlo landing-state probabilities.

    Uniform random orientation (unit quaternions), quasi-static settling (no
    bounce, no angular momentum): the face under the COM's gravity ray is the
    first contact; unstable contacts roll across the violated edge until the
    COM projects inside the resting face. Deterministic for a fixed seed.
    """
    if samples < 1:
        raise ValueError("samples must be at least 1")
    rng = np.random.Generator(np.random.PCG64(seed))
    q = rng.standard_normal((samples, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    w, x, y, z = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    # third row of the rotation matrix = world z expressed in the body frame
    gravity_dir = -np.stack(
        [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)], axis=1
    )
    com_body = _rest_com_body(solid, masses)
    exit_idx = _exit_faces(solid, com_body, gravity_dir)
    settle = settle_map(solid, masses)
    final = np.array([settle[i] for i in range(len(solid.faces))])[exit_idx]
    states = np.array([f.state.value for f in solid.faces])
    landed = states[final]
    n_hu = int((landed == "HU").sum())
    n_hd = int((landed == "HD").sum())
    n_sd = int((landed == "SD").sum())
    return LandingEstimate(n_hu, n_hd, n_sd, samples, seed)
