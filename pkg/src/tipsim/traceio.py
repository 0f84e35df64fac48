"""File formats (robot config, scene, trace) and the SVG figure renderer.

JSON for configs and scenes, line-delimited JSON for traces (streamable
during long enumerations), with a versioned header record. Angles in files
are degrees (human-authored); everything is radians in memory, converted at
this boundary only. Unknown fields are rejected with the offending path.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, Tuple

from tipsim.errors import (
    GeometryError,
    InconsistentTrace,
    ParseError,
    SchemaError,
)
from tipsim.geometry import ConvexPolygon, Vec2
from tipsim.planner import Scene
from tipsim.reachability import Arena, LocomotionMode, ReachabilityTrace
from tipsim.robot import (
    Configuration,
    EdgeLabel,
    RobotGeometry,
    StableState,
    TransitionTable,
    world_footprint,
)
from tipsim.statics import ContactSolid, MassModel, MovableMass

TRACE_FORMAT = "tipsim-trace"
TRACE_VERSION = 1
POSE_TOL = 1e-9


# ---------------------------------------------------------------------------
# schema helpers

def _parse_json(data) -> object:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None


def _check_keys(obj: dict, path: str, required: Sequence[str], optional: Sequence[str] = ()):
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected object, got {type(obj).__name__}")
    for k in required:
        if k not in obj:
            raise SchemaError(f"{path}.{k}", "missing required field")
    for k in obj:
        if k not in required and k not in optional:
            raise SchemaError(f"{path}.{k}", "unknown field")


def _num(obj, path: str, positive: bool = False) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SchemaError(path, f"expected number, got {type(obj).__name__}")
    v = float(obj)
    if not math.isfinite(v):
        raise SchemaError(path, "must be finite")
    if positive and v <= 0:
        raise SchemaError(path, "must be positive")
    return v


def _pair(obj, path: str) -> Tuple[float, float]:
    if not isinstance(obj, (list, tuple)) or len(obj) != 2:
        raise SchemaError(path, "expected [x, y]")
    return _num(obj[0], f"{path}[0]"), _num(obj[1], f"{path}[1]")


def _state(obj, path: str) -> StableState:
    try:
        return StableState(obj)
    except (ValueError, TypeError):
        raise SchemaError(path, f"expected one of HU/HD/SD, got {obj!r}") from None


# ---------------------------------------------------------------------------
# robot config document

@dataclass(frozen=True)
class MovableSpec:
    mass: float
    a: Tuple[float, float, float]
    b: Tuple[float, float, float]


@dataclass(frozen=True)
class Tolerances:
    pose: float = 1e-9
    geometry: float = 1e-12


@dataclass(frozen=True)
class RobotConfigDoc:
    ell: float = 0.10
    leg_len: float = 0.12
    tri_side: Optional[float] = None
    rect_width: Optional[float] = None
    allow_sd_sd: bool = False
    body_mass: float = 1.0
    movable: Optional[Tuple[MovableSpec, ...]] = None  # None -> default legs
    gravity: float = 9.81
    tolerances: Tolerances = field(default_factory=Tolerances)

    def geometry(self) -> RobotGeometry:
        return RobotGeometry(
            ell=self.ell,
            leg_len=self.leg_len,
            tri_side=self.tri_side,
            rect_width=self.rect_width,
        )

    def table(self) -> TransitionTable:
        return TransitionTable.default(allow_sd_sd=self.allow_sd_sd)

    def mass_model(self) -> MassModel:
        if self.movable is None:
            solid = ContactSolid.from_geometry(self.geometry())
            movable = solid.default_movable(self.body_mass / 4.0)
        else:
            movable = tuple(
                MovableMass(m.mass, m.a, m.b) for m in self.movable
            )
        return MassModel(self.body_mass, movable, self.gravity)

    def to_json(self) -> dict:
        out = {
            "ell": self.ell,
            "leg_len": self.leg_len,
            "allow_sd_sd": self.allow_sd_sd,
            "body_mass": self.body_mass,
            "gravity": self.gravity,
            "tolerances": {"pose": self.tolerances.pose, "geometry": self.tolerances.geometry},
        }
        if self.tri_side is not None:
            out["tri_side"] = self.tri_side
        if self.rect_width is not None:
            out["rect_width"] = self.rect_width
        if self.movable is not None:
            out["movable"] = [
                {"mass": m.mass, "a": list(m.a), "b": list(m.b)} for m in self.movable
            ]
        return out


def load_robot_config(data) -> RobotConfigDoc:
    obj = _parse_json(data)
    _check_keys(
        obj,
        "robot",
        required=(),
        optional=(
            "ell", "leg_len", "tri_side", "rect_width", "allow_sd_sd",
            "body_mass", "movable", "gravity", "tolerances",
        ),
    )
    kwargs = {}
    for key in ("ell", "leg_len", "tri_side", "rect_width", "body_mass", "gravity"):
        if key in obj:
            kwargs[key] = _num(obj[key], f"robot.{key}", positive=True)
    if "allow_sd_sd" in obj:
        if not isinstance(obj["allow_sd_sd"], bool):
            raise SchemaError("robot.allow_sd_sd", "expected boolean")
        kwargs["allow_sd_sd"] = obj["allow_sd_sd"]
    if "movable" in obj:
        if not isinstance(obj["movable"], list):
            raise SchemaError("robot.movable", "expected list")
        movable = []
        for i, m in enumerate(obj["movable"]):
            path = f"robot.movable[{i}]"
            _check_keys(m, path, required=("mass", "a", "b"))
            mass = _num(m["mass"], f"{path}.mass")
            if mass < 0:
                raise SchemaError(f"{path}.mass", "must be non-negative")
            def _triple(v, p):
                if not isinstance(v, (list, tuple)) or len(v) != 3:
                    raise SchemaError(p, "expected [x, y, z]")
                return tuple(_num(c, f"{p}[{j}]") for j, c in enumerate(v))
            movable.append(MovableSpec(mass, _triple(m["a"], f"{path}.a"), _triple(m["b"], f"{path}.b")))
        kwargs["movable"] = tuple(movable)
    if "tolerances" in obj:
        _check_keys(obj["tolerances"], "robot.tolerances", required=(), optional=("pose", "geometry"))
        kwargs["tolerances"] = Tolerances(
            pose=_num(obj["tolerances"].get("pose", 1e-9), "robot.tolerances.pose", positive=True),
            geometry=_num(obj["tolerances"].get("geometry", 1e-12), "robot.tolerances.geometry", positive=True),
        )
    doc = RobotConfigDoc(**kwargs)
    doc.geometry()  # validate dimensions
    doc.mass_model()
    return doc


def save_robot_config(doc: RobotConfigDoc) -> bytes:
    return (json.dumps(doc.to_json(), indent=2, sort_keys=True) + "\n").encode()


# ---------------------------------------------------------------------------
# scene document

def _normalize_ring(points: Sequence[Tuple[float, float]], index: int) -> Tuple[Tuple[float, float], ...]:
    """Validate one obstacle ring: convex, non-degenerate; returns it CCW."""
    if len(points) < 3:
        raise GeometryError(index, "polygon needs at least 3 vertices")
    area2 = 0.0
    n = len(points)
    for i in range(n):
        x0, y0 = points[i]
        x1, y1 = points[(i + 1) % n]
        area2 += x0 * y1 - x1 * y0
    ring = tuple(points) if area2 > 0 else tuple(reversed(points))
    try:
        ConvexPolygon(Vec2(x, y) for x, y in ring)
    except ValueError as exc:
        raise GeometryError(index, str(exc)) from None
    return ring


@dataclass(frozen=True)
class StartSpec:
    x: float
    y: float
    alpha_deg: float
    state: StableState


@dataclass(frozen=True)
class SceneDoc:
    start: StartSpec
    target: Tuple[float, float]
    tolerance: float
    obstacles: Tuple[Tuple[Tuple[float, float], ...], ...] = ()
    arena: Optional[Tuple[Tuple[float, float], Tuple[float, float]]] = None
    goal_state: Optional[StableState] = None
    mode: Optional[LocomotionMode] = None

    def to_scene(self) -> Scene:
        return Scene(
            start=Configuration(
                Vec2(self.start.x, self.start.y),
                self.start.state,
                math.radians(self.start.alpha_deg),
            ),
            target=Vec2(*self.target),
            tolerance=self.tolerance,
            obstacles=tuple(
                ConvexPolygon(Vec2(x, y) for x, y in ring) for ring in self.obstacles
            ),
            arena=(
                Arena(Vec2(*self.arena[0]), Vec2(*self.arena[1]))
                if self.arena is not None
                else None
            ),
            goal_state=self.goal_state,
            mode=self.mode if self.mode is not None else LocomotionMode.TRISTATE,
        )

    def to_json(self) -> dict:
        out = {
            "start": {
                "x": self.start.x,
                "y": self.start.y,
                "alpha_deg": self.start.alpha_deg,
                "state": self.start.state.value,
            },
            "target": {"x": self.target[0], "y": self.target[1]},
            "tolerance": self.tolerance,
            "obstacles": [{"polygon": [list(p) for p in ring]} for ring in self.obstacles],
        }
        if self.arena is not None:
            out["arena"] = {"min": list(self.arena[0]), "max": list(self.arena[1])}
        if self.goal_state is not None:
            out["goal_state"] = self.goal_state.value
        if self.mode is not None:
            out["mode"] = self.mode.value
        return out


def load_scene_doc(data) -> SceneDoc:
    obj = _parse_json(data)
    _check_keys(
        obj, "scene",
        required=("start", "target", "tolerance"),
        optional=("obstacles", "arena", "goal_state", "mode"),
    )
    _check_keys(obj["start"], "scene.start", required=("x", "y", "alpha_deg", "state"))
    start = StartSpec(
        x=_num(obj["start"]["x"], "scene.start.x"),
        y=_num(obj["start"]["y"], "scene.start.y"),
        alpha_deg=_num(obj["start"]["alpha_deg"], "scene.start.alpha_deg"),
        state=_state(obj["start"]["state"], "scene.start.state"),
    )
    _check_keys(obj["target"], "scene.target", required=("x", "y"))
    target = (_num(obj["target"]["x"], "scene.target.x"), _num(obj["target"]["y"], "scene.target.y"))
    tolerance = _num(obj["tolerance"], "scene.tolerance", positive=True)
    obstacles = []
    for i, entry in enumerate(obj.get("obstacles", ())):
        _check_keys(entry, f"scene.obstacles[{i}]", required=("polygon",))
        pts = entry["polygon"]
        if not isinstance(pts, list):
            raise SchemaError(f"scene.obstacles[{i}].polygon", "expected list of [x, y]")
        ring = [_pair(p, f"scene.obstacles[{i}].polygon[{j}]") for j, p in enumerate(pts)]
        obstacles.append(_normalize_ring(ring, i))
    arena = None
    if "arena" in obj and obj["arena"] is not None:
        _check_keys(obj["arena"], "scene.arena", required=("min", "max"))
        lo = _pair(obj["arena"]["min"], "scene.arena.min")
        hi = _pair(obj["arena"]["max"], "scene.arena.max")
        if lo[0] >= hi[0] or lo[1] >= hi[1]:
            raise SchemaError("scene.arena", "min must be strictly below max")
        arena = (lo, hi)
    goal_state = None
    if "goal_state" in obj and obj["goal_state"] is not None:
        goal_state = _state(obj["goal_state"], "scene.goal_state")
    mode = None
    if "mode" in obj and obj["mode"] is not None:
        try:
            mode = LocomotionMode(obj["mode"])
        except ValueError:
            raise SchemaError("scene.mode", f"unknown mode {obj['mode']!r}") from None
    return SceneDoc(
        start=start, target=target, tolerance=tolerance,
        obstacles=tuple(obstacles), arena=arena, goal_state=goal_state, mode=mode,
    )


def load_scene(data) -> Scene:
    """Parse, validate and convert a scene file in one step."""
    return load_scene_doc(data).to_scene()


def save_scene_doc(doc: SceneDoc) -> bytes:
    return (json.dumps(doc.to_json(), indent=2, sort_keys=True) + "\n").encode()


# ---------------------------------------------------------------------------
# trace documents (line-delimited JSON)

@dataclass(frozen=True)
class TraceRecord:
    seq: int
    state: StableState
    x: float
    y: float
    alpha: float  # radians in memory, degrees on disk
    pivot_edge: Optional[EdgeLabel]
    footprint: Tuple[Tuple[float, float], ...]


def record_for(
    geom: RobotGeometry, seq: int, config: Configuration, pivot: Optional[EdgeLabel]
) -> TraceRecord:
    fp = world_footprint(geom, config)
    return TraceRecord(
        seq=seq,
        state=config.state,
        x=config.centroid.x,
        y=config.centroid.y,
        alpha=config.alpha,
        pivot_edge=pivot,
        footprint=tuple((v.x, v.y) for v in fp.vertices),
    )


def plan_records(geom: RobotGeometry, start: Configuration, steps) -> List[TraceRecord]:
    records = [record_for(geom, 0, start, None)]
    for i, (edge, config) in enumerate(steps):
        records.append(record_for(geom, i + 1, config, edge))
    return records


def enumeration_records(geom: RobotGeometry, trace: ReachabilityTrace) -> List[TraceRecord]:
    return [
        record_for(geom, i, config, via)
        for i, (config, via) in enumerate(trace.records)
    ]


def trace_header(geom: RobotGeometry) -> dict:
    return {
        "format": TRACE_FORMAT,
        "version": TRACE_VERSION,
        "angles": "deg",
        "geometry": {"tri_side": geom.tri_side, "rect_width": geom.rect_width},
    }


def dump_trace(geom: RobotGeometry, records: Iterable[TraceRecord]) -> bytes:
    lines = [json.dumps(trace_header(geom), sort_keys=True)]
    for r in records:
        lines.append(
            json.dumps(
                {
                    "seq": r.seq,
                    "state": r.state.value,
                    "x": r.x,
                    "y": r.y,
                    "alpha": math.degrees(r.alpha),
                    "pivot_edge": r.pivot_edge.value if r.pivot_edge else None,
                    "footprint": [list(p) for p in r.footprint],
                },
                sort_keys=True,
            )
        )
    return ("\n".join(lines) + "\n").encode()


def parse_trace(data) -> Tuple[dict, List[TraceRecord]]:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not UTF-8: {exc}") from None
    lines = [ln for ln in data.splitlines() if ln.strip()]
    if not lines:
        raise SchemaError("trace", "empty trace file")
    header = _parse_json(lines[0])
    _check_keys(header, "trace.header", required=("format", "version", "angles", "geometry"))
    if header["format"] != TRACE_FORMAT:
        raise SchemaError("trace.header.format", f"expected {TRACE_FORMAT!r}")
    if header["version"] != TRACE_VERSION:
        raise SchemaError("trace.header.version", f"unsupported version {header['version']!r}")
    _check_keys(header["geometry"], "trace.header.geometry", required=("tri_side", "rect_width"))
    records = []
    for i, line in enumerate(lines[1:]):
        obj = _parse_json(line)
        path = f"trace[{i}]"
        _check_keys(obj, path, required=("seq", "state", "x", "y", "alpha", "pivot_edge", "footprint"))
        if not isinstance(obj["seq"], int) or isinstance(obj["seq"], bool):
            raise SchemaError(f"{path}.seq", "expected integer")
        pivot = None
        if obj["pivot_edge"] is not None:
            try:
                pivot = EdgeLabel(obj["pivot_edge"])
            except ValueError:
                raise SchemaError(f"{path}.pivot_edge", f"unknown edge {obj['pivot_edge']!r}") from None
        fp = obj["footprint"]
        if not isinstance(fp, list) or len(fp) < 3:
            raise SchemaError(f"{path}.footprint", "expected list of at least 3 [x, y]")
        records.append(
            TraceRecord(
                seq=obj["seq"],
                state=_state(obj["state"], f"{path}.state"),
                x=_num(obj["x"], f"{path}.x"),
                y=_num(obj["y"], f"{path}.y"),
                alpha=math.radians(_num(obj["alpha"], f"{path}.alpha")),
                pivot_edge=pivot,
                footprint=tuple(_pair(p, f"{path}.footprint[{j}]") for j, p in enumerate(fp)),
            )
        )
    return header, records


def validate_trace(header: dict, records: Sequence[TraceRecord]) -> None:
    """Check seq monotonicity and footprint/pose consistency (1e-9)."""
    geom = RobotGeometry.from_sides(
        header["geometry"]["tri_side"], header["geometry"]["rect_width"]
    )
    for i, r in enumerate(records):
        if r.seq != i:
            raise InconsistentTrace(f"record {i}: seq {r.seq}, expected {i}")
        config = Configuration(Vec2(r.x, r.y), r.state, r.alpha)
        fp = world_footprint(geom, config)
        if len(fp.vertices) != len(r.footprint):
            raise InconsistentTrace(f"record {i}: footprint vertex count mismatch")
        for v, (px, py) in zip(fp.vertices, r.footprint):
            if math.hypot(v.x - px, v.y - py) > POSE_TOL:
                raise InconsistentTrace(
                    f"record {i}: footprint departs from pose by "
                    f"{math.hypot(v.x - px, v.y - py):.3e} m"
                )


# ---------------------------------------------------------------------------
# SVG renderer

_STATE_COLORS = {
    StableState.HU: "#2a7de1",
    StableState.HD: "#d94f2b",
    StableState.SD: "#3aa655",
}


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def render_svg(
    records: Sequence[TraceRecord],
    scene: Optional[SceneDoc] = None,
    size: int = 800,
    validate: bool = True,
    header: Optional[dict] = None,
) -> bytes:
    """Deterministic SVG figure: footprints, obstacles, target, path.

    One <polygon> per trace record plus one per obstacle; the target is a
    yellow <circle>; the arena an outlined <rect>; the centroid path a
    <polyline> when the trace has at least two records.
    """
    if validate and header is not None:
        validate_trace(header, records)

    xs: List[float] = []
    ys: List[float] = []
    for r in records:
        xs.extend(p[0] for p in r.footprint)
        ys.extend(p[1] for p in r.footprint)
    if scene is not None:
        for ring in scene.obstacles:
            xs.extend(p[0] for p in ring)
            ys.extend(p[1] for p in ring)
        xs.append(scene.target[0])
        ys.append(scene.target[1])
        if scene.arena is not None:
            xs.extend((scene.arena[0][0], scene.arena[1][0]))
            ys.extend((scene.arena[0][1], scene.arena[1][1]))
    if not xs:
        xs = [0.0, 1.0]
        ys = [0.0, 1.0]
    minx, maxx = min(xs), max(xs)
    miny, maxy = min(ys), max(ys)
    span = max(maxx - minx, maxy - miny, 1e-9)
    pad = 0.05 * span
    minx -= pad
    maxx += pad
    miny -= pad
    maxy += pad
    scale = size / max(maxx - minx, maxy - miny)
    width = (maxx - minx) * scale
    height = (maxy - miny) * scale

    # world (y up) -> viewport (y down)
    def sx(x: float) -> str:
        return _fmt((x - minx) * scale)

    def sy(y: float) -> str:
        return _fmt((maxy - y) * scale)

    tri_side = None
    if header is not None:
        tri_side = header["geometry"]["tri_side"]
    elif records:
        tri_side = max(
            math.dist(records[0].footprint[0], records[0].footprint[1]),
            math.dist(records[0].footprint[1], records[0].footprint[2]),
        )
    stroke = _fmt(max((tri_side or span) * 0.01 * scale, 0.5))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}" '
        'style="background:#ffffff">'
    ]
    if scene is not None and scene.arena is not None:
        (ax0, ay0), (ax1, ay1) = scene.arena
        out.append(
            f'<rect x="{sx(ax0)}" y="{sy(ay1)}" width="{_fmt((ax1 - ax0) * scale)}" '
            f'height="{_fmt((ay1 - ay0) * scale)}" fill="none" stroke="#888888" '
            f'stroke-width="{stroke}"/>'
        )
    if scene is not None:
        for ring in scene.obstacles:
            pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in ring)
            out.append(f'<polygon points="{pts}" fill="#222222" stroke="none"/>')
    for r in records:
        pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in r.footprint)
        color = _STATE_COLORS[r.state]
        out.append(
            f'<polygon points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{stroke}"/>'
        )
    if len(records) >= 2:
        pts = " ".join(f"{sx(r.x)},{sy(r.y)}" for r in records)
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="#555555" '
            f'stroke-width="{stroke}" stroke-dasharray="4,3"/>'
        )
    if scene is not None:
        radius = _fmt(max(scene.tolerance * scale, 3.0))
        out.append(
            f'<circle cx="{sx(scene.target[0])}" cy="{sy(scene.target[1])}" '
            f'r="{radius}" fill="#f5c518" stroke="#a8860b" stroke-width="{stroke}"/>'
        )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode()
