"""Robot model: stable states, canonical footprints, transition table, revolve.

The contact shape is a triangular prism: HU and HD stand on the two
triangular end faces (side s), SD lies on a rectangular face (s by w).
Tipping over a footprint edge moves the body onto the adjacent face; which
edges are allowed and where the new reference direction points is data-driven
through the TransitionTable, so a different contact model can be substituted
without touching any algorithm.

Angle convention: HU/HD footprints have a 3-fold symmetry and leg identity is
not observable in the planar model, so triangle-state alpha is stored modulo
2*pi/3. SD keeps the full turn (its two ends are distinguishable).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, Mapping, Optional, Tuple

from tipsim.errors import DisallowedTransition
from tipsim.geometry import ConvexPolygon, Pose2, Vec2, normalize_angle
from tipsim.kernels import revolve_step

TAU = math.tau

POSE_TOL = 1e-9  # pose equality
SQRT3 = math.sqrt(3.0)


class StableState(Enum):
    HU = "HU"  # head-up: standing on a triangle end face
    HD = "HD"  # head-down: standing on the other triangle end face
    SD = "SD"  # side-down: lying on a rectangle face

    def __repr__(self):
        return self.name


class EdgeLabel(Enum):
    # triangle footprints: edge k is opposite vertex k
    E0 = "E0"
    E1 = "E1"
    E2 = "E2"
    # rectangle footprint: ends named after the state reached by tipping over them
    HU_END = "HU_END"
    HD_END = "HD_END"
    LONG_A = "LONG_A"
    LONG_B = "LONG_B"

    def __repr__(self):
        return self.name


TRIANGLE_EDGES: Tuple[EdgeLabel, ...] = (EdgeLabel.E0, EdgeLabel.E1, EdgeLabel.E2)
SD_EDGES: Tuple[EdgeLabel, ...] = (
    EdgeLabel.HU_END,
    EdgeLabel.HD_END,
    EdgeLabel.LONG_A,
    EdgeLabel.LONG_B,
)

# deterministic expansion order used by every enumerator/search
EDGE_ORDER: Dict[StableState, Tuple[EdgeLabel, ...]] = {
    StableState.HU: TRIANGLE_EDGES,
    StableState.HD: TRIANGLE_EDGES,
    StableState.SD: SD_EDGES,
}

# triangle footprints are invariant under 120-degree turns; SD is not
SYMMETRY_PERIOD: Dict[StableState, float] = {
    StableState.HU: TAU / 3.0,
    StableState.HD: TAU / 3.0,
    StableState.SD: TAU,
}


@dataclass(frozen=True)
class RobotGeometry:
    """Body dimensions; tri_side/rect_width default from (ell, leg_len)."""

    ell: float = 0.10  # tetrahedron edge (m)
    leg_len: float = 0.12  # leg length (m)
    tri_side: float = None  # type: ignore[assignment]
    rect_width: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.ell <= 0 or self.leg_len <= 0:
            raise ValueError("ell and leg_len must be positive")
        if self.tri_side is None:
            object.__setattr__(
                self, "tri_side", self.ell + self.leg_len * math.sqrt(8.0 / 3.0)
            )
        if self.rect_width is None:
            object.__setattr__(self, "rect_width", self.tri_side * SQRT3 / 2.0)
        if not (self.tri_side > 0 and math.isfinite(self.tri_side)):
            raise ValueError("tri_side must be positive and finite")
        if not (self.rect_width > 0 and math.isfinite(self.rect_width)):
            raise ValueError("rect_width must be positive and finite")

    @classmethod
    def from_sides(cls, tri_side: float, rect_width: float = None) -> "RobotGeometry":
        """Build directly from footprint dimensions (ell/leg_len nominal)."""
        if rect_width is None:
            rect_width = tri_side * SQRT3 / 2.0
        return cls(ell=tri_side / 2.0, leg_len=tri_side / 2.0,
                   tri_side=tri_side, rect_width=rect_width)

    @property
    def circumradius(self) -> float:
        """Triangle footprint circumradius R = s/sqrt(3)."""
        return self.tri_side / SQRT3

    @property
    def inradius(self) -> float:
        """Triangle footprint inradius r_in = s/(2*sqrt(3))."""
        return self.tri_side / (2.0 * SQRT3)

    @property
    def step_end(self) -> float:
        """Centroid travel of a triangle<->SD tip: r_in + w/2."""
        return self.inradius + self.rect_width / 2.0

    @property
    def step_long(self) -> float:
        """Centroid travel of an SD->SD lateral tip: s."""
        return self.tri_side


@dataclass(frozen=True)
class Configuration:
    """Full planar state: centroid, stable state, reference angle."""

    centroid: Vec2
    state: StableState
    alpha: float

    def __post_init__(self):
        if not math.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        object.__setattr__(
            self, "alpha", normalize_angle(self.alpha, SYMMETRY_PERIOD[self.state])
        )

    def pose(self) -> Pose2:
        return Pose2(self.centroid, self.alpha)


class _Canon:
    """Canonical (body-frame) footprints and edge endpoints for fixed (s, w)."""

    __slots__ = ("tri", "rect", "edges")

    def __init__(self, s: float, w: float):
        r = s / SQRT3
        v0 = Vec2(r, 0.0)
        v1 = Vec2(-r / 2.0, s / 2.0)
        v2 = Vec2(-r / 2.0, -s / 2.0)
        self.tri = ConvexPolygon((v0, v1, v2))
        w0 = Vec2(w / 2.0, -s / 2.0)
        w1 = Vec2(w / 2.0, s / 2.0)
        w2 = Vec2(-w / 2.0, s / 2.0)
        w3 = Vec2(-w / 2.0, -s / 2.0)
        self.rect = ConvexPolygon((w0, w1, w2, w3))
        # CCW endpoint pairs, flattened for the kernels
        def _flat(a: Vec2, b: Vec2) -> Tuple[float, float, float, float]:
            return (a.x, a.y, b.x, b.y)

        self.edges: Dict[Tuple[StableState, EdgeLabel], Tuple[float, float, float, float]] = {}
        for st in (StableState.HU, StableState.HD):
            self.edges[(st, EdgeLabel.E0)] = _flat(v1, v2)
            self.edges[(st, EdgeLabel.E1)] = _flat(v2, v0)
            self.edges[(st, EdgeLabel.E2)] = _flat(v0, v1)
        self.edges[(StableState.SD, EdgeLabel.HU_END)] = _flat(w0, w1)
        self.edges[(StableState.SD, EdgeLabel.LONG_A)] = _flat(w1, w2)
        self.edges[(StableState.SD, EdgeLabel.HD_END)] = _flat(w2, w3)
        self.edges[(StableState.SD, EdgeLabel.LONG_B)] = _flat(w3, w0)


@lru_cache(maxsize=64)
def _canon(s: float, w: float) -> _Canon:
    return _Canon(s, w)


@dataclass(frozen=True)
class TableEntry:
    target: StableState
    arrival: EdgeLabel
    allowed: bool


class TransitionTable:
    """Data-driven map (state, edge) -> (target state, arrival edge)."""

    def __init__(self, entries: Mapping[Tuple[StableState, EdgeLabel], TableEntry]):
        self._entries = dict(entries)

    @classmethod
    def default(cls, allow_sd_sd: bool = False) -> "TransitionTable":
        e: Dict[Tuple[StableState, EdgeLabel], TableEntry] = {}
        for k in TRIANGLE_EDGES:
            e[(StableState.HU, k)] = TableEntry(StableState.SD, EdgeLabel.HU_END, True)
            e[(StableState.HD, k)] = TableEntry(StableState.SD, EdgeLabel.HD_END, True)
        e[(StableState.SD, EdgeLabel.HU_END)] = TableEntry(StableState.HU, EdgeLabel.E0, True)
        e[(StableState.SD, EdgeLabel.HD_END)] = TableEntry(StableState.HD, EdgeLabel.E0, True)
        e[(StableState.SD, EdgeLabel.LONG_A)] = TableEntry(
            StableState.SD, EdgeLabel.LONG_B, allow_sd_sd
        )
        e[(StableState.SD, EdgeLabel.LONG_B)] = TableEntry(
            StableState.SD, EdgeLabel.LONG_A, allow_sd_sd
        )
        return cls(e)

    def lookup(self, state: StableState, edge: EdgeLabel) -> TableEntry:
        entry = self._entries.get((state, edge))
        if entry is None or not entry.allowed:
            raise DisallowedTransition(f"revolve over {edge.name} from {state.name}")
        return entry

    def allowed_edges(self, state: StableState) -> Tuple[EdgeLabel, ...]:
        out = []
        for edge in EDGE_ORDER[state]:
            entry = self._entries.get((state, edge))
            if entry is not None and entry.allowed:
                out.append(edge)
        return tuple(out)

    def items(self):
        """All entries (allowed or not), in deterministic order."""
        for state in (StableState.HU, StableState.HD, StableState.SD):
            for edge in EDGE_ORDER[state]:
                if (state, edge) in self._entries:
                    yield (state, edge), self._entries[(state, edge)]


def canonical_footprint(geom: RobotGeometry, state: StableState) -> ConvexPolygon:
    """Body-frame footprint: centroid at origin, reference direction +x."""
    canon = _canon(geom.tri_side, geom.rect_width)
    return canon.tri if state is not StableState.SD else canon.rect


def world_footprint(geom: RobotGeometry, config: Configuration) -> ConvexPolygon:
    """Canonical footprint rotated by alpha, translated by the centroid."""
    return canonical_footprint(geom, config.state).transformed(config.pose())


def pivot_segment(geom: RobotGeometry, config: Configuration, edge: EdgeLabel):
    """World endpoints (CCW for the current footprint) of the named edge."""
    canon = _canon(geom.tri_side, geom.rect_width)
    try:
        ex0, ey0, ex1, ey1 = canon.edges[(config.state, edge)]
    except KeyError:
        raise DisallowedTransition(
            f"edge {edge.name} is not an edge of a {config.state.name} footprint"
        ) from None
    pose = config.pose()
    return pose.apply(Vec2(ex0, ey0)), pose.apply(Vec2(ex1, ey1))


def revolve_ex(
    geom: RobotGeometry,
    table: TransitionTable,
    config: Configuration,
    edge: EdgeLabel,
) -> Tuple[Configuration, EdgeLabel]:
    """Tip over the named edge; also report the arrival edge.

    The arrival edge is the edge of the new footprint that coincides with the
    pivot segment, expressed in the new configuration's (normalized) frame:
    every 2*pi/3 the normalization subtracts from a triangle angle relabels a
    given world edge k as k+1.
    """
    entry = table.lookup(config.state, edge)
    canon = _canon(geom.tri_side, geom.rect_width)
    e = canon.edges[(config.state, edge)]
    v = canon.edges[(entry.target, entry.arrival)]
    ca = math.cos(config.alpha)
    sa = math.sin(config.alpha)
    gx, gy, theta = revolve_step(
        e[0], e[1], e[2], e[3], ca, sa, config.centroid.x, config.centroid.y,
        v[0], v[1], v[2], v[3],
    )
    new = Configuration(Vec2(gx, gy), entry.target, theta)
    arrival = entry.arrival
    if entry.target is not StableState.SD:
        shift = round((theta - new.alpha) / (TAU / 3.0)) % 3
        if shift:
            base = TRIANGLE_EDGES.index(entry.arrival)
            arrival = TRIANGLE_EDGES[(base + shift) % 3]
    return new, arrival


def revolve(
    geom: RobotGeometry,
    table: TransitionTable,
    config: Configuration,
    edge: EdgeLabel,
) -> Configuration:
    """Tip the robot over the named footprint edge.

    The arriving footprint shares the pivot segment endpoint-to-endpoint with
    the old one and its interior lies on the far side of the pivot line; the
    new reference direction follows the arrival edge convention of
    canonical_footprint.
    """
    return revolve_ex(geom, table, config, edge)[0]


def reachable_point(geom: RobotGeometry, config: Configuration) -> Optional[Vec2]:
    """Head-foot contact point: the footprint centroid when head-down."""
    if config.state is StableState.HD:
        return config.centroid
    return None
