"""Kinematic simulator and motion planner for a revolving (tipping) robot."""

from tipsim.geometry import (
    ConvexPolygon,
    Pose2,
    Segment,
    Vec2,
    point_in_polygon,
    polygons_intersect,
    reflect_across_line,
)
from tipsim.kernels import BACKEND
from tipsim.robot import (
    Configuration,
    EdgeLabel,
    RobotGeometry,
    StableState,
    TransitionTable,
    canonical_footprint,
    reachable_point,
    revolve,
    world_footprint,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "Configuration",
    "ConvexPolygon",
    "EdgeLabel",
    "Pose2",
    "RobotGeometry",
    "Segment",
    "StableState",
    "TransitionTable",
    "Vec2",
    "canonical_footprint",
    "point_in_polygon",
    "polygons_intersect",
    "reachable_point",
    "reflect_across_line",
    "revolve",
    "world_footprint",
]
