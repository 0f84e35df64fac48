"""Planar geometry primitives: vectors, poses, segments, convex polygons.

All values are immutable after construction and all operations are pure.
Predicates are tolerance-based (GEOM_EPS = 1e-12 m), never exact float
equality; boundary contact counts as intersection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Tuple

from tipsim.kernels import (
    GEOM_EPS,
    convex_overlap,
    point_in_convex,
    poly_in_rect,
    reflect_point,
    transform_poly,
)

TAU = math.tau


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"{name} component is not finite: {v!r}")


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __post_init__(self):
        _require_finite("Vec2", self.x, self.y)

    def __add__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2") -> "Vec2":
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, k: float) -> "Vec2":
        return Vec2(self.x * k, self.y * k)

    __rmul__ = __mul__

    def dot(self, other: "Vec2") -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: "Vec2") -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def dist(self, other: "Vec2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


def normalize_angle(theta: float, period: float = TAU) -> float:
    """Wrap an angle into [0, period)."""
    theta = theta % period
    if theta >= period:  # fmod rounding can land exactly on the period
        theta = 0.0
    return theta


@dataclass(frozen=True)
class Pose2:
    """Rigid planar transform: rotate by theta, then translate by position."""

    position: Vec2
    theta: float

    def __post_init__(self):
        _require_finite("Pose2", self.theta)
        object.__setattr__(self, "theta", normalize_angle(self.theta))

    def apply(self, p: Vec2) -> Vec2:
        c = math.cos(self.theta)
        s = math.sin(self.theta)
        return Vec2(
            c * p.x - s * p.y + self.position.x,
            s * p.x + c * p.y + self.position.y,
        )


@dataclass(frozen=True)
class Segment:
    a: Vec2
    b: Vec2

    def __post_init__(self):
        if self.a.dist(self.b) <= GEOM_EPS:
            raise ValueError("degenerate segment: endpoints closer than 1e-12 m")

    def midpoint(self) -> Vec2:
        return Vec2(0.5 * (self.a.x + self.b.x), 0.5 * (self.a.y + self.b.y))

    def length(self) -> float:
        return self.a.dist(self.b)


class ConvexPolygon:
    """Strictly convex, counterclockwise polygon with at least 3 vertices."""

    __slots__ = ("vertices", "flat")

    def __init__(self, vertices: Iterable[Vec2]):
        verts = tuple(vertices)
        if len(verts) < 3:
            raise ValueError("polygon needs at least 3 vertices")
        n = len(verts)
        for i in range(n):
            j = (i + 1) % n
            if verts[i].dist(verts[j]) <= GEOM_EPS:
                raise ValueError(f"repeated vertex at index {i}")
        for i in range(n):
            prev = verts[i - 1]
            cur = verts[i]
            nxt = verts[(i + 1) % n]
            cross = (cur - prev).cross(nxt - cur)
            if cross <= GEOM_EPS:
                raise ValueError(
                    "polygon is not strictly convex and counterclockwise "
                    f"(turn at vertex {i} is {cross:g})"
                )
        self.vertices: Tuple[Vec2, ...] = verts
        flat = []
        for v in verts:
            flat.append(v.x)
            flat.append(v.y)
        self.flat: Tuple[float, ...] = tuple(flat)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConvexPolygon) and self.flat == other.flat

    def __hash__(self) -> int:
        return hash(self.flat)

    def __repr__(self) -> str:
        return f"ConvexPolygon({list(self.vertices)!r})"

    def centroid(self) -> Vec2:
        # area centroid of a convex CCW polygon
        a2 = 0.0
        cx = 0.0
        cy = 0.0
        verts = self.vertices
        for i in range(len(verts)):
            p = verts[i]
            q = verts[(i + 1) % len(verts)]
            w = p.cross(q)
            a2 += w
            cx += (p.x + q.x) * w
            cy += (p.y + q.y) * w
        return Vec2(cx / (3.0 * a2), cy / (3.0 * a2))

    def edges(self) -> Tuple[Segment, ...]:
        verts = self.vertices
        return tuple(
            Segment(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts))
        )

    def transformed(self, pose: Pose2) -> "ConvexPolygon":
        c = math.cos(pose.theta)
        s = math.sin(pose.theta)
        flat = transform_poly(self.flat, c, s, pose.position.x, pose.position.y)
        out = ConvexPolygon.__new__(ConvexPolygon)
        out.vertices = tuple(
            Vec2(flat[i], flat[i + 1]) for i in range(0, len(flat), 2)
        )
        out.flat = flat
        return out

    def shrunk(self, factor: float) -> "ConvexPolygon":
        """Scale towards the centroid; used for interior-disjointness checks."""
        c = self.centroid()
        return ConvexPolygon(c + (v - c) * factor for v in self.vertices)


def reflect_across_line(p: Vec2, line: Segment) -> Vec2:
    """Mirror image of p across the infinite line through the segment."""
    x, y = reflect_point(p.x, p.y, line.a.x, line.a.y, line.b.x, line.b.y)
    return Vec2(x, y)


def polygons_intersect(a: ConvexPolygon, b: ConvexPolygon) -> bool:
    """True iff the closed regions share at least one point."""
    return convex_overlap(a.flat, b.flat)


def point_in_polygon(p: Vec2, poly: ConvexPolygon) -> bool:
    """True iff p is inside poly or on its boundary."""
    return point_in_convex(p.x, p.y, poly.flat)


def polygon_in_bounds(poly: ConvexPolygon, lo: Vec2, hi: Vec2) -> bool:
    """True iff the polygon lies fully inside the axis-aligned rectangle."""
    return poly_in_rect(poly.flat, lo.x, lo.y, hi.x, hi.y)
