"""Goal-directed search over the revolve graph: BFS (fewest flips) and A*
(shortest centroid path, f = g + h with h = straight-line distance).

Each flip moves the centroid by exactly its chord length, so the Euclidean
heuristic is admissible and consistent; closed-set A* is optimal in path
length, BFS in flip count. Expansion order is part of the contract: FIFO /
priority (f, then h, then insertion order), edges in canonical order.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import List, Optional, Tuple

from tipsim.errors import BudgetExhausted, NoPath, SceneError
from tipsim.geometry import (
    ConvexPolygon,
    Vec2,
    point_in_polygon,
    polygon_in_bounds,
    polygons_intersect,
)
from tipsim.reachability import (
    DEFAULT_EPS_ALPHA,
    Arena,
    LocomotionMode,
    allowed_moves,
    quantize,
)
from tipsim.robot import (
    Configuration,
    EdgeLabel,
    RobotGeometry,
    StableState,
    TransitionTable,
    revolve,
    world_footprint,
)

DEFAULT_BUDGET = 1_000_000


@dataclass(frozen=True)
class Scene:
    """Planning problem: bounds, obstacles, start, target and tolerance."""

    start: Configuration
    target: Vec2
    tolerance: float
    obstacles: Tuple[ConvexPolygon, ...] = ()
    arena: Optional[Arena] = None
    goal_state: Optional[StableState] = None
    mode: LocomotionMode = LocomotionMode.TRISTATE

    def __post_init__(self):
        if not (self.tolerance > 0):
            raise ValueError("tolerance must be positive")


@dataclass
class SearchNode:
    config: Configuration
    g: float  # centroid path length from start (m)
    h: float  # straight-line distance to target (m)
    parent: Optional["SearchNode"]
    edge: Optional[EdgeLabel]  # pivot edge taken to get here


@dataclass
class Plan:
    steps: Tuple[Tuple[EdgeLabel, Configuration], ...]
    flips: int
    path_length: float
    expansions: int

    def configurations(self, start: Configuration) -> List[Configuration]:
        return [start] + [c for _, c in self.steps]


def check_move(
    geom: RobotGeometry,
    scene: Scene,
    candidate: Configuration,
    point_mode: bool = False,
) -> bool:
    """True iff the candidate placement is legal.

    Default: the whole footprint avoids every obstacle and lies inside the
    arena. point_mode checks only the centroid (the weaker historical rule,
    kept for fidelity experiments).
    """
    if point_mode:
        c = candidate.centroid
        if scene.arena is not None:
            if not (
                scene.arena.lo.x <= c.x <= scene.arena.hi.x
                and scene.arena.lo.y <= c.y <= scene.arena.hi.y
            ):
                return False
        return not any(point_in_polygon(c, obs) for obs in scene.obstacles)
    fp = world_footprint(geom, candidate)
    if scene.arena is not None and not polygon_in_bounds(fp, scene.arena.lo, scene.arena.hi):
        return False
    return not any(polygons_intersect(fp, obs) for obs in scene.obstacles)


def _goal_met(scene: Scene, config: Configuration) -> bool:
    if scene.goal_state is not None and config.state is not scene.goal_state:
        return False
    return config.centroid.dist(scene.target) <= scene.tolerance


def _extract(node: SearchNode, expansions: int) -> Plan:
    steps = []
    cur = node
    while cur.parent is not None:
        steps.append((cur.edge, cur.config))
        cur = cur.parent
    steps.reverse()
    return Plan(
        steps=tuple(steps),
        flips=len(steps),
        path_length=node.g,
        expansions=expansions,
    )


def _validate_start(geom: RobotGeometry, scene: Scene, point_mode: bool) -> None:
    if not check_move(geom, scene, scene.start, point_mode=point_mode):
        raise SceneError("start configuration is colliding or outside the arena")


def bfs_plan(
    geom: RobotGeometry,
    table: TransitionTable,
    scene: Scene,
    mode: Optional[LocomotionMode] = None,
    budget: int = DEFAULT_BUDGET,
    point_mode: bool = False,
) -> Plan:
    """Fewest-flips plan (FIFO queue, unit edge cost)."""
    mode = scene.mode if mode is None else mode
    _validate_start(geom, scene, point_mode)
    eps_p = 1e-6 * geom.tri_side
    root = SearchNode(scene.start, 0.0, scene.start.centroid.dist(scene.target), None, None)
    if _goal_met(scene, scene.start):
        return Plan((), 0, 0.0, 0)
    visited = {quantize(scene.start, eps_p, DEFAULT_EPS_ALPHA)}
    queue = deque([root])
    expansions = 0
    while queue:
        node = queue.popleft()
        if expansions >= budget:
            raise BudgetExhausted(expansions)
        expansions += 1
        for edge in allowed_moves(table, mode, node.config.state):
            nxt = revolve(geom, table, node.config, edge)
            if not check_move(geom, scene, nxt, point_mode=point_mode):
                continue
            key = quantize(nxt, eps_p, DEFAULT_EPS_ALPHA)
            if key in visited:
                continue
            visited.add(key)
            child = SearchNode(
                nxt,
                node.g + node.config.centroid.dist(nxt.centroid),
                nxt.centroid.dist(scene.target),
                node,
                edge,
            )
            if _goal_met(scene, nxt):
                return _extract(child, expansions)
            queue.append(child)
    raise NoPath(expansions)


def astar_plan(
    geom: RobotGeometry,
    table: TransitionTable,
    scene: Scene,
    mode: Optional[LocomotionMode] = None,
    budget: int = DEFAULT_BUDGET,
    point_mode: bool = False,
) -> Plan:
    """Shortest-centroid-path plan (priority queue on f = g + h)."""
    mode = scene.mode if mode is None else mode
    _validate_start(geom, scene, point_mode)
    eps_p = 1e-6 * geom.tri_side
    if _goal_met(scene, scene.start):
        return Plan((), 0, 0.0, 0)
    root = SearchNode(scene.start, 0.0, scene.start.centroid.dist(scene.target), None, None)
    counter = 0
    open_heap: List[Tuple[float, float, int, SearchNode]] = [
        (root.g + root.h, root.h, counter, root)
    ]
    best_g = {quantize(scene.start, eps_p, DEFAULT_EPS_ALPHA): 0.0}
    closed = set()
    expansions = 0
    while open_heap:
        _, _, _, node = heapq.heappop(open_heap)
        key = quantize(node.config, eps_p, DEFAULT_EPS_ALPHA)
        if key in closed:
            continue  # stale heap entry
        closed.add(key)
        if _goal_met(scene, node.config):
            return _extract(node, expansions)
        if expansions >= budget:
            raise BudgetExhausted(expansions)
        expansions += 1
        for edge in allowed_moves(table, mode, node.config.state):
            nxt = revolve(geom, table, node.config, edge)
            if not check_move(geom, scene, nxt, point_mode=point_mode):
                continue
            nkey = quantize(nxt, eps_p, DEFAULT_EPS_ALPHA)
            if nkey in closed:
                continue
            g = node.g + node.config.centroid.dist(nxt.centroid)
            prev = best_g.get(nkey)
            if prev is not None and prev <= g + 1e-15:
                continue
            best_g[nkey] = g
            counter += 1
            child = SearchNode(nxt, g, nxt.centroid.dist(scene.target), node, edge)
            heapq.heappush(open_heap, (g + child.h, child.h, counter, child))
    raise NoPath(expansions)
