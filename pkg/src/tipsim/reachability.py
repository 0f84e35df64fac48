"""Breadth-first closure of the revolve graph under a locomotion mode.

Visited-set identity quantizes (x, y, alpha, state); exact float identity
would never merge configurations reached through different transform chains.
"Finite" is only ever reported on frontier exhaustion, never inferred from
slow growth.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Set, Tuple

from tipsim.errors import StartStateNotInMode
from tipsim.geometry import Vec2, polygon_in_bounds
from tipsim.robot import (
    SYMMETRY_PERIOD,
    Configuration,
    EdgeLabel,
    RobotGeometry,
    StableState,
    TransitionTable,
    reachable_point,
    revolve,
    world_footprint,
)

DEFAULT_EPS_ALPHA = 1e-6  # rad


class LocomotionMode(Enum):
    BISTATE_HU_SD = "bistate-hu-sd"
    BISTATE_HD_SD = "bistate-hd-sd"
    TRISTATE = "tristate"

    @property
    def states(self) -> frozenset:
        if self is LocomotionMode.BISTATE_HU_SD:
            return frozenset((StableState.HU, StableState.SD))
        if self is LocomotionMode.BISTATE_HD_SD:
            return frozenset((StableState.HD, StableState.SD))
        return frozenset(StableState)


def allowed_moves(
    table: TransitionTable, mode: LocomotionMode, state: StableState
) -> Tuple[EdgeLabel, ...]:
    """Table-allowed edges from `state` whose endpoints both lie in the mode."""
    if state not in mode.states:
        return ()
    out = []
    for edge in table.allowed_edges(state):
        if table.lookup(state, edge).target in mode.states:
            out.append(edge)
    return tuple(out)


@dataclass(frozen=True)
class QuantizedKey:
    qx: int
    qy: int
    qalpha: int
    state: StableState


def quantize(config: Configuration, eps_p: float, eps_a: float) -> QuantizedKey:
    """Collapse configurations within half a quantum onto one key.

    The angle wraps at the state's symmetry period so keys are continuous
    across the normalization seam.
    """
    if eps_p <= 0 or eps_a <= 0:
        raise ValueError("quantization steps must be positive")
    period_steps = round(SYMMETRY_PERIOD[config.state] / eps_a)
    qalpha = round(config.alpha / eps_a) % period_steps if period_steps else 0
    return QuantizedKey(
        round(config.centroid.x / eps_p),
        round(config.centroid.y / eps_p),
        qalpha,
        config.state,
    )


@dataclass(frozen=True)
class Arena:
    lo: Vec2
    hi: Vec2

    def __post_init__(self):
        if self.lo.x >= self.hi.x or self.lo.y >= self.hi.y:
            raise ValueError("arena min must be strictly below arena max")


@dataclass
class ReachabilityReport:
    visited: int  # distinct configurations seen
    distinct_points: int  # reachable points (HD foot centers)
    distinct_poses: int  # distinct footprint poses (= visited, by quotient)
    distinct_positions: int  # distinct footprint centroid positions
    exhausted: bool  # frontier emptied before the budget hit
    expansions: int  # flip budget used

    def to_json(self) -> dict:
        return {
            "visited": self.visited,
            "distinct_points": self.distinct_points,
            "distinct_poses": self.distinct_poses,
            "distinct_positions": self.distinct_positions,
            "exhausted": self.exhausted,
            "expansions": self.expansions,
        }


@dataclass
class ReachabilityTrace:
    """Expansion-ordered configurations with the pivot edge that produced each."""

    records: List[Tuple[Configuration, Optional[EdgeLabel]]] = field(default_factory=list)


def enumerate_reachable(
    geom: RobotGeometry,
    table: TransitionTable,
    start: Configuration,
    mode: LocomotionMode,
    arena: Optional[Arena] = None,
    budget: int = 10_000,
    eps_p: Optional[float] = None,
    eps_a: float = DEFAULT_EPS_ALPHA,
) -> Tuple[ReachabilityReport, ReachabilityTrace]:
    """FIFO closure over allowed revolves from `start`.

    Configurations whose footprint is not fully inside the arena are never
    recorded or expanded. Deterministic: FIFO order, edge order E0,E1,E2 for
    triangles and HU_END,HD_END,LONG_A,LONG_B for SD.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    if start.state not in mode.states:
        raise StartStateNotInMode(
            f"start state {start.state.name} not permitted by {mode.value}"
        )
    if eps_p is None:
        eps_p = 1e-6 * geom.tri_side

    def inside(config: Configuration) -> bool:
        if arena is None:
            return True
        return polygon_in_bounds(world_footprint(geom, config), arena.lo, arena.hi)

    trace = ReachabilityTrace()
    visited: Set[QuantizedKey] = set()
    points: Set[Tuple[int, int]] = set()
    positions: Set[Tuple[int, int]] = set()

    def record(config: Configuration, via: Optional[EdgeLabel]) -> None:
        trace.records.append((config, via))
        positions.add((round(config.centroid.x / eps_p), round(config.centroid.y / eps_p)))
        p = reachable_point(geom, config)
        if p is not None:
            points.add((round(p.x / eps_p), round(p.y / eps_p)))

    frontier = deque()
    expansions = 0
    exhausted = False
    if inside(start):
        visited.add(quantize(start, eps_p, eps_a))
        record(start, None)
        frontier.append(start)

    while frontier:
        if expansions >= budget:
            break
        config = frontier.popleft()
        expansions += 1
        for edge in allowed_moves(table, mode, config.state):
            nxt = revolve(geom, table, config, edge)
            if not inside(nxt):
                continue
            key = quantize(nxt, eps_p, eps_a)
            if key in visited:
                continue
            visited.add(key)
            record(nxt, edge)
            frontier.append(nxt)
    else:
        exhausted = True

    return (
        ReachabilityReport(
            visited=len(visited),
            distinct_points=len(points),
            distinct_poses=len(visited),
            distinct_positions=len(positions),
            exhausted=exhausted,
            expansions=expansions,
        ),
        trace,
    )
