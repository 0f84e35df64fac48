import math
import random

import pytest

from tipsim.errors import StartStateNotInMode
from tipsim.geometry import Vec2, polygon_in_bounds
from tipsim.reachability import (
    Arena,
    LocomotionMode,
    enumerate_reachable,
    quantize,
)
from tipsim.robot import (
    Configuration,
    RobotGeometry,
    StableState,
    world_footprint,
)


class TestQuantize:
    def test_origin(self):
        c = Configuration(Vec2(0, 0), StableState.HU, 0.0)
        key = quantize(c, 1e-3, 1e-3)
        assert (key.qx, key.qy, key.qalpha, key.state) == (0, 0, 0, StableState.HU)

    def test_rounding_boundary(self):
        eps = 1e-3
        lo = Configuration(Vec2(eps * 0.49, 0), StableState.SD, 0.0)
        hi = Configuration(Vec2(eps * 0.51, 0), StableState.SD, 0.0)
        assert quantize(lo, eps, eps).qx == 0
        assert quantize(hi, eps, eps).qx == 1

    def test_angle_wraparound(self):
        eps = 1e-3
        c = Configuration(Vec2(0, 0), StableState.SD, 2 * math.pi - eps / 4)
        assert quantize(c, eps, eps).qalpha == 0

    def test_triangle_wraparound_at_symmetry_period(self):
        eps = 1e-6
        c = Configuration(Vec2(0, 0), StableState.HU, 2 * math.pi / 3 - eps / 4)
        assert quantize(c, eps, eps).qalpha == 0

    def test_positive_steps_required(self):
        c = Configuration(Vec2(0, 0), StableState.HU, 0.0)
        with pytest.raises(ValueError):
            quantize(c, 0.0, 1e-3)


class TestBistateClosures:
    @pytest.mark.parametrize(
        "state,mode",
        [
            (StableState.HU, LocomotionMode.BISTATE_HU_SD),
            (StableState.HD, LocomotionMode.BISTATE_HD_SD),
            (StableState.SD, LocomotionMode.BISTATE_HU_SD),
            (StableState.SD, LocomotionMode.BISTATE_HD_SD),
        ],
    )
    def test_exactly_four_poses(self, geom, table, state, mode):
        rng = random.Random(hash((state.value, mode.value)) & 0xFFFF)
        for _ in range(5):
            start = Configuration(
                Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)),
                state,
                rng.uniform(0, 2 * math.pi),
            )
            report, trace = enumerate_reachable(geom, table, start, mode, budget=1000)
            assert report.exhausted
            assert report.distinct_poses == 4
            assert len(trace.records) == 4
            # hand oracle: the triangle pose plus one SD per triangle edge
            states = sorted(c.state.value for c, _ in trace.records)
            tri = "HU" if mode is LocomotionMode.BISTATE_HU_SD else "HD"
            assert states == sorted([tri, "SD", "SD", "SD"])

    def test_terminates_for_random_geometries(self, table):
        rng = random.Random(5)
        for _ in range(10):
            g = RobotGeometry.from_sides(rng.uniform(0.3, 2.0), rng.uniform(0.2, 1.5))
            start = Configuration(
                Vec2(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                StableState.HU,
                rng.uniform(0, 2 * math.pi),
            )
            report, _ = enumerate_reachable(
                g, table, start, LocomotionMode.BISTATE_HU_SD, budget=10_000
            )
            assert report.exhausted and report.distinct_poses == 4

    def test_wrong_start_state_raises(self, geom, table):
        hd = Configuration(Vec2(0, 0), StableState.HD, 0.0)
        with pytest.raises(StartStateNotInMode):
            enumerate_reachable(geom, table, hd, LocomotionMode.BISTATE_HU_SD)


class TestTristate:
    def test_growth_with_budget(self, geom, table):
        start = Configuration(Vec2(0, 0), StableState.HU, 0.0)
        report, _ = enumerate_reachable(
            geom, table, start, LocomotionMode.TRISTATE, budget=2000
        )
        assert not report.exhausted
        assert report.distinct_positions > 500

    def test_visited_monotone_in_budget(self, geom, table):
        start = Configuration(Vec2(0, 0), StableState.HU, 0.3)
        prev = 0
        for budget in (10, 50, 200, 800):
            report, _ = enumerate_reachable(
                geom, table, start, LocomotionMode.TRISTATE, budget=budget
            )
            assert report.visited >= prev
            assert report.distinct_points <= report.visited
            prev = report.visited

    def test_determinism(self, geom, table):
        start = Configuration(Vec2(0.2, -0.4), StableState.HU, 1.1)
        r1, t1 = enumerate_reachable(geom, table, start, LocomotionMode.TRISTATE, budget=500)
        r2, t2 = enumerate_reachable(geom, table, start, LocomotionMode.TRISTATE, budget=500)
        assert r1 == r2
        assert t1.records == t2.records

    def test_arena_keeps_footprints_inside(self, geom, table):
        arena = Arena(Vec2(-2, -2), Vec2(2, 2))
        start = Configuration(Vec2(0, 0), StableState.HU, 0.7)
        report, trace = enumerate_reachable(
            geom, table, start, LocomotionMode.TRISTATE, arena=arena, budget=10_000
        )
        assert report.exhausted  # bounded arena closure saturates
        for config, _ in trace.records:
            assert polygon_in_bounds(world_footprint(geom, config), arena.lo, arena.hi)

    def test_bad_budget(self, geom, table):
        start = Configuration(Vec2(0, 0), StableState.HU, 0.0)
        with pytest.raises(ValueError):
            enumerate_reachable(geom, table, start, LocomotionMode.TRISTATE, budget=0)
