"""Interactive simulation sessions: a client moves the target, the service
replans (A*) and advances the robot one revolve per tick.

SessionCore is the transport-free state machine (everything testable without
a network); the FastAPI layer adds the session registry, the WebSocket fan
out and a read-only snapshot endpoint. Per-session state is mutated under a
single lock, so ticks and client messages are serialized; sessions are fully
independent.

Wire protocol (JSON objects):
  client -> server: set_target{x,y}, pause{}, resume{}, reset{config},
                    set_mode{mode}, take_control{}
  server -> client: snapshot{config,target,plan_len,seq},
                    flip{from,to,pivot_edge,seq},
                    plan_status{status: ok|no_path|budget_exhausted,
                                expansions, seq},
                    error{error, detail, seq}
Configurations on the wire are {x, y, alpha, state} with alpha in radians.
"""

import asyncio
import json
import math
import uuid
from collections import deque
from dataclasses import dataclass
from typing import Deque, List, Optional, Tuple

from tipsim.errors import BudgetExhausted, NoPath, SceneError
from tipsim.geometry import Vec2
from tipsim.planner import Scene, astar_plan, check_move
from tipsim.robot import Configuration, EdgeLabel, StableState, revolve
from tipsim.traceio import RobotConfigDoc, SceneDoc

DEFAULT_TICK_MS = 250
DEFAULT_PLAN_BUDGET = 200_000


def config_to_json(config: Configuration) -> dict:
    return {
        "x": config.centroid.x,
        "y": config.centroid.y,
        "alpha": config.alpha,
        "state": config.state.value,
    }


def config_from_json(obj) -> Configuration:
    if not isinstance(obj, dict):
        raise ValueError("config must be an object")
    for key in ("x", "y", "alpha", "state"):
        if key not in obj:
            raise ValueError(f"config.{key} missing")
    extra = set(obj) - {"x", "y", "alpha", "state"}
    if extra:
        raise ValueError(f"config has unknown fields: {sorted(extra)}")
    x, y, alpha = obj["x"], obj["y"], obj["alpha"]
    for name, v in (("x", x), ("y", y), ("alpha", alpha)):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ValueError(f"config.{name} must be a finite number")
    try:
        state = StableState(obj["state"])
    except ValueError:
        raise ValueError(f"unknown state {obj['state']!r}") from None
    return Configuration(Vec2(float(x), float(y)), state, float(alpha))


class SessionCore:
    """Single-session state machine; every mutation emits wire messages."""

    def __init__(
        self,
        scene_doc: SceneDoc,
        robot_doc: RobotConfigDoc,
        tick_ms: int = DEFAULT_TICK_MS,
        budget: int = DEFAULT_PLAN_BUDGET,
        replan_threshold: Optional[float] = None,
    ):
        self.geom = robot_doc.geometry()
        self.table = robot_doc.table()
        scene = scene_doc.to_scene()
        self.config = scene.start
        self.target = scene.target
        self.tolerance = scene.tolerance
        self.obstacles = scene.obstacles
        self.arena = scene.arena
        self.goal_state = scene.goal_state
        self.mode = scene.mode
        self.tick_ms = tick_ms
        self.budget = budget
        self.replan_threshold = (
            scene.tolerance / 2.0 if replan_threshold is None else replan_threshold
        )
        if not check_move(self.geom, self._scene(), self.config):
            raise SceneError("session start configuration is colliding or outside the arena")
        self.paused = False
        self.seq = 0
        self._plan: Deque[Tuple[EdgeLabel, Configuration]] = deque()
        self._planned_goal: Optional[Vec2] = None
        self._failed_goal: Optional[Vec2] = None  # don't re-plan a lost cause

    # -- helpers ----------------------------------------------------------

    def _scene(self) -> Scene:
        return Scene(
            start=self.config,
            target=self.target,
            tolerance=self.tolerance,
            obstacles=self.obstacles,
            arena=self.arena,
            goal_state=self.goal_state,
            mode=self.mode,
        )

    def _next_seq(self) -> int:
        self.seq += 1
        return self.seq

    def snapshot_message(self) -> dict:
        return {
            "type": "snapshot",
            "config": config_to_json(self.config),
            "target": {"x": self.target.x, "y": self.target.y},
            "plan_len": len(self._plan),
            "seq": self._next_seq(),
        }

    def _error(self, code: str, detail: str) -> dict:
        return {"type": "error", "error": code, "detail": detail, "seq": self._next_seq()}

    def _at_target(self) -> bool:
        if self.goal_state is not None and self.config.state is not self.goal_state:
            return False
        return self.config.centroid.dist(self.target) <= self.tolerance

    # -- client messages ---------------------------------------------------

    def apply_client_message(self, msg) -> List[dict]:
        """Handle one wire message; malformed input yields an error reply."""
        if not isinstance(msg, dict) or not isinstance(msg.get("type"), str):
            return [self._error("invalid_message", "expected {type: string, ...}")]
        mtype = msg["type"]
        handler = getattr(self, f"_on_{mtype}", None)
        if handler is None:
            return [self._error("invalid_message", f"unknown message type {mtype!r}")]
        return handler(msg)

    def _on_set_target(self, msg) -> List[dict]:
        extra = set(msg) - {"type", "x", "y"}
        if extra:
            return [self._error("invalid_message", f"set_target has unknown fields {sorted(extra)}")]
        x, y = msg.get("x"), msg.get("y")
        for name, v in (("x", x), ("y", y)):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                return [self._error("invalid_message", f"set_target.{name} must be a finite number")]
        new_target = Vec2(float(x), float(y))
        if new_target.dist(self.target) > 0.0:
            self.target = new_target
            self._failed_goal = None
            stale = (
                self._planned_goal is None
                or self._planned_goal.dist(new_target) > self.replan_threshold
            )
            if stale:
                self._plan.clear()
                self._planned_goal = None
        return [self.snapshot_message()]

    def _on_pause(self, msg) -> List[dict]:
        self.paused = True
        return [self.snapshot_message()]

    def _on_resume(self, msg) -> List[dict]:
        self.paused = False
        return [self.snapshot_message()]

    def _on_set_mode(self, msg) -> List[dict]:
        from tipsim.reachability import LocomotionMode

        extra = set(msg) - {"type", "mode"}
        if extra:
            return [self._error("invalid_message", f"set_mode has unknown fields {sorted(extra)}")]
        try:
            mode = LocomotionMode(msg.get("mode"))
        except ValueError:
            return [self._error("invalid_message", f"unknown mode {msg.get('mode')!r}")]
        if self.config.state not in mode.states:
            return [self._error("invalid_message", f"current state {self.config.state.value} not in {mode.value}")]
        self.mode = mode
        self._plan.clear()
        self._planned_goal = None
        self._failed_goal = None
        return [self.snapshot_message()]

    def _on_reset(self, msg) -> List[dict]:
        extra = set(msg) - {"type", "config"}
        if extra:
            return [self._error("invalid_message", f"reset has unknown fields {sorted(extra)}")]
        try:
            config = config_from_json(msg.get("config"))
        except ValueError as exc:
            return [self._error("invalid_message", str(exc))]
        if not check_move(self.geom, self._scene(), config):
            return [self._error("invalid_reset", "configuration collides or leaves the arena")]
        self.config = config
        self._plan.clear()
        self._planned_goal = None
        self._failed_goal = None
        return [self.snapshot_message()]

    def _on_take_control(self, msg) -> List[dict]:
        # control ownership lives in the transport layer; echo state
        return [self.snapshot_message()]

    # -- ticking -----------------------------------------------------------

    def tick(self) -> Optional[dict]:
        """Advance one step: execute one planned revolve or replan."""
        if self.paused:
            return None
        if self._plan:
            edge, planned = self._plan.popleft()
            before = self.config
            after = revolve(self.geom, self.table, before, edge)
            if planned.centroid.dist(after.centroid) > 1e-9:
                # plan no longer replays (e.g. reset raced in); drop it
                self._plan.clear()
                self._planned_goal = None
                return self._error("invalid_message", "plan no longer replays; replanning")
            self.config = after
            return {
                "type": "flip",
                "from": config_to_json(before),
                "to": config_to_json(after),
                "pivot_edge": edge.value,
                "seq": self._next_seq(),
            }
        if self._at_target():
            return None
        if self._failed_goal is not None and self._failed_goal.dist(self.target) == 0.0:
            return None  # wait for the target to move before trying again
        status = "ok"
        expansions = 0
        try:
            plan = astar_plan(self.geom, self.table, self._scene(), budget=self.budget)
            self._plan.extend(plan.steps)
            self._planned_goal = self.target
            expansions = plan.expansions
        except NoPath as exc:
            status = "no_path"
            expansions = exc.expansions
            self._failed_goal = self.target
        except BudgetExhausted as exc:
            status = "budget_exhausted"
            expansions = exc.expansions
            self._failed_goal = self.target
        return {
            "type": "plan_status",
            "status": status,
            "expansions": expansions,
            "seq": self._next_seq(),
        }


# ---------------------------------------------------------------------------
# FastAPI transport


def create_app(ui_dir: Optional[str] = None):
    from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
    from fastapi.responses import JSONResponse

    from tipsim.errors import GeometryError, ParseError, SchemaError
    from tipsim.traceio import load_robot_config, load_scene_doc

    app = FastAPI(title="tipsim", version="0.1.0")

    class Runtime:
        def __init__(self, core: SessionCore):
            self.core = core
            self.lock = asyncio.Lock()
            self.clients: List[WebSocket] = []
            self.controller: Optional[WebSocket] = None
            self.task: Optional[asyncio.Task] = None

        async def broadcast(self, msg: dict) -> None:
            payload = json.dumps(msg)
            for ws in list(self.clients):
                try:
                    await ws.send_text(payload)
                except Exception:
                    self.drop(ws)

        def drop(self, ws) -> None:
            if ws in self.clients:
                self.clients.remove(ws)
            if self.controller is ws:
                self.controller = self.clients[0] if self.clients else None

    sessions: dict = {}

    async def _tick_loop(rt: Runtime) -> None:
        while True:
            await asyncio.sleep(rt.core.tick_ms / 1000.0)
            async with rt.lock:
                msg = rt.core.tick()
            if msg is not None:
                await rt.broadcast(msg)

    @app.post("/sessions")
    async def create_session(body: dict):
        try:
            scene_doc = load_scene_doc(json.dumps(body.get("scene")))
            robot_doc = load_robot_config(json.dumps(body.get("robot", {})))
            tick_ms = int(body.get("tick_ms", DEFAULT_TICK_MS))
            core = SessionCore(scene_doc, robot_doc, tick_ms=tick_ms)
        except (ParseError, SchemaError, GeometryError, SceneError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        session_id = uuid.uuid4().hex[:12]
        rt = Runtime(core)
        rt.task = asyncio.create_task(_tick_loop(rt))
        sessions[session_id] = rt
        return {"session_id": session_id, "tick_ms": core.tick_ms}

    def _get(session_id: str):
        rt = sessions.get(session_id)
        if rt is None:
            raise HTTPException(status_code=404, detail="no such session")
        return rt

    @app.get("/sessions/{session_id}/snapshot")
    async def snapshot(session_id: str):
        rt = _get(session_id)
        async with rt.lock:
            return JSONResponse(rt.core.snapshot_message())

    @app.get("/sessions/{session_id}/scene")
    async def scene(session_id: str):
        rt = _get(session_id)
        async with rt.lock:
            core = rt.core
            return JSONResponse(
                {
                    "obstacles": [
                        [[v.x, v.y] for v in poly.vertices] for poly in core.obstacles
                    ],
                    "arena": (
                        None
                        if core.arena is None
                        else {
                            "min": [core.arena.lo.x, core.arena.lo.y],
                            "max": [core.arena.hi.x, core.arena.hi.y],
                        }
                    ),
                    "tolerance": core.tolerance,
                    "tri_side": core.geom.tri_side,
                    "rect_width": core.geom.rect_width,
                    "tick_ms": core.tick_ms,
                }
            )

    @app.websocket("/sessions/{session_id}/ws")
    async def ws_endpoint(ws: WebSocket, session_id: str):
        rt = sessions.get(session_id)
        if rt is None:
            await ws.close(code=4404)
            return
        await ws.accept()
        rt.clients.append(ws)
        if rt.controller is None:
            rt.controller = ws
        async with rt.lock:
            await ws.send_text(json.dumps(rt.core.snapshot_message()))
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    msg = json.loads(raw)
                except json.JSONDecodeError:
                    msg = None
                if isinstance(msg, dict) and msg.get("type") == "take_control":
                    rt.controller = ws
                elif rt.controller is not ws:
                    async with rt.lock:
                        reply = rt.core._error("not_controller", "another client has control")
                    await ws.send_text(json.dumps(reply))
                    continue
                async with rt.lock:
                    replies = rt.core.apply_client_message(msg)
                for reply in replies:
                    if reply["type"] == "error":
                        await ws.send_text(json.dumps(reply))
                    else:
                        await rt.broadcast(reply)
        except WebSocketDisconnect:
            rt.drop(ws)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
