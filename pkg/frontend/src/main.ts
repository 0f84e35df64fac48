// Bootstrap: ?session=<id>&server=<host:port>&speed=<m/s> wires a canvas to
// a running session. Arrow keys steer the target; P pauses, R resumes.

import { fetchScene, SessionClient } from "./client.js";
import { TargetSteering } from "./input.js";
import { renderFrame } from "./render.js";
import { ViewState } from "./view.js";

async function boot() {
  const params = new URLSearchParams(window.location.search);
  const sessionId = params.get("session");
  if (!sessionId) {
    document.body.textContent =
      "missing ?session=<id> (create one by POSTing a scene to /sessions)";
    return;
  }
  const server = params.get("server") ?? window.location.host;
  const speed = Number(params.get("speed") ?? "1.5");
  const httpBase = `${window.location.protocol}//${server}`;
  const wsProto = window.location.protocol === "https:" ? "wss:" : "ws:";

  const scene = await fetchScene(httpBase, sessionId);
  const view = new ViewState(scene);
  const client = new SessionClient(`${wsProto}//${server}/sessions/${sessionId}/ws`, view);
  client.connect();

  const steering = new TargetSteering(
    { x: 0, y: 0 },
    speed,
    scene.arena ? { min: scene.arena.min, max: scene.arena.max } : null,
  );

  window.addEventListener("keydown", (ev) => {
    if (ev.key === "p" || ev.key === "P") {
      client.send({ type: "pause" });
      return;
    }
    if (ev.key === "r" || ev.key === "R") {
      client.send({ type: "resume" });
      return;
    }
    steering.keyDown(ev.key);
  });
  window.addEventListener("keyup", (ev) => steering.keyUp(ev.key));

  const canvas = document.getElementById("arena") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d")!;

  let synced = false;
  const frame = (now: number) => {
    if (!synced && view.target) {
      steering.resync(view.target);
      synced = true;
    }
    const msg = steering.update(now);
    if (msg) {
      if (client.send(msg)) {
        view.targetGhost = { x: steering.x, y: steering.y };
      }
    }
    renderFrame(ctx, view, now);
    requestAnimationFrame(frame);
  };
  requestAnimationFrame(frame);
}

boot().catch((err) => {
  document.body.textContent = String(err);
});
