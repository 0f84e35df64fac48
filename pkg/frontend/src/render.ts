// Canvas drawing. Pure presentation: reads the ViewState, owns no state
// beyond the camera mapping.

import type { Point } from "./footprint.js";
import type { ViewState } from "./view.js";

const STATE_COLORS: Record<string, string> = {
  HU: "#2a7de1",
  HD: "#d94f2b",
  SD: "#3aa655",
};

export interface Camera {
  scale: number; // px per meter
  cx: number; // world point at the canvas center
  cy: number;
}

export function fitCamera(view: ViewState, width: number, height: number): Camera {
  const arena = view.scene.arena;
  if (arena) {
    const spanX = arena.max[0] - arena.min[0];
    const spanY = arena.max[1] - arena.min[1];
    return {
      scale: 0.92 * Math.min(width / spanX, height / spanY),
      cx: (arena.min[0] + arena.max[0]) / 2,
      cy: (arena.min[1] + arena.max[1]) / 2,
    };
  }
  return { scale: width / 12, cx: view.config?.x ?? 0, cy: view.config?.y ?? 0 };
}

function toPx(cam: Camera, width: number, height: number, p: Point): Point {
  return [
    width / 2 + (p[0] - cam.cx) * cam.scale,
    height / 2 - (p[1] - cam.cy) * cam.scale, // y up -> y down
  ];
}

function tracePoly(
  ctx: CanvasRenderingContext2D,
  cam: Camera,
  w: number,
  h: number,
  pts: Point[],
) {
  ctx.beginPath();
  pts.forEach((p, i) => {
    const [x, y] = toPx(cam, w, h, p);
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.closePath();
}

export function renderFrame(
  ctx: CanvasRenderingContext2D,
  view: ViewState,
  now: number,
) {
  const w = ctx.canvas.width;
  const h = ctx.canvas.height;
  const cam = fitCamera(view, w, h);
  ctx.fillStyle = "#fafafa";
  ctx.fillRect(0, 0, w, h);

  if (view.scene.arena) {
    const [x0, y0] = toPx(cam, w, h, view.scene.arena.min);
    const [x1, y1] = toPx(cam, w, h, view.scene.arena.max);
    ctx.strokeStyle = "#888";
    ctx.lineWidth = 1.5;
    ctx.strokeRect(Math.min(x0, x1), Math.min(y0, y1), Math.abs(x1 - x0), Math.abs(y1 - y0));
  }

  ctx.fillStyle = "#222";
  for (const ring of view.scene.obstacles) {
    tracePoly(ctx, cam, w, h, ring);
    ctx.fill();
  }

  if (view.breadcrumbs.length > 1) {
    ctx.strokeStyle = "#bbb";
    ctx.lineWidth = 1;
    ctx.beginPath();
    view.breadcrumbs.forEach((p, i) => {
      const [x, y] = toPx(cam, w, h, p);
      if (i === 0) ctx.moveTo(x, y);
      else ctx.lineTo(x, y);
    });
    ctx.stroke();
  }

  // authoritative target, then the locally predicted ghost on top
  if (view.target) {
    const [x, y] = toPx(cam, w, h, [view.target.x, view.target.y]);
    ctx.fillStyle = "#f5c518";
    ctx.strokeStyle = "#a8860b";
    ctx.beginPath();
    ctx.arc(x, y, Math.max(view.scene.tolerance * cam.scale, 4), 0, 2 * Math.PI);
    ctx.fill();
    ctx.stroke();
  }
  if (view.targetGhost) {
    const [x, y] = toPx(cam, w, h, [view.targetGhost.x, view.targetGhost.y]);
    ctx.strokeStyle = "#a8860b";
    ctx.setLineDash([4, 3]);
    ctx.beginPath();
    ctx.arc(x, y, Math.max(view.scene.tolerance * cam.scale, 4), 0, 2 * Math.PI);
    ctx.stroke();
    ctx.setLineDash([]);
  }

  const footprint = view.currentFootprint(now);
  if (footprint) {
    const state = view.config?.state ?? "HU";
    tracePoly(ctx, cam, w, h, footprint);
    ctx.strokeStyle = STATE_COLORS[state];
    ctx.lineWidth = 2.5;
    ctx.stroke();
  }

  ctx.fillStyle = view.connected ? "#3aa655" : "#d94f2b";
  ctx.font = "13px sans-serif";
  ctx.fillText(view.connected ? "connected" : "disconnected", 10, 18);
  if (view.planStatus) ctx.fillText(`plan: ${view.planStatus}`, 10, 36);
}
