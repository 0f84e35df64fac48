// Client-side session state: applies validated server messages, queues flip
// animations, and answers "what should be drawn right now". Rendered state
// never runs ahead of the highest seq received; the locally predicted target
// ghost is the one exception and is flagged as such.

import { flipPose, Point, worldFootprint, Geometry } from "./footprint.js";
import {
  FlipMsg,
  parseServerMsg,
  ProtocolError,
  ServerMsg,
  SnapshotMsg,
  WireConfig,
} from "./protocol.js";

export interface SceneInfo {
  triSide: number;
  rectWidth: number;
  tolerance: number;
  arena: { min: Point; max: Point } | null;
  obstacles: Point[][];
  tickMs: number;
}

interface PendingFlip {
  msg: FlipMsg;
  startedAt: number | null; // wall-clock ms when the animation began
}

export class ViewState {
  readonly scene: SceneInfo;
  config: WireConfig | null = null;
  target: { x: number; y: number } | null = null;
  targetGhost: { x: number; y: number } | null = null; // local prediction
  planLen = 0;
  lastSeq = -1;
  connected = false;
  diagnostics: string[] = [];
  breadcrumbs: Point[] = [];
  planStatus: string | null = null;
  private pending: PendingFlip[] = [];

  constructor(scene: SceneInfo) {
    this.scene = scene;
  }

  private geom(): Geometry {
    return { triSide: this.scene.triSide, rectWidth: this.scene.rectWidth };
  }

  logDiagnostic(text: string) {
    this.diagnostics.push(text);
    if (this.diagnostics.length > 200) this.diagnostics.shift();
  }

  // Feed one raw wire object; invalid input lands in diagnostics, valid
  // messages update the model. Returns the parsed message, or null.
  ingest(raw: unknown): ServerMsg | null {
    let msg: ServerMsg;
    try {
      msg = parseServerMsg(raw);
    } catch (err) {
      if (err instanceof ProtocolError) {
        this.logDiagnostic(`rejected message: ${err.message}`);
        return null;
      }
      throw err;
    }
    if (msg.seq <= this.lastSeq) {
      this.logDiagnostic(`stale seq ${msg.seq} (already at ${this.lastSeq})`);
      return null;
    }
    this.lastSeq = msg.seq;
    switch (msg.type) {
      case "snapshot":
        this.applySnapshot(msg);
        break;
      case "flip":
        this.pending.push({ msg, startedAt: null });
        this.planLen = Math.max(0, this.planLen - 1);
        break;
      case "plan_status":
        this.planStatus = `${msg.status} (${msg.expansions} expansions)`;
        if (msg.status !== "ok") {
          this.logDiagnostic(`plan failed: ${msg.status}`);
        }
        break;
      case "error":
        this.logDiagnostic(`server error ${msg.error}: ${msg.detail}`);
        break;
    }
    return msg;
  }

  private applySnapshot(msg: SnapshotMsg) {
    // a snapshot during an animation re-anchors the authoritative pose but
    // does not cancel the animation of flips that precede it
    if (this.pending.length === 0) {
      this.config = msg.config;
    }
    this.target = { x: msg.target.x, y: msg.target.y };
    this.targetGhost = null;
    this.planLen = msg.plan_len;
    if (this.config) {
      this.pushBreadcrumb([this.config.x, this.config.y]);
    }
  }

  private pushBreadcrumb(p: Point) {
    const last = this.breadcrumbs[this.breadcrumbs.length - 1];
    if (!last || Math.hypot(last[0] - p[0], last[1] - p[1]) > 1e-9) {
      this.breadcrumbs.push(p);
      if (this.breadcrumbs.length > 500) this.breadcrumbs.shift();
    }
  }

  // Advance animations to `now` (ms) and return the footprint to draw.
  // One flip animates at a time, over one tick period.
  currentFootprint(now: number): Point[] | null {
    while (this.pending.length > 0) {
      const head = this.pending[0];
      if (head.startedAt === null) head.startedAt = now;
      const progress = (now - head.startedAt) / this.scene.tickMs;
      if (progress >= 1) {
        this.config = head.msg.to;
        this.pushBreadcrumb([this.config.x, this.config.y]);
        this.pending.shift();
        continue;
      }
      return flipPose(this.geom(), head.msg.from, head.msg.to, progress);
    }
    return this.config ? worldFootprint(this.geom(), this.config) : null;
  }

  animating(): boolean {
    return this.pending.length > 0;
  }
}
