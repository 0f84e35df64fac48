// Arrow keys steer the target's velocity; set_target messages go out at
// most 20 Hz while keys are held. The ghost target integrates locally so
// the cursor feels immediate even before the server echoes.

import type { ClientMsg } from "./protocol.js";

export const MAX_RATE_HZ = 20;
const MIN_INTERVAL_MS = 1000 / MAX_RATE_HZ;

const KEY_DIRS: Record<string, [number, number]> = {
  ArrowRight: [1, 0],
  ArrowLeft: [-1, 0],
  ArrowUp: [0, 1],
  ArrowDown: [0, -1],
};

export interface Bounds {
  min: [number, number];
  max: [number, number];
}

export class TargetSteering {
  private held = new Set<string>();
  private lastSent = -Infinity;
  private lastUpdate: number | null = null;
  x: number;
  y: number;

  constructor(
    start: { x: number; y: number },
    public speed: number, // m/s
    private bounds: Bounds | null = null,
  ) {
    this.x = start.x;
    this.y = start.y;
  }

  keyDown(key: string) {
    if (key in KEY_DIRS) this.held.add(key);
  }

  keyUp(key: string) {
    this.held.delete(key);
  }

  resync(pos: { x: number; y: number }) {
    if (this.held.size === 0) {
      this.x = pos.x;
      this.y = pos.y;
    }
  }

  // Integrate held keys up to `now` (ms); emit a set_target when the target
  // moved and the rate limit allows.
  update(now: number): ClientMsg | null {
    const dt = this.lastUpdate === null ? 0 : (now - this.lastUpdate) / 1000;
    this.lastUpdate = now;
    let vx = 0;
    let vy = 0;
    for (const key of this.held) {
      const [dx, dy] = KEY_DIRS[key];
      vx += dx;
      vy += dy;
    }
    if ((vx !== 0 || vy !== 0) && dt > 0) {
      this.x += vx * this.speed * dt;
      this.y += vy * this.speed * dt;
      if (this.bounds) {
        this.x = Math.min(Math.max(this.x, this.bounds.min[0]), this.bounds.max[0]);
        this.y = Math.min(Math.max(this.y, this.bounds.min[1]), this.bounds.max[1]);
      }
    }
    if (this.held.size === 0) return null;
    if (now - this.lastSent < MIN_INTERVAL_MS) return null;
    this.lastSent = now;
    return { type: "set_target", x: this.x, y: this.y };
  }
}
