// WebSocket wiring: forwards raw server messages into the ViewState and
// client messages out. Reconnection is manual (reload); the status banner
// freezes the last state on disconnect.

import type { ClientMsg } from "./protocol.js";
import type { SceneInfo, ViewState } from "./view.js";

export async function fetchScene(base: string, sessionId: string): Promise<SceneInfo> {
  const resp = await fetch(`${base}/sessions/${sessionId}/scene`);
  if (!resp.ok) throw new Error(`scene fetch failed: ${resp.status}`);
  const body = await resp.json();
  return {
    triSide: body.tri_side,
    rectWidth: body.rect_width,
    tolerance: body.tolerance,
    arena: body.arena
      ? { min: body.arena.min as [number, number], max: body.arena.max as [number, number] }
      : null,
    obstacles: body.obstacles,
    tickMs: body.tick_ms,
  };
}

export class SessionClient {
  private ws: WebSocket | null = null;

  constructor(
    private wsUrl: string,
    private view: ViewState,
  ) {}

  connect() {
    this.ws = new WebSocket(this.wsUrl);
    this.ws.onopen = () => {
      this.view.connected = true;
    };
    this.ws.onclose = () => {
      this.view.connected = false;
    };
    this.ws.onerror = () => {
      this.view.connected = false;
    };
    this.ws.onmessage = (event) => {
      let raw: unknown;
      try {
        raw = JSON.parse(event.data as string);
      } catch {
        this.view.logDiagnostic("server sent non-JSON payload");
        return;
      }
      this.view.ingest(raw);
    };
  }

  send(msg: ClientMsg): boolean {
    if (!this.ws || this.ws.readyState !== WebSocket.OPEN) {
      return false; // dropped while disconnected; banner shows the status
    }
    this.ws.send(JSON.stringify(msg));
    return true;
  }
}
