// Wire protocol: strict parsers for every server message type.
// Unknown message types or unexpected fields are rejected loudly (the
// caller routes rejections to the diagnostics panel).

export interface WireConfig {
  x: number;
  y: number;
  alpha: number; // radians
  state: "HU" | "HD" | "SD";
}

export interface SnapshotMsg {
  type: "snapshot";
  config: WireConfig;
  target: { x: number; y: number };
  plan_len: number;
  seq: number;
}

export interface FlipMsg {
  type: "flip";
  from: WireConfig;
  to: WireConfig;
  pivot_edge: string;
  seq: number;
}

export interface PlanStatusMsg {
  type: "plan_status";
  status: "ok" | "no_path" | "budget_exhausted";
  expansions: number;
  seq: number;
}

export interface ErrorMsg {
  type: "error";
  error: string;
  detail: string;
  seq: number;
}

export type ServerMsg = SnapshotMsg | FlipMsg | PlanStatusMsg | ErrorMsg;

export class ProtocolError extends Error {}

function isRecord(v: unknown): v is Record<string, unknown> {
  return typeof v === "object" && v !== null && !Array.isArray(v);
}

function exactKeys(obj: Record<string, unknown>, keys: string[], where: string) {
  for (const k of keys) {
    if (!(k in obj)) throw new ProtocolError(`${where}: missing field "${k}"`);
  }
  for (const k of Object.keys(obj)) {
    if (!keys.includes(k)) throw new ProtocolError(`${where}: unknown field "${k}"`);
  }
}

function num(v: unknown, where: string): number {
  if (typeof v !== "number" || !Number.isFinite(v)) {
    throw new ProtocolError(`${where}: expected a finite number`);
  }
  return v;
}

function int(v: unknown, where: string): number {
  const n = num(v, where);
  if (!Number.isInteger(n)) throw new ProtocolError(`${where}: expected an integer`);
  return n;
}

export function parseConfig(v: unknown, where: string): WireConfig {
  if (!isRecord(v)) throw new ProtocolError(`${where}: expected an object`);
  exactKeys(v, ["x", "y", "alpha", "state"], where);
  const state = v.state;
  if (state !== "HU" && state !== "HD" && state !== "SD") {
    throw new ProtocolError(`${where}.state: expected HU/HD/SD`);
  }
  return {
    x: num(v.x, `${where}.x`),
    y: num(v.y, `${where}.y`),
    alpha: num(v.alpha, `${where}.alpha`),
    state,
  };
}

export function parseServerMsg(raw: unknown): ServerMsg {
  if (!isRecord(raw)) throw new ProtocolError("message: expected an object");
  switch (raw.type) {
    case "snapshot": {
      exactKeys(raw, ["type", "config", "target", "plan_len", "seq"], "snapshot");
      const target = raw.target;
      if (!isRecord(target)) throw new ProtocolError("snapshot.target: expected object");
      exactKeys(target, ["x", "y"], "snapshot.target");
      return {
        type: "snapshot",
        config: parseConfig(raw.config, "snapshot.config"),
        target: { x: num(target.x, "snapshot.target.x"), y: num(target.y, "snapshot.target.y") },
        plan_len: int(raw.plan_len, "snapshot.plan_len"),
        seq: int(raw.seq, "snapshot.seq"),
      };
    }
    case "flip": {
      exactKeys(raw, ["type", "from", "to", "pivot_edge", "seq"], "flip");
      if (typeof raw.pivot_edge !== "string") {
        throw new ProtocolError("flip.pivot_edge: expected a string");
      }
      return {
        type: "flip",
        from: parseConfig(raw.from, "flip.from"),
        to: parseConfig(raw.to, "flip.to"),
        pivot_edge: raw.pivot_edge,
        seq: int(raw.seq, "flip.seq"),
      };
    }
    case "plan_status": {
      exactKeys(raw, ["type", "status", "expansions", "seq"], "plan_status");
      const status = raw.status;
      if (status !== "ok" && status !== "no_path" && status !== "budget_exhausted") {
        throw new ProtocolError(`plan_status.status: unexpected "${String(status)}"`);
      }
      return {
        type: "plan_status",
        status,
        expansions: int(raw.expansions, "plan_status.expansions"),
        seq: int(raw.seq, "plan_status.seq"),
      };
    }
    case "error": {
      exactKeys(raw, ["type", "error", "detail", "seq"], "error");
      return {
        type: "error",
        error: String(raw.error),
        detail: String(raw.detail),
        seq: int(raw.seq, "error.seq"),
      };
    }
    default:
      throw new ProtocolError(`unknown message type "${String(raw.type)}"`);
  }
}

export type ClientMsg =
  | { type: "set_target"; x: number; y: number }
  | { type: "pause" }
  | { type: "resume" }
  | { type: "take_control" };
