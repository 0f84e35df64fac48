// Footprint geometry mirrored from the server: canonical triangle (HU/HD,
// circumradius s/sqrt(3)) and rectangle (SD, half-extents w/2 x s/2), placed
// by rotate-then-translate. Must agree with server footprints to well below
// the 1e-6 conformance tolerance.

import type { WireConfig } from "./protocol.js";

export interface Geometry {
  triSide: number;
  rectWidth: number;
}

export type Point = [number, number];

export function canonicalFootprint(geom: Geometry, state: WireConfig["state"]): Point[] {
  const s = geom.triSide;
  if (state === "SD") {
    const hw = geom.rectWidth / 2;
    const hs = s / 2;
    return [
      [hw, -hs],
      [hw, hs],
      [-hw, hs],
      [-hw, -hs],
    ];
  }
  const r = s / Math.sqrt(3);
  return [0, 1, 2].map((k) => {
    const a = (k * 2 * Math.PI) / 3;
    return [r * Math.cos(a), r * Math.sin(a)] as Point;
  });
}

export function worldFootprint(geom: Geometry, config: WireConfig): Point[] {
  const c = Math.cos(config.alpha);
  const s = Math.sin(config.alpha);
  return canonicalFootprint(geom, config.state).map(([x, y]) => [
    c * x - s * y + config.x,
    s * x + c * y + config.y,
  ]);
}

// Shared segment of the two footprints of a flip: the edge whose endpoints
// appear (within tolerance) in both vertex lists.
export function sharedPivot(a: Point[], b: Point[], tol = 1e-6): [Point, Point] | null {
  const near = (p: Point, q: Point) => Math.hypot(p[0] - q[0], p[1] - q[1]) < tol;
  const shared = a.filter((p) => b.some((q) => near(p, q)));
  if (shared.length < 2) return null;
  return [shared[0], shared[1]];
}

// Fold-over presentation of a flip: the old footprint squashes onto the
// pivot line, then the new footprint grows out of it. Exact endpoints: at
// progress 0 the old footprint, at progress >= 1 the new one.
export function flipPose(
  geom: Geometry,
  from: WireConfig,
  to: WireConfig,
  progress: number,
): Point[] {
  const fromFp = worldFootprint(geom, from);
  const toFp = worldFootprint(geom, to);
  if (progress <= 0) return fromFp;
  if (progress >= 1) return toFp;
  const pivot = sharedPivot(fromFp, toFp);
  if (pivot === null) {
    return progress < 0.5 ? fromFp : toFp; // teleport (reset); no fold axis
  }
  const [p0, p1] = pivot;
  const dx = p1[0] - p0[0];
  const dy = p1[1] - p0[1];
  const len2 = dx * dx + dy * dy;
  const squash = (pts: Point[], factor: number): Point[] =>
    pts.map(([x, y]) => {
      const t = ((x - p0[0]) * dx + (y - p0[1]) * dy) / len2;
      const fx = p0[0] + t * dx;
      const fy = p0[1] + t * dy;
      return [fx + (x - fx) * factor, fy + (y - fy) * factor];
    });
  if (progress < 0.5) return squash(fromFp, 1 - 2 * progress);
  return squash(toFp, 2 * progress - 1);
}
