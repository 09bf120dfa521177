/** World-to-screen mapping. World: meters, +y up, centered floor. Screen:
 * pixels, +y down. The scale is uniform (letterboxed) so angles survive the
 * transform; the signpost arrow depends on that.
 */

import type { Vec2 } from "./types.js";

export interface Viewport {
  scale: number; // px per meter, same on both axes
  offsetX: number;
  offsetY: number;
  worldY1: number; // top edge of the floor in world coords (for the y flip)
}

export function fitViewport(
  floor: [number, number, number, number],
  canvasW: number,
  canvasH: number,
  margin = 24,
): Viewport {
  const [x0, y0, w, h] = floor;
  const scale = Math.min((canvasW - 2 * margin) / w, (canvasH - 2 * margin) / h);
  const offsetX = (canvasW - w * scale) / 2 - x0 * scale;
  const offsetY = (canvasH - h * scale) / 2;
  return { scale, offsetX, offsetY, worldY1: y0 + h };
}

export function worldToScreen(vp: Viewport, p: Vec2): Vec2 {
  return [p[0] * vp.scale + vp.offsetX, (vp.worldY1 - p[1]) * vp.scale + vp.offsetY];
}

/** Arrow segment for a bearing (clockwise from world +y), in screen pixels. */
export function arrowEndpoints(
  vp: Viewport,
  visitor: Vec2,
  bearing: number,
  lengthMeters: number,
): { base: Vec2; tip: Vec2 } {
  const dir: Vec2 = [Math.sin(bearing), Math.cos(bearing)];
  const tipWorld: Vec2 = [visitor[0] + dir[0] * lengthMeters, visitor[1] + dir[1] * lengthMeters];
  return { base: worldToScreen(vp, visitor), tip: worldToScreen(vp, tipWorld) };
}

/** Angle of a screen-space segment, clockwise from screen-up, (-pi, pi]. */
export function screenAngleOf(base: Vec2, tip: Vec2): number {
  const dx = tip[0] - base[0];
  const dy = tip[1] - base[1];
  let angle = Math.atan2(dx, -dy);
  if (angle <= -Math.PI) angle = Math.PI;
  return angle;
}

export function degrees(radians: number): number {
  return (radians * 180) / Math.PI;
}

/** Smallest absolute difference between two angles, in radians. */
export function angleGap(a: number, b: number): number {
  let d = (a - b) % (2 * Math.PI);
  if (d > Math.PI) d -= 2 * Math.PI;
  if (d < -Math.PI) d += 2 * Math.PI;
  return Math.abs(d);
}
