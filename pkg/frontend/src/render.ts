/** Canvas renderer: a pure function of (state, museum, clock). */

import type { ViewState } from "./state.js";
import type { ArtworkDoc, MuseumDoc, Vec2 } from "./types.js";
import { artworkXY, floorRect } from "./types.js";
import { arrowEndpoints, fitViewport, worldToScreen, type Viewport } from "./transform.js";

export const HIGHLIGHT_COLORS: Record<string, string> = {
  "dark red": "#8b0000",
  red: "#e53935",
  orange: "#fb8c00",
};

const FLOOR = "#f4efe6";
const WALL = "#4a4036";
const ART = "#7a6a52";
const GUIDE = "#2563eb";
const VISITOR = "#16a34a";

export function draw(
  ctx: CanvasRenderingContext2D,
  state: ViewState,
  museum: MuseumDoc,
  width: number,
  height: number,
  now: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const floor = floorRect(museum);
  const vp = fitViewport(floor, width, height);

  drawFloor(ctx, vp, floor);
  for (const poly of museum.obstacles) drawObstacle(ctx, vp, poly);
  for (const art of museum.artworks) drawArtwork(ctx, vp, art, state);

  if (state.guide) drawAgent(ctx, vp, state.guide, GUIDE);
  if (state.visitor) drawAgent(ctx, vp, state.visitor, VISITOR);
  drawAvatarAction(ctx, vp, state, museum);

  if (state.signpost && state.visitor) {
    drawSignpost(ctx, vp, state.visitor, state.signpost.bearing);
  }
  if (state.minimap?.visible) {
    drawMinimap(ctx, state, width);
  }
  if (state.bundle?.highlights?.length) {
    drawHighlightInset(ctx, state, museum, width, height, now);
  }
}

function drawFloor(ctx: CanvasRenderingContext2D, vp: Viewport, floor: [number, number, number, number]): void {
  const [x0, y0, w, h] = floor;
  const tl = worldToScreen(vp, [x0, y0 + h]);
  ctx.fillStyle = FLOOR;
  ctx.fillRect(tl[0], tl[1], w * vp.scale, h * vp.scale);
  ctx.strokeStyle = WALL;
  ctx.lineWidth = 2;
  ctx.strokeRect(tl[0], tl[1], w * vp.scale, h * vp.scale);
}

function drawObstacle(ctx: CanvasRenderingContext2D, vp: Viewport, poly: Vec2[]): void {
  ctx.beginPath();
  poly.forEach((p, i) => {
    const s = worldToScreen(vp, p);
    if (i === 0) ctx.moveTo(s[0], s[1]);
    else ctx.lineTo(s[0], s[1]);
  });
  ctx.closePath();
  ctx.fillStyle = WALL;
  ctx.fill();
}

function drawArtwork(ctx: CanvasRenderingContext2D, vp: Viewport, art: ArtworkDoc, state: ViewState): void {
  const [sx, sy] = worldToScreen(vp, artworkXY(art));
  const r = Math.max(3, vp.scale * 0.4);
  const featured =
    state.bundle?.virtual_screen?.includes(art.id) ||
    state.bundle?.avatar.target === art.id;
  ctx.fillStyle = featured ? "#b45309" : ART;
  ctx.fillRect(sx - r / 2, sy - r / 2, r, r);
  // facing tick so the hang direction reads at a glance
  ctx.strokeStyle = ART;
  ctx.beginPath();
  ctx.moveTo(sx, sy);
  ctx.lineTo(sx + art.facing[0] * r, sy - art.facing[1] * r);
  ctx.stroke();
}

function drawAgent(ctx: CanvasRenderingContext2D, vp: Viewport, pos: Vec2, color: string): void {
  const [sx, sy] = worldToScreen(vp, pos);
  ctx.beginPath();
  ctx.arc(sx, sy, 6, 0, 2 * Math.PI);
  ctx.fillStyle = color;
  ctx.fill();
  ctx.strokeStyle = "#ffffff";
  ctx.lineWidth = 1.5;
  ctx.stroke();
}

function drawAvatarAction(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  state: ViewState,
  museum: MuseumDoc,
): void {
  const avatar = state.bundle?.avatar;
  if (!avatar || !state.guide) return;
  if (avatar.pose === "point" && avatar.target) {
    const art = museum.artworks.find((a) => a.id === avatar.target);
    if (!art) return;
    const from = worldToScreen(vp, state.guide);
    const to = worldToScreen(vp, artworkXY(art));
    ctx.setLineDash([6, 4]);
    ctx.strokeStyle = GUIDE;
    ctx.beginPath();
    ctx.moveTo(from[0], from[1]);
    ctx.lineTo(to[0], to[1]);
    ctx.stroke();
    ctx.setLineDash([]);
  } else if (avatar.pose === "speak") {
    const [sx, sy] = worldToScreen(vp, state.guide);
    ctx.font = "14px sans-serif";
    ctx.fillText("\u{1F4AC}", sx + 8, sy - 8);
  }
}

function drawSignpost(ctx: CanvasRenderingContext2D, vp: Viewport, visitor: Vec2, bearing: number): void {
  const { base, tip } = arrowEndpoints(vp, visitor, bearing, 2.5);
  ctx.strokeStyle = "#dc2626";
  ctx.fillStyle = "#dc2626";
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(base[0], base[1]);
  ctx.lineTo(tip[0], tip[1]);
  ctx.stroke();
  // arrowhead
  const angle = Math.atan2(tip[1] - base[1], tip[0] - base[0]);
  ctx.beginPath();
  ctx.moveTo(tip[0], tip[1]);
  ctx.lineTo(tip[0] - 10 * Math.cos(angle - 0.4), tip[1] - 10 * Math.sin(angle - 0.4));
  ctx.lineTo(tip[0] - 10 * Math.cos(angle + 0.4), tip[1] - 10 * Math.sin(angle + 0.4));
  ctx.closePath();
  ctx.fill();
}

const MINIMAP_W = 160;

function drawMinimap(ctx: CanvasRenderingContext2D, state: ViewState, width: number): void {
  const mm = state.minimap!;
  const h = MINIMAP_W * 0.9;
  const x0 = width - MINIMAP_W - 12;
  const y0 = 12;
  ctx.fillStyle = "rgba(255,255,255,0.85)";
  ctx.fillRect(x0, y0, MINIMAP_W, h);
  ctx.strokeStyle = WALL;
  ctx.strokeRect(x0, y0, MINIMAP_W, h);
  // marker space is normalized with +v up; flip for the screen
  ctx.strokeStyle = VISITOR;
  ctx.beginPath();
  mm.trail.forEach((p, i) => {
    const sx = x0 + p[0] * MINIMAP_W;
    const sy = y0 + (1 - p[1]) * h;
    if (i === 0) ctx.moveTo(sx, sy);
    else ctx.lineTo(sx, sy);
  });
  ctx.stroke();
  ctx.fillStyle = "#dc2626";
  ctx.beginPath();
  ctx.arc(x0 + mm.marker[0] * MINIMAP_W, y0 + (1 - mm.marker[1]) * h, 4, 0, 2 * Math.PI);
  ctx.fill();
}

/** Timed region outlines over a blown-up artwork face (combination C3). */
function drawHighlightInset(
  ctx: CanvasRenderingContext2D,
  state: ViewState,
  museum: MuseumDoc,
  width: number,
  height: number,
  now: number,
): void {
  const highlights = state.bundle!.highlights!;
  const art = museum.artworks.find((a) => a.id === highlights[0].artwork);
  const insetW = Math.min(300, width * 0.35);
  const insetH = insetW * 0.75;
  const x0 = 12;
  const y0 = height - insetH - 12;
  ctx.fillStyle = "#ddd2bd";
  ctx.fillRect(x0, y0, insetW, insetH);
  ctx.strokeStyle = WALL;
  ctx.strokeRect(x0, y0, insetW, insetH);
  ctx.fillStyle = WALL;
  ctx.font = "12px sans-serif";
  ctx.fillText(art ? art.name : highlights[0].artwork, x0 + 6, y0 + 16);

  const elapsed = (now - state.bundleAt) / 1000;
  for (const h of highlights) {
    if (elapsed < h.reveal_at) continue;
    const [rx, ry, rw, rh] = h.rect;
    ctx.strokeStyle = HIGHLIGHT_COLORS[h.color] ?? h.color;
    ctx.lineWidth = 3;
    ctx.strokeRect(x0 + rx * insetW, y0 + ry * insetH, rw * insetW, rh * insetH);
  }
}
