/** Canvas drawing for the operator view.
 *
 * The tri-state map renders once per revision into an offscreen canvas at
 * cell resolution (Fig-2 palette: free light gray, unexplored dark green,
 * occupied black) and is blitted scaled; vector layers draw on top.
 */

import type { FrameStore } from "./frames.js";
import { CELL_FREE, CELL_OCCUPIED, type PoseMsg } from "./protocol.js";
import { worldToCanvas, type ViewState } from "./view.js";

const COLOR_FREE: [number, number, number] = [205, 205, 205];
const COLOR_UNKNOWN: [number, number, number] = [47, 79, 58];
const COLOR_OCCUPIED: [number, number, number] = [17, 17, 17];
const COLOR_WALLS = "#8b5a2b";
const COLOR_PLAN = "#111111";
const COLOR_GOAL = "#d22f2f";
const COLOR_TWIN = "#2b6fd2";
const COLOR_TRUTH = "#777777";

export class MapLayer {
  private canvas: HTMLCanvasElement | null = null;
  private rev = -1;

  /** Rasterize the map when its revision changed; cheap otherwise. */
  update(store: FrameStore, rev: number): void {
    if (!store.map || rev === this.rev) return;
    const { msg, cells } = store.map;
    const canvas = document.createElement("canvas");
    canvas.width = msg.width;
    canvas.height = msg.height;
    const ctx = canvas.getContext("2d")!;
    const img = ctx.createImageData(msg.width, msg.height);
    for (let r = 0; r < msg.height; r++) {
      // Map row 0 is the bottom; image row 0 is the top.
      const imgRow = msg.height - 1 - r;
      for (let c = 0; c < msg.width; c++) {
        const v = cells[r * msg.width + c];
        const color = v === CELL_OCCUPIED ? COLOR_OCCUPIED : v === CELL_FREE ? COLOR_FREE : COLOR_UNKNOWN;
        const o = (imgRow * msg.width + c) * 4;
        img.data[o] = color[0];
        img.data[o + 1] = color[1];
        img.data[o + 2] = color[2];
        img.data[o + 3] = 255;
      }
    }
    ctx.putImageData(img, 0, 0);
    this.canvas = canvas;
    this.rev = rev;
  }

  draw(ctx: CanvasRenderingContext2D, store: FrameStore, view: ViewState): void {
    if (!this.canvas || !store.map) return;
    const ext = store.mapExtent()!;
    const [ox, oy, w, h] = ext;
    const [px, py] = worldToCanvas(ox, oy + h, view.camera, ctx.canvas.width, ctx.canvas.height);
    ctx.imageSmoothingEnabled = false;
    ctx.drawImage(this.canvas, px, py, w * view.camera.scale, h * view.camera.scale);
  }
}

function toCanvas(ctx: CanvasRenderingContext2D, view: ViewState, x: number, y: number): [number, number] {
  return worldToCanvas(x, y, view.camera, ctx.canvas.width, ctx.canvas.height);
}

export function drawWalls(ctx: CanvasRenderingContext2D, store: FrameStore, view: ViewState): void {
  ctx.strokeStyle = COLOR_WALLS;
  ctx.lineWidth = 3;
  ctx.lineCap = "round";
  ctx.beginPath();
  for (const [x1, y1, x2, y2] of store.walls) {
    const [ax, ay] = toCanvas(ctx, view, x1, y1);
    const [bx, by] = toCanvas(ctx, view, x2, y2);
    ctx.moveTo(ax, ay);
    ctx.lineTo(bx, by);
  }
  ctx.stroke();
}

export function drawPlan(ctx: CanvasRenderingContext2D, store: FrameStore, view: ViewState): void {
  if (!store.plan || store.plan.waypoints.length === 0) return;
  ctx.strokeStyle = COLOR_PLAN;
  ctx.lineWidth = 2;
  ctx.setLineDash([6, 4]);
  ctx.beginPath();
  store.plan.waypoints.forEach((wp, i) => {
    const [px, py] = toCanvas(ctx, view, wp.x, wp.y);
    if (i === 0) ctx.moveTo(px, py);
    else ctx.lineTo(px, py);
  });
  ctx.stroke();
  ctx.setLineDash([]);
}

export function drawGoal(ctx: CanvasRenderingContext2D, goal: PoseMsg, view: ViewState): void {
  const [px, py] = toCanvas(ctx, view, goal.x, goal.y);
  const len = 18;
  const dx = Math.cos(goal.theta);
  const dy = Math.sin(goal.theta);
  ctx.strokeStyle = COLOR_GOAL;
  ctx.fillStyle = COLOR_GOAL;
  ctx.lineWidth = 3;
  ctx.beginPath();
  ctx.moveTo(px - dx * len, py + dy * len);
  ctx.lineTo(px + dx * len, py - dy * len);
  ctx.stroke();
  // arrow head
  const hx = px + dx * len;
  const hy = py - dy * len;
  ctx.beginPath();
  ctx.moveTo(hx, hy);
  ctx.lineTo(hx - dx * 8 - dy * 5, hy + dy * 8 - dx * 5);
  ctx.lineTo(hx - dx * 8 + dy * 5, hy + dy * 8 + dx * 5);
  ctx.closePath();
  ctx.fill();
}

export function drawRobotMarker(
  ctx: CanvasRenderingContext2D,
  pose: PoseMsg,
  view: ViewState,
  opts: { ghost?: boolean; color?: string } = {},
): void {
  const color = opts.color ?? COLOR_TWIN;
  const [px, py] = toCanvas(ctx, view, pose.x, pose.y);
  const r = Math.max(0.11 * view.camera.scale, 5);
  ctx.save();
  if (opts.ghost) {
    ctx.globalAlpha = 0.45;
    ctx.setLineDash([4, 3]);
  }
  ctx.fillStyle = color;
  ctx.strokeStyle = color;
  ctx.beginPath();
  ctx.arc(px, py, r, 0, 2 * Math.PI);
  if (opts.ghost) ctx.stroke();
  else ctx.fill();
  // heading tick
  ctx.lineWidth = 2;
  ctx.beginPath();
  ctx.moveTo(px, py);
  ctx.lineTo(px + Math.cos(pose.theta) * r * 1.8, py - Math.sin(pose.theta) * r * 1.8);
  ctx.stroke();
  ctx.restore();
}

export function drawScene(
  ctx: CanvasRenderingContext2D,
  store: FrameStore,
  view: ViewState,
  mapLayer: MapLayer,
  mapRev: number,
): void {
  ctx.fillStyle = "#1b1e23";
  ctx.fillRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  if (view.layers.map) {
    mapLayer.update(store, mapRev);
    mapLayer.draw(ctx, store, view);
  }
  if (view.layers.walls) drawWalls(ctx, store, view);
  if (view.layers.plan) drawPlan(ctx, store, view);
  if (view.layers.goal && store.goal) drawGoal(ctx, store.goal, view);
  if (view.layers.truth && store.truth) drawRobotMarker(ctx, store.truth, view, { ghost: true, color: COLOR_TRUTH });
  if (view.layers.twin && store.twin) {
    drawRobotMarker(ctx, store.twin, view, { ghost: store.twin.source === "predicted" });
  }
}
