/** Accumulates server frames into the current console state.
 *
 * Delta frames omit the map/plan unless they changed, so the store keeps
 * the last seen ones. Frames are coalesced by the caller (render latest
 * only); staleness (> 1 s without any frame) drives the lost-link banner.
 */

import { decodeMapCells, type Frame, type MapMsg, type MetricsMsg, type PlanMsg, type PoseMsg, type TwinMsg } from "./protocol.js";

export const STALE_AFTER = 1.0; // s without a frame -> server link lost

export interface DecodedMap {
  msg: MapMsg;
  cells: Int8Array;
}

export class FrameStore {
  t = 0;
  twin: TwinMsg | null = null;
  connectivity: "good" | "bad" = "good";
  mode: "remote" | "autonomous" = "remote";
  assumed = false;
  walls: [number, number, number, number][] = [];
  goal: PoseMsg | null = null;
  map: DecodedMap | null = null;
  plan: PlanMsg | null = null;
  metrics: MetricsMsg | null = null;
  truth: PoseMsg | null = null;
  framesSeen = 0;
  private lastFrameAt = -Infinity;

  constructor(private clock: () => number = () => performance.now() / 1000) {}

  apply(frame: Frame): void {
    this.framesSeen += 1;
    this.lastFrameAt = this.clock();
    this.t = frame.t ?? this.t;
    this.twin = frame.twin ?? null;
    this.connectivity = frame.connectivity;
    this.mode = frame.mode;
    this.assumed = frame.assumed;
    this.walls = frame.walls ?? [];
    if (frame.goal) this.goal = frame.goal;
    if (frame.map) this.map = { msg: frame.map, cells: decodeMapCells(frame.map) };
    if (frame.plan) this.plan = frame.plan;
    if (frame.metrics) this.metrics = frame.metrics;
    this.truth = frame.truth ?? null;
  }

  /** True when no frame arrived within the staleness window. */
  isStale(): boolean {
    return this.clock() - this.lastFrameAt > STALE_AFTER;
  }

  hasFrames(): boolean {
    return this.framesSeen > 0;
  }

  /** World extent of the current map: [originX, originY, width_m, height_m]. */
  mapExtent(): [number, number, number, number] | null {
    if (!this.map) return null;
    const m = this.map.msg;
    return [m.origin.x, m.origin.y, m.width * m.resolution, m.height * m.resolution];
  }

  /** True when a world point lies inside the known map extent. */
  inMap(x: number, y: number): boolean {
    const ext = this.mapExtent();
    if (!ext) return false;
    const [ox, oy, w, h] = ext;
    return x >= ox && x < ox + w && y >= oy && y < oy + h;
  }
}
