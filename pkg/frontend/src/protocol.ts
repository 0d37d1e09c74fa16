/** Gateway message schemas (see PROTOCOL.md at the repo root). */

export interface PoseMsg {
  x: number;
  y: number;
  theta: number;
}

export interface TwinMsg extends PoseMsg {
  source: "telemetry" | "predicted";
}

export interface MapMsg {
  stamp: number;
  resolution: number;
  width: number;
  height: number;
  origin: PoseMsg;
  cells: string; // base64 int8, row-major: -1 unknown, 0 free, 100 occupied
}

export interface PlanMsg {
  stamp: number;
  waypoints: PoseMsg[];
}

export interface MetricsMsg {
  mode_switches: number;
  collisions: number;
  teleports: number[];
  time_to_goal: number | null;
}

export interface Frame {
  type: "frame";
  full?: boolean;
  t: number;
  twin: TwinMsg | null;
  connectivity: "good" | "bad";
  mode: "remote" | "autonomous";
  assumed: boolean;
  walls: [number, number, number, number][];
  goal?: PoseMsg;
  revs: { map: number; plan: number };
  map?: MapMsg | null;
  plan?: PlanMsg | null;
  metrics?: MetricsMsg;
  truth?: PoseMsg;
}

export interface ErrorMsg {
  type: "error";
  reason: string;
}

export type ServerMessage = Frame | ErrorMsg;

export type TeleopInput = { type: "teleop"; v: number; w: number };
export type GoalInput = { type: "goal"; x: number; y: number; theta?: number };
export type LinkInput = { type: "link"; action: "outage_on" | "outage_off" };
export type OperatorInput = TeleopInput | GoalInput | LinkInput;

export const CELL_UNKNOWN = -1;
export const CELL_FREE = 0;
export const CELL_OCCUPIED = 100;

/** Decode the base64 int8 cell payload of a map message. */
export function decodeMapCells(msg: MapMsg): Int8Array {
  const raw = atob(msg.cells);
  const expected = msg.width * msg.height;
  if (raw.length !== expected) {
    throw new Error(`map payload holds ${raw.length} cells, expected ${expected}`);
  }
  const cells = new Int8Array(expected);
  for (let i = 0; i < expected; i++) {
    cells[i] = (raw.charCodeAt(i) << 24) >> 24; // reinterpret byte as signed
  }
  return cells;
}

export function parseServerMessage(raw: string): ServerMessage {
  const doc = JSON.parse(raw);
  if (doc.type !== "frame" && doc.type !== "error") {
    throw new Error(`unexpected message type ${doc.type}`);
  }
  return doc as ServerMessage;
}
