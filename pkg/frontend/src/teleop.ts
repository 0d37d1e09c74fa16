/** Keyboard teleoperation: held keys map to a velocity command streamed
 * at 20 Hz; releasing everything sends a single stop and goes quiet. */

import type { TeleopInput } from "./protocol.js";

export interface Axes {
  forward: boolean;
  back: boolean;
  left: boolean;
  right: boolean;
}

export interface Limits {
  vMax: number;
  wMax: number;
}

export const DEFAULT_LIMITS: Limits = { vMax: 0.5, wMax: 1.5 };

export function axesToTwist(axes: Axes, limits: Limits = DEFAULT_LIMITS): { v: number; w: number } {
  const v = ((axes.forward ? 1 : 0) - (axes.back ? 1 : 0)) * limits.vMax;
  const w = ((axes.left ? 1 : 0) - (axes.right ? 1 : 0)) * limits.wMax;
  return { v, w };
}

/** Decides, tick by tick, what teleop message (if any) goes out. */
export class TeleopStreamer {
  private zeroSent = true;

  constructor(private limits: Limits = DEFAULT_LIMITS) {}

  tick(axes: Axes): TeleopInput | null {
    const { v, w } = axesToTwist(axes, this.limits);
    if (v !== 0 || w !== 0) {
      this.zeroSent = false;
      return { type: "teleop", v, w };
    }
    if (!this.zeroSent) {
      this.zeroSent = true;
      return { type: "teleop", v: 0, w: 0 };
    }
    return null;
  }
}

const KEY_AXES: Record<string, keyof Axes> = {
  KeyW: "forward",
  ArrowUp: "forward",
  KeyS: "back",
  ArrowDown: "back",
  KeyA: "left",
  ArrowLeft: "left",
  KeyD: "right",
  ArrowRight: "right",
};

/** Tracks which drive keys are held. Returns true when the key is ours. */
export class KeyTracker {
  readonly axes: Axes = { forward: false, back: false, left: false, right: false };

  set(code: string, down: boolean): boolean {
    const axis = KEY_AXES[code];
    if (axis === undefined) return false;
    this.axes[axis] = down;
    return true;
  }

  clear(): void {
    this.axes.forward = this.axes.back = this.axes.left = this.axes.right = false;
  }
}
