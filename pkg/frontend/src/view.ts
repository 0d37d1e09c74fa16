/** Camera transforms between world meters and canvas pixels.
 *
 * World y grows upward, canvas y grows downward; rendering is a pure
 * function of the latest frame plus this view state.
 */

export interface Camera {
  cx: number; // world point at the canvas center, meters
  cy: number;
  scale: number; // pixels per meter
}

export interface Layers {
  map: boolean;
  walls: boolean;
  plan: boolean;
  twin: boolean;
  goal: boolean;
  truth: boolean; // debug ghost, only drawn when frames carry it
}

export const DEFAULT_LAYERS: Layers = {
  map: true,
  walls: true,
  plan: true,
  twin: true,
  goal: true,
  truth: false,
};

export interface ViewState {
  camera: Camera;
  layers: Layers;
}

export function worldToCanvas(
  x: number,
  y: number,
  cam: Camera,
  width: number,
  height: number,
): [number, number] {
  return [width / 2 + (x - cam.cx) * cam.scale, height / 2 - (y - cam.cy) * cam.scale];
}

export function canvasToWorld(
  px: number,
  py: number,
  cam: Camera,
  width: number,
  height: number,
): [number, number] {
  return [cam.cx + (px - width / 2) / cam.scale, cam.cy - (py - height / 2) / cam.scale];
}

/** Camera that shows the whole map extent with a pixel margin. */
export function fitToExtent(
  originX: number,
  originY: number,
  worldW: number,
  worldH: number,
  canvasW: number,
  canvasH: number,
  margin = 20,
): Camera {
  const usableW = Math.max(canvasW - 2 * margin, 1);
  const usableH = Math.max(canvasH - 2 * margin, 1);
  const scale = Math.min(usableW / worldW, usableH / worldH);
  return { cx: originX + worldW / 2, cy: originY + worldH / 2, scale };
}

/** Zoom by a factor keeping the world point under the cursor fixed. */
export function zoomAt(
  cam: Camera,
  px: number,
  py: number,
  factor: number,
  width: number,
  height: number,
): Camera {
  const [wx, wy] = canvasToWorld(px, py, cam, width, height);
  const scale = Math.min(Math.max(cam.scale * factor, 5), 2000);
  // Solve for the new center so (wx, wy) stays at (px, py).
  return {
    scale,
    cx: wx - (px - width / 2) / scale,
    cy: wy + (py - height / 2) / scale,
  };
}

export function panBy(cam: Camera, dxPx: number, dyPx: number): Camera {
  return { ...cam, cx: cam.cx - dxPx / cam.scale, cy: cam.cy + dyPx / cam.scale };
}
