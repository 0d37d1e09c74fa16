/** Console bootstrap: one socket, one render loop, keyboard + mouse input. */

import { FrameStore } from "./frames.js";
import { GatewayClient, gatewayUrl } from "./net.js";
import type { Frame } from "./protocol.js";
import { MapLayer, drawScene } from "./render.js";
import { KeyTracker, TeleopStreamer } from "./teleop.js";
import { DEFAULT_LAYERS, fitToExtent, panBy, zoomAt, type ViewState } from "./view.js";

const TELEOP_PERIOD_MS = 50; // 20 Hz
const DRAG_HEADING_MIN_PX = 8;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function main(): void {
  const canvas = el<HTMLCanvasElement>("scene");
  const ctx = canvas.getContext("2d")!;
  const modeBadge = el<HTMLSpanElement>("mode-badge");
  const linkBadge = el<HTMLSpanElement>("link-badge");
  const banner = el<HTMLDivElement>("banner");
  const toast = el<HTMLDivElement>("toast");
  const metricsBox = el<HTMLDivElement>("metrics");

  const store = new FrameStore();
  const mapLayer = new MapLayer();
  const view: ViewState = { camera: { cx: 3, cy: 2, scale: 120 }, layers: { ...DEFAULT_LAYERS } };
  let mapRev = 0;
  let fitted = false;
  let toastTimer = 0;

  function showToast(text: string): void {
    toast.textContent = text;
    toast.classList.add("show");
    window.clearTimeout(toastTimer);
    toastTimer = window.setTimeout(() => toast.classList.remove("show"), 1800);
  }

  // -- networking ------------------------------------------------------------

  const client = new GatewayClient(
    gatewayUrl(window.location.search, window.location.hostname),
    (msg) => {
      if (msg.type === "error") {
        showToast(`rejected: ${msg.reason}`);
        return;
      }
      const frame = msg as Frame;
      if (frame.revs) mapRev = frame.revs.map;
      store.apply(frame);
    },
  );

  // -- keyboard teleop ---------------------------------------------------------

  const keys = new KeyTracker();
  const streamer = new TeleopStreamer();
  window.addEventListener("keydown", (ev) => {
    if (keys.set(ev.code, true)) ev.preventDefault();
  });
  window.addEventListener("keyup", (ev) => {
    if (keys.set(ev.code, false)) ev.preventDefault();
  });
  window.addEventListener("blur", () => keys.clear());
  window.setInterval(() => {
    const msg = streamer.tick(keys.axes);
    if (msg && !client.send(msg)) {
      showToast("not connected: input ignored");
    }
  }, TELEOP_PERIOD_MS);

  // -- mouse: goal click / drag heading, pan, zoom ------------------------------

  let press: { px: number; py: number; button: number } | null = null;
  canvas.addEventListener("contextmenu", (ev) => ev.preventDefault());
  canvas.addEventListener("mousedown", (ev) => {
    press = { px: ev.offsetX, py: ev.offsetY, button: ev.button };
  });
  canvas.addEventListener("mousemove", (ev) => {
    if (press && press.button !== 0) {
      view.camera = panBy(view.camera, ev.movementX, ev.movementY);
    }
  });
  canvas.addEventListener("mouseup", (ev) => {
    if (!press || press.button !== 0) {
      press = null;
      return;
    }
    const { px, py } = press;
    press = null;
    const [wx, wy] = canvasToWorldOnCanvas(px, py);
    if (!store.inMap(wx, wy)) {
      showToast("goal outside the map");
      return;
    }
    const dx = ev.offsetX - px;
    const dy = ev.offsetY - py;
    let theta = 0;
    if (Math.hypot(dx, dy) >= DRAG_HEADING_MIN_PX) {
      theta = Math.atan2(-dy, dx); // canvas y is flipped
    }
    if (!client.send({ type: "goal", x: wx, y: wy, theta })) {
      showToast("not connected: input ignored");
    }
  });
  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? 1.15 : 1 / 1.15;
    view.camera = zoomAt(view.camera, ev.offsetX, ev.offsetY, factor, canvas.width, canvas.height);
  });

  function canvasToWorldOnCanvas(px: number, py: number): [number, number] {
    const cam = view.camera;
    return [cam.cx + (px - canvas.width / 2) / cam.scale, cam.cy - (py - canvas.height / 2) / cam.scale];
  }

  // -- layer toggles and link controls -------------------------------------------

  for (const name of Object.keys(view.layers) as (keyof typeof view.layers)[]) {
    const box = document.getElementById(`layer-${name}`) as HTMLInputElement | null;
    if (!box) continue;
    box.checked = view.layers[name];
    box.addEventListener("change", () => {
      view.layers[name] = box.checked;
    });
  }
  el<HTMLButtonElement>("outage-on").addEventListener("click", () => {
    if (!client.send({ type: "link", action: "outage_on" })) showToast("not connected");
  });
  el<HTMLButtonElement>("outage-off").addEventListener("click", () => {
    if (!client.send({ type: "link", action: "outage_off" })) showToast("not connected");
  });

  // -- render loop ----------------------------------------------------------------

  function resize(): void {
    const rect = canvas.parentElement!.getBoundingClientRect();
    if (canvas.width !== rect.width || canvas.height !== rect.height) {
      canvas.width = rect.width;
      canvas.height = rect.height;
    }
  }

  function render(): void {
    resize();
    if (!fitted) {
      const ext = store.mapExtent();
      if (ext) {
        view.camera = fitToExtent(ext[0], ext[1], ext[2], ext[3], canvas.width, canvas.height);
        fitted = true;
      }
    }
    drawScene(ctx, store, view, mapLayer, mapRev);

    const auto = store.mode === "autonomous";
    modeBadge.textContent = auto ? (store.assumed ? "AUTONOMOUS*" : "AUTONOMOUS") : "REMOTE";
    modeBadge.className = `badge ${auto ? "badge-auto" : "badge-remote"}`;
    const good = store.connectivity === "good";
    linkBadge.textContent = good ? "LINK GOOD" : "LINK LOST";
    linkBadge.className = `badge ${good ? "badge-good" : "badge-bad"}`;

    const lost = store.hasFrames() ? store.isStale() : client.state !== "open";
    banner.classList.toggle("show", lost);

    const m = store.metrics;
    metricsBox.textContent = m
      ? `t=${store.t.toFixed(1)}s  switches=${m.mode_switches}  collisions=${m.collisions}` +
        `  teleports=[${m.teleports.map((x) => x.toFixed(2)).join(", ")}]` +
        (m.time_to_goal !== null ? `  goal@${m.time_to_goal.toFixed(1)}s` : "")
      : "waiting for telemetry";

    requestAnimationFrame(render);
  }
  requestAnimationFrame(render);
}

main();
