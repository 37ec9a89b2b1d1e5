/**
 * Browser entry point. Wires the controller to a canvas scatter
 * layer, panel containers, and the push channel, and keeps the URL
 * fragment in sync so any view can be shared by copying the address.
 *
 * Everything interesting is in the pure modules; this file only
 * paints Scene data and forwards DOM events.
 */

import { ApiClient } from "./api";
import { Controller, type Scene } from "./controller";
import { GLYPH_RADII, ZOOM_STEP } from "./theme";
import type { PushMessage } from "./types";

function paintMarkers(canvas: HTMLCanvasElement, scene: Scene, zoom: number): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const cx = canvas.width / 2;
  const cy = canvas.height / 2;
  const scale = 12 * zoom;
  for (const m of scene.markers) {
    const px = cx + m.x * scale;
    const py = cy + m.y * scale;
    if (m.kind === "dot") {
      ctx.beginPath();
      ctx.fillStyle = m.color;
      ctx.arc(px, py, m.radius, 0, 2 * Math.PI);
      ctx.fill();
      continue;
    }
    // fan: one bar per hour, angular slot fixed, radial extent by frequency
    const slot = (2 * Math.PI) / m.fan.length;
    for (const seg of m.fan) {
      const r =
        GLYPH_RADII.ringOuter +
        (GLYPH_RADII.fanMax - GLYPH_RADII.ringOuter) * seg.widthFraction;
      ctx.beginPath();
      ctx.fillStyle = m.innerColor;
      ctx.moveTo(px, py);
      ctx.arc(px, py, r, seg.hour * slot - Math.PI / 2, (seg.hour + 1) * slot - Math.PI / 2);
      ctx.closePath();
      ctx.fill();
    }
    // ring: life-mode shares
    let angle = -Math.PI / 2;
    for (const part of m.ring) {
      const span = 2 * Math.PI * part.fraction;
      ctx.beginPath();
      ctx.strokeStyle = part.color;
      ctx.lineWidth = GLYPH_RADII.ringOuter - GLYPH_RADII.inner;
      const mid = (GLYPH_RADII.ringOuter + GLYPH_RADII.inner) / 2;
      ctx.arc(px, py, mid, angle, angle + span);
      ctx.stroke();
      angle += span;
    }
    ctx.beginPath();
    ctx.fillStyle = m.innerColor;
    ctx.arc(px, py, m.innerRadius, 0, 2 * Math.PI);
    ctx.fill();
  }
}

function start(): void {
  const canvas = document.getElementById("projection") as HTMLCanvasElement | null;
  if (!canvas) return;
  const base = ""; // same origin as the serving host
  const api = new ApiClient(base);
  const controller = new Controller(api, {
    onRender: (scene) => {
      paintMarkers(canvas, scene, controller.state.zoom);
      window.location.hash = controller.fragment();
    },
  });

  const wsUrl =
    (window.location.protocol === "https:" ? "wss://" : "ws://") +
    window.location.host +
    "/ws?session=default";
  const ws = new WebSocket(wsUrl);
  ws.onmessage = (ev) => controller.handleMessage(JSON.parse(ev.data) as PushMessage);

  canvas.addEventListener("wheel", (ev) => {
    ev.preventDefault();
    const factor = ev.deltaY < 0 ? ZOOM_STEP : 1 / ZOOM_STEP;
    controller.setZoom(controller.state.zoom * factor);
  });

  void controller.init(window.location.hash || undefined);
}

if (typeof document !== "undefined") {
  if (document.readyState === "loading") {
    document.addEventListener("DOMContentLoaded", start);
  } else {
    start();
  }
}
