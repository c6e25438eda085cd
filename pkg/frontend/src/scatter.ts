/** PC1/PC2 scatter of the embedding with a rectangle brush. */

import { modifiersToMode, normRect } from "./brush.js";
import { clusterColor, withAlpha } from "./palette.js";
import type { SessionStore } from "./store.js";
import type { ViewState } from "./types.js";

export interface Transform {
  scale: number;
  offsetX: number;
  offsetY: number;
}

/** Uniform data-to-canvas transform with padding; canvas y grows down,
 *  PC2 grows up, so the y axis is flipped. */
export function fitTransform(
  coords: [number, number][],
  width: number,
  height: number,
  pad = 24,
): Transform {
  let minX = Infinity;
  let maxX = -Infinity;
  let minY = Infinity;
  let maxY = -Infinity;
  for (const [x, y] of coords) {
    if (x < minX) minX = x;
    if (x > maxX) maxX = x;
    if (y < minY) minY = y;
    if (y > maxY) maxY = y;
  }
  if (coords.length === 0) {
    minX = maxX = minY = maxY = 0;
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min((width - 2 * pad) / spanX, (height - 2 * pad) / spanY);
  const offsetX = pad + ((width - 2 * pad) - spanX * scale) / 2 - minX * scale;
  const offsetY =
    height - pad - ((height - 2 * pad) - spanY * scale) / 2 + minY * scale;
  return { scale, offsetX, offsetY };
}

export function toCanvas(t: Transform, x: number, y: number): [number, number] {
  return [x * t.scale + t.offsetX, t.offsetY - y * t.scale];
}

export function toData(t: Transform, cx: number, cy: number): [number, number] {
  return [(cx - t.offsetX) / t.scale, (t.offsetY - cy) / t.scale];
}

export function axisLabel(axis: "PC1" | "PC2", explained: number[]): string {
  const idx = axis === "PC1" ? 0 : 1;
  const total = explained.reduce((a, b) => a + b, 0);
  const pct = total > 0 && explained.length > idx ? (100 * explained[idx]) / total : 0;
  return `${axis} (${pct.toFixed(1)}%)`;
}

const DOT_R = 3;

export class ScatterView {
  private readonly canvas: HTMLCanvasElement;
  private readonly store: SessionStore;
  private transform: Transform | null = null;
  private dragStart: [number, number] | null = null;
  private dragNow: [number, number] | null = null;
  private lastState: ViewState | null = null;

  constructor(canvas: HTMLCanvasElement, store: SessionStore) {
    this.canvas = canvas;
    this.store = store;
    store.subscribe((state) => {
      this.lastState = state;
      this.render(state);
    });
    canvas.addEventListener("pointerdown", (ev) => {
      this.dragStart = this.local(ev);
      this.dragNow = this.dragStart;
      canvas.setPointerCapture(ev.pointerId);
    });
    canvas.addEventListener("pointermove", (ev) => {
      if (!this.dragStart) return;
      this.dragNow = this.local(ev);
      if (this.lastState) this.render(this.lastState);
    });
    canvas.addEventListener("pointerup", (ev) => {
      if (!this.dragStart || !this.transform) return;
      const [sx, sy] = this.dragStart;
      const [ex, ey] = this.local(ev);
      this.dragStart = null;
      this.dragNow = null;
      if (Math.abs(ex - sx) < 3 && Math.abs(ey - sy) < 3) {
        if (this.lastState) this.render(this.lastState);
        return; // a click, not a brush
      }
      const [dx0, dy0] = toData(this.transform, sx, sy);
      const [dx1, dy1] = toData(this.transform, ex, ey);
      const rect = normRect(dx0, dy0, dx1, dy1);
      this.store.requestSelection(
        { source: "rect", payload: { ...rect, space: "scatter" } },
        modifiersToMode(ev),
      );
    });
  }

  private local(ev: PointerEvent): [number, number] {
    const box = this.canvas.getBoundingClientRect();
    return [ev.clientX - box.left, ev.clientY - box.top];
  }

  render(state: ViewState): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);
    const coords = state.embedding.coords;
    const t = fitTransform(coords, width, height);
    this.transform = t;

    const labels = state.clustering?.labels ?? null;
    const hasSelection = state.selection.size > 0;
    for (let i = 0; i < coords.length; i++) {
      const [cx, cy] = toCanvas(t, coords[i][0], coords[i][1]);
      const base = labels ? clusterColor(labels[i]) : clusterColor(-1);
      const selected = state.selection.has(i);
      ctx.fillStyle = hasSelection && !selected ? withAlpha(base, 0.18) : base;
      ctx.beginPath();
      ctx.arc(cx, cy, selected ? DOT_R + 1 : DOT_R, 0, 2 * Math.PI);
      ctx.fill();
      if (selected) {
        ctx.strokeStyle = "#111111";
        ctx.lineWidth = 1;
        ctx.stroke();
      }
    }

    ctx.fillStyle = "#444444";
    ctx.font = "12px sans-serif";
    const ev = state.embedding.explained_variance;
    ctx.fillText(axisLabel("PC1", ev), width / 2 - 40, height - 6);
    ctx.save();
    ctx.translate(12, height / 2 + 40);
    ctx.rotate(-Math.PI / 2);
    ctx.fillText(axisLabel("PC2", ev), 0, 0);
    ctx.restore();

    if (this.dragStart && this.dragNow) {
      const [x0, y0] = this.dragStart;
      const [x1, y1] = this.dragNow;
      ctx.strokeStyle = "#3366cc";
      ctx.setLineDash([4, 3]);
      ctx.strokeRect(Math.min(x0, x1), Math.min(y0, y1), Math.abs(x1 - x0), Math.abs(y1 - y0));
      ctx.setLineDash([]);
    }
  }
}
