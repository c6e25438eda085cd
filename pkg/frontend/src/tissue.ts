/** Tissue image view: spot overlay, selection mask, rect and lasso brushes. */

import { modifiersToMode, normRect } from "./brush.js";
import { clusterColor, withAlpha } from "./palette.js";
import type { SessionStore } from "./store.js";
import type { ViewState } from "./types.js";

export type OverlayMode = "dots" | "mask";
export type BrushKind = "rect" | "lasso";

export interface Fit {
  scale: number;
  dx: number;
  dy: number;
}

/** Largest uniform scale that fits the image in the viewport, centered. */
export function containScale(
  imgW: number,
  imgH: number,
  viewW: number,
  viewH: number,
): Fit {
  const scale = Math.min(viewW / imgW, viewH / imgH);
  return {
    scale,
    dx: (viewW - imgW * scale) / 2,
    dy: (viewH - imgH * scale) / 2,
  };
}

export function canvasToImage(fit: Fit, cx: number, cy: number): [number, number] {
  return [(cx - fit.dx) / fit.scale, (cy - fit.dy) / fit.scale];
}

export function imageToCanvas(fit: Fit, ix: number, iy: number): [number, number] {
  return [ix * fit.scale + fit.dx, iy * fit.scale + fit.dy];
}

/** Drop lasso points closer than minDist to the previous kept point;
 *  keeps payloads small without visibly changing the outline. */
export function thinPolygon(
  points: [number, number][],
  minDist: number,
): [number, number][] {
  const kept: [number, number][] = [];
  for (const p of points) {
    const last = kept[kept.length - 1];
    if (!last || Math.hypot(p[0] - last[0], p[1] - last[1]) >= minDist) {
      kept.push(p);
    }
  }
  return kept;
}

export function statusText(count: number, total: number): string {
  return `${count} of ${total} spots selected`;
}

export class TissueView {
  private readonly canvas: HTMLCanvasElement;
  private readonly statusEl: HTMLElement;
  private readonly store: SessionStore;
  private readonly img: HTMLImageElement;
  private imgState: "loading" | "ok" | "failed" = "loading";
  private maskImg: HTMLImageElement | null = null;
  private maskLoadedUrl: string | null = null;
  private fit: Fit | null = null;
  private lastState: ViewState | null = null;

  mode: OverlayMode = "dots";
  brush: BrushKind = "rect";
  private dragPath: [number, number][] = [];
  private dragging = false;

  constructor(
    canvas: HTMLCanvasElement,
    statusEl: HTMLElement,
    store: SessionStore,
    imageUrl: string,
  ) {
    this.canvas = canvas;
    this.statusEl = statusEl;
    this.store = store;
    this.img = new Image();
    this.img.onload = () => {
      this.imgState = "ok";
      this.rerender();
    };
    this.img.onerror = () => {
      this.imgState = "failed";
      this.rerender();
    };
    this.img.src = imageUrl;

    store.subscribe((state) => {
      this.lastState = state;
      this.statusEl.textContent = statusText(state.selection.size, state.dataset.n);
      if (this.mode === "mask") this.ensureMask(state.maskUrl);
      this.render(state);
    });

    canvas.addEventListener("pointerdown", (ev) => {
      this.dragging = true;
      this.dragPath = [this.local(ev)];
      canvas.setPointerCapture(ev.pointerId);
    });
    canvas.addEventListener("pointermove", (ev) => {
      if (!this.dragging) return;
      this.dragPath.push(this.local(ev));
      this.rerender();
    });
    canvas.addEventListener("pointerup", (ev) => {
      if (!this.dragging) return;
      this.dragging = false;
      this.finishDrag(ev);
      this.dragPath = [];
      this.rerender();
    });
  }

  setMode(mode: OverlayMode): void {
    this.mode = mode;
    if (mode === "mask" && this.lastState) this.ensureMask(this.lastState.maskUrl);
    this.rerender();
  }

  setBrush(brush: BrushKind): void {
    this.brush = brush;
  }

  private local(ev: PointerEvent): [number, number] {
    const box = this.canvas.getBoundingClientRect();
    return [ev.clientX - box.left, ev.clientY - box.top];
  }

  private finishDrag(ev: PointerEvent): void {
    if (!this.fit || this.dragPath.length < 2) return;
    const mode = modifiersToMode(ev);
    if (this.brush === "rect") {
      const [sx, sy] = this.dragPath[0];
      const [ex, ey] = this.dragPath[this.dragPath.length - 1];
      if (Math.abs(ex - sx) < 3 && Math.abs(ey - sy) < 3) return;
      const [ix0, iy0] = canvasToImage(this.fit, sx, sy);
      const [ix1, iy1] = canvasToImage(this.fit, ex, ey);
      this.store.requestSelection(
        { source: "rect", payload: { ...normRect(ix0, iy0, ix1, iy1), space: "image" } },
        mode,
      );
    } else {
      const fit = this.fit;
      const vertices = thinPolygon(this.dragPath, 3).map(
        ([cx, cy]) => canvasToImage(fit, cx, cy),
      );
      if (vertices.length < 3) return;
      this.store.requestSelection(
        { source: "polygon", payload: { vertices, space: "image" } },
        mode,
      );
    }
  }

  private ensureMask(url: string): void {
    if (this.maskLoadedUrl === url) return;
    const img = new Image();
    img.onload = () => {
      this.maskImg = img;
      this.maskLoadedUrl = url;
      this.rerender();
    };
    img.onerror = () => {
      this.maskImg = null;
      this.maskLoadedUrl = url;
      this.rerender();
    };
    img.src = url;
  }

  private rerender(): void {
    if (this.lastState) this.render(this.lastState);
  }

  render(state: ViewState): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    const [imgW, imgH] = state.dataset.image_size;
    const fit = containScale(imgW, imgH, width, height);
    this.fit = fit;

    ctx.clearRect(0, 0, width, height);
    if (this.imgState === "ok") {
      ctx.drawImage(this.img, fit.dx, fit.dy, imgW * fit.scale, imgH * fit.scale);
    } else {
      ctx.fillStyle = "#e8e8ee";
      ctx.fillRect(fit.dx, fit.dy, imgW * fit.scale, imgH * fit.scale);
      ctx.fillStyle = "#666677";
      ctx.font = "13px sans-serif";
      const note = this.imgState === "failed" ? "tissue image unavailable" : "loading image";
      ctx.fillText(note, fit.dx + 10, fit.dy + 22);
    }

    if (this.mode === "mask") {
      if (this.maskImg && this.maskLoadedUrl === state.maskUrl) {
        ctx.drawImage(this.maskImg, fit.dx, fit.dy, imgW * fit.scale, imgH * fit.scale);
      }
    } else {
      const labels = state.clustering?.labels ?? null;
      const hasSelection = state.selection.size > 0;
      const r = Math.max(2, (state.dataset.spot_radius_px ?? 3) * fit.scale * 0.6);
      for (let i = 0; i < state.positions.length; i++) {
        const [cx, cy] = imageToCanvas(fit, state.positions[i][0], state.positions[i][1]);
        const base = labels ? clusterColor(labels[i]) : clusterColor(-1);
        const selected = state.selection.has(i);
        ctx.fillStyle = hasSelection && !selected ? withAlpha(base, 0.25) : base;
        ctx.beginPath();
        ctx.arc(cx, cy, selected ? r + 1 : r, 0, 2 * Math.PI);
        ctx.fill();
        if (selected) {
          ctx.strokeStyle = "#111111";
          ctx.lineWidth = 1;
          ctx.stroke();
        }
      }
    }

    if (this.dragging && this.dragPath.length > 1) {
      ctx.strokeStyle = "#3366cc";
      ctx.setLineDash([4, 3]);
      if (this.brush === "rect") {
        const [x0, y0] = this.dragPath[0];
        const [x1, y1] = this.dragPath[this.dragPath.length - 1];
        ctx.strokeRect(Math.min(x0, x1), Math.min(y0, y1), Math.abs(x1 - x0), Math.abs(y1 - y0));
      } else {
        ctx.beginPath();
        ctx.moveTo(this.dragPath[0][0], this.dragPath[0][1]);
        for (const [x, y] of this.dragPath.slice(1)) ctx.lineTo(x, y);
        ctx.stroke();
      }
      ctx.setLineDash([]);
    }
  }
}
