/** Stacked composition bars in PC1 order, one unit-height bar per spot. */

import { cellTypeColor } from "./palette.js";
import type { SessionStore } from "./store.js";
import type { ViewState } from "./types.js";

export interface Segment {
  y0: number;
  y1: number;
}

/** Cumulative stacking, bottom up: segment j covers [sum_{<j}, sum_{<=j})
 *  as a fraction of the bar height. */
export function stackedSegments(composition: number[]): Segment[] {
  const segments: Segment[] = [];
  let acc = 0;
  for (const p of composition) {
    segments.push({ y0: acc, y1: acc + p });
    acc += p;
  }
  return segments;
}

/** Map a canvas x to the bar slot under it, or null outside the strip. */
export function barAt(x: number, width: number, nBars: number): number | null {
  if (nBars <= 0 || width <= 0 || x < 0 || x >= width) return null;
  const idx = Math.floor((x / width) * nBars);
  return idx >= nBars ? nBars - 1 : idx;
}

/** Number of contiguous runs of equal values; bars in PC1 order over a
 *  well-separated dataset should collapse to a handful of runs. */
export function labelRuns(labels: number[]): number {
  let runs = 0;
  for (let i = 0; i < labels.length; i++) {
    if (i === 0 || labels[i] !== labels[i - 1]) runs++;
  }
  return runs;
}

export class BarsView {
  private readonly canvas: HTMLCanvasElement;
  private readonly legendEl: HTMLElement;
  private readonly store: SessionStore;
  private lastState: ViewState | null = null;

  constructor(canvas: HTMLCanvasElement, legendEl: HTMLElement, store: SessionStore) {
    this.canvas = canvas;
    this.legendEl = legendEl;
    this.store = store;
    store.subscribe((state) => {
      this.lastState = state;
      this.render(state);
    });
    canvas.addEventListener("click", (ev) => {
      const state = this.lastState;
      if (!state) return;
      const box = canvas.getBoundingClientRect();
      const slot = barAt(ev.clientX - box.left, canvas.width, state.bars.bar_indices.length);
      if (slot !== null) this.store.selectSpot(state.bars.bar_indices[slot]);
    });
  }

  render(state: ViewState): void {
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return;
    const { width, height } = this.canvas;
    ctx.clearRect(0, 0, width, height);

    const compositions = state.bars.compositions;
    const m = compositions.length;
    if (m === 0) return;
    const slotW = width / m;
    for (let i = 0; i < m; i++) {
      const x = i * slotW;
      const w = Math.max(slotW - (slotW > 3 ? 1 : 0), 0.5);
      for (const [j, seg] of stackedSegments(compositions[i]).entries()) {
        ctx.fillStyle = cellTypeColor(j);
        const y1 = height * (1 - seg.y0);
        const y0 = height * (1 - seg.y1);
        ctx.fillRect(x, y0, w, y1 - y0);
      }
    }

    this.renderLegend(state.dataset.cell_types);
  }

  private renderLegend(cellTypes: string[]): void {
    this.legendEl.textContent = "";
    for (const [j, name] of cellTypes.entries()) {
      const item = document.createElement("span");
      item.className = "legend-item";
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.backgroundColor = cellTypeColor(j);
      item.appendChild(swatch);
      item.appendChild(document.createTextNode(name));
      this.legendEl.appendChild(item);
    }
  }
}
