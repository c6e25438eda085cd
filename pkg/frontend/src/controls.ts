/** Clustering controls: k and seed inputs, recluster, per-cluster selection. */

import { clusterColor } from "./palette.js";
import type { SessionStore } from "./store.js";
import type { ViewState } from "./types.js";

export const K_MAX = 12;

/** k must be a whole number between 1 and min(12, n spots). */
export function validK(k: number, n: number): boolean {
  return Number.isInteger(k) && k >= 1 && k <= Math.min(K_MAX, n);
}

/** Spots per cluster label; labels outside [0, k) are ignored. */
export function clusterCounts(labels: number[], k: number): number[] {
  const counts = new Array<number>(k).fill(0);
  for (const label of labels) {
    if (label >= 0 && label < k) counts[label]++;
  }
  return counts;
}

export class ControlsView {
  private readonly root: HTMLElement;
  private readonly store: SessionStore;
  private readonly kInput: HTMLInputElement;
  private readonly seedInput: HTMLInputElement;
  private readonly runButton: HTMLButtonElement;
  private readonly clusterList: HTMLElement;

  constructor(root: HTMLElement, store: SessionStore) {
    this.root = root;
    this.store = store;

    const form = document.createElement("div");
    form.className = "cluster-form";

    this.kInput = document.createElement("input");
    this.kInput.type = "number";
    this.kInput.min = "1";
    this.kInput.max = String(K_MAX);
    this.kInput.step = "1";
    this.kInput.value = "3";

    this.seedInput = document.createElement("input");
    this.seedInput.type = "number";
    this.seedInput.step = "1";
    this.seedInput.value = "0";

    this.runButton = document.createElement("button");
    this.runButton.textContent = "recluster";
    this.runButton.addEventListener("click", () => {
      const k = Number(this.kInput.value);
      const seed = Math.trunc(Number(this.seedInput.value)) || 0;
      void this.store.recluster(k, seed);
    });

    const clearButton = document.createElement("button");
    clearButton.textContent = "clear selection";
    clearButton.addEventListener("click", () => this.store.clearSelection());

    form.appendChild(document.createTextNode("k "));
    form.appendChild(this.kInput);
    form.appendChild(document.createTextNode(" seed "));
    form.appendChild(this.seedInput);
    form.appendChild(this.runButton);
    form.appendChild(clearButton);

    this.clusterList = document.createElement("div");
    this.clusterList.className = "cluster-list";

    this.root.appendChild(form);
    this.root.appendChild(this.clusterList);

    this.kInput.addEventListener("input", () => this.updateValidity());

    store.subscribe((state) => {
      this.updateValidity(state);
      this.renderClusterButtons(state);
    });
  }

  private updateValidity(state?: ViewState | null): void {
    const n = (state ?? this.store.state)?.dataset.n ?? K_MAX;
    this.runButton.disabled = !validK(Number(this.kInput.value), n);
  }

  private renderClusterButtons(state: ViewState): void {
    this.clusterList.textContent = "";
    const clustering = state.clustering;
    if (!clustering) return;
    const counts = clusterCounts(clustering.labels, clustering.k);
    for (let label = 0; label < clustering.k; label++) {
      const btn = document.createElement("button");
      btn.className = "cluster-btn";
      const swatch = document.createElement("span");
      swatch.className = "legend-swatch";
      swatch.style.backgroundColor = clusterColor(label);
      btn.appendChild(swatch);
      btn.appendChild(document.createTextNode(`cluster ${label} (${counts[label]})`));
      btn.addEventListener("click", () => this.store.selectCluster(label));
      this.clusterList.appendChild(btn);
    }
  }
}
