/** Sortable, filterable spot table backed by the server's table endpoint. */

import type { SessionStore } from "./store.js";
import type { TablePayload } from "./types.js";

export interface SortState {
  sortBy: string;
  desc: boolean;
}

/** Clicking a new column sorts it ascending; clicking the active column
 *  flips the direction. */
export function nextSort(current: SortState, clicked: string): SortState {
  if (current.sortBy === clicked) return { sortBy: clicked, desc: !current.desc };
  return { sortBy: clicked, desc: false };
}

export function formatPct(p: number): string {
  return `${(100 * p).toFixed(1)}%`;
}

export class TableView {
  private readonly root: HTMLElement;
  private readonly store: SessionStore;
  private cellTypes: string[] = [];
  private sort: SortState = { sortBy: "spot_id", desc: false };
  private filterType: string | null = null;
  private filterMin = 0;

  constructor(root: HTMLElement, store: SessionStore, cellTypes: string[]) {
    this.root = root;
    this.store = store;
    this.cellTypes = cellTypes;
    void this.refresh();
  }

  private async refresh(): Promise<void> {
    let payload: TablePayload;
    try {
      payload = await this.store.fetchTable(
        this.sort.sortBy,
        this.sort.desc,
        this.filterType,
        this.filterMin,
      );
    } catch (err) {
      this.root.textContent = `table unavailable: ${(err as Error).message}`;
      return;
    }
    this.render(payload);
  }

  private render(payload: TablePayload): void {
    this.root.textContent = "";
    this.root.appendChild(this.buildFilterBar());

    const table = document.createElement("table");
    const head = table.createTHead().insertRow();
    for (const col of ["spot_id", ...this.cellTypes]) {
      const th = document.createElement("th");
      th.textContent = col + (this.sort.sortBy === col ? (this.sort.desc ? " ▼" : " ▲") : "");
      th.addEventListener("click", () => {
        this.sort = nextSort(this.sort, col);
        void this.refresh();
      });
      head.appendChild(th);
    }
    const body = table.createTBody();
    for (const row of payload.rows) {
      const tr = body.insertRow();
      tr.insertCell().textContent = row.spot_id;
      for (const p of row.proportions) {
        tr.insertCell().textContent = formatPct(p);
      }
    }
    this.root.appendChild(table);
  }

  private buildFilterBar(): HTMLElement {
    const bar = document.createElement("div");
    bar.className = "table-filter";

    const typeSel = document.createElement("select");
    const noneOpt = document.createElement("option");
    noneOpt.value = "";
    noneOpt.textContent = "no filter";
    typeSel.appendChild(noneOpt);
    for (const name of this.cellTypes) {
      const opt = document.createElement("option");
      opt.value = name;
      opt.textContent = name;
      typeSel.appendChild(opt);
    }
    typeSel.value = this.filterType ?? "";

    const minInput = document.createElement("input");
    minInput.type = "number";
    minInput.min = "0";
    minInput.max = "100";
    minInput.step = "1";
    minInput.value = String(100 * this.filterMin);
    minInput.title = "minimum percentage";

    const apply = () => {
      this.filterType = typeSel.value === "" ? null : typeSel.value;
      this.filterMin = Number(minInput.value) / 100 || 0;
      void this.refresh();
    };
    typeSel.addEventListener("change", apply);
    minInput.addEventListener("change", apply);

    bar.appendChild(document.createTextNode("min "));
    bar.appendChild(minInput);
    bar.appendChild(document.createTextNode("% of "));
    bar.appendChild(typeSel);
    return bar;
  }
}
