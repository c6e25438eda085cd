/** Fixed categorical palette, 12 colors, chosen for colorblind safety
 *  (Tol's muted scheme extended with two of the bright scheme). Cluster
 *  labels and cell-type columns both index into it, so a label's color
 *  never reshuffles between renders. */
export const PALETTE: readonly string[] = [
  "#332288", // indigo
  "#88ccee", // cyan
  "#44aa99", // teal
  "#117733", // green
  "#999933", // olive
  "#ddcc77", // sand
  "#cc6677", // rose
  "#882255", // wine
  "#aa4499", // purple
  "#4477aa", // blue
  "#ccbb44", // yellow
  "#bbbbbb", // grey
];

export const UNCLUSTERED = "#778899";

export function clusterColor(label: number): string {
  return label >= 0 ? PALETTE[label % PALETTE.length] : UNCLUSTERED;
}

export function cellTypeColor(index: number): string {
  return PALETTE[index % PALETTE.length];
}

/** 60% alpha variant used for dimmed (unselected) scatter points. */
export function withAlpha(hex: string, alpha: number): string {
  const r = parseInt(hex.slice(1, 3), 16);
  const g = parseInt(hex.slice(3, 5), 16);
  const b = parseInt(hex.slice(5, 7), 16);
  return `rgba(${r},${g},${b},${alpha})`;
}
