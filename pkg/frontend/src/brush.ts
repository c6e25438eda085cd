/** Brush helpers shared by the image and scatter views. */

import type { SelectionMode } from "./types.js";

/** Order a drag's corners so x0 <= x1 and y0 <= y1; the server rejects
 *  inverted rectangles. */
export function normRect(
  ax: number,
  ay: number,
  bx: number,
  by: number,
): { x0: number; y0: number; x1: number; y1: number } {
  return {
    x0: Math.min(ax, bx),
    y0: Math.min(ay, by),
    x1: Math.max(ax, bx),
    y1: Math.max(ay, by),
  };
}

/** Shift extends, alt carves out, a plain drag replaces. */
export function modifiersToMode(ev: { shiftKey: boolean; altKey: boolean }): SelectionMode {
  if (ev.shiftKey) return "union";
  if (ev.altKey) return "subtract";
  return "replace";
}
