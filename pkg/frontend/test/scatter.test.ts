import { describe, expect, it } from "vitest";
import { axisLabel, fitTransform, toCanvas, toData } from "../src/scatter.js";

const COORDS: [number, number][] = [
  [-2, -1],
  [0, 0.5],
  [3, 2],
  [1, -0.5],
];

describe("fitTransform", () => {
  it("keeps every point inside the padded viewport", () => {
    const t = fitTransform(COORDS, 400, 300, 24);
    for (const [x, y] of COORDS) {
      const [cx, cy] = toCanvas(t, x, y);
      expect(cx).toBeGreaterThanOrEqual(24 - 1e-9);
      expect(cx).toBeLessThanOrEqual(400 - 24 + 1e-9);
      expect(cy).toBeGreaterThanOrEqual(24 - 1e-9);
      expect(cy).toBeLessThanOrEqual(300 - 24 + 1e-9);
    }
  });

  it("flips the y axis: larger PC2 lands higher on the canvas", () => {
    const t = fitTransform(COORDS, 400, 300);
    const [, cyLow] = toCanvas(t, 0, -1);
    const [, cyHigh] = toCanvas(t, 0, 2);
    expect(cyHigh).toBeLessThan(cyLow);
  });

  it("is uniform: one scale for both axes", () => {
    const t = fitTransform(COORDS, 400, 300);
    const [ax] = toCanvas(t, 0, 0);
    const [bx] = toCanvas(t, 1, 0);
    const [, ay] = toCanvas(t, 0, 0);
    const [, by] = toCanvas(t, 0, 1);
    expect(bx - ax).toBeCloseTo(ay - by, 9);
  });

  it("round-trips through toData", () => {
    const t = fitTransform(COORDS, 400, 300);
    for (const [x, y] of COORDS) {
      const [cx, cy] = toCanvas(t, x, y);
      const [dx, dy] = toData(t, cx, cy);
      expect(dx).toBeCloseTo(x, 9);
      expect(dy).toBeCloseTo(y, 9);
    }
  });

  it("survives degenerate inputs", () => {
    const single = fitTransform([[2, 2]], 100, 100);
    const [cx, cy] = toCanvas(single, 2, 2);
    expect(Number.isFinite(cx)).toBe(true);
    expect(Number.isFinite(cy)).toBe(true);
    const empty = fitTransform([], 100, 100);
    expect(Number.isFinite(empty.scale)).toBe(true);
  });
});

describe("axisLabel", () => {
  it("shows each component's share of the listed variance", () => {
    expect(axisLabel("PC1", [3, 1])).toBe("PC1 (75.0%)");
    expect(axisLabel("PC2", [3, 1])).toBe("PC2 (25.0%)");
  });

  it("handles empty variance lists", () => {
    expect(axisLabel("PC1", [])).toBe("PC1 (0.0%)");
  });
});
