import { describe, expect, it } from "vitest";
import {
  canvasToImage,
  containScale,
  imageToCanvas,
  statusText,
  thinPolygon,
} from "../src/tissue.js";

describe("containScale", () => {
  it("fits a wide image by width and centers vertically", () => {
    const fit = containScale(200, 100, 400, 400);
    expect(fit.scale).toBe(2);
    expect(fit.dx).toBe(0);
    expect(fit.dy).toBe(100);
  });

  it("fits a tall image by height and centers horizontally", () => {
    const fit = containScale(100, 200, 400, 400);
    expect(fit.scale).toBe(2);
    expect(fit.dx).toBe(100);
    expect(fit.dy).toBe(0);
  });

  it("never overflows the viewport", () => {
    const fit = containScale(640, 480, 300, 200);
    expect(640 * fit.scale).toBeLessThanOrEqual(300 + 1e-9);
    expect(480 * fit.scale).toBeLessThanOrEqual(200 + 1e-9);
  });
});

describe("canvasToImage", () => {
  it("inverts imageToCanvas", () => {
    const fit = containScale(200, 100, 400, 400);
    const [cx, cy] = imageToCanvas(fit, 50, 25);
    const [ix, iy] = canvasToImage(fit, cx, cy);
    expect(ix).toBeCloseTo(50, 9);
    expect(iy).toBeCloseTo(25, 9);
  });

  it("maps the image origin to the fit offset", () => {
    const fit = containScale(100, 200, 400, 400);
    expect(imageToCanvas(fit, 0, 0)).toEqual([100, 0]);
  });
});

describe("thinPolygon", () => {
  it("drops points closer than minDist to the previous kept point", () => {
    const path: [number, number][] = [
      [0, 0],
      [1, 0],
      [2, 0],
      [10, 0],
      [11, 0],
      [20, 0],
    ];
    expect(thinPolygon(path, 5)).toEqual([
      [0, 0],
      [10, 0],
      [20, 0],
    ]);
  });

  it("keeps everything when points are sparse", () => {
    const path: [number, number][] = [
      [0, 0],
      [10, 10],
      [20, 0],
    ];
    expect(thinPolygon(path, 3)).toEqual(path);
  });

  it("handles empty input", () => {
    expect(thinPolygon([], 3)).toEqual([]);
  });
});

describe("statusText", () => {
  it("reports the selection count", () => {
    expect(statusText(12, 600)).toBe("12 of 600 spots selected");
    expect(statusText(0, 600)).toBe("0 of 600 spots selected");
  });
});
