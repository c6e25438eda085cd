import { describe, expect, it } from "vitest";
import { barAt, labelRuns, stackedSegments } from "../src/bars.js";

describe("stackedSegments", () => {
  it("stacks cumulatively and partitions the unit bar", () => {
    const segs = stackedSegments([0.2, 0.3, 0.5]);
    expect(segs).toHaveLength(3);
    expect(segs[0]).toEqual({ y0: 0, y1: 0.2 });
    expect(segs[1].y0).toBeCloseTo(0.2, 12);
    expect(segs[1].y1).toBeCloseTo(0.5, 12);
    expect(segs[2].y1).toBeCloseTo(1, 12);
    for (const s of segs) expect(s.y1).toBeGreaterThanOrEqual(s.y0);
  });

  it("gives equal parts equal heights", () => {
    const segs = stackedSegments([0.25, 0.25, 0.25, 0.25]);
    for (const s of segs) expect(s.y1 - s.y0).toBeCloseTo(0.25, 12);
  });

  it("keeps zero components as zero-height segments in place", () => {
    const segs = stackedSegments([0.5, 0, 0.5]);
    expect(segs[1].y0).toBeCloseTo(0.5, 12);
    expect(segs[1].y1).toBeCloseTo(0.5, 12);
  });
});

describe("barAt", () => {
  it("maps x positions to bar slots", () => {
    expect(barAt(0, 100, 10)).toBe(0);
    expect(barAt(9.9, 100, 10)).toBe(0);
    expect(barAt(10, 100, 10)).toBe(1);
    expect(barAt(99.9, 100, 10)).toBe(9);
  });

  it("returns null outside the strip", () => {
    expect(barAt(-1, 100, 10)).toBeNull();
    expect(barAt(100, 100, 10)).toBeNull();
    expect(barAt(5, 100, 0)).toBeNull();
  });

  it("covers every slot exactly once over a uniform sweep", () => {
    const seen = new Set<number>();
    for (let x = 0; x < 500; x++) {
      const idx = barAt(x + 0.5, 500, 500);
      expect(idx).not.toBeNull();
      seen.add(idx as number);
    }
    expect(seen.size).toBe(500);
  });
});

describe("labelRuns", () => {
  it("counts contiguous runs", () => {
    expect(labelRuns([])).toBe(0);
    expect(labelRuns([1, 1, 1])).toBe(1);
    expect(labelRuns([0, 0, 1, 1, 0])).toBe(3);
  });

  it("stays low for a decimated two-band sequence", () => {
    // 600 spots in PC1 order, two clean bands, decimated to 500 with the
    // same rounded linear index rule the server uses
    const full = Array.from({ length: 600 }, (_, i) => (i < 300 ? 0 : 1));
    const cap = 500;
    const m = full.length;
    const decimated: number[] = [];
    for (let i = 0; i < cap; i++) {
      decimated.push(full[Math.floor((i * (m - 1)) / (cap - 1) + 0.5)]);
    }
    expect(decimated).toHaveLength(cap);
    expect(labelRuns(decimated)).toBeLessThanOrEqual(3);
    expect(decimated[0]).toBe(0);
    expect(decimated[cap - 1]).toBe(1);
  });
});
