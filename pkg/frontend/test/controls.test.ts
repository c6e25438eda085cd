import { describe, expect, it } from "vitest";
import { clusterCounts, validK } from "../src/controls.js";

describe("validK", () => {
  it("accepts whole numbers from 1 through 12", () => {
    expect(validK(1, 1000)).toBe(true);
    expect(validK(12, 1000)).toBe(true);
  });

  it("rejects out-of-range and fractional values", () => {
    expect(validK(0, 1000)).toBe(false);
    expect(validK(13, 1000)).toBe(false);
    expect(validK(2.5, 1000)).toBe(false);
    expect(validK(NaN, 1000)).toBe(false);
    expect(validK(-3, 1000)).toBe(false);
  });

  it("caps k at the number of spots", () => {
    expect(validK(5, 4)).toBe(false);
    expect(validK(4, 4)).toBe(true);
  });
});

describe("clusterCounts", () => {
  it("tallies spots per label", () => {
    expect(clusterCounts([0, 1, 1, 2, 0, 0], 3)).toEqual([3, 2, 1]);
  });

  it("keeps empty clusters at zero", () => {
    expect(clusterCounts([0, 0], 3)).toEqual([2, 0, 0]);
  });

  it("ignores labels outside the range", () => {
    expect(clusterCounts([0, 7, -1], 2)).toEqual([1, 0]);
  });
});
