import { describe, expect, it } from "vitest";
import { modifiersToMode, normRect } from "../src/brush.js";

describe("normRect", () => {
  it("orders corners so x0 <= x1 and y0 <= y1", () => {
    expect(normRect(5, 7, 1, 2)).toEqual({ x0: 1, y0: 2, x1: 5, y1: 7 });
    expect(normRect(1, 2, 5, 7)).toEqual({ x0: 1, y0: 2, x1: 5, y1: 7 });
    expect(normRect(5, 2, 1, 7)).toEqual({ x0: 1, y0: 2, x1: 5, y1: 7 });
  });

  it("keeps degenerate drags as zero-extent rects", () => {
    expect(normRect(3, 4, 3, 4)).toEqual({ x0: 3, y0: 4, x1: 3, y1: 4 });
  });
});

describe("modifiersToMode", () => {
  it("maps plain drag to replace", () => {
    expect(modifiersToMode({ shiftKey: false, altKey: false })).toBe("replace");
  });

  it("maps shift to union", () => {
    expect(modifiersToMode({ shiftKey: true, altKey: false })).toBe("union");
  });

  it("maps alt to subtract", () => {
    expect(modifiersToMode({ shiftKey: false, altKey: true })).toBe("subtract");
  });

  it("prefers shift when both are held", () => {
    expect(modifiersToMode({ shiftKey: true, altKey: true })).toBe("union");
  });
});
