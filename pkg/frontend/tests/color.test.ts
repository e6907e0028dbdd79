import { describe, expect, it } from "vitest";

import { tintClass, tintStyle } from "../src/color.js";
import type { ColorCell } from "../src/types.js";

const cell = (band: ColorCell["band"], intensity: number, valid = true): ColorCell => ({
  band,
  intensity,
  valid,
});

describe("cell tinting", () => {
  it("intensity 0 leaves no tint", () => {
    expect(tintStyle(cell("green", 0))).toBe("");
    expect(tintStyle(cell("red", 0))).toBe("");
  });

  it("intensity 1 is the full tone", () => {
    expect(tintStyle(cell("green", 1))).toBe("background-color: rgba(34, 170, 68, 0.800)");
    expect(tintStyle(cell("red", 1))).toBe("background-color: rgba(221, 68, 51, 0.800)");
  });

  it("neutral band never tints", () => {
    expect(tintStyle(cell("neutral", 1))).toBe("");
    expect(tintClass(cell("neutral", 0))).toBe("tint-neutral");
  });

  it("class mirrors the server band verbatim", () => {
    expect(tintClass(cell("green", 0.4))).toBe("tint-green");
    expect(tintClass(cell("red", 0.4))).toBe("tint-red");
  });

  it("invalid cells render neutral with a warning class", () => {
    expect(tintClass(cell("green", 0.4, false))).toBe("tint-invalid");
    expect(tintStyle(cell("green", 0.4, false))).toBe("");
  });

  it("intensity above 1 is clamped to the full tone", () => {
    expect(tintStyle(cell("green", 7))).toBe("background-color: rgba(34, 170, 68, 0.800)");
  });
});
