import { describe, expect, it } from "vitest";
import {
  VISIBILITY_FLOOR_T, buildGlyphs, glyphLength, overlayVisible,
} from "../src/overlay.js";

function sample(bx: number, by: number, bz: number): number[] {
  return [0.01, 0.02, 0.005, bx, by, bz];
}

describe("field overlay", () => {
  it("hides when every sample is below the floor", () => {
    expect(overlayVisible([sample(0, 0, 0), sample(0, 0, 1e-13)])).toBe(false);
    expect(overlayVisible([sample(0, 0, 1e-9)])).toBe(true);
  });

  it("glyph length grows monotonically on a log scale", () => {
    const weak = glyphLength(1e-9);
    const strong = glyphLength(1e-6);
    expect(strong).toBeGreaterThan(weak);
    expect(glyphLength(10 * VISIBILITY_FLOOR_T)).toBeCloseTo(1 / 9, 9);
  });

  it("doubling the field strictly lengthens every visible glyph", () => {
    const rows = [sample(0, 0, 2e-8), sample(1e-8, 0, 0)];
    const doubled = rows.map((r) => [...r.slice(0, 3), ...r.slice(3).map((v) => 2 * v)]);
    const before = buildGlyphs(rows);
    const after = buildGlyphs(doubled);
    for (let i = 0; i < before.length; i++) {
      expect(after[i]!.length).toBeGreaterThan(before[i]!.length);
    }
  });

  it("marks out-of-plane fields with dot/cross signs", () => {
    const [up] = buildGlyphs([sample(0, 0, 1e-8)]);
    const [down] = buildGlyphs([sample(0, 0, -1e-8)]);
    const [planar] = buildGlyphs([sample(1e-8, 0, 1e-10)]);
    expect(up!.zSign).toBe(1);
    expect(down!.zSign).toBe(-1);
    expect(planar!.zSign).toBe(0);
  });

  it("clamps saturated glyphs to unit length", () => {
    expect(glyphLength(1)).toBe(1);
  });
});
