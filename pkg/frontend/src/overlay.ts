// Magnetic-field overlay glyphs. Raw |B| spans decades, so glyph length is
// log-scaled; the overlay hides entirely when every sample is below the
// visibility floor. Out-of-plane components render as dot/cross symbols.

export const VISIBILITY_FLOOR_T = 1e-12;
export const LOG_DECADES = 9;       // floor .. floor*10^9 maps to 0..1
export const MAX_GLYPH_PX = 14;

export interface FieldGlyph {
  x: number;           // board-plane meters
  y: number;
  length: number;      // 0..1 normalized
  angle: number;       // in-plane arrow angle, radians
  zSign: -1 | 0 | 1;   // dominant out-of-plane direction: cross / none / dot
}

export function glyphLength(magnitude: number): number {
  if (magnitude < VISIBILITY_FLOOR_T) return 0;
  const decades = Math.log10(magnitude / VISIBILITY_FLOOR_T);
  return Math.min(decades / LOG_DECADES, 1);
}

/** samples rows are [x, y, z, bx, by, bz] straight from a Frame. */
export function buildGlyphs(samples: number[][]): FieldGlyph[] {
  const glyphs: FieldGlyph[] = [];
  for (const row of samples) {
    if (row.length < 6) continue;
    const [x, y, , bx, by, bz] = row as [number, number, number, number, number, number];
    const magnitude = Math.hypot(bx, by, bz);
    const inPlane = Math.hypot(bx, by);
    let zSign: -1 | 0 | 1 = 0;
    if (Math.abs(bz) > inPlane) zSign = bz > 0 ? 1 : -1;
    glyphs.push({
      x, y,
      length: glyphLength(magnitude),
      angle: Math.atan2(by, bx),
      zSign,
    });
  }
  return glyphs;
}

/** The overlay is hidden when no sample reaches the floor. */
export function overlayVisible(samples: number[][]): boolean {
  return samples.some((row) => {
    const [, , , bx, by, bz] = row;
    return Math.hypot(bx ?? 0, by ?? 0, bz ?? 0) >= VISIBILITY_FLOOR_T;
  });
}
