// Board geometry for a 2D top-down rendering at true 2.54 mm pitch.
// These are display constants, not physics: every electrical quantity on
// screen originates from an engine frame.

export const COLUMNS = 30;
export const TERMINAL_ROWS = ["a", "b", "c", "d", "e", "f", "g", "h", "i", "j"];
export const RAIL_ROWS = ["rail+", "rail-", "RAIL+", "RAIL-"];
export const ALL_ROWS = [...TERMINAL_ROWS, ...RAIL_ROWS];

// Vertical slot per row, mirroring the engine's board plan (gaps for the
// rail blocks and the center channel).
export const ROW_SLOT: Record<string, number> = {
  "rail+": 0, "rail-": 1,
  a: 3, b: 4, c: 5, d: 6, e: 7,
  f: 9, g: 10, h: 11, i: 12, j: 13,
  "RAIL+": 15, "RAIL-": 16,
};

export const PITCH_M = 2.54e-3;
export const PIXELS_PER_METER = 7000; // display scaling only
export const MARGIN_PX = 28;

export interface Point {
  x: number;
  y: number;
}

export function holeToPixel(column: number, row: string): Point {
  const slot = ROW_SLOT[row];
  if (slot === undefined) throw new Error(`bad row ${row}`);
  return {
    x: MARGIN_PX + (column - 1) * PITCH_M * PIXELS_PER_METER,
    y: MARGIN_PX + slot * PITCH_M * PIXELS_PER_METER,
  };
}

export function boardToPixel(xMeters: number, yMeters: number): Point {
  return {
    x: MARGIN_PX + xMeters * PIXELS_PER_METER,
    y: MARGIN_PX + yMeters * PIXELS_PER_METER,
  };
}

export function boardPixelSize(): { width: number; height: number } {
  const corner = holeToPixel(COLUMNS, "RAIL-");
  return { width: corner.x + MARGIN_PX, height: corner.y + MARGIN_PX };
}

/** Nearest hole within half a pitch of a pixel point, or null. */
export function pixelToHole(point: Point): { column: number; row: string } | null {
  const pitchPx = PITCH_M * PIXELS_PER_METER;
  const column = Math.round((point.x - MARGIN_PX) / pitchPx) + 1;
  if (column < 1 || column > COLUMNS) return null;
  let best: { row: string; distance: number } | null = null;
  for (const row of ALL_ROWS) {
    const slot = ROW_SLOT[row]!;
    const dy = Math.abs(point.y - (MARGIN_PX + slot * pitchPx));
    if (best === null || dy < best.distance) best = { row, distance: dy };
  }
  if (!best || best.distance > pitchPx / 2) return null;
  const dx = Math.abs(point.x - (MARGIN_PX + (column - 1) * pitchPx));
  if (dx > pitchPx / 2) return null;
  return { column, row: best.row };
}

/** Straight polyline a placement is drawn along (marker path). */
export function placementPath(holes: [number, string][]): Point[] {
  return holes.map(([column, row]) => holeToPixel(column, row));
}

export function pointAlong(path: Point[], t: number): Point {
  if (path.length < 2) return path[0] ?? { x: 0, y: 0 };
  const lengths: number[] = [];
  let total = 0;
  for (let i = 1; i < path.length; i++) {
    const a = path[i - 1]!;
    const b = path[i]!;
    const len = Math.hypot(b.x - a.x, b.y - a.y);
    lengths.push(len);
    total += len;
  }
  let target = Math.min(Math.max(t, 0), 1) * total;
  for (let i = 1; i < path.length; i++) {
    const len = lengths[i - 1]!;
    if (target <= len || i === path.length - 1) {
      const a = path[i - 1]!;
      const b = path[i]!;
      const frac = len > 0 ? target / len : 0;
      return { x: a.x + (b.x - a.x) * frac, y: a.y + (b.y - a.y) * frac };
    }
    target -= len;
  }
  return path[path.length - 1]!;
}
