// Canvas renderer: board, placements, electron markers, LED glow, field
// overlay. Pure drawing; all quantities come from the store.

import { markerPositions } from "./animation.js";
import {
  ALL_ROWS, COLUMNS, Point, boardPixelSize, boardToPixel, holeToPixel,
  placementPath, pointAlong,
} from "./board.js";
import { buildGlyphs, overlayVisible, MAX_GLYPH_PX } from "./overlay.js";
import { PlacementGhost } from "./ghost.js";
import { BoardState, placements } from "./store.js";

const KIND_COLORS: Record<string, string> = {
  Resistor: "#c8913a", Capacitor: "#4a79c4", Diode: "#777777", LED: "#d04b3c",
  TransistorNPN: "#7b51a1", BatteryDC: "#2f7d32", SourceAC: "#1d8a8a",
  Wire: "#444444",
};

export function canvasSize(): { width: number; height: number } {
  return boardPixelSize();
}

export function drawBoard(ctx: CanvasRenderingContext2D): void {
  const { width, height } = boardPixelSize();
  ctx.fillStyle = "#f4f1e8";
  ctx.fillRect(0, 0, width, height);
  ctx.fillStyle = "#b9b4a4";
  for (let column = 1; column <= COLUMNS; column++) {
    for (const row of ALL_ROWS) {
      const { x, y } = holeToPixel(column, row);
      ctx.beginPath();
      ctx.arc(x, y, 2.2, 0, Math.PI * 2);
      ctx.fill();
    }
  }
}

export function drawPlacements(ctx: CanvasRenderingContext2D, state: BoardState): void {
  const brightness = state.frame?.leds ?? {};
  for (const placement of placements(state)) {
    const path = placementPath(placement.holes);
    if (path.length < 2) continue;
    ctx.strokeStyle = KIND_COLORS[placement.kind] ?? "#333";
    ctx.lineWidth = placement.kind === "Wire" ? 2.5 : 5;
    ctx.beginPath();
    ctx.moveTo(path[0]!.x, path[0]!.y);
    for (const point of path.slice(1)) ctx.lineTo(point.x, point.y);
    ctx.stroke();
    if (placement.kind === "LED") {
      const level = brightness[placement.id] ?? 0;
      if (level > 0) {
        const middle = pointAlong(path, 0.5);
        const radius = 6 + 10 * level;
        const glow = ctx.createRadialGradient(middle.x, middle.y, 1,
                                              middle.x, middle.y, radius);
        glow.addColorStop(0, `rgba(255,80,60,${0.35 + 0.6 * level})`);
        glow.addColorStop(1, "rgba(255,80,60,0)");
        ctx.fillStyle = glow;
        ctx.beginPath();
        ctx.arc(middle.x, middle.y, radius, 0, Math.PI * 2);
        ctx.fill();
      }
    }
    const label = pointAlong(path, 0.5);
    ctx.fillStyle = "#222";
    ctx.font = "10px sans-serif";
    ctx.fillText(placement.id, label.x + 6, label.y - 6);
  }
}

export function drawElectrons(ctx: CanvasRenderingContext2D, state: BoardState): void {
  const paths = new Map<string, Point[]>();
  for (const placement of placements(state)) {
    paths.set(placement.id, placementPath(placement.holes));
  }
  ctx.fillStyle = "#ffd978";
  ctx.strokeStyle = "#8a6d1d";
  for (const branch of state.animation.branches.values()) {
    if (!branch.active) continue;
    const path = paths.get(branch.componentId);
    if (!path || path.length < 2) continue;
    for (const t of markerPositions(branch)) {
      const point = pointAlong(path, t);
      ctx.beginPath();
      ctx.arc(point.x, point.y, 3, 0, Math.PI * 2);
      ctx.fill();
      ctx.stroke();
    }
  }
}

export function drawFieldOverlay(ctx: CanvasRenderingContext2D, state: BoardState,
                                 enabled: boolean): void {
  const samples = state.frame?.field.samples ?? [];
  if (!enabled || !overlayVisible(samples)) return;
  for (const glyph of buildGlyphs(samples)) {
    if (glyph.length <= 0) continue;
    const center = boardToPixel(glyph.x, glyph.y);
    const size = glyph.length * MAX_GLYPH_PX;
    ctx.strokeStyle = "rgba(40,90,200,0.75)";
    ctx.fillStyle = "rgba(40,90,200,0.75)";
    ctx.lineWidth = 1.2;
    if (glyph.zSign !== 0) {
      // out-of-plane: dot (toward viewer) or cross (away)
      ctx.beginPath();
      ctx.arc(center.x, center.y, size / 2, 0, Math.PI * 2);
      ctx.stroke();
      if (glyph.zSign > 0) {
        ctx.beginPath();
        ctx.arc(center.x, center.y, Math.max(size / 6, 1), 0, Math.PI * 2);
        ctx.fill();
      } else {
        const arm = size / 2 * Math.SQRT1_2;
        ctx.beginPath();
        ctx.moveTo(center.x - arm, center.y - arm);
        ctx.lineTo(center.x + arm, center.y + arm);
        ctx.moveTo(center.x - arm, center.y + arm);
        ctx.lineTo(center.x + arm, center.y - arm);
        ctx.stroke();
      }
    } else {
      const dx = Math.cos(glyph.angle) * size;
      const dy = Math.sin(glyph.angle) * size;
      ctx.beginPath();
      ctx.moveTo(center.x - dx / 2, center.y - dy / 2);
      ctx.lineTo(center.x + dx / 2, center.y + dy / 2);
      ctx.stroke();
    }
  }
}

export function drawGhost(ctx: CanvasRenderingContext2D, ghost: PlacementGhost | null): void {
  if (!ghost || ghost.holes.length === 0) return;
  ctx.strokeStyle = ghost.valid ? "rgba(50,160,60,0.8)" : "rgba(200,50,50,0.8)";
  ctx.setLineDash([5, 4]);
  ctx.lineWidth = 3;
  const points = ghost.holes.map(([column, row]) => holeToPixel(column, row));
  ctx.beginPath();
  for (const [index, point] of points.entries()) {
    if (index === 0) ctx.moveTo(point.x, point.y);
    else ctx.lineTo(point.x, point.y);
    ctx.moveTo(point.x + 5, point.y);
    ctx.arc(point.x, point.y, 5, 0, Math.PI * 2);
    ctx.moveTo(point.x, point.y);
  }
  ctx.stroke();
  ctx.setLineDash([]);
}
