// Placement ghost: the preview while a toolbox kind is selected and holes
// are being picked. Mirrors the engine's place preconditions so an invalid
// ghost is never committed (the engine still has the final word).

import { ALL_ROWS, COLUMNS } from "./board.js";
import { ComponentKind, HoleRef, TERMINALS } from "./protocol.js";

export interface PlacementGhost {
  kind: ComponentKind;
  holes: HoleRef[];       // picked so far, then the hovered candidate
  valid: boolean;
  reason: string | null;  // why invalid, for the status line
}

export function requiredHoles(kind: ComponentKind): number {
  return TERMINALS[kind].length;
}

export function ghostFor(
  kind: ComponentKind,
  holes: HoleRef[],
  occupied: Set<string>,
): PlacementGhost {
  const arity = requiredHoles(kind);
  let reason: string | null = null;
  if (holes.length > arity) {
    reason = `${kind} takes ${arity} holes`;
  }
  const seen = new Set<string>();
  for (const [column, row] of holes) {
    const key = `${column}:${row}`;
    if (column < 1 || column > COLUMNS || !ALL_ROWS.includes(row)) {
      reason = reason ?? `hole ${key} is off the board`;
    } else if (occupied.has(key)) {
      reason = reason ?? `hole ${key} is occupied`;
    } else if (seen.has(key)) {
      reason = reason ?? "holes must be distinct";
    }
    seen.add(key);
  }
  return { kind, holes, valid: reason === null, reason };
}

/** A ghost may be committed once it is valid and fully picked. */
export function readyToPlace(ghost: PlacementGhost): boolean {
  return ghost.valid && ghost.holes.length === requiredHoles(ghost.kind);
}
