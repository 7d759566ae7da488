// Electron marker animation. Eight evenly spaced dots per branch; the dot
// phase advances only while the engine says the branch is active, at the
// engine-supplied normalized speed, in the electron direction.

import { FlowDescriptor, ComponentKind, TERMINALS } from "./protocol.js";

export const MARKERS_PER_BRANCH = 8;
// Full branch traversals per second at speed 1.0 (display scaling).
export const CYCLES_PER_SECOND = 1.2;

export interface BranchAnimation {
  componentId: string;
  phase: number;        // 0..1 rolling offset of the marker train
  speed: number;        // engine descriptor speed
  active: boolean;
  direction: 1 | -1;    // +1 = markers travel hole[0] -> hole[last]
}

export interface AnimationState {
  branches: Map<string, BranchAnimation>;
}

export function newAnimationState(): AnimationState {
  return { branches: new Map() };
}

/** Direction along the drawn path for a descriptor: +1 when electrons leave
 * the component's first terminal hole toward the last. */
export function pathDirection(kind: ComponentKind, flow: FlowDescriptor): 1 | -1 {
  const labels = TERMINALS[kind];
  return flow.from === labels[0] ? 1 : -1;
}

/** Replace descriptors after a frame; phases of surviving branches persist
 * so the dots do not jump. */
export function applyFrame(
  state: AnimationState,
  flows: FlowDescriptor[],
  kinds: Map<string, ComponentKind>,
): void {
  const seen = new Set<string>();
  for (const flow of flows) {
    const kind = kinds.get(flow.id);
    if (!kind || kind === "Wire") continue;
    seen.add(flow.id);
    const existing = state.branches.get(flow.id);
    state.branches.set(flow.id, {
      componentId: flow.id,
      phase: existing ? existing.phase : 0,
      speed: flow.speed,
      active: flow.active,
      direction: pathDirection(kind, flow),
    });
  }
  for (const id of [...state.branches.keys()]) {
    if (!seen.has(id)) state.branches.delete(id);
  }
}

/** Advance marker phases by a wall-clock interval (seconds). Inactive
 * branches do not move. */
export function advance(state: AnimationState, dtSeconds: number): void {
  for (const branch of state.branches.values()) {
    if (!branch.active) continue;
    const delta = branch.direction * branch.speed * CYCLES_PER_SECOND * dtSeconds;
    branch.phase = ((branch.phase + delta) % 1 + 1) % 1;
  }
}

/** Marker positions (parametric 0..1 along the drawn branch path). */
export function markerPositions(branch: BranchAnimation): number[] {
  const positions: number[] = [];
  for (let i = 0; i < MARKERS_PER_BRANCH; i++) {
    const t = (branch.phase + i / MARKERS_PER_BRANCH) % 1;
    positions.push(((t % 1) + 1) % 1);
  }
  return positions;
}
