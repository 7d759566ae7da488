// Board store: the single place protocol events land. Everything the
// renderer shows is read from here; the store computes no physics.

import { AnimationState, applyFrame, newAnimationState } from "./animation.js";
import {
  ComponentKind, FramePayload, PlacementSummary, ServerEvent, StateSummary,
} from "./protocol.js";

export interface BoardState {
  summary: StateSummary | null;
  frame: FramePayload | null;
  animation: AnimationState;
  lastError: { code: string; message: string } | null;
  connected: boolean;
}

export function newBoardState(): BoardState {
  return {
    summary: null,
    frame: null,
    animation: newAnimationState(),
    lastError: null,
    connected: false,
  };
}

export function placements(state: BoardState): PlacementSummary[] {
  return state.summary ? state.summary.placements : [];
}

export function kindsById(state: BoardState): Map<string, ComponentKind> {
  const map = new Map<string, ComponentKind>();
  for (const p of placements(state)) map.set(p.id, p.kind);
  return map;
}

export function occupiedHoles(state: BoardState): Set<string> {
  const used = new Set<string>();
  for (const p of placements(state)) {
    for (const [column, row] of p.holes) used.add(`${column}:${row}`);
  }
  return used;
}

export function applyEvent(state: BoardState, event: ServerEvent): void {
  switch (event.event) {
    case "StateUpdated":
      state.summary = event.summary;
      state.lastError = null;
      break;
    case "Frame":
      state.frame = event.frame;
      applyFrame(state.animation, event.frame.flows, kindsById(state));
      break;
    case "Error":
      state.lastError = { code: event.code, message: event.message };
      break;
    case "Ack":
      break;
  }
}
