import { describe, expect, it } from "vitest";
import {
  CYCLES_PER_SECOND, MARKERS_PER_BRANCH, advance, applyFrame,
  markerPositions, newAnimationState, pathDirection,
} from "../src/animation.js";
import { ComponentKind, FlowDescriptor } from "../src/protocol.js";

function flow(id: string, speed: number, active: boolean,
              from = "2", to = "1"): FlowDescriptor {
  return { id, from, to, speed, active };
}

const KINDS = new Map<string, ComponentKind>([
  ["R1", "Resistor"], ["V1", "BatteryDC"], ["W1", "Wire"],
]);

describe("electron markers", () => {
  it("markers advance only when the descriptor is active", () => {
    const state = newAnimationState();
    applyFrame(state, [flow("R1", 0.5, false)], KINDS);
    advance(state, 1.0);
    expect(state.branches.get("R1")!.phase).toBe(0);

    applyFrame(state, [flow("R1", 0.5, true)], KINDS);
    advance(state, 1.0);
    expect(state.branches.get("R1")!.phase).not.toBe(0);
  });

  it("phase displacement is proportional to descriptor speed", () => {
    const state = newAnimationState();
    applyFrame(state, [flow("R1", 0.25, true, "1", "2")], KINDS);
    advance(state, 0.5);
    const expected = 0.25 * CYCLES_PER_SECOND * 0.5;
    expect(state.branches.get("R1")!.phase).toBeCloseTo(expected, 12);
  });

  it("higher speed moves markers strictly farther (circular distance)", () => {
    const travelled = (speed: number) => {
      const state = newAnimationState();
      applyFrame(state, [flow("R1", speed, true)], KINDS);
      advance(state, 0.5);
      const phase = state.branches.get("R1")!.phase;
      return Math.min(phase, 1 - phase);
    };
    expect(travelled(0.6)).toBeGreaterThan(travelled(0.2));
  });

  it("electron direction flips the travel direction", () => {
    // resistor terminals are ["1","2"]; from="1" means electrons leave the
    // first hole, i.e. travel path-forward
    expect(pathDirection("Resistor", flow("R1", 1, true, "1", "2"))).toBe(1);
    expect(pathDirection("Resistor", flow("R1", 1, true, "2", "1"))).toBe(-1);
    expect(pathDirection("BatteryDC", flow("V1", 1, true, "positive", "negative"))).toBe(1);
  });

  it("keeps phase across frames and drops stale branches", () => {
    const state = newAnimationState();
    applyFrame(state, [flow("R1", 0.5, true)], KINDS);
    advance(state, 0.25);
    const phase = state.branches.get("R1")!.phase;
    applyFrame(state, [flow("R1", 0.1, true)], KINDS);
    expect(state.branches.get("R1")!.phase).toBe(phase);
    applyFrame(state, [], KINDS);
    expect(state.branches.size).toBe(0);
  });

  it("wires never animate", () => {
    const state = newAnimationState();
    applyFrame(state, [flow("W1", 0.9, true)], KINDS);
    expect(state.branches.has("W1")).toBe(false);
  });

  it("emits a constant-density marker train", () => {
    const state = newAnimationState();
    applyFrame(state, [flow("R1", 0.5, true)], KINDS);
    const positions = markerPositions(state.branches.get("R1")!);
    expect(positions).toHaveLength(MARKERS_PER_BRANCH);
    const sorted = [...positions].sort((a, b) => a - b);
    for (let i = 1; i < sorted.length; i++) {
      expect(sorted[i]! - sorted[i - 1]!).toBeCloseTo(1 / MARKERS_PER_BRANCH, 9);
    }
  });
});
