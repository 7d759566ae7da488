// End-to-end: the UI stack (client, store, animation, overlay) drives a
// real engine process through the scripted battery-LED-resistor transcript.
// Animation activation must track the engine's descriptors, raising R must
// strictly slow the displayed markers, and the field overlay must hide when
// the loop opens.

import { afterAll, beforeAll, describe, expect, it } from "vitest";
import { advance, newAnimationState, applyFrame } from "../src/animation.js";
import { SessionClient } from "../src/client.js";
import { overlayVisible } from "../src/overlay.js";
import {
  applyEvent, kindsById, newBoardState, BoardState,
} from "../src/store.js";
import { EngineHandle, TcpTransport, startEngine, waitFor } from "./helpers.js";

let engine: EngineHandle;
let client: SessionClient;
let state: BoardState;

beforeAll(async () => {
  engine = await startEngine("6x3");
  const transport = await TcpTransport.connect("127.0.0.1", engine.port);
  client = new SessionClient(transport);
  state = newBoardState();
  client.onEvent((event) => applyEvent(state, event));
}, 30000);

afterAll(() => {
  client?.close();
  engine?.stop();
});

function activeFlows(): Map<string, { active: boolean; speed: number }> {
  const map = new Map<string, { active: boolean; speed: number }>();
  for (const flow of state.frame?.flows ?? []) {
    map.set(flow.id, { active: flow.active, speed: flow.speed });
  }
  return map;
}

/** Marker travel over a quarter second of wall clock, as circular distance
 * along the branch path (markers may run either direction). */
function displayedSpeed(componentId: string): number {
  const probe = newAnimationState();
  applyFrame(probe, state.frame?.flows ?? [], kindsById(state));
  advance(probe, 0.25);
  const phase = probe.branches.get(componentId)?.phase ?? 0;
  return Math.min(phase, 1 - phase);
}

describe("scripted closed-loop transcript through the UI", () => {
  it("battery alone: no animation, no field overlay", async () => {
    const ack = await client.send({
      cmd: "Place", kind: "BatteryDC", holes: [[1, "a"], [5, "a"]],
    });
    expect(ack.event).toBe("Ack");
    await waitFor(() => state.frame !== null);
    expect([...activeFlows().values()].every((f) => !f.active)).toBe(true);
    advance(state.animation, 1.0);
    for (const branch of state.animation.branches.values()) {
      expect(branch.phase).toBe(0);
    }
    expect(overlayVisible(state.frame!.field.samples)).toBe(false);
  });

  it("closing the loop activates exactly what the engine activates", async () => {
    await client.send({ cmd: "Place", kind: "LED", holes: [[1, "b"], [10, "a"]] });
    await client.send({ cmd: "Place", kind: "Resistor", holes: [[10, "b"], [15, "a"]] });
    await client.send({ cmd: "Place", kind: "Wire", holes: [[15, "b"], [5, "b"]] });
    await waitFor(() => {
      const flows = activeFlows();
      return flows.size === 3 && [...flows.values()].every((f) => f.active);
    });

    // animation activation mirrors the engine descriptors one-for-one
    for (const [id, flow] of activeFlows()) {
      const branch = state.animation.branches.get(id);
      expect(branch).toBeDefined();
      expect(branch!.active).toBe(flow.active);
      expect(branch!.speed).toBe(flow.speed);
    }
    advance(state.animation, 0.5);
    for (const branch of state.animation.branches.values()) {
      expect(branch.phase).not.toBe(0);
    }

    // LED glows and the field overlay becomes visible
    expect(state.frame!.leds["L1"]).toBeGreaterThan(0);
    expect(overlayVisible(state.frame!.field.samples)).toBe(true);
  });

  it("raising R strictly reduces the displayed marker speed", async () => {
    const before = displayedSpeed("R1");
    expect(before).toBeGreaterThan(0);
    const response = await client.send({
      cmd: "SetParam", component_id: "R1", param: "resistance", value: 4700,
    });
    expect(response.event).toBe("Ack");
    await waitFor(() => {
      const r1 = activeFlows().get("R1");
      return r1 !== undefined && r1.speed > 0 && displayedSpeed("R1") < before;
    });
    const after = displayedSpeed("R1");
    expect(after).toBeLessThan(before);
    expect(after).toBeGreaterThan(0);
  });

  it("removing the wire deactivates everything and hides the overlay", async () => {
    await client.send({ cmd: "Remove", component_id: "W1" });
    await waitFor(() => [...activeFlows().values()].every((f) => !f.active));

    for (const branch of state.animation.branches.values()) {
      expect(branch.active).toBe(false);
    }
    const frozen = new Map([...state.animation.branches].map(
      ([id, b]) => [id, b.phase]));
    advance(state.animation, 1.0);
    for (const [id, branch] of state.animation.branches) {
      expect(branch.phase).toBe(frozen.get(id));
    }
    expect(overlayVisible(state.frame!.field.samples)).toBe(false);
    expect(state.frame!.leds["L1"]).toBe(0);
  });

  it("schema gate blocks invalid commands before they reach the wire", async () => {
    await expect(async () => client.send({
      cmd: "Place", kind: "Resistor", holes: [[0, "a"], [5, "a"]],
    })).rejects.toThrow();
  });
});
