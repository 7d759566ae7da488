// Wire protocol (v:1): newline-delimited JSON, one message per line.
// Every outgoing command is schema-validated here before it is sent; the
// UI never puts an unchecked object on the wire.

export const PROTOCOL_VERSION = 1;

export type ComponentKind =
  | "Resistor" | "Capacitor" | "Diode" | "LED" | "TransistorNPN"
  | "BatteryDC" | "SourceAC" | "Wire";

export const COMPONENT_KINDS: ComponentKind[] = [
  "Resistor", "Capacitor", "Diode", "LED", "TransistorNPN",
  "BatteryDC", "SourceAC", "Wire",
];

// Terminal labels per kind are protocol knowledge (they name the hole order
// in Place commands and the from/to fields of flow descriptors).
export const TERMINALS: Record<ComponentKind, string[]> = {
  Resistor: ["1", "2"],
  Capacitor: ["1", "2"],
  Diode: ["anode", "cathode"],
  LED: ["anode", "cathode"],
  TransistorNPN: ["collector", "base", "emitter"],
  BatteryDC: ["positive", "negative"],
  SourceAC: ["positive", "negative"],
  Wire: ["1", "2"],
};

export type HoleRef = [number, string];

export type Command =
  | { cmd: "Place"; id: number; kind: ComponentKind; holes: HoleRef[];
      params?: Record<string, number> }
  | { cmd: "Remove"; id: number; component_id: string }
  | { cmd: "SetParam"; id: number; component_id: string; param: string; value: number }
  | { cmd: "LoadLayout"; id: number; document: string }
  | { cmd: "SaveLayout"; id: number }
  | { cmd: "RunTransient"; id: number; dt: number; t_end: number;
      frame_decimation?: number }
  | { cmd: "Pause"; id: number }
  | { cmd: "Reset"; id: number }
  | { cmd: "QueryState"; id: number };

export interface FlowDescriptor {
  id: string;
  from: string;
  to: string;
  speed: number;
  active: boolean;
}

export interface FieldSampleRow {
  position: [number, number, number];
  b: [number, number, number];
}

export interface FramePayload {
  time: number;
  flows: FlowDescriptor[];
  leds: Record<string, number>;
  field: { samples: number[][] };
}

export interface PlacementSummary {
  id: string;
  kind: ComponentKind;
  params: Record<string, number>;
  holes: HoleRef[];
}

export interface StateSummary {
  mode: string;
  clock: number;
  energizable: boolean;
  placements: PlacementSummary[];
  solve: {
    converged: boolean;
    node_voltages: Record<string, number>;
    branch_currents: Record<string, number>;
  };
  last_component_id: string | null;
  toolbox: { kind: ComponentKind; params: Record<string, number> }[];
  layout_doc?: string;
}

export type ServerEvent =
  | { event: "Ack"; command_id: number }
  | { event: "Error"; command_id: number | null; code: string; message: string;
      context: Record<string, unknown> }
  | { event: "StateUpdated"; summary: StateSummary }
  | { event: "Frame"; frame: FramePayload };

const ROW_LABELS = new Set([
  "a", "b", "c", "d", "e", "f", "g", "h", "i", "j",
  "rail+", "rail-", "RAIL+", "RAIL-",
]);

export class SchemaError extends Error {}

function fail(message: string): never {
  throw new SchemaError(message);
}

function checkHoles(kind: ComponentKind, holes: HoleRef[]): void {
  const arity = TERMINALS[kind].length;
  if (holes.length !== arity) fail(`${kind} needs ${arity} holes`);
  for (const hole of holes) {
    if (!Array.isArray(hole) || hole.length !== 2) fail("hole must be [column,row]");
    const [column, row] = hole;
    if (!Number.isInteger(column) || column < 1 || column > 30) {
      fail(`column ${column} off board`);
    }
    if (typeof row !== "string" || !ROW_LABELS.has(row)) fail(`bad row ${row}`);
  }
}

function checkFinite(name: string, value: unknown): number {
  if (typeof value !== "number" || !Number.isFinite(value)) fail(`${name} must be finite`);
  return value;
}

/** Validate a command against the v:1 schema; throws SchemaError. */
export function validateCommand(command: Command): void {
  if (!Number.isInteger(command.id) || command.id < 0) fail("command id must be a non-negative integer");
  switch (command.cmd) {
    case "Place":
      if (!COMPONENT_KINDS.includes(command.kind)) fail(`unknown kind ${command.kind}`);
      checkHoles(command.kind, command.holes);
      if (command.params !== undefined) {
        for (const [key, value] of Object.entries(command.params)) {
          checkFinite(`params.${key}`, value);
        }
      }
      return;
    case "Remove":
      if (!command.component_id) fail("component_id required");
      return;
    case "SetParam":
      if (!command.component_id) fail("component_id required");
      if (!command.param) fail("param required");
      checkFinite("value", command.value);
      return;
    case "LoadLayout":
      if (typeof command.document !== "string") fail("document must be a string");
      return;
    case "RunTransient":
      if (!(checkFinite("dt", command.dt) > 0)) fail("dt must be > 0");
      if (checkFinite("t_end", command.t_end) < 0) fail("t_end must be >= 0");
      if (command.frame_decimation !== undefined &&
          (!Number.isInteger(command.frame_decimation) || command.frame_decimation < 1)) {
        fail("frame_decimation must be >= 1");
      }
      return;
    case "SaveLayout":
    case "Pause":
    case "Reset":
    case "QueryState":
      return;
    default:
      fail(`unknown command ${(command as { cmd: string }).cmd}`);
  }
}

export function encodeCommand(command: Command): string {
  validateCommand(command);
  return JSON.stringify({ v: PROTOCOL_VERSION, ...command });
}

export function decodeEvent(line: string): ServerEvent {
  let data: unknown;
  try {
    data = JSON.parse(line);
  } catch {
    fail(`event is not JSON: ${line.slice(0, 80)}`);
  }
  const obj = data as Record<string, unknown>;
  if (obj.v !== PROTOCOL_VERSION) fail(`unsupported event version ${obj.v}`);
  switch (obj.event) {
    case "Ack":
    case "Error":
    case "StateUpdated":
    case "Frame":
      return obj as unknown as ServerEvent;
    default:
      fail(`unknown event ${obj.event}`);
  }
}
