// App bootstrap: toolbox panel, board canvas, parameter editor, and the
// session connection. Left-click a toolbox kind then the required holes to
// place; right-click a placement to remove it; edit values in the panel.

import { advance } from "./animation.js";
import { pixelToHole } from "./board.js";
import { SessionClient, WebSocketTransport } from "./client.js";
import { ghostFor, PlacementGhost, readyToPlace, requiredHoles } from "./ghost.js";
import { ComponentKind, HoleRef } from "./protocol.js";
import {
  canvasSize, drawBoard, drawElectrons, drawFieldOverlay, drawGhost,
  drawPlacements,
} from "./render.js";
import { applyEvent, BoardState, newBoardState, occupiedHoles, placements } from "./store.js";

const WS_URL = (window as unknown as { VOLTA_WS_URL?: string }).VOLTA_WS_URL
  ?? "ws://127.0.0.1:7444/";

const state: BoardState = newBoardState();
let selectedKind: ComponentKind | null = null;
let pickedHoles: HoleRef[] = [];
let ghost: PlacementGhost | null = null;
let overlayEnabled = true;
let client: SessionClient | null = null;

const canvas = document.getElementById("board") as HTMLCanvasElement;
const toolboxDiv = document.getElementById("toolbox") as HTMLDivElement;
const panelDiv = document.getElementById("panel") as HTMLDivElement;
const statusDiv = document.getElementById("status") as HTMLDivElement;
const overlayToggle = document.getElementById("overlay-toggle") as HTMLInputElement;
const ctx = canvas.getContext("2d")!;

function setStatus(text: string, isError = false): void {
  statusDiv.textContent = text;
  statusDiv.className = isError ? "status error" : "status";
}

function renderToolbox(): void {
  toolboxDiv.innerHTML = "";
  const entries = state.summary?.toolbox ?? [];
  for (const entry of entries) {
    const button = document.createElement("button");
    button.textContent = entry.kind;
    button.className = entry.kind === selectedKind ? "tool selected" : "tool";
    button.onclick = () => {
      selectedKind = entry.kind;
      pickedHoles = [];
      ghost = null;
      renderToolbox();
      setStatus(`${entry.kind}: click ${requiredHoles(entry.kind)} holes`);
    };
    toolboxDiv.appendChild(button);
  }
}

function renderPanel(): void {
  panelDiv.innerHTML = "";
  for (const placement of placements(state)) {
    const row = document.createElement("div");
    row.className = "component-row";
    const title = document.createElement("strong");
    title.textContent = `${placement.id} (${placement.kind})`;
    row.appendChild(title);
    for (const [param, value] of Object.entries(placement.params)) {
      const label = document.createElement("label");
      label.textContent = ` ${param} `;
      const input = document.createElement("input");
      input.type = "number";
      input.step = "any";
      input.value = String(value);
      input.onchange = () => {
        const parsed = Number(input.value);
        if (Number.isFinite(parsed) && client) {
          void client.send({ cmd: "SetParam", component_id: placement.id,
                             param, value: parsed });
        }
      };
      label.appendChild(input);
      row.appendChild(label);
    }
    panelDiv.appendChild(row);
  }
}

function redraw(): void {
  drawBoard(ctx);
  drawFieldOverlay(ctx, state, overlayEnabled);
  drawPlacements(ctx, state);
  drawElectrons(ctx, state);
  drawGhost(ctx, ghost);
}

function canvasPoint(event: MouseEvent): { x: number; y: number } {
  const rect = canvas.getBoundingClientRect();
  return { x: event.clientX - rect.left, y: event.clientY - rect.top };
}

function handleLeftClick(event: MouseEvent): void {
  if (!selectedKind || !client) return;
  const hole = pixelToHole(canvasPoint(event));
  if (!hole) return;
  const candidate: HoleRef[] = [...pickedHoles, [hole.column, hole.row]];
  ghost = ghostFor(selectedKind, candidate, occupiedHoles(state));
  if (!ghost.valid) {
    setStatus(ghost.reason ?? "invalid placement", true);
    pickedHoles = [];
    return;
  }
  pickedHoles = candidate;
  if (readyToPlace(ghost)) {
    void client.send({ cmd: "Place", kind: selectedKind, holes: pickedHoles });
    pickedHoles = [];
    ghost = null;
  }
}

function handleRightClick(event: MouseEvent): void {
  event.preventDefault();
  if (!client) return;
  const hole = pixelToHole(canvasPoint(event));
  if (!hole) return;
  const key = `${hole.column}:${hole.row}`;
  for (const placement of placements(state)) {
    if (placement.holes.some(([c, r]) => `${c}:${r}` === key)) {
      void client.send({ cmd: "Remove", component_id: placement.id });
      return;
    }
  }
}

async function connect(): Promise<void> {
  setStatus(`connecting to ${WS_URL} ...`);
  const transport = new WebSocketTransport(WS_URL);
  try {
    await transport.ready();
  } catch {
    setStatus(`cannot reach ${WS_URL}; commands disabled until reconnect`, true);
    setTimeout(connect, 2000);
    return;
  }
  state.connected = true;
  client = new SessionClient(transport);
  client.onEvent((event) => {
    applyEvent(state, event);
    if (event.event === "Error") {
      setStatus(`${event.code}: ${event.message}`, true);
    }
    if (event.event === "StateUpdated") {
      renderToolbox();
      renderPanel();
    }
  });
  await client.send({ cmd: "QueryState" });
  setStatus("connected");
}

function init(): void {
  const size = canvasSize();
  canvas.width = size.width;
  canvas.height = size.height;
  canvas.addEventListener("click", handleLeftClick);
  canvas.addEventListener("contextmenu", handleRightClick);
  overlayToggle.addEventListener("change", () => {
    overlayEnabled = overlayToggle.checked;
  });
  let last = performance.now();
  const tick = (now: number) => {
    advance(state.animation, (now - last) / 1000);
    last = now;
    redraw();
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);
  void connect();
}

init();
