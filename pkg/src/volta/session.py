"""Live editing/solving loop: commands in, events out.

A session owns one breadboard. Mutating commands re-solve the DC operating
point synchronously and emit a fresh visual frame; transients advance step
by step so Pause, Reset, and edits take effect at step boundaries. Commands
are atomic: a failed command leaves every observable unchanged and yields a
single Error event. Event payload serialization is deterministic, so a
replayed transcript is byte-identical.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field as dc_field
from typing import Any, Iterator, Optional

from .breadboard import (BoardError, BreadboardLayout, ConnectivityReport,
                         Hole, connectivity, extract_netlist, place, remove)
from .model import (Component, ComponentKind, NetlistError, default_params,
                    make_component, toolbox_catalog, validate_params)
from .netio import LayoutDocumentError, load_layout, save_layout
from .solver import SolveResult, SolverError, solve_dc, transient_steps
from .viz import GridConfig, VisualFrame, make_frame

PROTOCOL_VERSION = 1
DEFAULT_FRAME_DECIMATION = 50

_MNEMONIC = {ComponentKind.Resistor: "R", ComponentKind.Capacitor: "C",
             ComponentKind.Diode: "D", ComponentKind.LED: "L",
             ComponentKind.TransistorNPN: "Q", ComponentKind.BatteryDC: "V",
             ComponentKind.SourceAC: "VAC", ComponentKind.Wire: "W"}


# ---------------------------------------------------------------- commands

@dataclass(frozen=True)
class Command:
    id: int


@dataclass(frozen=True)
class Place(Command):
    kind: ComponentKind
    holes: tuple[Hole, ...]
    params: Optional[dict[str, float]] = None


@dataclass(frozen=True)
class Remove(Command):
    component_id: str


@dataclass(frozen=True)
class SetParam(Command):
    component_id: str
    param: str
    value: float


@dataclass(frozen=True)
class LoadLayout(Command):
    document: str


@dataclass(frozen=True)
class SaveLayout(Command):
    pass


@dataclass(frozen=True)
class RunTransient(Command):
    dt: float
    t_end: float
    frame_decimation: int = DEFAULT_FRAME_DECIMATION


@dataclass(frozen=True)
class Pause(Command):
    pass


@dataclass(frozen=True)
class Reset(Command):
    pass


@dataclass(frozen=True)
class QueryState(Command):
    pass


# ------------------------------------------------------------------ events

@dataclass(frozen=True)
class Ack:
    command_id: int


@dataclass(frozen=True)
class Error:
    command_id: Optional[int]
    code: str
    message: str
    context: dict[str, Any] = dc_field(default_factory=dict)


@dataclass(frozen=True)
class StateUpdated:
    summary: dict[str, Any]


@dataclass(frozen=True)
class Frame:
    frame: VisualFrame


Event = Any  # Ack | Error | StateUpdated | Frame


# ----------------------------------------------------------- serialization

def _frame_payload(frame: VisualFrame) -> dict[str, Any]:
    return {
        "time": frame.time,
        "flows": [{"id": f.component_id, "from": f.electron_from, "to": f.electron_to,
                   "speed": f.speed, "active": f.active} for f in frame.flows],
        "leds": {cid: frame.led_brightness[cid] for cid in sorted(frame.led_brightness)},
        "field": {
            "samples": [[*s.position, *s.b] for s in frame.field],
        },
    }


def event_to_json(event: Event) -> str:
    """One event per line; field order is fixed so transcripts are stable."""
    if isinstance(event, Ack):
        payload = {"v": PROTOCOL_VERSION, "event": "Ack", "command_id": event.command_id}
    elif isinstance(event, Error):
        payload = {"v": PROTOCOL_VERSION, "event": "Error", "command_id": event.command_id,
                   "code": event.code, "message": event.message, "context": event.context}
    elif isinstance(event, StateUpdated):
        payload = {"v": PROTOCOL_VERSION, "event": "StateUpdated", "summary": event.summary}
    elif isinstance(event, Frame):
        payload = {"v": PROTOCOL_VERSION, "event": "Frame", "frame": _frame_payload(event.frame)}
    else:
        raise TypeError(f"not an event: {event!r}")
    return json.dumps(payload, separators=(",", ":"), allow_nan=False)


class CommandDecodeError(Exception):
    def __init__(self, message: str, command_id: Optional[int] = None):
        self.command_id = command_id
        super().__init__(message)


def command_from_json(line: str) -> Command:
    """Decode one wire message; raises CommandDecodeError on anything off."""
    try:
        data = json.loads(line)
    except json.JSONDecodeError as exc:
        raise CommandDecodeError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise CommandDecodeError("message must be an object")
    command_id = data.get("id")
    if data.get("v") != PROTOCOL_VERSION:
        raise CommandDecodeError("missing or unsupported protocol version",
                                 command_id if isinstance(command_id, int) else None)
    if not isinstance(command_id, int):
        raise CommandDecodeError("command id must be an integer")
    cmd = data.get("cmd")
    try:
        if cmd == "Place":
            kind = ComponentKind(data["kind"])
            holes = tuple(Hole(int(c), str(r)) for c, r in data["holes"])
            params = data.get("params")
            if params is not None and not isinstance(params, dict):
                raise CommandDecodeError("params must be an object", command_id)
            return Place(command_id, kind, holes, params)
        if cmd == "Remove":
            return Remove(command_id, str(data["component_id"]))
        if cmd == "SetParam":
            return SetParam(command_id, str(data["component_id"]), str(data["param"]),
                            float(data["value"]))
        if cmd == "LoadLayout":
            return LoadLayout(command_id, str(data["document"]))
        if cmd == "SaveLayout":
            return SaveLayout(command_id)
        if cmd == "RunTransient":
            return RunTransient(command_id, float(data["dt"]), float(data["t_end"]),
                                int(data.get("frame_decimation", DEFAULT_FRAME_DECIMATION)))
        if cmd == "Pause":
            return Pause(command_id)
        if cmd == "Reset":
            return Reset(command_id)
        if cmd == "QueryState":
            return QueryState(command_id)
    except (KeyError, TypeError, ValueError) as exc:
        raise CommandDecodeError(f"bad {cmd} payload: {exc}", command_id) from exc
    raise CommandDecodeError(f"unknown command {cmd!r}", command_id)


def command_to_json(command: Command) -> str:
    base: dict[str, Any] = {"v": PROTOCOL_VERSION}
    if isinstance(command, Place):
        base.update(cmd="Place", id=command.id, kind=command.kind.value,
                    holes=[[h.column, h.row] for h in command.holes])
        if command.params is not None:
            base["params"] = command.params
    elif isinstance(command, Remove):
        base.update(cmd="Remove", id=command.id, component_id=command.component_id)
    elif isinstance(command, SetParam):
        base.update(cmd="SetParam", id=command.id, component_id=command.component_id,
                    param=command.param, value=command.value)
    elif isinstance(command, LoadLayout):
        base.update(cmd="LoadLayout", id=command.id, document=command.document)
    elif isinstance(command, SaveLayout):
        base.update(cmd="SaveLayout", id=command.id)
    elif isinstance(command, RunTransient):
        base.update(cmd="RunTransient", id=command.id, dt=command.dt, t_end=command.t_end,
                    frame_decimation=command.frame_decimation)
    elif isinstance(command, (Pause, Reset, QueryState)):
        base.update(cmd=type(command).__name__, id=command.id)
    else:
        raise TypeError(f"not a command: {command!r}")
    return json.dumps(base, separators=(",", ":"), allow_nan=False)


# ----------------------------------------------------------------- session

class _TransientRun:
    def __init__(self, steps: Iterator[SolveResult], total_steps: int,
                 decimation: int, command_id: int):
        self.steps = steps
        self.total_steps = total_steps
        self.decimation = max(1, decimation)
        self.command_id = command_id
        self.steps_done = 0


class Session:
    """One student's board plus its live solve state."""

    def __init__(self, grid: GridConfig = GridConfig()):
        self.grid = grid
        self.layout = BreadboardLayout()
        self.report: ConnectivityReport = connectivity(self.layout)
        self.result: SolveResult = solve_dc(extract_netlist(self.layout))
        self.mode = "dc-live"
        self.clock = 0.0
        self.cap_state: dict[str, float] = {}
        self.last_component_id: Optional[str] = None
        self._counters: dict[str, int] = {}
        self._transient: Optional[_TransientRun] = None

    # -- public -------------------------------------------------------

    @property
    def transient_active(self) -> bool:
        return self._transient is not None

    def apply(self, command: Command) -> list[Event]:
        handler = {
            Place: self._do_place, Remove: self._do_remove, SetParam: self._do_set_param,
            LoadLayout: self._do_load, SaveLayout: self._do_save,
            RunTransient: self._do_run_transient, Pause: self._do_pause,
            Reset: self._do_reset, QueryState: self._do_query,
        }.get(type(command))
        if handler is None:
            return [Error(command.id, "UnknownCommand", f"unhandled {type(command).__name__}")]
        return handler(command)

    def step(self) -> list[Event]:
        """Advance a running transient by one solver step.

        Emits a Frame at every decimation boundary and at the final step; an
        aborted (non-converging) run ends with an Error event.
        """
        run = self._transient
        if run is None:
            return []
        result = next(run.steps, None)
        if result is None:
            command_id = run.command_id
            aborted = run.steps_done < run.total_steps
            self._transient = None
            self.mode = "idle"
            events: list[Event] = []
            if aborted:
                events.append(Error(command_id, "NoConvergence",
                                    f"transient stalled after {run.steps_done} steps",
                                    {"time": self.clock}))
            events.append(StateUpdated(self._summary()))
            return events
        run.steps_done += 1
        self.clock = result.time
        self.result = result
        at_boundary = run.steps_done % run.decimation == 0
        final = run.steps_done == run.total_steps
        if at_boundary or final:
            frame = make_frame(self.layout, result, self.report, self.grid)
            return [Frame(frame)]
        return []

    def drain(self) -> list[Event]:
        """Run a transient to completion (in-process convenience)."""
        events: list[Event] = []
        while self.transient_active:
            events.extend(self.step())
        return events

    # -- command handlers ----------------------------------------------

    def _do_place(self, command: Place) -> list[Event]:
        params = default_params(command.kind)
        if command.params:
            try:
                params = params.replace(**{str(k): float(v)
                                           for k, v in command.params.items()})
            except (TypeError, ValueError) as exc:
                return [Error(command.id, "InvalidParam", str(exc))]
        violations = validate_params(command.kind, params)
        if violations:
            return [Error(command.id, "InvalidParam", "; ".join(violations))]
        mnemonic = _MNEMONIC[command.kind]
        serial = self._counters.get(mnemonic, 0) + 1
        component = make_component(f"{mnemonic}{serial}", command.kind, params)
        try:
            new_layout = place(self.layout, component, command.holes)
        except (BoardError, NetlistError) as exc:
            return [Error(command.id, type(exc).__name__, str(exc))]
        events = self._commit_layout(command.id, new_layout, new_component=component.id)
        if not isinstance(events[0], Error):
            self._counters[mnemonic] = serial
        return events

    def _do_remove(self, command: Remove) -> list[Event]:
        try:
            new_layout = remove(self.layout, command.component_id)
        except BoardError as exc:
            return [Error(command.id, type(exc).__name__, str(exc))]
        return self._commit_layout(command.id, new_layout)

    def _do_set_param(self, command: SetParam) -> list[Event]:
        placement = self.layout.find(command.component_id)
        if placement is None:
            return [Error(command.id, "UnknownComponent",
                          f"no placement with id {command.component_id!r}")]
        comp = placement.component
        try:
            params = comp.params.replace(**{command.param: float(command.value)})
        except (TypeError, ValueError):
            return [Error(command.id, "InvalidParam",
                          f"bad parameter {command.param!r}")]
        violations = validate_params(comp.kind, params)
        if violations:
            return [Error(command.id, "InvalidParam", "; ".join(violations))]
        updated = Component(id=comp.id, kind=comp.kind, params=params)
        new_layout = BreadboardLayout(tuple(
            p if p.component.id != comp.id
            else type(p)(component=updated, holes=p.holes)
            for p in self.layout.placements))
        return self._commit_layout(command.id, new_layout)

    def _do_load(self, command: LoadLayout) -> list[Event]:
        try:
            new_layout = load_layout(command.document)
        except LayoutDocumentError as exc:
            return [Error(command.id, type(exc).__name__, str(exc))]
        events = self._commit_layout(command.id, new_layout)
        if not isinstance(events[0], Error):
            self._counters = _counters_from_layout(new_layout)
        return events

    def _do_save(self, command: SaveLayout) -> list[Event]:
        summary = self._summary()
        summary["layout_doc"] = save_layout(self.layout).dumps()
        return [Ack(command.id), StateUpdated(summary)]

    def _do_run_transient(self, command: RunTransient) -> list[Event]:
        if self.mode == "transient-running":
            return [Error(command.id, "AlreadyRunning", "a transient is already running")]
        if not command.dt > 0 or command.t_end < 0 or command.frame_decimation < 1:
            return [Error(command.id, "InvalidConfig",
                          "dt must be > 0, t_end >= 0, frame_decimation >= 1")]
        netlist = extract_netlist(self.layout, self.report,
                                  only=self.report.energizable_ids())
        n_steps = int(math.floor(command.t_end / command.dt + 1e-9))
        steps = transient_steps(netlist, command.dt, n_steps, t_start=self.clock,
                                cap_state=self.cap_state)
        self._transient = _TransientRun(steps, n_steps, command.frame_decimation,
                                        command.id)
        self.mode = "transient-running"
        return [Ack(command.id), StateUpdated(self._summary())]

    def _do_pause(self, command: Pause) -> list[Event]:
        if self._transient is not None:
            self._transient = None
            self.mode = "idle"
        return [Ack(command.id), StateUpdated(self._summary())]

    def _do_reset(self, command: Reset) -> list[Event]:
        self._transient = None
        self.clock = 0.0
        self.cap_state = {}
        return self._commit_layout(command.id, self.layout)

    def _do_query(self, command: QueryState) -> list[Event]:
        return [Ack(command.id), StateUpdated(self._summary())]

    # -- internals ------------------------------------------------------

    def _commit_layout(self, command_id: int, new_layout: BreadboardLayout,
                       new_component: Optional[str] = None) -> list[Event]:
        """Re-solve for a candidate layout; commit only if the solve stands."""
        report = connectivity(new_layout)
        netlist = extract_netlist(new_layout, report, only=report.energizable_ids())
        try:
            result = solve_dc(netlist)
        except SolverError as exc:
            return [Error(command_id, type(exc).__name__, str(exc))]
        if not result.converged:
            return [Error(command_id, "NoConvergence",
                          f"DC solve stalled after {result.newton_iterations} iterations")]
        self.layout = new_layout
        self.report = report
        self.result = result
        self.mode = "dc-live"
        self.clock = 0.0
        self.cap_state = {}
        self._transient = None
        self.last_component_id = new_component
        frame = make_frame(self.layout, result, report, self.grid)
        return [Ack(command_id), StateUpdated(self._summary()), Frame(frame)]

    def _summary(self) -> dict[str, Any]:
        placements = []
        for p in sorted(self.layout.placements, key=lambda p: p.component.id):
            placements.append({
                "id": p.component.id,
                "kind": p.component.kind.value,
                "params": p.component.params.set_fields(),
                "holes": [[h.column, h.row] for h in p.holes],
            })
        solve = {
            "converged": self.result.converged,
            "node_voltages": {n: self.result.node_voltages[n]
                              for n in sorted(self.result.node_voltages)},
            "branch_currents": {c: self.result.branch_currents[c]
                                for c in sorted(self.result.branch_currents)},
        }
        return {
            "mode": self.mode,
            "clock": self.clock,
            "energizable": any(s.energizable for s in self.report.subcircuits),
            "placements": placements,
            "solve": solve,
            "last_component_id": self.last_component_id,
            "toolbox": [{"kind": kind.value, "params": params.set_fields()}
                        for kind, params in toolbox_catalog()],
        }


def _counters_from_layout(layout: BreadboardLayout) -> dict[str, int]:
    counters: dict[str, int] = {}
    for p in layout.placements:
        m = re.fullmatch(r"([A-Z]+)(\d+)", p.component.id)
        if m:
            counters[m.group(1)] = max(counters.get(m.group(1), 0), int(m.group(2)))
    return counters
