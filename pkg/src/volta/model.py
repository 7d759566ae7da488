"""Component catalog, physical parameters, and the electrical netlist graph.

Everything here is an immutable value: components and netlists can be shared
freely between threads and never mutate after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence, Union

# Junction thermal voltage at 300 K. Temperature is not a user parameter.
THERMAL_VOLTAGE = 0.02585


class ComponentKind(Enum):
    Resistor = "Resistor"
    Capacitor = "Capacitor"
    Diode = "Diode"
    LED = "LED"
    TransistorNPN = "TransistorNPN"
    BatteryDC = "BatteryDC"
    SourceAC = "SourceAC"
    Wire = "Wire"


#: Ordered terminal labels per kind. Diode/LED are anode->cathode, sources
#: positive->negative, the NPN is collector/base/emitter.
TERMINALS: dict[ComponentKind, tuple[str, ...]] = {
    ComponentKind.Resistor: ("1", "2"),
    ComponentKind.Capacitor: ("1", "2"),
    ComponentKind.Diode: ("anode", "cathode"),
    ComponentKind.LED: ("anode", "cathode"),
    ComponentKind.TransistorNPN: ("collector", "base", "emitter"),
    ComponentKind.BatteryDC: ("positive", "negative"),
    ComponentKind.SourceAC: ("positive", "negative"),
    ComponentKind.Wire: ("1", "2"),
}


@dataclass(frozen=True)
class ComponentParams:
    """Physical parameters; only the fields relevant to a kind are set."""

    resistance: Optional[float] = None          # ohms, > 0
    capacitance: Optional[float] = None         # farads, > 0
    saturation_current: Optional[float] = None  # amperes, > 0
    emission_coefficient: Optional[float] = None  # dimensionless, >= 1
    forward_beta: Optional[float] = None        # dimensionless, > 0
    reverse_beta: Optional[float] = None        # dimensionless, > 0
    emf: Optional[float] = None                 # volts, > 0
    internal_resistance: Optional[float] = None  # ohms, >= 0
    amplitude: Optional[float] = None           # volts, > 0
    frequency: Optional[float] = None           # hertz, > 0
    led_nominal_current: Optional[float] = None  # amperes, > 0

    def set_fields(self) -> dict[str, float]:
        """Names and values of all fields that are not None."""
        return {f.name: getattr(self, f.name) for f in fields(self)
                if getattr(self, f.name) is not None}

    def replace(self, **changes: float) -> "ComponentParams":
        merged = dict(self.set_fields())
        merged.update(changes)
        return ComponentParams(**merged)


# (field, "must be ..." rule); rule is checked only when the field is set
# and the field must be set for the kind to be usable at all.
_CONSTRAINTS: dict[ComponentKind, tuple[tuple[str, str], ...]] = {
    ComponentKind.Resistor: (("resistance", "> 0"),),
    ComponentKind.Capacitor: (("capacitance", "> 0"),),
    ComponentKind.Diode: (("saturation_current", "> 0"), ("emission_coefficient", ">= 1")),
    ComponentKind.LED: (("saturation_current", "> 0"), ("emission_coefficient", ">= 1"),
                        ("led_nominal_current", "> 0")),
    ComponentKind.TransistorNPN: (("saturation_current", "> 0"), ("forward_beta", "> 0"),
                                  ("reverse_beta", "> 0")),
    ComponentKind.BatteryDC: (("emf", "> 0"), ("internal_resistance", ">= 0")),
    ComponentKind.SourceAC: (("amplitude", "> 0"), ("frequency", "> 0")),
    ComponentKind.Wire: (),
}

_DEFAULTS: dict[ComponentKind, ComponentParams] = {
    ComponentKind.Resistor: ComponentParams(resistance=1000.0),
    ComponentKind.Capacitor: ComponentParams(capacitance=100e-6),
    ComponentKind.Diode: ComponentParams(saturation_current=1e-12, emission_coefficient=1.0),
    # LED Is/n chosen for a forward drop near 2 V, visibly above a plain diode.
    ComponentKind.LED: ComponentParams(saturation_current=1e-18, emission_coefficient=2.0,
                                       led_nominal_current=20e-3),
    ComponentKind.TransistorNPN: ComponentParams(saturation_current=1e-14, forward_beta=100.0,
                                                 reverse_beta=1.0),
    # Rint default keeps a wire-only short solvable (large, finite current).
    ComponentKind.BatteryDC: ComponentParams(emf=9.0, internal_resistance=0.5),
    ComponentKind.SourceAC: ComponentParams(amplitude=5.0, frequency=60.0),
    ComponentKind.Wire: ComponentParams(),
}


def toolbox_catalog() -> list[tuple[ComponentKind, ComponentParams]]:
    """One entry per component kind with its default parameters.

    Order is the declaration order of :class:`ComponentKind` and is stable.
    """
    return [(kind, _DEFAULTS[kind]) for kind in ComponentKind]


def default_params(kind: ComponentKind) -> ComponentParams:
    return _DEFAULTS[kind]


def validate_params(kind: ComponentKind, params: ComponentParams) -> list[str]:
    """Check sign/range constraints; return every violation (empty = ok).

    A field set on a kind it does not apply to is also a violation.
    """
    violations = []
    relevant = {name for name, _ in _CONSTRAINTS[kind]}
    for name, value in params.set_fields().items():
        if name not in relevant:
            violations.append(f"{name} not applicable to {kind.value}")
    for name, rule in _CONSTRAINTS[kind]:
        value = getattr(params, name)
        if value is None:
            violations.append(f"{name} must be set for {kind.value}")
        elif rule == "> 0" and not value > 0:
            violations.append(f"{name} must be > 0")
        elif rule == ">= 0" and not value >= 0:
            violations.append(f"{name} must be >= 0")
        elif rule == ">= 1" and not value >= 1:
            violations.append(f"{name} must be >= 1")
    return violations


@dataclass(frozen=True)
class Component:
    """A toolbox element: kind plus parameters plus ordered terminals."""

    id: str
    kind: ComponentKind
    params: ComponentParams = field(default=ComponentParams())
    terminals: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.terminals:
            object.__setattr__(self, "terminals", TERMINALS[self.kind])
        if len(self.terminals) != len(TERMINALS[self.kind]):
            raise ValueError(
                f"{self.kind.value} has {len(TERMINALS[self.kind])} terminals, "
                f"got {len(self.terminals)}")


def make_component(id: str, kind: ComponentKind, params: Optional[ComponentParams] = None,
                   **overrides: float) -> Component:
    """Build a component with defaults filled in and overrides applied."""
    base = params if params is not None else _DEFAULTS[kind]
    if overrides:
        base = base.replace(**overrides)
    return Component(id=id, kind=kind, params=base)


class NetlistError(Exception):
    """Base for netlist construction failures."""


class DuplicateComponentId(NetlistError):
    def __init__(self, component_id: str):
        self.component_id = component_id
        super().__init__(f"duplicate component id {component_id!r}")


class DanglingTerminal(NetlistError):
    def __init__(self, component_id: str, terminal: str):
        self.component_id = component_id
        self.terminal = terminal
        super().__init__(f"terminal {terminal!r} of {component_id!r} has no node")


@dataclass(frozen=True)
class Branch:
    component: Component
    nodes: tuple[str, ...]  # node per terminal, ordered like component.terminals


@dataclass(frozen=True)
class Netlist:
    """Electrical graph: components attached to named nodes.

    ``ground`` is None only for the empty netlist. Branches are stored sorted
    by component id so construction is deterministic and structural equality
    is order-independent.
    """

    nodes: frozenset[str]
    ground: Optional[str]
    branches: tuple[Branch, ...]

    def branch_by_id(self, component_id: str) -> Branch:
        for b in self.branches:
            if b.component.id == component_id:
                return b
        raise KeyError(component_id)

    def sources(self) -> list[Branch]:
        return [b for b in self.branches
                if b.component.kind in (ComponentKind.BatteryDC, ComponentKind.SourceAC)]


NodeAssignment = Union[Sequence[str], Mapping[str, str]]


def _nodes_for(component: Component, assignment: NodeAssignment) -> tuple[str, ...]:
    if isinstance(assignment, Mapping):
        unknown = set(assignment) - set(component.terminals)
        if unknown:
            raise ValueError(f"unknown terminal(s) {sorted(unknown)} for {component.id!r}")
        out = []
        for label in component.terminals:
            node = assignment.get(label)
            if not node:
                raise DanglingTerminal(component.id, label)
            out.append(node)
        return tuple(out)
    nodes = tuple(assignment)
    if len(nodes) != len(component.terminals):
        missing = component.terminals[min(len(nodes), len(component.terminals)):]
        raise DanglingTerminal(component.id, missing[0] if missing else component.terminals[-1])
    for label, node in zip(component.terminals, nodes):
        if not node:
            raise DanglingTerminal(component.id, label)
    return nodes


def choose_ground(branches: Iterable[Branch]) -> Optional[str]:
    """Deterministic ground: negative terminal of the lowest-id source,
    else the lexicographically smallest node, else None."""
    branches = list(branches)
    sources = sorted((b for b in branches
                      if b.component.kind in (ComponentKind.BatteryDC, ComponentKind.SourceAC)),
                     key=lambda b: b.component.id)
    if sources:
        return sources[0].nodes[1]  # terminal order is (positive, negative)
    nodes = {n for b in branches for n in b.nodes}
    return min(nodes) if nodes else None


def build_netlist(entries: Iterable[tuple[Component, NodeAssignment]]) -> Netlist:
    """Assemble a netlist; raises DuplicateComponentId / DanglingTerminal."""
    branches = []
    seen: set[str] = set()
    for component, assignment in entries:
        if component.id in seen:
            raise DuplicateComponentId(component.id)
        seen.add(component.id)
        branches.append(Branch(component, _nodes_for(component, assignment)))
    branches.sort(key=lambda b: b.component.id)
    nodes = frozenset(n for b in branches for n in b.nodes)
    return Netlist(nodes=nodes, ground=choose_ground(branches), branches=tuple(branches))
