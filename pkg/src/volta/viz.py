"""Visual quantities derived from electrical state.

Three pedagogical outputs: per-branch electron-flow descriptors (direction
opposite conventional current, speed saturating logarithmically), magnetic
field samples around current-carrying spans (finite-segment Biot-Savart,
superposed), and LED brightness relative to nominal current.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .breadboard import BreadboardLayout, ConnectivityReport, hole_position
from .model import Component, ComponentKind
from .solver import SolveResult

MU0 = 4.0e-7 * math.pi

# Flow-speed mapping constants: 1 mA reads ~0.1, 1 A saturates at 1.0, so
# microamp and amp scale circuits still animate visibly differently.
FLOW_I0 = 1e-3
FLOW_IMAX = 1.0
FLOW_ACTIVE_MIN = 1e-9  # amperes

# Samples closer to a segment than this are evaluated at this distance,
# avoiding the 1/d singularity in rendered data.
EXCLUSION_RADIUS = 1e-3


@dataclass(frozen=True)
class FlowDescriptor:
    component_id: str
    electron_from: str  # terminal label electrons leave from ...
    electron_to: str    # ... toward this terminal, inside the component
    speed: float        # normalized 0..1
    active: bool


@dataclass(frozen=True)
class WireSegment:
    start: tuple[float, float, float]  # meters
    end: tuple[float, float, float]
    current: float  # amperes, signed along start->end

    def __post_init__(self):
        if self.start == self.end:
            raise ValueError("segment endpoints must differ")


@dataclass(frozen=True)
class FieldSample:
    position: tuple[float, float, float]
    b: tuple[float, float, float]  # tesla


@dataclass(frozen=True)
class GridConfig:
    nx: int = 60
    ny: int = 20
    height: float = 0.005  # meters above the board plane


@dataclass(frozen=True)
class VisualFrame:
    time: float
    flows: tuple[FlowDescriptor, ...]
    field: tuple[FieldSample, ...]
    led_brightness: dict[str, float]


def flow_speed(current: float) -> float:
    """Saturating log map of |I| to 0..1."""
    magnitude = abs(current)
    speed = math.log1p(magnitude / FLOW_I0) / math.log1p(FLOW_IMAX / FLOW_I0)
    return min(speed, 1.0)


def _electron_terminals(component: Component, current: float) -> tuple[str, str]:
    """Electron travel (from, to) inside the component; electrons run against
    conventional current. For I >= 0 that is last terminal toward first."""
    first, last = component.terminals[0], component.terminals[-1]
    if current < 0:
        return first, last
    return last, first


def flow_descriptors(result: SolveResult, report: Optional[ConnectivityReport] = None,
                     components: Optional[Iterable[Component]] = None) -> list[FlowDescriptor]:
    """One descriptor per non-wire component, sorted by id.

    ``components`` supplies terminal labels (and may include components the
    solve skipped, which read as zero current); without it the descriptors
    cover exactly the solved branches. Without a connectivity report
    (headless netlists) every subcircuit is treated as energizable.
    """
    if components is None:
        by_id: dict[str, Component] = {}
        ids = sorted(result.branch_currents)
    else:
        by_id = {c.id: c for c in components if c.kind is not ComponentKind.Wire}
        ids = sorted(by_id)
    descriptors = []
    for cid in ids:
        current = result.branch_currents.get(cid, 0.0)
        comp = by_id.get(cid)
        if comp is not None:
            src, dst = _electron_terminals(comp, current)
        else:
            src, dst = ("2", "1") if current >= 0 else ("1", "2")
        energizable = report.is_energizable(cid) if report is not None else True
        active = abs(current) > FLOW_ACTIVE_MIN and energizable
        descriptors.append(FlowDescriptor(cid, src, dst, flow_speed(current), active))
    return descriptors


def led_brightness(result: SolveResult, leds: Iterable[Component]) -> dict[str, float]:
    """clamp(I_forward / nominal, 0, 1) per LED; reverse current reads 0."""
    out = {}
    for comp in leds:
        if comp.kind is not ComponentKind.LED:
            continue
        forward = result.branch_currents.get(comp.id, 0.0)
        out[comp.id] = min(max(forward / comp.params.led_nominal_current, 0.0), 1.0)
    return out


def field_at(point: Sequence[float], segments: Iterable[WireSegment]) -> FieldSample:
    """Superposed finite-segment Biot-Savart field at one point."""
    pts = np.asarray([point], dtype=float)
    b = _field_vectors(pts, list(segments))[0]
    return FieldSample(position=tuple(float(c) for c in point),
                       b=(float(b[0]), float(b[1]), float(b[2])))


def _field_vectors(points: np.ndarray, segments: list[WireSegment]) -> np.ndarray:
    """Field vectors at an (N, 3) array of points.

    Per segment: |B| = (mu0 I / 4 pi d) (sin th2 - sin th1) at perpendicular
    distance d, direction from the right-hand rule on conventional current.
    """
    total = np.zeros_like(points)
    for seg in segments:
        if seg.current == 0.0:
            continue
        a = np.asarray(seg.start, dtype=float)
        b = np.asarray(seg.end, dtype=float)
        axis = b - a
        length = float(np.linalg.norm(axis))
        unit = axis / length
        rel = points - a
        along = rel @ unit
        perp_vec = rel - np.outer(along, unit)
        d = np.linalg.norm(perp_vec, axis=1)
        # Distance to the segment (capsule test) decides clamping.
        clamped_along = np.clip(along, 0.0, length)
        seg_dist = np.linalg.norm(rel - np.outer(clamped_along, unit), axis=1)
        d_eff = np.where(seg_dist < EXCLUSION_RADIUS, EXCLUSION_RADIUS, d)
        t1 = -along            # signed coordinate of 'a' relative to the foot
        t2 = length - along    # and of 'b'
        sin1 = t1 / np.hypot(t1, d_eff)
        sin2 = t2 / np.hypot(t2, d_eff)
        # On-axis points have no perpendicular direction and a vanishing
        # field in the limit; mask them out of both factors.
        safe = d > 1e-15
        d_div = np.where(safe, d_eff, 1.0)
        magnitude = np.where(
            safe, MU0 * seg.current / (4.0 * math.pi * d_div) * (sin2 - sin1), 0.0)
        direction = np.zeros_like(points)
        direction[safe] = np.cross(np.broadcast_to(unit, points[safe].shape),
                                   perp_vec[safe] / d[safe, None])
        total += magnitude[:, None] * direction
    return total


def _strip_injections(layout: BreadboardLayout, result: SolveResult,
                      report: ConnectivityReport) -> dict[str, float]:
    """Net conventional current pushed into the wire network at each strip."""
    from .breadboard import strip_of
    injections: dict[str, float] = {}
    for p in layout.placements:
        if p.component.kind is ComponentKind.Wire:
            continue
        terms = result.terminal_currents.get(p.component.id)
        if terms is None:
            continue
        for hole, into_component in zip(p.holes, terms):
            strip = strip_of(hole)
            injections[strip] = injections.get(strip, 0.0) - into_component
    return injections


def wire_currents(layout: BreadboardLayout, result: SolveResult,
                  report: ConnectivityReport) -> dict[str, float]:
    """Per-wire current (signed along the wire's first->second hole).

    Within each merged node the wires form a graph over strips; currents are
    the unique conserving flow on a spanning tree. Redundant wires closing a
    zero-resistance loop carry an indeterminate share and are reported as 0.
    """
    from .breadboard import strip_of
    injections = _strip_injections(layout, result, report)
    wires = [p for p in layout.placements if p.component.kind is ComponentKind.Wire]
    edges: dict[str, list[tuple[str, str, str]]] = {}  # strip -> (other, wire id, orient)
    for p in wires:
        sa, sb = strip_of(p.holes[0]), strip_of(p.holes[1])
        edges.setdefault(sa, []).append((sb, p.component.id, "ab"))
        edges.setdefault(sb, []).append((sa, p.component.id, "ba"))

    currents = {p.component.id: 0.0 for p in wires}
    visited: set[str] = set()
    for start in sorted(edges):
        if start in visited:
            continue
        # Build a BFS tree over this wire-connected strip class.
        order = [start]
        visited.add(start)
        parent_edge: dict[str, tuple[str, str, str]] = {}
        i = 0
        while i < len(order):
            strip = order[i]
            i += 1
            for other, wire_id, orient in sorted(edges.get(strip, ())):
                if other not in visited:
                    visited.add(other)
                    parent_edge[other] = (strip, wire_id, orient)
                    order.append(other)
        # Accumulate subtree injections leaf-first; flow toward the parent
        # carries the subtree's surplus.
        subtree = {s: injections.get(s, 0.0) for s in order}
        for strip in reversed(order[1:]):
            parent, wire_id, orient = parent_edge[strip]
            flow_to_parent = subtree[strip]
            subtree[parent] += flow_to_parent
            # orient "ab" means the wire's holes run parent->strip.
            currents[wire_id] = -flow_to_parent if orient == "ab" else flow_to_parent
    return currents


def segments_from_layout(layout: BreadboardLayout, result: SolveResult,
                         report: ConnectivityReport) -> list[WireSegment]:
    """Straight spans for every component and wire, carrying their currents.

    The NPN contributes collector->emitter and base->emitter spans with the
    respective terminal currents.
    """
    segments = []
    wire_flow = wire_currents(layout, result, report)
    for p in layout.placements:
        comp = p.component
        if comp.kind is ComponentKind.Wire:
            current = wire_flow.get(comp.id, 0.0)
            pairs = [((p.holes[0], p.holes[1]), current)]
        elif comp.kind is ComponentKind.TransistorNPN:
            terms = result.terminal_currents.get(comp.id, (0.0, 0.0, 0.0))
            pairs = [((p.holes[0], p.holes[2]), terms[0]),
                     ((p.holes[1], p.holes[2]), terms[1])]
        else:
            current = result.branch_currents.get(comp.id, 0.0)
            pairs = [((p.holes[0], p.holes[1]), current)]
        for (ha, hb), current in pairs:
            start, end = hole_position(ha), hole_position(hb)
            if start == end:
                continue
            segments.append(WireSegment(start=start, end=end, current=current))
    return segments


def board_extent() -> tuple[float, float]:
    from .breadboard import N_COLUMNS, PITCH, _ROW_SLOT
    return (N_COLUMNS - 1) * PITCH, max(_ROW_SLOT.values()) * PITCH


def field_grid(layout: BreadboardLayout, result: SolveResult,
               report: ConnectivityReport,
               config: GridConfig = GridConfig()) -> list[FieldSample]:
    """Field samples on a rectangular grid over the board, above its plane."""
    segments = segments_from_layout(layout, result, report)
    width, depth = board_extent()
    xs = np.linspace(0.0, width, config.nx)
    ys = np.linspace(0.0, depth, config.ny)
    points = np.array([(x, y, config.height) for y in ys for x in xs])
    if segments:
        vectors = _field_vectors(points, segments)
    else:
        vectors = np.zeros_like(points)
    return [FieldSample(position=tuple(map(float, p)), b=tuple(map(float, v)))
            for p, v in zip(points, vectors)]


def make_frame(layout: BreadboardLayout, result: SolveResult,
               report: ConnectivityReport,
               config: GridConfig = GridConfig()) -> VisualFrame:
    """Bundle every visual quantity for one rendered instant."""
    components = [p.component for p in layout.placements]
    flows = tuple(flow_descriptors(result, report, components))
    samples = tuple(field_grid(layout, result, report, config))
    leds = led_brightness(result, [c for c in components if c.kind is ComponentKind.LED])
    return VisualFrame(time=result.time, flows=flows, field=samples,
                       led_brightness=leds)
