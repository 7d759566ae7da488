"""Virtual breadboard: hole grid, placements, strip connectivity, netlist extraction.

Geometry is a standard half-size solderless board: 30 columns, terminal strips
a-e and f-j (five electrically common holes per column half), and four
full-length power rails. Layouts are immutable; editing returns new layouts.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .model import (Component, ComponentKind, DuplicateComponentId, Netlist,
                    build_netlist)

N_COLUMNS = 30
TERMINAL_ROWS = ("a", "b", "c", "d", "e", "f", "g", "h", "i", "j")
RAIL_ROWS = ("rail+", "rail-", "RAIL+", "RAIL-")
ALL_ROWS = TERMINAL_ROWS + RAIL_ROWS

# Hole pitch 2.54 mm (0.1 in); fixes the physical scale used by field geometry.
PITCH = 2.54e-3

# Vertical slot per row, top of board downward: two top rails, a-e, the
# center channel, f-j, two bottom rails.
_ROW_SLOT = {"rail+": 0, "rail-": 1,
             "a": 3, "b": 4, "c": 5, "d": 6, "e": 7,
             "f": 9, "g": 10, "h": 11, "i": 12, "j": 13,
             "RAIL+": 15, "RAIL-": 16}

_RAIL_NODE = {"rail+": "railt+", "rail-": "railt-", "RAIL+": "railb+", "RAIL-": "railb-"}


class Hole(NamedTuple):
    column: int
    row: str

    def is_on_board(self) -> bool:
        return 1 <= self.column <= N_COLUMNS and self.row in ALL_ROWS


def hole_position(hole: Hole) -> tuple[float, float, float]:
    """Board-plane coordinates of a hole in meters (z = 0)."""
    return ((hole.column - 1) * PITCH, _ROW_SLOT[hole.row] * PITCH, 0.0)


def strip_of(hole: Hole) -> str:
    """Identifier of the internal strip a hole belongs to.

    Strip ids double as netlist node names, so they are lowercase tokens:
    ``a<col>`` for rows a-e, ``f<col>`` for rows f-j, ``railt+/-`` and
    ``railb+/-`` for the rails.
    """
    if hole.row in _RAIL_NODE:
        return _RAIL_NODE[hole.row]
    if hole.row in "abcde":
        return f"a{hole.column}"
    return f"f{hole.column}"


def all_holes() -> list[Hole]:
    return [Hole(col, row) for row in ALL_ROWS for col in range(1, N_COLUMNS + 1)]


class BoardError(Exception):
    """Base for placement failures."""


class OffBoard(BoardError):
    def __init__(self, hole: Hole):
        self.hole = hole
        super().__init__(f"hole {hole} is not on the board")


class HoleOccupied(BoardError):
    def __init__(self, hole: Hole):
        self.hole = hole
        super().__init__(f"hole {hole} is already occupied")


class TerminalArityMismatch(BoardError):
    def __init__(self, component_id: str, expected: int, got: int):
        super().__init__(f"{component_id!r} needs {expected} holes, got {got}")


class UnknownComponent(BoardError):
    def __init__(self, component_id: str):
        self.component_id = component_id
        super().__init__(f"no placement with id {component_id!r}")


@dataclass(frozen=True)
class Placement:
    component: Component
    holes: tuple[Hole, ...]  # one hole per terminal, same order


@dataclass(frozen=True)
class BreadboardLayout:
    placements: tuple[Placement, ...] = ()

    def occupied(self) -> set[Hole]:
        return {h for p in self.placements for h in p.holes}

    def find(self, component_id: str) -> Optional[Placement]:
        for p in self.placements:
            if p.component.id == component_id:
                return p
        return None


def place(layout: BreadboardLayout, component: Component,
          holes: Iterable[Hole]) -> BreadboardLayout:
    """Return a new layout with the component placed across the given holes."""
    holes = tuple(Hole(*h) for h in holes)
    if len(holes) != len(component.terminals):
        raise TerminalArityMismatch(component.id, len(component.terminals), len(holes))
    for h in holes:
        if not h.is_on_board():
            raise OffBoard(h)
    used = layout.occupied()
    for h in holes:
        if h in used or holes.count(h) > 1:
            raise HoleOccupied(h)
    if layout.find(component.id) is not None:
        raise DuplicateComponentId(component.id)
    return BreadboardLayout(layout.placements + (Placement(component, holes),))


def remove(layout: BreadboardLayout, component_id: str) -> BreadboardLayout:
    if layout.find(component_id) is None:
        raise UnknownComponent(component_id)
    return BreadboardLayout(tuple(p for p in layout.placements
                                  if p.component.id != component_id))


class _UnionFind:
    """Disjoint sets over strip ids with path compression."""

    def __init__(self, items: Iterable[str]):
        self.parent = {i: i for i in items}

    def find(self, item: str) -> str:
        root = item
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[item] != root:  # compress
            self.parent[item], item = root, self.parent[item]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # Anchor on the lexicographically smaller root so class ids do not
            # depend on merge order.
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class Subcircuit:
    """A connected group of placed components and whether it can conduct."""

    component_ids: frozenset[str]
    energizable: bool


@dataclass(frozen=True)
class ConnectivityReport:
    hole_nodes: dict[Hole, str]                 # every board hole -> node id
    component_nodes: dict[str, tuple[str, ...]]  # component id -> node per terminal
    subcircuits: tuple[Subcircuit, ...]

    def energizable_ids(self) -> frozenset[str]:
        out: set[str] = set()
        for sub in self.subcircuits:
            if sub.energizable:
                out |= sub.component_ids
        return frozenset(out)

    def is_energizable(self, component_id: str) -> bool:
        return component_id in self.energizable_ids()


def _strip_partition(layout: BreadboardLayout) -> _UnionFind:
    uf = _UnionFind(strip_of(h) for h in all_holes())
    for p in layout.placements:
        if p.component.kind is ComponentKind.Wire:
            uf.union(strip_of(p.holes[0]), strip_of(p.holes[1]))
    return uf


def connectivity(layout: BreadboardLayout) -> ConnectivityReport:
    """Partition holes into electrical nodes and flag closed-loop subcircuits.

    A subcircuit is energizable when it contains a source whose two terminal
    nodes are joined by some path through other components (a wire shorting
    the terminals counts, since wires merge nodes).
    """
    uf = _strip_partition(layout)
    hole_nodes = {h: uf.find(strip_of(h)) for h in all_holes()}
    component_nodes = {p.component.id: tuple(hole_nodes[h] for h in p.holes)
                       for p in layout.placements}

    # Group placements into subcircuits: components sharing a node connect.
    by_node: dict[str, list[str]] = {}
    for cid, nodes in component_nodes.items():
        for n in nodes:
            by_node.setdefault(n, []).append(cid)
    group: dict[str, int] = {}
    groups: list[set[str]] = []
    for p in layout.placements:
        cid = p.component.id
        if cid in group:
            continue
        members = {cid}
        frontier = [cid]
        while frontier:
            current = frontier.pop()
            for n in component_nodes[current]:
                for neighbor in by_node[n]:
                    if neighbor not in members:
                        members.add(neighbor)
                        frontier.append(neighbor)
        idx = len(groups)
        groups.append(members)
        for m in members:
            group[m] = idx

    comp_by_id = {p.component.id: p.component for p in layout.placements}
    subcircuits = []
    for members in groups:
        energizable = False
        for cid in sorted(members):
            comp = comp_by_id[cid]
            if comp.kind not in (ComponentKind.BatteryDC, ComponentKind.SourceAC):
                continue
            pos, neg = component_nodes[cid]
            if pos == neg or _connected_through(pos, neg, cid, members,
                                                component_nodes, comp_by_id):
                energizable = True
                break
        subcircuits.append(Subcircuit(frozenset(members), energizable))
    subcircuits.sort(key=lambda s: min(s.component_ids))
    return ConnectivityReport(hole_nodes, component_nodes, tuple(subcircuits))


def _connected_through(start: str, goal: str, excluded_id: str, members: set[str],
                       component_nodes: dict[str, tuple[str, ...]],
                       comp_by_id: dict[str, Component]) -> bool:
    """BFS over node graph whose edges are the other components' terminals."""
    adjacency: dict[str, set[str]] = {}
    for cid in members:
        if cid == excluded_id or comp_by_id[cid].kind is ComponentKind.Wire:
            continue
        nodes = component_nodes[cid]
        for a in nodes:
            for b in nodes:
                if a != b:
                    adjacency.setdefault(a, set()).add(b)
    seen = {start}
    frontier = [start]
    while frontier:
        n = frontier.pop()
        if n == goal:
            return True
        for nxt in adjacency.get(n, ()):
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return goal in seen


def extract_netlist(layout: BreadboardLayout,
                    report: Optional[ConnectivityReport] = None,
                    only: Optional[frozenset[str]] = None) -> Netlist:
    """Netlist from a layout: wires become node merges, not branches.

    ``only`` restricts the branches to the given component ids (used to solve
    just the energizable subcircuits); nodes are those their terminals touch.
    """
    if report is None:
        report = connectivity(layout)
    entries = []
    for p in layout.placements:
        if p.component.kind is ComponentKind.Wire:
            continue
        if only is not None and p.component.id not in only:
            continue
        entries.append((p.component, report.component_nodes[p.component.id]))
    return build_netlist(entries)
