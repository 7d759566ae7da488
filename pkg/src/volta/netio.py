"""Text netlist parsing/formatting and breadboard layout persistence.

Netlist grammar, one record per line::

    <id> <nodeA> <nodeB> [<nodeC>] <param>[=value]...

The id's leading mnemonic selects the kind (R, C, D, L for LED, Q, V, VAC,
W). Values take engineering suffixes k, M, m, u, n, p; only M/m is
case-sensitive. Lines starting with ``#`` are comments. Node name ``0`` is
always ground, overriding the battery-negative rule.

Parsing normalizes ids to a canonical case (mnemonic uppercased) and node
names to lowercase; ``format_netlist`` emits the stored, already-canonical
forms, so ``parse(format(n)) == n`` for every netlist this package produces.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from decimal import Decimal
from typing import Optional, Union

from .breadboard import BreadboardLayout, Hole, BoardError, place
from .model import (Component, ComponentKind, ComponentParams, Netlist,
                    NetlistError, build_netlist, default_params,
                    make_component, validate_params)
from . import breadboard

SCHEMA_VERSION = 1


class NetlistSyntaxError(Exception):
    """A malformed netlist record; carries 1-based line and column."""

    def __init__(self, line: int, column: int, message: str):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


class UnknownKind(NetlistSyntaxError):
    pass


class DuplicateId(NetlistSyntaxError):
    pass


class BadNumber(NetlistSyntaxError):
    pass


class LayoutDocumentError(Exception):
    pass


class SchemaVersionUnsupported(LayoutDocumentError):
    def __init__(self, version):
        self.version = version
        super().__init__(f"unsupported layout schema version {version!r}")


class MalformedDocument(LayoutDocumentError):
    pass


# Longest-prefix match order matters: VAC before V.
_MNEMONICS: tuple[tuple[str, ComponentKind], ...] = (
    ("VAC", ComponentKind.SourceAC),
    ("R", ComponentKind.Resistor),
    ("C", ComponentKind.Capacitor),
    ("D", ComponentKind.Diode),
    ("L", ComponentKind.LED),
    ("Q", ComponentKind.TransistorNPN),
    ("V", ComponentKind.BatteryDC),
    ("W", ComponentKind.Wire),
)

_KIND_TO_MNEMONIC = {kind: mn for mn, kind in _MNEMONICS}

# Positional parameter order per kind; also the canonical output order.
_PARAM_ORDER: dict[ComponentKind, tuple[str, ...]] = {
    ComponentKind.Resistor: ("resistance",),
    ComponentKind.Capacitor: ("capacitance",),
    ComponentKind.Diode: ("saturation_current", "emission_coefficient"),
    ComponentKind.LED: ("saturation_current", "emission_coefficient", "led_nominal_current"),
    ComponentKind.TransistorNPN: ("saturation_current", "forward_beta", "reverse_beta"),
    ComponentKind.BatteryDC: ("emf", "internal_resistance"),
    ComponentKind.SourceAC: ("amplitude", "frequency"),
    ComponentKind.Wire: (),
}

# Short names accepted in <name>=<value> tokens.
_PARAM_KEYS: dict[ComponentKind, dict[str, str]] = {
    ComponentKind.Resistor: {"r": "resistance"},
    ComponentKind.Capacitor: {"c": "capacitance"},
    ComponentKind.Diode: {"is": "saturation_current", "n": "emission_coefficient"},
    ComponentKind.LED: {"is": "saturation_current", "n": "emission_coefficient",
                        "inom": "led_nominal_current"},
    ComponentKind.TransistorNPN: {"is": "saturation_current", "bf": "forward_beta",
                                  "br": "reverse_beta"},
    ComponentKind.BatteryDC: {"v": "emf", "rint": "internal_resistance"},
    ComponentKind.SourceAC: {"a": "amplitude", "f": "frequency"},
    ComponentKind.Wire: {},
}

_NUMBER_RE = re.compile(r"^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)([A-Za-z]?)$")

# Decimal exponent per suffix; only M (mega) vs m (milli) is case-sensitive.
_SUFFIXES = {"": 0, "k": 3, "K": 3, "M": 6, "m": -3,
             "u": -6, "U": -6, "n": -9, "N": -9, "p": -12, "P": -12}

# Canonical output suffixes, in tie-breaking preference order.
_OUTPUT_SUFFIXES = (("", 0), ("k", 3), ("M", 6), ("m", -3),
                    ("u", -6), ("n", -9), ("p", -12))


def parse_value(token: str) -> float:
    """Number with optional engineering suffix; raises ValueError.

    The mantissa and suffix combine in decimal before the single rounding to
    float, so ``100n`` means exactly what ``1e-7`` means.
    """
    m = _NUMBER_RE.match(token)
    if not m:
        raise ValueError(f"bad number {token!r}")
    mantissa, suffix = m.groups()
    if suffix not in _SUFFIXES:
        raise ValueError(f"unknown suffix {suffix!r} in {token!r}")
    return float(Decimal(mantissa).scaleb(_SUFFIXES[suffix]))


def _shortest_decimal(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    return repr(x)


def format_value(value: float) -> str:
    """Shortest exact rendering: candidate suffixes are kept only when they
    re-parse to the identical float."""
    best: Optional[tuple[str, int]] = None
    for idx, (suffix, exp) in enumerate(_OUTPUT_SUFFIXES):
        mantissa = float(Decimal(value).scaleb(-exp))
        if not math.isfinite(mantissa):
            continue
        text = _shortest_decimal(mantissa) + suffix
        try:
            if parse_value(text) != value:
                continue
        except ValueError:
            continue
        if best is None or (len(text), idx) < (len(best[0]), best[1]):
            best = (text, idx)
    assert best is not None  # plain repr always round-trips
    return best[0]


def _detect_kind(identifier: str) -> Optional[tuple[str, ComponentKind]]:
    upper = identifier.upper()
    for mnemonic, kind in _MNEMONICS:
        if upper.startswith(mnemonic):
            return mnemonic, kind
    return None


def _canonical_id(identifier: str, mnemonic: str) -> str:
    return mnemonic + identifier[len(mnemonic):]


def parse_netlist(text: Union[str, bytes]) -> Netlist:
    """Parse a text netlist into a :class:`Netlist`.

    Raises :class:`NetlistSyntaxError` (or a subclass) on any malformed
    input; never anything else, whatever bytes come in.
    """
    if isinstance(text, bytes):
        text = text.decode("latin-1")
    records: list[tuple[Component, tuple[str, ...]]] = []
    merges: list[tuple[str, str]] = []
    seen_ids: set[str] = set()
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        id_token, id_col = tokens[0]
        detected = _detect_kind(id_token)
        if detected is None:
            raise UnknownKind(lineno, id_col, f"unknown component kind in id {id_token!r}")
        mnemonic, kind = detected
        identifier = _canonical_id(id_token, mnemonic)
        n_nodes = 3 if kind is ComponentKind.TransistorNPN else 2
        if len(tokens) < 1 + n_nodes:
            raise NetlistSyntaxError(lineno, len(line) + 1,
                                     f"{identifier!r} needs {n_nodes} node names")
        nodes = tuple(tok.lower() for tok, _ in tokens[1:1 + n_nodes])
        params = default_params(kind)
        order = _PARAM_ORDER[kind]
        keys = _PARAM_KEYS[kind]
        positional = 0
        for token, col in tokens[1 + n_nodes:]:
            if "=" in token:
                name, _, value_text = token.partition("=")
                field = keys.get(name.lower())
                if field is None:
                    raise NetlistSyntaxError(lineno, col,
                                             f"unknown parameter {name!r} for {identifier!r}")
                value_col = col + len(name) + 1
                try:
                    value = parse_value(value_text)
                except ValueError as exc:
                    raise BadNumber(lineno, value_col, str(exc)) from None
                params = params.replace(**{field: value})
            else:
                if positional >= len(order):
                    raise NetlistSyntaxError(lineno, col,
                                             f"too many values for {identifier!r}")
                try:
                    value = parse_value(token)
                except ValueError as exc:
                    raise BadNumber(lineno, col, str(exc)) from None
                params = params.replace(**{order[positional]: value})
                positional += 1
        violations = validate_params(kind, params)
        if violations:
            raise NetlistSyntaxError(lineno, id_col, "; ".join(violations))
        if identifier in seen_ids:
            raise DuplicateId(lineno, id_col, f"duplicate id {identifier!r}")
        seen_ids.add(identifier)
        if kind is ComponentKind.Wire:
            merges.append((nodes[0], nodes[1]))
        else:
            records.append((make_component(identifier, kind, params), nodes))

    alias = _resolve_merges(merges)
    entries = [(comp, tuple(alias.get(n, n) for n in nodes)) for comp, nodes in records]
    try:
        netlist = build_netlist(entries)
    except NetlistError as exc:  # defensive; duplicates were caught above
        raise NetlistSyntaxError(0, 0, str(exc)) from exc
    if "0" in netlist.nodes and netlist.ground != "0":
        netlist = Netlist(nodes=netlist.nodes, ground="0", branches=netlist.branches)
    return netlist


def _resolve_merges(merges: list[tuple[str, str]]) -> dict[str, str]:
    """Map each wire-merged node to its class representative ('0' wins)."""
    parent: dict[str, str] = {}

    def find(n: str) -> str:
        parent.setdefault(n, n)
        while parent[n] != n:
            parent[n] = parent[parent[n]]
            n = parent[n]
        return n

    for a, b in merges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)  # '0' < letters, so ground survives
    return {n: find(n) for n in parent}


def format_netlist(netlist: Netlist) -> str:
    """Canonical text form: records sorted by id, params in fixed order,
    shortest exact numbers."""
    lines = []
    for branch in sorted(netlist.branches, key=lambda b: b.component.id):
        comp = branch.component
        parts = [comp.id, *branch.nodes]
        for name in _PARAM_ORDER[comp.kind]:
            value = getattr(comp.params, name)
            if value is not None:
                parts.append(format_value(value))
        lines.append(" ".join(parts))
    return "\n".join(lines)


@dataclass(frozen=True)
class LayoutDocument:
    """Versioned, diff-friendly persistence form of a breadboard layout."""

    data: dict

    def dumps(self) -> str:
        return json.dumps(self.data, indent=2) + "\n"

    @classmethod
    def loads(cls, text: str) -> "LayoutDocument":
        try:
            data = json.loads(text)
        except (json.JSONDecodeError, UnicodeDecodeError) as exc:
            raise MalformedDocument(f"not valid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise MalformedDocument("document root must be an object")
        return cls(data)


def save_layout(layout: BreadboardLayout) -> LayoutDocument:
    placements = []
    for p in layout.placements:
        placements.append({
            "id": p.component.id,
            "kind": p.component.kind.value,
            "params": {name: value for name, value in p.component.params.set_fields().items()},
            "holes": [[h.column, h.row] for h in p.holes],
        })
    data = {
        "schema_version": SCHEMA_VERSION,
        "board": {
            "columns": breadboard.N_COLUMNS,
            "terminal_rows": list(breadboard.TERMINAL_ROWS),
            "rail_rows": list(breadboard.RAIL_ROWS),
        },
        "placements": placements,
    }
    return LayoutDocument(data)


def load_layout(doc: Union[LayoutDocument, str]) -> BreadboardLayout:
    """Rebuild a layout; placement invariants are re-checked on load."""
    if isinstance(doc, str):
        doc = LayoutDocument.loads(doc)
    data = doc.data
    version = data.get("schema_version")
    if not isinstance(version, int):
        raise MalformedDocument("schema_version missing or not an integer")
    if version != SCHEMA_VERSION:
        raise SchemaVersionUnsupported(version)
    placements = data.get("placements")
    if not isinstance(placements, list):
        raise MalformedDocument("placements missing or not a list")
    layout = BreadboardLayout()
    for i, record in enumerate(placements):
        try:
            kind = ComponentKind(record["kind"])
            params = ComponentParams(**record["params"])
            holes = [Hole(int(col), str(row)) for col, row in record["holes"]]
            component = Component(id=str(record["id"]), kind=kind, params=params)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedDocument(f"placement {i}: {exc}") from exc
        violations = validate_params(kind, params)
        if violations:
            raise MalformedDocument(f"placement {i}: " + "; ".join(violations))
        try:
            layout = place(layout, component, holes)
        except (BoardError, NetlistError) as exc:
            raise MalformedDocument(f"placement {i}: {exc}") from exc
    return layout
