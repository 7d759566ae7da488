"""volta: an interactive breadboard circuit simulation engine.

Students place components from a toolbox onto a virtual breadboard; once a
loop closes, the engine solves the circuit and reports electron-flow rates
per branch and the magnetic field around current-carrying spans, updating
live as the board is edited.
"""

from .model import (Component, ComponentKind, ComponentParams, Netlist,
                    build_netlist, default_params, make_component,
                    toolbox_catalog, validate_params, THERMAL_VOLTAGE)
from .breadboard import (BreadboardLayout, ConnectivityReport, Hole, Placement,
                         connectivity, extract_netlist, place, remove)
from .netio import (LayoutDocument, format_netlist, load_layout, parse_netlist,
                    save_layout)
from .solver import (MnaSystem, SolveResult, TransientConfig, solve_dc,
                     solve_transient, stamp)
from .viz import (FieldSample, FlowDescriptor, GridConfig, VisualFrame,
                  WireSegment, field_at, field_grid, flow_descriptors,
                  led_brightness, make_frame)
from .session import Session

__version__ = "0.1.0"

__all__ = [
    "Component", "ComponentKind", "ComponentParams", "Netlist", "build_netlist",
    "default_params", "make_component", "toolbox_catalog", "validate_params",
    "THERMAL_VOLTAGE",
    "BreadboardLayout", "ConnectivityReport", "Hole", "Placement", "connectivity",
    "extract_netlist", "place", "remove",
    "LayoutDocument", "format_netlist", "load_layout", "parse_netlist", "save_layout",
    "MnaSystem", "SolveResult", "TransientConfig", "solve_dc", "solve_transient", "stamp",
    "FieldSample", "FlowDescriptor", "GridConfig", "VisualFrame", "WireSegment",
    "field_at", "field_grid", "flow_descriptors", "led_brightness", "make_frame",
    "Session",
    "__version__",
]
