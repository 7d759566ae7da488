import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from volta.breadboard import (ALL_ROWS, N_COLUMNS, BreadboardLayout, Hole,
                              place)
from volta.model import ComponentKind, build_netlist, make_component


def battery_resistor_netlist(emf=9.0, rint=0.5, ohms=1000.0):
    battery = make_component("V1", ComponentKind.BatteryDC, emf=emf,
                             internal_resistance=rint)
    resistor = make_component("R1", ComponentKind.Resistor, resistance=ohms)
    return build_netlist([(battery, ("n1", "n0")), (resistor, ("n1", "n0"))])


def series_netlist(*elements):
    """Close a single loop: the first element (the source) spans n1->n0, the
    rest chain n1 -> n2 -> ... -> n0. ``elements`` are (id, kind, overrides).
    """
    count = len(elements)
    source_id, source_kind, source_over = elements[0]
    built = [(make_component(source_id, source_kind, **source_over), ("n1", "n0"))]
    prev = "n1"
    for i, (cid, kind, overrides) in enumerate(elements[1:], start=1):
        nxt = "n0" if i == count - 1 else f"n{i + 1}"
        built.append((make_component(cid, kind, **overrides), (prev, nxt)))
        prev = nxt
    return build_netlist(built)


def random_resistor_battery_network(rng: random.Random, max_nodes=12):
    """Connected random network of resistors and batteries on a node ring
    plus chords; returns (netlist, resistors, batteries) with the raw element
    tuples the nodal oracle consumes."""
    n_nodes = rng.randint(2, max_nodes)
    nodes = [f"n{i}" for i in range(n_nodes)]
    resistors = []
    batteries = []
    entries = []
    ridx = 0
    vidx = 0

    def add_resistor(a, b):
        nonlocal ridx
        ridx += 1
        ohms = rng.uniform(10.0, 2000.0)
        resistors.append((a, b, ohms))
        entries.append((make_component(f"R{ridx}", ComponentKind.Resistor,
                                       resistance=ohms), (a, b)))

    def add_battery(pos, neg):
        nonlocal vidx
        vidx += 1
        emf = rng.uniform(1.0, 20.0)
        rint = rng.uniform(0.1, 10.0)
        batteries.append((pos, neg, emf, rint))
        entries.append((make_component(f"V{vidx}", ComponentKind.BatteryDC, emf=emf,
                                       internal_resistance=rint), (pos, neg)))

    # ring keeps the network connected
    for i in range(n_nodes):
        a, b = nodes[i], nodes[(i + 1) % n_nodes]
        if i == 0 or (rng.random() < 0.25 and vidx < 3):
            add_battery(a, b)
        else:
            add_resistor(a, b)
    for _ in range(rng.randint(0, n_nodes)):
        a, b = rng.sample(nodes, 2)
        add_resistor(a, b)
    return build_netlist(entries), resistors, batteries


def random_layout(rng: random.Random, n_placements=10) -> BreadboardLayout:
    """Random valid layout mixing all component kinds; skips collisions."""
    layout = BreadboardLayout()
    kinds = [ComponentKind.Resistor, ComponentKind.Capacitor, ComponentKind.Diode,
             ComponentKind.LED, ComponentKind.TransistorNPN, ComponentKind.BatteryDC,
             ComponentKind.SourceAC, ComponentKind.Wire]
    used = set()
    serial = 0
    attempts = 0
    while serial < n_placements and attempts < n_placements * 30:
        attempts += 1
        kind = rng.choice(kinds)
        count = 3 if kind is ComponentKind.TransistorNPN else 2
        holes = []
        for _ in range(count):
            h = Hole(rng.randint(1, N_COLUMNS), rng.choice(ALL_ROWS))
            holes.append(h)
        if len(set(holes)) != count or any(h in used for h in holes):
            continue
        serial += 1
        comp = make_component(f"X{serial}", kind)
        layout = place(layout, comp, holes)
        used.update(holes)
    return layout
