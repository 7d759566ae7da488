"""Acceptance suite: one test per criterion, at the stated tolerance.

Run ``pytest -s tests/test_acceptance.py`` to see one PASS line per
criterion (a failed criterion fails its test before printing).

Reference values come from independent oracles: closed forms, a from-scratch
nodal-equation assembly, bisection, a 2-variable root find, BFS reachability,
and midpoint-rule Biot-Savart quadrature.
"""

import math
import random
from pathlib import Path

import numpy as np
import pytest

from conftest import battery_resistor_netlist, random_layout, random_resistor_battery_network
from golden_transcript import GOLDEN_PATH, transcript_text
from oracles import (biot_savart_quadrature, diode_bisection, nodal_voltages,
                     npn_common_emitter)
from test_breadboard import bfs_partition
from test_netio import _random_text_netlist
from test_solver import _energy_balance_gap
from volta import cli
from volta.breadboard import Hole, connectivity, place, remove
from volta.model import ComponentKind, build_netlist, make_component
from volta.netio import (NetlistSyntaxError, format_netlist, load_layout,
                         parse_netlist, save_layout)
from volta.solver import TransientConfig, solve_dc, solve_transient
from volta.viz import MU0, WireSegment, field_at

NETLISTS = Path(__file__).parent.parent / "netlists"


def report(name):
    print(f"ACCEPTANCE {name}: PASS")


# ---------------------------------------------------------------------------

def test_criterion_ohm_divider_and_ladder():
    """Ohm/divider closed forms within 1e-9 relative."""
    result = solve_dc(battery_resistor_netlist())
    assert result.branch_currents["R1"] == pytest.approx(9 / 1000.5, rel=1e-9)

    entries = [
        (make_component("V1", ComponentKind.BatteryDC), ("n1", "n0")),
        (make_component("R1", ComponentKind.Resistor, resistance=1000.0), ("n1", "n2")),
        (make_component("R2", ComponentKind.Resistor, resistance=680.0), ("n2", "n3")),
        (make_component("R3", ComponentKind.Resistor, resistance=330.0), ("n3", "n0")),
    ]
    ladder = solve_dc(build_netlist(entries))
    i = 9 / (0.5 + 1000 + 680 + 330)
    assert ladder.node_voltages["n1"] == pytest.approx(9 - 0.5 * i, rel=1e-9)
    assert ladder.node_voltages["n2"] == pytest.approx(9 - (0.5 + 1000) * i, rel=1e-9)
    assert ladder.node_voltages["n3"] == pytest.approx(330 * i, rel=1e-9)
    report("ohm-divider-ladder")


def test_criterion_kcl_energy_and_nodal_oracle():
    """200 random resistor/battery networks: KCL < 1e-9 A, energy balance
    within 1e-6 relative, voltages matching the scratch-built nodal oracle."""
    rng = random.Random(86420)
    for _ in range(200):
        net, resistors, batteries = random_resistor_battery_network(rng, max_nodes=12)
        result = solve_dc(net)
        assert result.converged
        assert result.kcl_residual < 1e-9
        assert _energy_balance_gap(net, result) < 1e-6
        expected = nodal_voltages(net.nodes, net.ground, resistors, batteries)
        for node, v in expected.items():
            assert result.node_voltages[node] == pytest.approx(v, rel=1e-9, abs=1e-9)
    report("kcl-energy-nodal-oracle-200")


def test_criterion_junction_operating_points():
    """50 random diode/LED instances vs bisection to 1e-6 V; NPN collector
    current vs the 2-equation root-find oracle to 1e-6 A."""
    rng = random.Random(13579)
    for i in range(50):
        is_led = i % 2 == 1
        if is_led:
            i_sat = 10 ** rng.uniform(-18.0, -14.0)
            n = rng.uniform(1.8, 2.2)
            v0 = rng.uniform(4.0, 15.0)
        else:
            i_sat = 10 ** rng.uniform(-15.0, -9.0)
            n = rng.uniform(1.0, 2.0)
            v0 = rng.uniform(2.0, 15.0)
        ohms = rng.uniform(100.0, 10_000.0)
        kind = ComponentKind.LED if is_led else ComponentKind.Diode
        extra = {"led_nominal_current": 20e-3} if is_led else {}
        entries = [
            (make_component("V1", ComponentKind.BatteryDC, emf=v0,
                            internal_resistance=0.5), ("n1", "n0")),
            (make_component("R1", ComponentKind.Resistor, resistance=ohms), ("n1", "n2")),
            (make_component("D1", kind, saturation_current=i_sat,
                            emission_coefficient=n, **extra), ("n2", "n0")),
        ]
        result = solve_dc(build_netlist(entries))
        assert result.converged
        expected = diode_bisection(v0, ohms + 0.5, i_sat, n)
        assert result.node_voltages["n2"] == pytest.approx(expected, abs=1e-6)

    vcc = make_component("V1", ComponentKind.BatteryDC, emf=9.0, internal_resistance=0.0)
    entries = [
        (vcc, ("vcc", "n0")),
        (make_component("R1", ComponentKind.Resistor, resistance=100e3), ("vcc", "b")),
        (make_component("R2", ComponentKind.Resistor, resistance=1e3), ("vcc", "c")),
        (make_component("Q1", ComponentKind.TransistorNPN), ("c", "b", "n0")),
    ]
    result = solve_dc(build_netlist(entries))
    _, _, expected_ic = npn_common_emitter(9.0, 100e3, 1e3, 1e-14, 100.0, 1.0)
    assert result.branch_currents["Q1"] == pytest.approx(expected_ic, abs=1e-6)
    report("diode-led-npn-operating-points")


def _rc_netlist(r=1000.0, c=100e-6):
    return build_netlist([
        (make_component("V1", ComponentKind.BatteryDC, emf=9.0,
                        internal_resistance=0.0), ("n1", "n0")),
        (make_component("R1", ComponentKind.Resistor, resistance=r), ("n1", "n2")),
        (make_component("C1", ComponentKind.Capacitor, capacitance=c), ("n2", "n0")),
    ])


def test_criterion_rc_transient_first_order():
    """Vc(RC) within 1% at dt = RC/1000; halving dt halves the error."""
    r, c = 1000.0, 100e-6
    tau = r * c
    expected = 9 * (1 - math.exp(-1))

    def vc_error(dt):
        results = solve_transient(_rc_netlist(r, c), TransientConfig(dt=dt, t_end=tau))
        return abs(results[-1].node_voltages["n2"] - expected)

    coarse = vc_error(tau / 1000)
    assert coarse / expected < 0.01
    ratio = coarse / vc_error(tau / 2000)
    assert 1.8 <= ratio <= 2.2
    report("rc-transient-backward-euler")


def test_criterion_ac_series_rc_amplitude():
    """Steady-state current amplitude within 1% of the phasor formula."""
    f, r, c = 60.0, 1000.0, 1e-6
    net = build_netlist([
        (make_component("VAC1", ComponentKind.SourceAC, amplitude=5.0,
                        frequency=f), ("n1", "n0")),
        (make_component("R1", ComponentKind.Resistor, resistance=r), ("n1", "n2")),
        (make_component("C1", ComponentKind.Capacitor, capacitance=c), ("n2", "n0")),
    ])
    dt = 1 / (f * 1000)
    results = solve_transient(net, TransientConfig(dt=dt, t_end=6 / f))
    amplitude = max(abs(res.branch_currents["R1"]) for res in results
                    if res.time > 5 / f)
    expected = 5.0 / math.hypot(r, 1 / (2 * math.pi * f * c))
    assert amplitude == pytest.approx(expected, rel=0.01)
    report("ac-series-rc-amplitude")


def test_criterion_field_sampler():
    """Symmetric case exact, infinite-wire limit, exact superposition, and
    the antiparallel pair against a 1e6-element quadrature oracle."""
    # symmetric 45-degree case, d = 1 cm
    seg = WireSegment(start=(-0.01, 0.0, 0.0), end=(0.01, 0.0, 0.0), current=1.0)
    sample = field_at((0.0, 0.01, 0.0), [seg])
    expected = MU0 / (4 * math.pi * 0.01) * 2 * math.sin(math.pi / 4)
    assert abs(np.linalg.norm(sample.b) - expected) / expected < 1e-12

    # long-segment limit at length = 100 d
    d = 0.004
    seg = WireSegment(start=(-0.2, 0.0, 0.0), end=(0.2, 0.0, 0.0), current=1.0)
    magnitude = np.linalg.norm(field_at((0.0, d, 0.0), [seg]).b)
    infinite = MU0 / (2 * math.pi * d)
    assert abs(magnitude - infinite) / infinite < 0.005

    # superposition is exact
    s1 = WireSegment(start=(0.0, 0.0, 0.0), end=(0.05, 0.0, 0.0), current=1.5)
    s2 = WireSegment(start=(0.0, 0.02, 0.0), end=(0.05, 0.02, 0.0), current=-0.7)
    point = (0.02, 0.005, 0.004)
    combined = np.array(field_at(point, [s1, s2]).b)
    split = np.array(field_at(point, [s1]).b) + np.array(field_at(point, [s2]).b)
    assert np.array_equal(combined, split)

    # antiparallel pair midpoint vs numerical integration, 0.1%
    up = WireSegment(start=(-0.005, -0.05, 0.0), end=(-0.005, 0.05, 0.0), current=1.0)
    down = WireSegment(start=(0.005, 0.05, 0.0), end=(0.005, -0.05, 0.0), current=1.0)
    midpoint = (0.0, 0.0, 0.0)
    got = np.array(field_at(midpoint, [up, down]).b)
    oracle = (biot_savart_quadrature(midpoint, up.start, up.end, 1.0, 1_000_000)
              + biot_savart_quadrature(midpoint, down.start, down.end, 1.0, 1_000_000))
    assert np.linalg.norm(got - oracle) / np.linalg.norm(oracle) < 1e-3
    report("biot-savart-field-sampler")


def test_criterion_closed_loop_golden_transcript():
    """Battery alone (no flow) -> loop closed (all active) -> wire removed
    (all inactive); serialized events byte-stable and matching the golden."""
    first = transcript_text()
    second = transcript_text()
    assert first == second
    assert first == GOLDEN_PATH.read_text()
    report("closed-loop-golden-transcript")


def test_criterion_parser_persistence_roundtrip_and_fuzz():
    """parse/format and save/load identities on 200 instances each; 1e5
    random byte lines never abort the process."""
    rng = random.Random(24680)
    for _ in range(200):
        netlist = parse_netlist(_random_text_netlist(rng))
        assert parse_netlist(format_netlist(netlist)) == netlist
    for _ in range(200):
        layout = random_layout(rng, n_placements=rng.randint(0, 10))
        assert load_layout(save_layout(layout)) == layout

    fuzz = random.Random(99999)
    lines = 0
    while lines < 100_000:
        batch = bytes(fuzz.randrange(256) for _ in range(fuzz.randrange(0, 30)))
        lines += 1
        try:
            parse_netlist(batch)
        except NetlistSyntaxError:
            pass
    report("parser-persistence-fuzz")


def test_criterion_connectivity_oracle_and_inverse():
    """Union-find partition equals the BFS oracle on 500 random layouts;
    place then remove is the identity."""
    rng = random.Random(11111)
    for i in range(500):
        layout = random_layout(rng, n_placements=rng.randint(0, 14))
        assert connectivity(layout).hole_nodes == bfs_partition(layout)
        if i % 10 == 0:
            extended = None
            for col in range(1, 28):
                probe = (Hole(col, "d"), Hole(col + 2, "i"))
                if not any(h in layout.occupied() for h in probe):
                    extended = place(layout, make_component("ZZ", ComponentKind.Wire),
                                     list(probe))
                    break
            if extended is not None:
                assert remove(extended, "ZZ") == layout
    report("connectivity-bfs-place-remove")


def test_criterion_cli_tables_and_exit_codes(capsys, tmp_path):
    """--dc reproduces the committed oracle tables; exit codes 0/1/2."""
    cases = {
        "divider": (1e-9, None),   # relative tolerance (spec: 1e-9 relative)
        "ladder": (1e-9, 1e-9),    # voltages relative, currents at KCL floor
        "diode": (None, 1e-6),     # bisection oracle quantities, absolute
    }
    for name, (rel, abs_tol) in cases.items():
        assert cli.main(["--netlist", str(NETLISTS / f"{name}.net"), "--dc"]) == 0
        got = {}
        for line in capsys.readouterr().out.strip().splitlines():
            key, value = line.split(",")
            got[key] = float(value)
        expected_lines = (NETLISTS / "expected" / f"{name}.dc.csv").read_text()
        for line in expected_lines.strip().splitlines():
            key, value = line.split(",")
            want = float(value)
            if rel is not None and (abs_tol is None or key[0] in "0n"):
                assert got[key] == pytest.approx(want, rel=rel, abs=1e-15)
            else:
                assert got[key] == pytest.approx(want, abs=abs_tol)

    bad = tmp_path / "bad.net"
    bad.write_text("R1 n1 0 1q\n")
    assert cli.main(["--netlist", str(bad), "--dc"]) == 1
    floating = tmp_path / "floating.net"
    floating.write_text("V1 p m 9 0.5\nC1 p x 100u\n")
    assert cli.main(["--netlist", str(floating), "--dc"]) == 2
    capsys.readouterr()
    report("cli-tables-exit-codes")
