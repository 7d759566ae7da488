"""Component catalog, parameter validation, and netlist construction."""

import pytest

from volta.model import (Component, ComponentKind, ComponentParams,
                         DanglingTerminal, DuplicateComponentId, build_netlist,
                         default_params, make_component, toolbox_catalog,
                         validate_params, THERMAL_VOLTAGE)


def test_catalog_covers_every_kind_once():
    catalog = toolbox_catalog()
    kinds = [kind for kind, _ in catalog]
    assert kinds == list(ComponentKind)
    assert len(set(kinds)) == 8


def test_catalog_defaults():
    defaults = dict(toolbox_catalog())
    assert defaults[ComponentKind.Resistor].resistance == 1000.0
    assert defaults[ComponentKind.BatteryDC].emf == 9.0
    assert defaults[ComponentKind.BatteryDC].internal_resistance == 0.5
    assert defaults[ComponentKind.Capacitor].capacitance == pytest.approx(100e-6)
    assert defaults[ComponentKind.LED].emission_coefficient == 2.0
    assert defaults[ComponentKind.SourceAC].frequency == 60.0


def test_catalog_is_stable():
    assert toolbox_catalog() == toolbox_catalog()


def test_catalog_entries_all_validate():
    for kind, params in toolbox_catalog():
        assert validate_params(kind, params) == []


def test_thermal_voltage_constant():
    assert THERMAL_VOLTAGE == 0.02585


def test_validate_ok_resistor():
    assert validate_params(ComponentKind.Resistor, ComponentParams(resistance=1000)) == []


def test_validate_zero_resistance():
    violations = validate_params(ComponentKind.Resistor, ComponentParams(resistance=0))
    assert violations == ["resistance must be > 0"]


def test_validate_negative_frequency():
    violations = validate_params(
        ComponentKind.SourceAC, ComponentParams(amplitude=5, frequency=-50))
    assert violations == ["frequency must be > 0"]


def test_validate_irrelevant_field():
    params = ComponentParams(resistance=100, capacitance=1e-6)
    violations = validate_params(ComponentKind.Resistor, params)
    assert any("not applicable" in v for v in violations)


def test_validate_missing_field():
    violations = validate_params(ComponentKind.BatteryDC, ComponentParams(emf=9))
    assert "internal_resistance must be set for BatteryDC" in violations


def test_terminal_arity():
    assert len(make_component("Q1", ComponentKind.TransistorNPN).terminals) == 3
    for kind in ComponentKind:
        expected = 3 if kind is ComponentKind.TransistorNPN else 2
        assert len(make_component("x", kind).terminals) == expected


def test_terminal_orders():
    assert make_component("D1", ComponentKind.Diode).terminals == ("anode", "cathode")
    assert make_component("V1", ComponentKind.BatteryDC).terminals == ("positive", "negative")
    assert make_component("Q1", ComponentKind.TransistorNPN).terminals == (
        "collector", "base", "emitter")


def test_component_rejects_wrong_terminal_count():
    with pytest.raises(ValueError):
        Component(id="R1", kind=ComponentKind.Resistor, terminals=("a", "b", "c"))


def test_build_netlist_ground_is_battery_negative():
    battery = make_component("V1", ComponentKind.BatteryDC)
    resistor = make_component("R1", ComponentKind.Resistor)
    net = build_netlist([(battery, ("n1", "n0")), (resistor, ("n1", "n0"))])
    assert net.nodes == frozenset({"n0", "n1"})
    assert net.ground == "n0"


def test_build_netlist_ground_without_source():
    r1 = make_component("R1", ComponentKind.Resistor)
    net = build_netlist([(r1, ("b", "a"))])
    assert net.ground == "a"


def test_build_netlist_lowest_id_source_wins():
    v2 = make_component("V2", ComponentKind.BatteryDC)
    v1 = make_component("V1", ComponentKind.BatteryDC)
    net = build_netlist([(v2, ("x", "gx")), (v1, ("y", "gy"))])
    assert net.ground == "gy"


def test_build_netlist_duplicate_id():
    r = make_component("R1", ComponentKind.Resistor)
    with pytest.raises(DuplicateComponentId):
        build_netlist([(r, ("a", "b")), (r, ("c", "d"))])


def test_build_netlist_dangling_terminal():
    r = make_component("R1", ComponentKind.Resistor)
    with pytest.raises(DanglingTerminal):
        build_netlist([(r, ("a",))])
    with pytest.raises(DanglingTerminal):
        build_netlist([(r, {"1": "a"})])


def test_build_netlist_mapping_assignment():
    r = make_component("R1", ComponentKind.Resistor)
    net = build_netlist([(r, {"1": "a", "2": "b"})])
    assert net.branches[0].nodes == ("a", "b")


def test_every_branch_terminal_resolves():
    battery = make_component("V1", ComponentKind.BatteryDC)
    npn = make_component("Q1", ComponentKind.TransistorNPN)
    net = build_netlist([(battery, ("p", "m")), (npn, ("p", "b", "m"))])
    for branch in net.branches:
        for node in branch.nodes:
            assert node in net.nodes


def test_netlist_construction_deterministic():
    def build():
        battery = make_component("V1", ComponentKind.BatteryDC)
        resistor = make_component("R1", ComponentKind.Resistor)
        return build_netlist([(resistor, ("n1", "n0")), (battery, ("n1", "n0"))])

    assert build() == build()
    # branch order is canonical (sorted by id) regardless of input order
    assert [b.component.id for b in build().branches] == ["R1", "V1"]


def test_default_params_copies_are_shared_safely():
    params = default_params(ComponentKind.Resistor)
    changed = params.replace(resistance=5.0)
    assert params.resistance == 1000.0
    assert changed.resistance == 5.0
