"""Circuit state computation: DC operating point and backward-Euler transients.

Modified nodal analysis over (node voltages, source branch currents) with
Newton iteration for the junction devices. Device laws:

* resistor        i = v / R
* battery         source row  V(+) - V(-) - Rint * I = V0
* AC source       source row  V(+) - V(-) = A * sin(2 pi f t)
* diode / LED     Shockley  i = Is * (exp(v / (n Vt)) - 1)
* NPN             Ebers-Moll from two junction laws with gains betaF, betaR
* capacitor       backward-Euler companion  Geq = C/dt, Ieq from prior voltage

Ideal wires never reach the matrix: any Wire branches are merged into their
nodes first. A fixed 1e-12 S conductance from every node to ground keeps
reverse-biased junction islands nonsingular; it is far below all tolerances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Optional

import numpy as np

from .model import Branch, ComponentKind, Netlist, THERMAL_VOLTAGE

GMIN = 1e-12
MAX_ITERATIONS = 100
VOLTAGE_TOL = 1e-6     # volts, max per-iteration update
CURRENT_TOL = 1e-9     # amperes, KCL residual
JUNCTION_STEP_LIMIT = 0.5  # volts per Newton iteration

_SOURCE_KINDS = (ComponentKind.BatteryDC, ComponentKind.SourceAC)


class SolverError(Exception):
    pass


class SingularSystem(SolverError):
    """The system has no unique solution; ``node`` names the offender when
    it can be localized (a node with no DC path)."""

    def __init__(self, node: Optional[str] = None):
        self.node = node
        detail = f" (floating node {node!r})" if node else ""
        super().__init__(f"singular MNA system{detail}")


@dataclass(frozen=True)
class TransientConfig:
    dt: float
    t_end: float
    method: str = "backward-euler"

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError("dt must be > 0")
        if self.t_end < 0:
            raise ValueError("t_end must be >= 0")
        if self.method != "backward-euler":
            raise ValueError(f"unsupported integration method {self.method!r}")

    @property
    def n_steps(self) -> int:
        return int(math.floor(self.t_end / self.dt + 1e-9))


@dataclass(frozen=True)
class SolveResult:
    """Electrical state at one time point.

    Branch current sign convention: positive means conventional current
    entering terminal 0 and leaving the last terminal through the component.
    For the NPN the scalar is the collector current; ``terminal_currents``
    has the full per-terminal picture (signed into each terminal).
    """

    time: float
    node_voltages: dict[str, float]
    branch_currents: dict[str, float]
    terminal_currents: dict[str, tuple[float, ...]]
    converged: bool
    newton_iterations: int
    kcl_residual: float


@dataclass
class MnaSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    node_index: dict[str, int]      # representative node -> row
    source_index: dict[str, int]    # source component id -> row
    state: np.ndarray               # linearization point


class _CircuitView:
    """Netlist with wires merged away and rows assigned."""

    def __init__(self, netlist: Netlist):
        parent: dict[str, str] = {n: n for n in netlist.nodes}

        def find(n: str) -> str:
            while parent[n] != n:
                parent[n] = parent[parent[n]]
                n = parent[n]
            return n

        for b in netlist.branches:
            if b.component.kind is ComponentKind.Wire:
                ra, rb = find(b.nodes[0]), find(b.nodes[1])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        self.alias = {n: find(n) for n in netlist.nodes}
        self.ground = self.alias[netlist.ground] if netlist.ground else None
        self.devices: list[Branch] = [b for b in netlist.branches
                                      if b.component.kind is not ComponentKind.Wire]
        self.dev_nodes: dict[str, tuple[str, ...]] = {
            b.component.id: tuple(self.alias[n] for n in b.nodes) for b in self.devices}
        reps = sorted({self.alias[n] for n in netlist.nodes})
        self.node_index = {n: i for i, n in enumerate(r for r in reps if r != self.ground)}
        self.n_nodes = len(self.node_index)
        self.sources = [b for b in self.devices if b.component.kind in _SOURCE_KINDS]
        self.source_index = {b.component.id: self.n_nodes + i
                             for i, b in enumerate(self.sources)}
        self.size = self.n_nodes + len(self.sources)
        self.netlist = netlist

    def row(self, rep_node: str) -> Optional[int]:
        return self.node_index.get(rep_node)

    def voltage(self, x: np.ndarray, rep_node: str) -> float:
        i = self.node_index.get(rep_node)
        return 0.0 if i is None else float(x[i])

    def junctions(self) -> list[tuple[str, str]]:
        """Node pairs whose voltage step must be damped (diode-like laws)."""
        pairs = []
        for b in self.devices:
            nodes = self.dev_nodes[b.component.id]
            if b.component.kind in (ComponentKind.Diode, ComponentKind.LED):
                pairs.append((nodes[0], nodes[1]))
            elif b.component.kind is ComponentKind.TransistorNPN:
                collector, base, emitter = nodes
                pairs.append((base, emitter))
                pairs.append((base, collector))
        return pairs


def _exp_lim(arg: float) -> tuple[float, float]:
    """exp with a linear extension above 200 to dodge overflow; returns
    (value, derivative). The extension is never active at a physical
    solution (it would mean ~1e74 A)."""
    if arg <= 200.0:
        e = math.exp(arg)
        return e, e
    e200 = math.exp(200.0)
    return e200 * (1.0 + (arg - 200.0)), e200


def _junction(v: float, i_sat: float, n: float) -> tuple[float, float]:
    """Shockley current and conductance at one junction voltage."""
    vt = n * THERMAL_VOLTAGE
    e, de = _exp_lim(v / vt)
    return i_sat * (e - 1.0), i_sat * de / vt


def _npn_currents(vc: float, vb: float, ve: float, i_sat: float,
                  beta_f: float, beta_r: float):
    """Terminal currents (into collector, base, emitter) and their Jacobian
    with respect to (Vc, Vb, Ve)."""
    icc, gcc = _junction(vb - ve, i_sat, 1.0)
    iec, gec = _junction(vb - vc, i_sat, 1.0)
    kr = 1.0 + 1.0 / beta_r
    i_c = icc - iec * kr
    i_b = icc / beta_f + iec / beta_r
    i_e = -(i_c + i_b)
    d_c = (gec * kr, gcc - gec * kr, -gcc)
    d_b = (-gec / beta_r, gcc / beta_f + gec / beta_r, -gcc / beta_f)
    d_e = tuple(-(dc + db) for dc, db in zip(d_c, d_b))
    return (i_c, i_b, i_e), (d_c, d_b, d_e)


def _device_terminal_currents(view: _CircuitView, branch: Branch, x: np.ndarray,
                              time: float, dt: Optional[float],
                              cap_prev: Optional[dict[str, float]]) -> tuple[float, ...]:
    """True (non-linearized) signed currents into each terminal at state x."""
    comp = branch.component
    nodes = view.dev_nodes[comp.id]
    v = [view.voltage(x, n) for n in nodes]
    kind = comp.kind
    if kind is ComponentKind.Resistor:
        i = (v[0] - v[1]) / comp.params.resistance
        return (i, -i)
    if kind is ComponentKind.Capacitor:
        if dt is None:
            return (0.0, 0.0)
        g = comp.params.capacitance / dt
        i = g * ((v[0] - v[1]) - cap_prev.get(comp.id, 0.0))
        return (i, -i)
    if kind in (ComponentKind.Diode, ComponentKind.LED):
        i, _ = _junction(v[0] - v[1], comp.params.saturation_current,
                         comp.params.emission_coefficient)
        return (i, -i)
    if kind is ComponentKind.TransistorNPN:
        currents, _ = _npn_currents(v[0], v[1], v[2], comp.params.saturation_current,
                                    comp.params.forward_beta, comp.params.reverse_beta)
        return currents
    if kind in _SOURCE_KINDS:
        i = float(x[view.source_index[comp.id]])
        return (i, -i)
    raise AssertionError(f"unexpected device kind {kind}")


def _source_value(branch: Branch, time: float) -> float:
    if branch.component.kind is ComponentKind.BatteryDC:
        return branch.component.params.emf
    p = branch.component.params
    return p.amplitude * math.sin(2.0 * math.pi * p.frequency * time)


def _assemble(view: _CircuitView, x: np.ndarray, time: float,
              dt: Optional[float], cap_prev: Optional[dict[str, float]]):
    size = view.size
    g = np.zeros((size, size))
    rhs = np.zeros(size)
    for i in range(view.n_nodes):
        g[i, i] += GMIN

    def add(row: Optional[int], col: Optional[int], value: float):
        if row is not None and col is not None:
            g[row, col] += value

    def add_rhs(row: Optional[int], value: float):
        if row is not None:
            rhs[row] += value

    for branch in view.devices:
        comp = branch.component
        nodes = view.dev_nodes[comp.id]
        rows = [view.row(n) for n in nodes]
        kind = comp.kind
        if kind is ComponentKind.Resistor:
            cond = 1.0 / comp.params.resistance
            add(rows[0], rows[0], cond)
            add(rows[1], rows[1], cond)
            add(rows[0], rows[1], -cond)
            add(rows[1], rows[0], -cond)
        elif kind is ComponentKind.Capacitor:
            if dt is not None:
                cond = comp.params.capacitance / dt
                add(rows[0], rows[0], cond)
                add(rows[1], rows[1], cond)
                add(rows[0], rows[1], -cond)
                add(rows[1], rows[0], -cond)
                ieq = cond * cap_prev.get(comp.id, 0.0)
                add_rhs(rows[0], ieq)
                add_rhs(rows[1], -ieq)
        elif kind in (ComponentKind.Diode, ComponentKind.LED):
            vd = view.voltage(x, nodes[0]) - view.voltage(x, nodes[1])
            i_d, g_d = _junction(vd, comp.params.saturation_current,
                                 comp.params.emission_coefficient)
            add(rows[0], rows[0], g_d)
            add(rows[1], rows[1], g_d)
            add(rows[0], rows[1], -g_d)
            add(rows[1], rows[0], -g_d)
            ieq = i_d - g_d * vd
            add_rhs(rows[0], -ieq)
            add_rhs(rows[1], ieq)
        elif kind is ComponentKind.TransistorNPN:
            v = [view.voltage(x, n) for n in nodes]
            currents, jac = _npn_currents(v[0], v[1], v[2], comp.params.saturation_current,
                                          comp.params.forward_beta, comp.params.reverse_beta)
            for ti in range(3):
                lin = currents[ti] - sum(jac[ti][tj] * v[tj] for tj in range(3))
                add_rhs(rows[ti], -lin)
                for tj in range(3):
                    add(rows[ti], rows[tj], jac[ti][tj])
        elif kind in _SOURCE_KINDS:
            src_row = view.source_index[comp.id]
            add(rows[0], src_row, 1.0)
            add(rows[1], src_row, -1.0)
            add(src_row, rows[0], 1.0)
            add(src_row, rows[1], -1.0)
            rint = comp.params.internal_resistance or 0.0
            g[src_row, src_row] -= rint
            rhs[src_row] += _source_value(branch, time)
    return g, rhs


def _check_dc_paths(view: _CircuitView):
    """Every node needs a non-capacitor attachment at DC, else the (un-Gmin'd)
    matrix is rank deficient and the voltage is physically indeterminate."""
    attached: set[str] = set()
    for branch in view.devices:
        if branch.component.kind is not ComponentKind.Capacitor:
            attached.update(view.dev_nodes[branch.component.id])
    for node in view.node_index:
        if node not in attached:
            raise SingularSystem(node)


def _kcl_residual(view: _CircuitView, x: np.ndarray, time: float,
                  dt: Optional[float], cap_prev: Optional[dict[str, float]]) -> float:
    totals: dict[str, float] = {}
    for branch in view.devices:
        currents = _device_terminal_currents(view, branch, x, time, dt, cap_prev)
        for node, i in zip(view.dev_nodes[branch.component.id], currents):
            totals[node] = totals.get(node, 0.0) + i
    return max((abs(v) for v in totals.values()), default=0.0)


def _newton(view: _CircuitView, x0: np.ndarray, time: float,
            dt: Optional[float], cap_prev: Optional[dict[str, float]]):
    x = x0.copy()
    junction_pairs = view.junctions()
    iterations = 0
    for iterations in range(1, MAX_ITERATIONS + 1):
        g, rhs = _assemble(view, x, time, dt, cap_prev)
        try:
            x_new = np.linalg.solve(g, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularSystem() from exc
        dx = x_new - x
        scale = 1.0
        for na, nb in junction_pairs:
            dv = abs(_dx_between(view, dx, na, nb))
            if dv > JUNCTION_STEP_LIMIT:
                scale = min(scale, JUNCTION_STEP_LIMIT / dv)
        x = x + scale * dx
        step = float(np.max(np.abs(scale * dx[:view.n_nodes]))) if view.n_nodes else 0.0
        if step < VOLTAGE_TOL:
            residual = _kcl_residual(view, x, time, dt, cap_prev)
            if residual < CURRENT_TOL:
                return x, iterations, residual, True
    residual = _kcl_residual(view, x, time, dt, cap_prev)
    return x, iterations, residual, False


def _dx_between(view: _CircuitView, dx: np.ndarray, na: str, nb: str) -> float:
    ia, ib = view.node_index.get(na), view.node_index.get(nb)
    va = dx[ia] if ia is not None else 0.0
    vb = dx[ib] if ib is not None else 0.0
    return float(va - vb)


def _make_result(view: _CircuitView, x: np.ndarray, time: float,
                 dt: Optional[float], cap_prev: Optional[dict[str, float]],
                 iterations: int, residual: float, converged: bool) -> SolveResult:
    voltages = {n: view.voltage(x, view.alias[n]) for n in view.netlist.nodes}
    branch_currents: dict[str, float] = {}
    terminal_currents: dict[str, tuple[float, ...]] = {}
    for branch in view.devices:
        currents = _device_terminal_currents(view, branch, x, time, dt, cap_prev)
        terminal_currents[branch.component.id] = currents
        branch_currents[branch.component.id] = currents[0]
    return SolveResult(time=time, node_voltages=voltages,
                       branch_currents=branch_currents,
                       terminal_currents=terminal_currents,
                       converged=converged, newton_iterations=iterations,
                       kcl_residual=residual)


def _empty_result(netlist: Netlist, time: float = 0.0) -> SolveResult:
    zero_terms = {b.component.id: (0.0,) * len(b.nodes)
                  for b in netlist.branches if b.component.kind is not ComponentKind.Wire}
    return SolveResult(time=time,
                       node_voltages={n: 0.0 for n in netlist.nodes},
                       branch_currents={cid: 0.0 for cid in zero_terms},
                       terminal_currents=zero_terms,
                       converged=True, newton_iterations=0, kcl_residual=0.0)


def stamp(netlist: Netlist, state: Optional[np.ndarray] = None,
          time: float = 0.0) -> MnaSystem:
    """Assemble the DC MNA system linearized at ``state`` (zeros if omitted)."""
    view = _CircuitView(netlist)
    _check_dc_paths(view)
    x = np.zeros(view.size) if state is None else np.asarray(state, dtype=float)
    g, rhs = _assemble(view, x, time, None, None)
    return MnaSystem(matrix=g, rhs=rhs, node_index=dict(view.node_index),
                     source_index=dict(view.source_index), state=x)


def solve_dc(netlist: Netlist, time: float = 0.0) -> SolveResult:
    """DC operating point (AC sources evaluated at t = ``time``, default 0).

    Returns a converged=False best iterate instead of raising when Newton
    stalls; raises :class:`SingularSystem` for structurally unsolvable nets.
    """
    if not netlist.nodes:
        return _empty_result(netlist)
    view = _CircuitView(netlist)
    _check_dc_paths(view)
    x, iterations, residual, ok = _newton(view, np.zeros(view.size), time, None, None)
    return _make_result(view, x, time, None, None, iterations, residual, ok)


def transient_steps(netlist: Netlist, dt: float, n_steps: int, t_start: float = 0.0,
                    cap_state: Optional[dict[str, float]] = None,
                    x_start: Optional[np.ndarray] = None) -> Iterator[SolveResult]:
    """Backward-Euler steps; yields one converged result per step and stops
    early (after yielding nothing for it) at the first non-converging step.

    ``cap_state`` maps capacitor ids to their branch voltage at ``t_start``
    and is mutated in place as steps complete, so callers can pause/resume.
    """
    if not netlist.nodes:
        for k in range(1, n_steps + 1):
            yield _empty_result(netlist, t_start + k * dt)
        return
    view = _CircuitView(netlist)
    cap_prev = cap_state if cap_state is not None else {}
    for b in view.devices:
        if b.component.kind is ComponentKind.Capacitor:
            cap_prev.setdefault(b.component.id, 0.0)
    x = np.zeros(view.size) if x_start is None else np.asarray(x_start, dtype=float)
    for k in range(1, n_steps + 1):
        t = t_start + k * dt
        x_new, iterations, residual, ok = _newton(view, x, t, dt, cap_prev)
        if not ok:
            return
        result = _make_result(view, x_new, t, dt, cap_prev, iterations, residual, True)
        for b in view.devices:
            if b.component.kind is ComponentKind.Capacitor:
                nodes = view.dev_nodes[b.component.id]
                cap_prev[b.component.id] = (view.voltage(x_new, nodes[0])
                                            - view.voltage(x_new, nodes[1]))
        x = x_new
        yield result


def solve_transient(netlist: Netlist, config: TransientConfig) -> list[SolveResult]:
    """Time march from t=0 with all capacitor voltages starting at zero.

    On a non-converging step the converged prefix is returned; callers can
    compare ``len(results)`` with ``config.n_steps``.
    """
    return list(transient_steps(netlist, config.dt, config.n_steps))
