"""Headless command line: solve a netlist or saved layout, print CSV.

Exit codes: 0 solved, 1 parse/usage error, 2 no convergence.
"""

from __future__ import annotations

import argparse
import sys

from . import netio
from .breadboard import connectivity, extract_netlist
from .model import Netlist
from .netio import LayoutDocumentError, NetlistSyntaxError
from .solver import (SolverError, TransientConfig, solve_dc,
                     solve_transient)
from .viz import GridConfig, field_at, segments_from_layout


def _load_inputs(args, parser):
    if bool(args.netlist) == bool(args.layout):
        parser.error("exactly one of --netlist or --layout is required")
    if args.layout:
        with open(args.layout, "r", encoding="utf-8") as fh:
            layout = netio.load_layout(fh.read())
        report = connectivity(layout)
        return extract_netlist(layout, report), layout, report
    with open(args.netlist, "rb") as fh:
        return netio.parse_netlist(fh.read()), None, None


def _probe_magnitude(layout, result, report, xy) -> float:
    segments = segments_from_layout(layout, result, report)
    sample = field_at((xy[0], xy[1], GridConfig().height), segments)
    bx, by, bz = sample.b
    return (bx * bx + by * by + bz * bz) ** 0.5


def _format(value: float) -> str:
    return repr(float(value))


def _run_dc(netlist: Netlist, layout, report, probe, out) -> int:
    result = solve_dc(netlist)
    for node in sorted(result.node_voltages):
        print(f"{node},{_format(result.node_voltages[node])}", file=out)
    for cid in sorted(result.branch_currents):
        print(f"{cid},{_format(result.branch_currents[cid])}", file=out)
    if probe is not None:
        if layout is None:
            print("--probe-field requires --layout", file=sys.stderr)
            return 1
        magnitude = _probe_magnitude(layout, result, report, probe)
        print(f"field,{_format(magnitude)}", file=out)
    if not result.converged:
        print(f"no convergence after {result.newton_iterations} iterations",
              file=sys.stderr)
        return 2
    return 0


def _run_tran(netlist: Netlist, layout, report, dt: float, t_end: float,
              probe, out) -> int:
    if probe is not None and layout is None:
        print("--probe-field requires --layout", file=sys.stderr)
        return 1
    config = TransientConfig(dt=dt, t_end=t_end)
    results = solve_transient(netlist, config)
    nodes = sorted(netlist.nodes)
    branches = sorted(b.component.id for b in netlist.branches)
    header = ["time", *nodes, *branches]
    if probe is not None:
        header.append("field")
    print(",".join(header), file=out)
    for r in results:
        row = [_format(r.time)]
        row += [_format(r.node_voltages[n]) for n in nodes]
        row += [_format(r.branch_currents.get(b, 0.0)) for b in branches]
        if probe is not None:
            row.append(_format(_probe_magnitude(layout, r, report, probe)))
        print(",".join(row), file=out)
    if len(results) < config.n_steps:
        print(f"no convergence at step {len(results) + 1}", file=sys.stderr)
        return 2
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="volta", description="solve a circuit and print CSV results")
    parser.add_argument("--netlist", metavar="FILE", help="text netlist input")
    parser.add_argument("--layout", metavar="FILE", help="saved breadboard layout input")
    parser.add_argument("--dc", action="store_true", help="DC operating point")
    parser.add_argument("--tran", nargs=2, type=float, metavar=("DT", "T_END"),
                        help="transient analysis")
    parser.add_argument("--probe-field", nargs=2, type=float, metavar=("X", "Y"),
                        help="append field magnitude at a board point (meters)")
    args = parser.parse_args(argv)

    if args.tran is not None and args.tran[0] <= 0:
        parser.print_usage(sys.stderr)
        print("volta: error: --tran dt must be > 0", file=sys.stderr)
        return 1
    if not args.dc and args.tran is None:
        parser.print_usage(sys.stderr)
        print("volta: error: choose an analysis: --dc or --tran", file=sys.stderr)
        return 1

    try:
        netlist, layout, report = _load_inputs(args, parser)
    except NetlistSyntaxError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 1
    except LayoutDocumentError as exc:
        print(f"layout error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"cannot read input: {exc}", file=sys.stderr)
        return 1

    try:
        if args.dc:
            return _run_dc(netlist, layout, report, args.probe_field, sys.stdout)
        return _run_tran(netlist, layout, report, args.tran[0], args.tran[1],
                         args.probe_field, sys.stdout)
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
