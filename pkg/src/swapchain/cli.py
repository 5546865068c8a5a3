"""Command-line front end writing scan, chain and enumeration datasets as CSV or JSON."""

from __future__ import annotations

import argparse
import math
import os
import re
import sys

from swapchain.chain import critical_search, p_k_closed, simulate_all_psi
from swapchain.chain.exhaustive import MAX_PARTIES, exhaustive_search
from swapchain.chain.scans import (
    ALPHA_UNITS,
    DEFAULT_N_LIST,
    ScanGrid,
    activating_alpha_window,
    confirm_window,
    alpha_label_probe,
    scan_activation_region,
    scan_critical_number,
    scan_initial_region,
)
from swapchain.criteria import chsh_report
from swapchain.errors import DomainError
from swapchain.qstate import ChainParams
from swapchain.table import Table
from swapchain.verify import run_verification

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(pi)?\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


def parse_angle(text: str, unit: str = "rad") -> float:
    """``"0.45pi"`` -> 0.45*pi, ``"pi/4"``, ``"3pi/4"``; bare numbers are read in ``unit``."""
    m = _ANGLE.match(text)
    if not m or (m.group(1) is None and m.group(2) is None):
        raise argparse.ArgumentTypeError(f"cannot parse angle {text!r}")
    coeff = float(m.group(1)) if m.group(1) is not None else 1.0
    value = coeff * (math.pi if m.group(2) else ALPHA_UNITS[unit])
    if m.group(3):
        value /= float(m.group(3))
    return value


def _float_list(text: str) -> list[str]:
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _default_workers() -> int:
    try:
        return max(1, int(os.environ.get("SWAPCHAIN_WORKERS", "1")))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="swapchain", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", default="-", help="output file, '-' for stdout")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=_default_workers())
    common.add_argument("--alpha-unit", choices=tuple(ALPHA_UNITS), default="rad",
                        help="unit for angles given without the 'pi' suffix")

    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--alpha-min", default="pi/4")
    grid.add_argument("--alpha-max", default="3pi/4")
    grid.add_argument("--p-min", type=float, default=0.0)
    grid.add_argument("--p-max", type=float, default=1.0)
    grid.add_argument("--steps", type=int, default=400)
    grid.add_argument("--p1", type=float, default=0.01)

    point = argparse.ArgumentParser(add_help=False)
    point.add_argument("--p", type=float, required=True)
    point.add_argument("--alpha", required=True)
    point.add_argument("--p1", type=float, required=True)

    sub.add_parser("scan-initial", parents=[common, grid], help="CHSH-local region of the link states")
    act = sub.add_parser("scan-activation", parents=[common, grid], help="activation regions per swap count")
    act.add_argument("--n-list", default=",".join(map(str, DEFAULT_N_LIST)))
    act.add_argument("--boundary-output", help="where to write the Phi separability curves (CSV)")

    crit = sub.add_parser("critical-number", parents=[common], help="critical swap number versus p1")
    crit.add_argument("--p", type=float, default=0.75)
    crit.add_argument("--alphas", default="auto", help="comma-separated angles, or 'auto' to sample the activating window")
    crit.add_argument("--n-alphas", type=int, default=3)
    crit.add_argument("--p1-min", type=float, default=0.001)
    crit.add_argument("--p1-max", type=float, default=0.707)
    crit.add_argument("--steps", type=int, default=500)
    crit.add_argument("--k-max", type=int, default=512)

    sim = sub.add_parser("simulate", parents=[common, point], help="all-Psi chain: closed form vs brute force")
    sim.add_argument("--k-max", type=int, default=8)

    exh = sub.add_parser("exhaustive", parents=[common, point], help="enumerate every outcome configuration")
    exh.add_argument("--m-parties", type=int, default=4)
    exh.add_argument("--violating-only", action="store_true")

    ver = sub.add_parser("verify", parents=[common], help="closed form vs brute-force suite")
    ver.add_argument("--trials", type=int, default=1000)
    return parser


def _grid(args) -> ScanGrid:
    return ScanGrid(
        parse_angle(args.alpha_min, args.alpha_unit),
        parse_angle(args.alpha_max, args.alpha_unit),
        args.p_min,
        args.p_max,
        args.steps,
        args.p1,
    )


def _config(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("output", "boundary_output")}


def _render(table: Table, args, **extra) -> str:
    if args.format == "json":
        return table.to_json(_config(args), **extra)
    return table.to_csv()


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_scan_initial(args) -> int:
    _write(_render(scan_initial_region(_grid(args), args.workers), args), args.output)
    return 0


def cmd_scan_activation(args) -> int:
    n_list = [int(n) for n in _float_list(args.n_list)]
    region = scan_activation_region(_grid(args), n_list, args.workers)
    boundaries = region.boundaries.records()
    _write(_render(region.table, args, phi_boundary=boundaries), args.output)
    if args.boundary_output:
        _write(region.boundaries.to_csv(), args.boundary_output)
    return 0


def cmd_critical_number(args) -> int:
    window = activating_alpha_window(args.p)
    if args.alphas == "auto":
        if window is None:
            raise DomainError(f"no activating alpha window for p={args.p}")
        lo, hi = window
        # keep clear of the edges, where n_c diverges
        alphas = [lo + (hi - lo) * (i + 1) / (2 * (args.n_alphas + 1)) for i in range(args.n_alphas)]
    else:
        alphas = [parse_angle(a, args.alpha_unit) for a in _float_list(args.alphas)]
    table = scan_critical_number(args.p, alphas, args.p1_min, args.p1_max, args.steps, args.k_max)
    extra = {}
    if args.format == "json":
        extra = {
            "activating_window": list(window) if window else None,
            "window_confirmed_by_simulation": bool(window and confirm_window(args.p, window)),
            "alpha_label_probe": alpha_label_probe(args.p),
        }
    _write(_render(table, args, **extra), args.output)
    if window:
        print(f"activating window for p={args.p}: ({window[0] / math.pi:.6f}pi, {window[1] / math.pi:.6f}pi)",
              file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    params = ChainParams(args.p, parse_angle(args.alpha, args.alpha_unit), args.p1)
    table = Table(("k", "n_swaps", "probability", "p_closed", "p_oracle", "max_deviation", "violates"))
    for k in range(1, args.k_max + 1):
        res = simulate_all_psi(k, params)
        if not res.defined:
            table.append(k, 2 * (k - 1), res.probability, None, None, None, None)
            continue
        state = res.post_state
        try:
            closed = p_k_closed(k, params)
        except DomainError:
            closed = None
        oracle = 1.0 - state[0, 0].real
        dev = abs(closed - oracle) if closed is not None else None
        table.append(k, 2 * (k - 1), res.probability, closed, oracle, dev,
                     chsh_report(state, check=False).violates)
    _write(_render(table, args, critical=critical_search(params).__dict__), args.output)
    return 0


def cmd_exhaustive(args) -> int:
    if not 1 <= args.m_parties <= MAX_PARTIES:
        raise DomainError(f"--m-parties must lie in 1..{MAX_PARTIES}")
    params = ChainParams(args.p, parse_angle(args.alpha, args.alpha_unit), args.p1)
    report = exhaustive_search(params, args.m_parties, args.workers)
    table = Table(("window", "outcomes", "probability", "m_value", "violates", "min_pt_eigenvalue"))
    for w in report.windows:
        for b in w.branches:
            if args.violating_only and not b.violates:
                continue
            table.append(w.window.label, " ".join(map(str, b.outcomes)), b.probability, b.m_value, b.violates,
                         b.min_pt_eigenvalue)
    _write(_render(table, args), args.output)
    print(f"{report.n_branches} branches, {len(report.violating)} violating, "
          f"all-Psi rule holds: {report.psi_rule_holds()}", file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    checks = run_verification(args.seed, args.trials)
    table = Table(("check", "value", "tolerance", "passed"))
    for c in checks:
        print(c.line(), file=sys.stderr)
        table.append(c.name, c.value, c.tol, c.passed)
    if args.output != "-":
        _write(_render(table, args), args.output)
    ok = all(c.passed for c in checks)
    print("verify: " + ("all checks passed" if ok else "FAILED"), file=sys.stderr)
    return 0 if ok else 1


COMMANDS = {
    "scan-initial": cmd_scan_initial,
    "scan-activation": cmd_scan_activation,
    "critical-number": cmd_critical_number,
    "simulate": cmd_simulate,
    "exhaustive": cmd_exhaustive,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.workers < 1:
        parser.error("--workers must be at least 1")
    try:
        return COMMANDS[args.command](args)
    except (DomainError, argparse.ArgumentTypeError) as exc:
        print(f"swapchain: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"swapchain: cannot write output: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
