"""Command-line interface: ``scan``, ``analyze`` and ``validate``.

Exit codes: 0 success, 1 invalid configuration or arguments, 2 solver
failure or a failed validation tolerance.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__
from ._kernels import ACTIVE_BACKEND, HAVE_EXTENSION
from .errors import InputError, SolverError
from .observables import absorption
from .oracles import integrate_master_equation, mollow_probe_absorption
from .probe_response import solve_probe
from .scan import ScanConfig, SpectrumTable, find_peak_and_width, run_scan
from .steady_state import solve_steady_state
from .system import FieldSpec, TransitionSpec, build_operator_set, build_q_operators


class _Parser(argparse.ArgumentParser):
    """argparse variant that reports usage problems as InputError."""

    def error(self, message):
        raise InputError(message)


def _parse_polarization(text: str):
    if "," not in text:
        return text
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise InputError(
            f"polarization needs a preset name or three components, got {text!r}"
        )
    try:
        return tuple(complex(p) for p in parts)
    except ValueError as exc:
        raise InputError(f"cannot parse polarization component in {text!r}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="zeemanprobe",
        description=__doc__,
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    scan = sub.add_parser(
        "scan",
        help="run a sweep and write a CSV spectrum",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    scan.add_argument("--config", help="JSON config file; flags override its fields")
    scan.add_argument("--fg", type=float, help="ground angular momentum")
    scan.add_argument("--fe", type=float, help="excited angular momentum")
    scan.add_argument("--branching", type=float, help="decay fraction back to ground")
    scan.add_argument("--gamma", type=float, help="transit rate (units of Gamma)")
    scan.add_argument("--beta-g", type=float, help="ground gyromagnetic factor")
    scan.add_argument("--beta-e", type=float, help="excited gyromagnetic factor")
    scan.add_argument("--pump-rabi", type=float, help="pump Rabi frequency")
    scan.add_argument("--probe-rabi", type=float, help="probe Rabi frequency")
    scan.add_argument("--detuning", type=float, help="pump detuning")
    scan.add_argument(
        "--pump-pol", type=_parse_polarization,
        help="pump polarization preset or three comma-separated components",
    )
    scan.add_argument("--probe-pol", type=_parse_polarization,
                      help="probe polarization (same forms as --pump-pol)")
    scan.add_argument("--bfield", type=float, help="static magnetic field")
    scan.add_argument("--delta", type=float,
                      help="fixed pump-probe offset for bfield/saturation scans")
    scan.add_argument("--scan", dest="scan_variable",
                      choices=("delta", "bfield", "saturation"), help="scan variable")
    scan.add_argument("--range", nargs=2, type=float, metavar=("LO", "HI"),
                      help="scan range")
    scan.add_argument("--points", type=int, help="number of grid points")
    scan.add_argument("--log-grid", action="store_true", default=None,
                      help="log-spaced grid (saturation scans)")
    scan.add_argument("--observables", help="comma-separated observable names")
    scan.add_argument("--workers", type=int, help="worker processes")
    scan.add_argument("--output", help="output CSV path ('-' for stdout)")

    analyze = sub.add_parser(
        "analyze", help="locate a resonance in a CSV spectrum",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    analyze.add_argument("table", help="CSV file produced by 'scan'")
    analyze.add_argument("--column", default="absorption", help="observable column")
    analyze.add_argument("--window", nargs=2, type=float, metavar=("LO", "HI"),
                         help="restrict the search window")

    validate = sub.add_parser(
        "validate", help="run the oracle cross-checks",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    validate.add_argument("--quick", action="store_true",
                          help="reduced-scale checks only")
    return parser


def _config_from_args(args) -> ScanConfig:
    data = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    base = ScanConfig.from_dict(data) if data else _default_config()

    tr = base.transition
    transition = TransitionSpec(
        fg=args.fg if args.fg is not None else tr.fg,
        fe=args.fe if args.fe is not None else tr.fe,
        branching=args.branching if args.branching is not None else tr.branching,
        gamma=args.gamma if args.gamma is not None else tr.gamma,
        beta_g=args.beta_g if args.beta_g is not None else tr.beta_g,
        beta_e=args.beta_e if args.beta_e is not None else tr.beta_e,
    )
    pump = FieldSpec(
        rabi=args.pump_rabi if args.pump_rabi is not None else base.pump.rabi,
        pol=args.pump_pol if args.pump_pol is not None else base.pump.pol,
        detuning=args.detuning if args.detuning is not None else base.pump.detuning,
    )
    probe = FieldSpec(
        rabi=args.probe_rabi if args.probe_rabi is not None else base.probe.rabi,
        pol=args.probe_pol if args.probe_pol is not None else base.probe.pol,
    )
    observables = base.observables
    if args.observables is not None:
        observables = tuple(s.strip() for s in args.observables.split(",") if s.strip())
    rng = args.range if args.range is not None else (base.lo, base.hi)
    return ScanConfig(
        transition=transition,
        pump=pump,
        probe=probe,
        bfield=args.bfield if args.bfield is not None else base.bfield,
        delta=args.delta if args.delta is not None else base.delta,
        scan_variable=args.scan_variable or base.scan_variable,
        lo=float(rng[0]),
        hi=float(rng[1]),
        points=args.points if args.points is not None else base.points,
        log_grid=args.log_grid if args.log_grid is not None else base.log_grid,
        observables=observables,
        output_path=args.output if args.output is not None else base.output_path,
        workers=args.workers if args.workers is not None else base.workers,
    )


def _default_config() -> ScanConfig:
    return ScanConfig(
        transition=TransitionSpec(fg=1, fe=2, branching=1.0, gamma=1e-3),
        pump=FieldSpec(rabi=0.4, pol="lin_x"),
        probe=FieldSpec(rabi=1e-3, pol="lin_y"),
    )


def _cmd_scan(args) -> int:
    cfg = _config_from_args(args)
    table = run_scan(cfg)
    if cfg.output_path in (None, "-"):
        sys.stdout.write(table.to_csv())
    else:
        table.write_csv(cfg.output_path)
        print(
            f"wrote {len(table.scan_values)} rows to {cfg.output_path} "
            f"(max residual {table.max_residual:.2e})"
        )
    return 0


def _cmd_analyze(args) -> int:
    table = SpectrumTable.read_csv(args.table)
    window = tuple(args.window) if args.window else None
    report = find_peak_and_width(table, args.column, window)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    return 0


def _check(name: str, metric: float, tol: float, lines: list) -> bool:
    ok = metric <= tol
    status = "ok" if ok else "FAILED"
    lines.append(f"{status:6s} {name}: {metric:.3e} (tolerance {tol:.0e})")
    return ok


def _cmd_validate(args) -> int:
    lines = [
        f"zeemanprobe {__version__} validation "
        f"(kernel backend: {ACTIVE_BACKEND}, extension built: {HAVE_EXTENSION})"
    ]
    ok = True

    # dipole-component completeness
    worst = 0.0
    for fg, fe in ((1, 2), (2, 1), (2, 2), (0.5, 1.5)):
        spec = TransitionSpec(fg=fg, fe=fe)
        qs = build_q_operators(spec)
        acc = sum(q.conj().T @ q for q in qs)
        pe = np.zeros_like(acc)
        pe[spec.ng :, spec.ng :] = np.eye(spec.ne)
        worst = max(worst, float(np.max(np.abs(acc - pe))))
    ok &= _check("dipole completeness", worst, 1e-12, lines)

    # closed-form two-level probe response vs the full solver
    gamma = 0.01
    worst = 0.0
    for rabi in (0.4, 2.0):
        spec = TransitionSpec(fg=0, fe=1, gamma=gamma)
        ops = build_operator_set(
            spec,
            FieldSpec(rabi=rabi, pol="sigma+"),
            FieldSpec(rabi=1.0, pol="sigma+"),
        )
        steady = solve_steady_state(ops, spec)
        for delta in np.linspace(-3, 3, 21):
            a = absorption(solve_probe(ops, spec, steady, delta), ops, ops.probe)
            b = mollow_probe_absorption(rabi, 0.0, delta, gamma)
            worst = max(worst, abs(a - b) / max(abs(b), 1e-15))
    ok &= _check("two-level closed form vs solver", worst, 1e-10, lines)

    # brute-force time integration vs the sideband solver
    cases = [((1, 2), "lin_x", "lin_y", 0.37)]
    if not args.quick:
        cases += [((0, 1), "sigma+", "sigma+", 0.8), ((2, 1), "lin_x", "lin_y", 0.21)]
    worst = 0.0
    for (fg, fe), pump_pol, probe_pol, delta in cases:
        spec = TransitionSpec(fg=fg, fe=fe, gamma=0.09)
        pump = FieldSpec(rabi=0.3, pol=pump_pol)
        probe = FieldSpec(rabi=3e-4, pol=probe_pol)
        ops = build_operator_set(spec, pump, probe)
        steady = solve_steady_state(ops, spec)
        pr = solve_probe(ops, spec, steady, delta)
        res = integrate_master_equation(
            ops, spec, probe, delta, t_end=24.0 / spec.gamma, dt=0.01
        )
        rel = np.linalg.norm(res.fourier_plus - pr.matrix) / np.linalg.norm(pr.matrix)
        worst = max(worst, float(rel))
    ok &= _check("time-domain integration vs solver", worst, 1e-4, lines)

    print("\n".join(lines))
    print("all checks passed" if ok else "VALIDATION FAILED")
    return 0 if ok else 2


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "scan":
            return _cmd_scan(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_validate(args)
    except (InputError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SolverError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
