"""Command-line front end: growdom <subcommand> [config] [flags].

Subcommands: run, steady, eigen, classify, sweep, verify.  Configs are the
sectioned key = value files described in the config module; the bundled
scenarios (fig1a, fig1b, fig2a, fig2b) resolve by name when the given path
does not exist on disk.

Exit codes: 0 success, 1 usage/config error, 2 numerical failure,
3 verification FAIL.
"""

from __future__ import annotations

import argparse
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import plotting, steady, verify
from .classify import SWEEP_AXES, classify as classify_params, sweep as run_sweep, write_sweep_csv
from .config import ConfigError, parse_config
from .eigen import EigenError, principal_eigen_analytic, principal_eigen_numeric
from .grids import write_field_csv
from .solver import SolverError, integrate, write_trajectory
from .steady import SteadyError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY_FAIL = 3


def _resolve_config_path(path_str: str) -> Path:
    """Literal path if it exists, else fall back to a bundled scenario."""
    path = Path(path_str)
    if path.exists():
        return path
    bundled = resources.files("growdom").joinpath("scenarios", path.name)
    if bundled.is_file():
        return Path(str(bundled))
    raise FileNotFoundError(f"config not found: {path_str}")


def _load_config(args):
    path = _resolve_config_path(args.config)
    cfg = parse_config(path.read_text())
    if args.out is not None:
        cfg.out_dir = args.out
    if getattr(args, "dt", None) is not None:
        cfg.dt = "auto" if args.dt == "auto" else float(args.dt)
    if getattr(args, "t_end", None) is not None:
        cfg.t_end = args.t_end
    if getattr(args, "grid", None) is not None:
        cfg.points = (args.grid,) * cfg.dim
    return cfg


class _Outputs:
    """Track files created by a subcommand so failures leave nothing behind."""

    def __init__(self):
        self.paths = []

    def add(self, paths):
        if isinstance(paths, (str, Path)):
            self.paths.append(Path(paths))
        else:
            self.paths.extend(Path(p) for p in paths)

    def discard(self):
        for p in self.paths:
            try:
                p.unlink(missing_ok=True)
            except OSError:
                pass


def _say(args, message: str) -> None:
    if not args.quiet:
        print(message)


def cmd_run(args) -> int:
    cfg = _load_config(args)
    p = cfg.params()
    dt = cfg.resolve_dt()
    traj = integrate(
        cfg.initial_field(),
        cfg.t_end,
        dt,
        p,
        snapshot_every=cfg.snapshot_every,
        steady_rtol=1e-8 if cfg.stop_when_steady else None,
    )
    out = Path(cfg.out_dir)
    outputs = _Outputs()
    try:
        outputs.add(
            write_trajectory(
                out, traj, p,
                extra={"ic": cfg.ic_name, "ic_amplitude": repr(cfg.ic_amplitude)},
            )
        )
        if cfg.emit_plot:
            script = plotting.emit_plot(out)
            outputs.add([script, out / "heatmap.png"])
    except Exception:
        outputs.discard()
        raise
    report = classify_params(p)
    final_sup = float(traj.diag_sup[-1])
    _say(
        args,
        f"{report.regime.value} (threshold {report.threshold:.4f}, "
        f"margin {report.margin:.4f}); final sup_norm {final_sup:.3e} "
        f"at t={traj.diag_t[-1]:.6g}; wrote {out}",
    )
    return EXIT_OK


def cmd_steady(args) -> int:
    cfg = _load_config(args)
    p = cfg.params()
    result = steady.solve_steady(p)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = _Outputs()
    try:
        csv_path = out / "steady_field.csv"
        write_field_csv(result.field, csv_path)
        outputs.add(csv_path)
        summary = steady.summary_line(result)
        summary_path = out / "steady_summary.txt"
        summary_path.write_text(summary + "\n")
        outputs.add(summary_path)
        if cfg.emit_plot:
            outputs.add(plotting.emit_plot(csv_path))
            outputs.add(out / "steady_field.png")
    except Exception:
        outputs.discard()
        raise
    _say(args, summary + f"; wrote {out}")
    return EXIT_OK


def cmd_eigen(args) -> int:
    cfg = _load_config(args)
    grid = cfg.grid()
    analytic = principal_eigen_analytic(grid)
    numeric = principal_eigen_numeric(grid)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = _Outputs()
    try:
        for name, pair in (("analytic", analytic), ("numeric", numeric)):
            path = out / f"phi_{name}.csv"
            write_field_csv(pair.phi, path)
            outputs.add(path)
        lines = (
            f"lambda1_analytic = {analytic.lambda1!r}\n"
            f"lambda1_numeric = {numeric.lambda1!r}\n"
            f"numeric_iterations = {numeric.iterations}\n"
            f"numeric_residual = {numeric.residual!r}\n"
        )
        summary_path = out / "eigen_summary.txt"
        summary_path.write_text(lines)
        outputs.add(summary_path)
    except Exception:
        outputs.discard()
        raise
    _say(
        args,
        f"lambda1 analytic {analytic.lambda1:.6f}, numeric {numeric.lambda1:.6f} "
        f"({numeric.iterations} iterations, residual {numeric.residual:.2e}); wrote {out}",
    )
    return EXIT_OK


def cmd_classify(args) -> int:
    cfg = _load_config(args)
    report = classify_params(cfg.params())
    _say(
        args,
        f"{report.regime.value}, threshold {report.threshold:.4f}, "
        f"margin {report.margin:.4f}",
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _load_config(args)
    values = [float(x) for x in args.values.split(",") if x.strip()]
    if not values:
        print("sweep: no values given", file=sys.stderr)
        return EXIT_USAGE
    attach = not args.no_steady
    entries = run_sweep(cfg.params(), args.axis, values, attach_steady=attach)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = _Outputs()
    try:
        csv_path = out / "sweep.csv"
        write_sweep_csv(entries, args.axis, csv_path, attach_steady=attach)
        outputs.add(csv_path)
    except Exception:
        outputs.discard()
        raise
    for e in entries:
        if e.report is None:
            _say(args, f"{args.axis}={e.value:g}: error: {e.error}")
        else:
            extra = f", max v* {e.max_vstar:.4f}" if e.max_vstar is not None else ""
            _say(args, f"{args.axis}={e.value:g}: {e.report.regime.value}{extra}")
    reports = [e.report for e in entries if e.report is not None]
    if args.axis == "h" and reports:
        hstar = reports[0].critical_harvest
        _say(
            args,
            f"critical harvest h* = {hstar:.4f}: persistence below, extinction at or above",
        )
    _say(args, f"wrote {csv_path}")
    return EXIT_OK


def cmd_verify(args) -> int:
    cfg = _load_config(args)
    p = cfg.params()
    dt = cfg.resolve_dt()
    v0 = cfg.initial_field()
    if args.check == "comparison":
        report = verify.check_comparison(
            v0.with_values(0.5 * v0.values), v0, p, cfg.t_end, dt,
            snapshot_every=cfg.snapshot_every,
        )
    elif args.check == "laplacian-sign":
        report = verify.check_laplacian_sign(
            v0, p, cfg.t_end, dt, snapshot_every=cfg.snapshot_every
        )
    elif args.check == "sandwich":
        report = verify.sandwich_run(
            v0, p, cfg.t_end, dt, snapshot_every=cfg.snapshot_every
        )
    else:  # argparse choices already exclude this
        return EXIT_USAGE
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    outputs = _Outputs()
    try:
        report_path = out / f"verify_{args.check}.txt"
        report_path.write_text(report.text() + "\n")
        outputs.add(report_path)
        csv_path = out / f"verify_{args.check}_violations.csv"
        verify.write_violations_csv(report, csv_path)
        outputs.add(csv_path)
    except Exception:
        outputs.discard()
        raise
    _say(args, report.text() + f"; wrote {out}")
    return EXIT_OK if report.passed else EXIT_VERIFY_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="growdom",
        description="Harvested logistic population on a growing habitat: "
        "solve, classify, and verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, with_run_flags=True):
        sp.add_argument("config", help="scenario config path or bundled name (fig1a.cfg, ...)")
        sp.add_argument("--out", help="output directory (overrides [output] dir)")
        sp.add_argument("--quiet", action="store_true", help="suppress the summary line")
        if with_run_flags:
            sp.add_argument("--dt", help="time step or 'auto' (overrides [run] dt)")
            sp.add_argument("--t-end", dest="t_end", type=float, help="override [run] t_end")
        sp.add_argument("--grid", type=int, help="interior nodes per axis (overrides [model] points)")

    sp = sub.add_parser("run", help="integrate the scenario and export the trajectory")
    common(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("steady", help="solve for the steady state on the fully grown domain")
    common(sp, with_run_flags=False)
    sp.set_defaults(func=cmd_steady)

    sp = sub.add_parser("eigen", help="principal eigenpair, analytic and numeric")
    common(sp, with_run_flags=False)
    sp.set_defaults(func=cmd_eigen)

    sp = sub.add_parser("classify", help="extinction/persistence threshold arithmetic")
    common(sp, with_run_flags=False)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("sweep", help="classify along one parameter axis")
    common(sp, with_run_flags=False)
    sp.add_argument("axis", choices=SWEEP_AXES)
    sp.add_argument("values", help="comma-separated parameter values")
    sp.add_argument(
        "--no-steady", action="store_true",
        help="skip attaching steady-state amplitudes",
    )
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("verify", help="run one of the ordering checks")
    common(sp)
    sp.add_argument("check", choices=verify.CHECK_NAMES)
    sp.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ConfigError as exc:
        for lineno, msg in exc.errors:
            print(f"{args.config}:{lineno}: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except (SolverError, SteadyError, EigenError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
