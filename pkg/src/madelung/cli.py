"""Command-line front end: evaluation, verification, roots, quadrature, figures.

Exit status contract: 0 on success, 2 on usage or configuration errors,
3 on verification or analysis failures.  All numeric CSV output uses 17
significant digits, comma separators and no quoting, so identical
invocations produce byte-identical files.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import analysis, core, verify
from .errors import (
    DomainError,
    MadelungError,
    RangeTooNarrow,
    SingularityError,
    ToleranceNotMet,
    UnmatchedRoot,
)
from .specfun import DEFAULT_ACCURACY, EvalAccuracy

ETA_FIELDS = ("f", "g", "h", "Q")
LAB_FIELDS = ("rho", "u", "v", "S", "psi_re", "psi_im")

# hard residual thresholds; phase and qpotential are comparative reports
# and never gate the exit status
THRESHOLDS = {
    "ode5": 1e-8,
    "ode_system4": 1e-6,
    "continuity": 1e-5,
    "euler_x": 1e-4,
    "euler_y": 1e-4,
    "schrodinger": 1e-4,
}


@dataclass
class RunConfig:
    params: core.PhysicalParams
    consts: core.SolutionConstants
    accuracy: EvalAccuracy
    grids: dict = field(default_factory=dict)
    output_path: str | None = None
    tol: float = 1e-9
    fd_step: float = 1e-4


@dataclass
class CsvTable:
    """Rectangular numeric table; None renders as an empty field."""

    header: list
    rows: list

    def render(self) -> str:
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, str):
                return v
            v = float(v)
            if math.isnan(v):
                return ""
            return format(v, ".17g")

        lines = [",".join(self.header)]
        for row in self.rows:
            if len(row) != len(self.header):
                raise ValueError("ragged csv row")
            lines.append(",".join(cell(v) for v in row))
        return "\n".join(lines) + "\n"


def parse_grid(text: str) -> verify.GridSpec:
    """Grid grammar start:stop:count[:log]."""
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise DomainError(f"bad grid spec {text!r}; expected start:stop:count[:log]")
    spacing = "uniform"
    if len(parts) == 4:
        if parts[3] not in ("log", "uniform"):
            raise DomainError(f"bad grid spacing {parts[3]!r}")
        spacing = parts[3]
    return verify.GridSpec(float(parts[0]), float(parts[1]), int(parts[2]), spacing)


def parse_scalar_or_grid(text: str):
    if ":" in text:
        return parse_grid(text)
    return float(text)


def read_config_file(path: str) -> dict:
    """Flat key = value lines; '#' starts a comment."""
    values = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key] = value
    return values


_CONFIG_KEYS = ("m", "hbar", "c0", "c1", "c2", "dim", "tol", "fd_step", "output")


def build_config(args) -> RunConfig:
    file_vals = read_config_file(args.config) if args.config else {}
    grids = {}
    for key in list(file_vals):
        if key.startswith("grid."):
            grids[key[5:]] = parse_grid(file_vals.pop(key))
    unknown = set(file_vals) - set(_CONFIG_KEYS)
    if unknown:
        raise DomainError(f"unknown config keys: {sorted(unknown)}")

    def pick(name, flag_value, cast, default):
        if flag_value is not None:
            return flag_value
        if name in file_vals:
            return cast(file_vals[name])
        return default

    params = core.PhysicalParams(
        m=pick("m", args.m, float, 1.0),
        hbar=pick("hbar", args.hbar, float, 1.0),
        dimension=pick("dim", args.dim, int, 2),
    )
    consts = core.SolutionConstants(
        c1=pick("c1", args.c1, float, 1.0),
        c2=pick("c2", args.c2, float, 1.0),
        c0=pick("c0", args.c0, float, 0.0),
    )
    return RunConfig(
        params=params,
        consts=consts,
        accuracy=DEFAULT_ACCURACY,
        grids=grids,
        output_path=pick("output", args.output, str, None),
        tol=pick("tol", args.tol, float, 1e-9),
        fd_step=pick("fd_step", getattr(args, "fd_step", None), float, 1e-4),
    )


def emit(table: CsvTable, cfg: RunConfig):
    text = table.render()
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands


def cmd_eval(cfg: RunConfig, args) -> int:
    name = args.field
    if name in ETA_FIELDS:
        grid = parse_grid(args.eta) if args.eta else cfg.grids.get(
            "eta", verify.GridSpec(0.1, 50.0, 500, "log"))
        etas = grid.points()
        if name == "f":
            vals = core.shape_density(etas, cfg.params, cfg.consts, cfg.accuracy)
            table = CsvTable(["eta", "f"], list(zip(etas, vals)))
        elif name in ("g", "h"):
            g, h = core.shape_velocity_split(etas, cfg.consts)
            vals = g if name == "g" else h
            table = CsvTable(["eta", name], list(zip(etas, vals)))
        else:  # Q with sentinel flags near poles
            q, excluded = core.quantum_potential_eq9_masked(
                etas, cfg.params, cfg.consts, acc=cfg.accuracy)
            rows = [(e, None if bad else v, "near_pole" if bad else "")
                    for e, v, bad in zip(etas, q, excluded)]
            table = CsvTable(["eta", "Q", "flag"], rows)
        emit(table, cfg)
        return 0

    xs = _axis_points(args.x, cfg, "x", verify.GridSpec(0.5, 5.0, 100))
    ys = _axis_points(args.y, cfg, "y", 0.0)
    ts = _axis_points(args.t, cfg, "t", 1.0)
    rows = []
    for t in ts:
        for y in ys:
            for x in xs:
                p = core.LabPoint(float(x), float(y), float(t))
                if name == "rho":
                    v = core.density(p, cfg.params, cfg.consts, cfg.accuracy)
                elif name == "u":
                    v = core.velocity(p, cfg.params, cfg.consts)[0]
                elif name == "v":
                    v = core.velocity(p, cfg.params, cfg.consts)[1]
                elif name == "S":
                    v = core.phase(p, cfg.params)
                elif name == "psi_re":
                    v = core.wavefunction_canonical(p, cfg.params, cfg.consts, cfg.accuracy).re
                else:
                    v = core.wavefunction_canonical(p, cfg.params, cfg.consts, cfg.accuracy).im
                rows.append((x, y, t, v))
    emit(CsvTable(["x", "y", "t", name], rows), cfg)
    return 0


def _axis_points(flag_value, cfg, name, default):
    if flag_value is not None:
        spec = parse_scalar_or_grid(flag_value)
    elif name in cfg.grids:
        spec = cfg.grids[name]
    else:
        spec = default
    if isinstance(spec, verify.GridSpec):
        return spec.points()
    return np.array([float(spec)])


def _default_space_time(cfg):
    sg = cfg.grids.get("s", verify.GridSpec(1.0, 5.0, 21))
    tg = cfg.grids.get("t", verify.GridSpec(1.0, 2.0, 7))
    return sg, tg


def _report_status(rep: verify.ResidualReport):
    thr = THRESHOLDS.get(rep.equation_id)
    if thr is None:
        return "report", True
    return ("pass" if rep.max_rel <= thr else "fail"), rep.max_rel <= thr


def _print_report(rep: verify.ResidualReport):
    status, _ = _report_status(rep)
    thr = THRESHOLDS.get(rep.equation_id)
    thr_txt = f" threshold={thr:g}" if thr is not None else ""
    print(f"equation={rep.equation_id} points={len(rep.points)} "
          f"excluded={rep.excluded_points} max_abs={rep.max_abs:.6e} "
          f"max_rel={rep.max_rel:.6e}{thr_txt} status={status}")
    for key, val in sorted(rep.extras.items()):
        if isinstance(val, float):
            print(f"  {key} = {val:.6g}")
        else:
            print(f"  {key} = {val}")


def _qpotential_table(cfg) -> CsvTable:
    etas = np.linspace(0.4, 3.0, 14)
    rows = []
    ratios = []
    for eta in etas:
        try:
            q9 = core.quantum_potential_eq9(float(eta), cfg.params, cfg.consts,
                                            acc=cfg.accuracy)
            qd = verify.quantum_potential_direct(float(eta), cfg.params, cfg.consts,
                                                 fd_step=cfg.fd_step, acc=cfg.accuracy)
        except (SingularityError, DomainError):
            rows.append((eta, None, None, None))
            continue
        rows.append((eta, q9, qd, q9 / qd))
        ratios.append(q9 / qd)
    if ratios:
        print(f"qpotential comparative: eq9/direct ratio in "
              f"[{min(ratios):.6f}, {max(ratios):.6f}] over {len(ratios)} points "
              "(report only; no threshold)")
    else:
        print("qpotential comparative: every sample point fell inside a pole "
              "exclusion zone; adjust the grid (report only; no threshold)")
    return CsvTable(["eta", "q_eq9", "q_direct", "ratio"], rows)


def cmd_verify(cfg: RunConfig, args) -> int:
    which = args.which
    reports = []
    tables = None
    ode_grid = cfg.grids.get("eta", verify.GridSpec(0.1, 50.0, 2000, "log"))
    sg, tg = _default_space_time(cfg)

    if which in ("ode5", "all"):
        reports.append(verify.residual_ode5(ode_grid, cfg.params, cfg.consts, cfg.accuracy))
    if which in ("system4", "all"):
        reports.append(verify.residual_ode_system4(ode_grid, cfg.params, cfg.consts, cfg.accuracy))
    if which in ("pde", "all"):
        reports.extend(verify.residual_pde_lab(sg, tg, cfg.params, cfg.consts,
                                               fd_step=cfg.fd_step, acc=cfg.accuracy))
    if which in ("schrodinger", "all"):
        reports.append(verify.residual_schrodinger(sg, tg, cfg.params, cfg.consts,
                                                   fd_step=cfg.fd_step, acc=cfg.accuracy))
    if which in ("phase", "all"):
        reports.append(verify.residual_phase_gradient(sg, tg, cfg.params, cfg.consts))
    if which == "qpotential":
        tables = _qpotential_table(cfg)

    ok = True
    for rep in reports:
        _print_report(rep)
        _, good = _report_status(rep)
        ok = ok and good

    if cfg.output_path:
        if tables is None:
            tables = _stack_reports(reports)
        emit(tables, cfg)
    elif which == "qpotential":
        sys.stdout.write(tables.render())
    return 0 if ok else 3


def _stack_reports(reports) -> CsvTable:
    all_names = []
    for rep in reports:
        for n in rep.points.names:
            if n not in all_names:
                all_names.append(n)
    header = ["equation"] + all_names
    rows = []
    for rep in reports:
        vals = rep.points.values
        idx = {n: i for i, n in enumerate(rep.points.names)}
        for r in vals:
            row = [rep.equation_id]
            for n in all_names:
                row.append(float(r[idx[n]]) if n in idx else None)
            rows.append(tuple(row))
    return CsvTable(header, rows)


def cmd_zeros(cfg: RunConfig, args) -> int:
    lo, hi = (float(v) for v in args.range.split(":"))
    roots = analysis.find_zeros((lo, hi), cfg.params, cfg.consts,
                                max_roots=args.max_roots, acc=cfg.accuracy)
    matched = analysis.match_poles(roots, cfg.params, cfg.consts, cfg.accuracy)
    rows = [(float(i), eta, pole, sep)
            for i, (eta, pole, sep) in enumerate(matched.matched_poles, start=1)]
    emit(CsvTable(["index", "eta_star", "q_pole_eta", "separation"], rows), cfg)
    return 0


def cmd_integrate(cfg: RunConfig, args) -> int:
    limits = [float(v) for v in args.limits.split(",")]
    result = analysis.integrate_density(limits, cfg.params, cfg.consts,
                                        tol=cfg.tol, acc=cfg.accuracy)
    emit(CsvTable(["H", "F", "err"], list(result.partial_integrals)), cfg)
    tm = result.tail_model
    print(f"tail fit (log):  F ~ a + b ln H with a={tm.log_offset:.9g} "
          f"b={tm.log_coefficient:.9g} rms={tm.log_rms:.3e}")
    print(f"tail fit (1/H):  F ~ a - c/H with a={tm.conv_limit:.9g} "
          f"c={tm.conv_rate:.9g} rms={tm.conv_rms:.3e}")
    print(f"tail model: {tm.kind}")
    print(f"verdict: {result.verdict_note}")
    return 0


def cmd_figure(cfg: RunConfig, args) -> int:
    fig = args.figure_id
    grid = cfg.grids.get("eta") if fig in ("fig1", "fig3") else cfg.grids.get("x")
    series = analysis.figure_series(fig, cfg.params, cfg.consts,
                                    grid=grid, time_grid=cfg.grids.get("t"),
                                    acc=cfg.accuracy)
    rows = [tuple(row) for row in series.values]
    emit(CsvTable(list(series.names), rows), cfg)
    return 0


# ---------------------------------------------------------------------------
# entry point


def _build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=float, default=None, help="particle mass")
    common.add_argument("--hbar", type=float, default=None, help="reduced Planck constant")
    common.add_argument("--c0", type=float, default=None, help="velocity integration constant")
    common.add_argument("--c1", type=float, default=None, help="first Bessel weight")
    common.add_argument("--c2", type=float, default=None, help="second Bessel weight")
    common.add_argument("--dim", type=int, choices=(1, 2, 3), default=None,
                        help="spatial dimension")
    common.add_argument("--config", default=None, help="key = value config file")
    common.add_argument("--output", default=None, help="CSV output path (default stdout)")
    common.add_argument("--tol", type=float, default=None, help="quadrature tolerance")
    common.add_argument("--fd-step", dest="fd_step", type=float, default=None,
                        help="finite-difference step")

    parser = argparse.ArgumentParser(
        prog="madelung",
        description="Self-similar free-particle Madelung fields: evaluate, "
                    "verify, and analyze the closed-form solutions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", parents=[common], help="tabulate a field")
    p_eval.add_argument("--field", required=True,
                        choices=ETA_FIELDS + LAB_FIELDS)
    p_eval.add_argument("--eta", default=None, help="eta grid start:stop:count[:log]")
    p_eval.add_argument("--x", default=None, help="x grid or value")
    p_eval.add_argument("--y", default=None, help="y grid or value")
    p_eval.add_argument("--t", default=None, help="t grid or value")

    p_verify = sub.add_parser("verify", parents=[common], help="equation residuals")
    p_verify.add_argument("--which", default="all",
                          choices=("ode5", "system4", "pde", "schrodinger",
                                   "phase", "qpotential", "all"))

    p_zeros = sub.add_parser("zeros", parents=[common],
                             help="density zeros and matched potential poles")
    p_zeros.add_argument("--range", default="0.1:30", help="eta range lo:hi")
    p_zeros.add_argument("--max-roots", dest="max_roots", type=int, default=10)

    p_int = sub.add_parser("integrate", parents=[common],
                           help="running integral of the density shape")
    p_int.add_argument("--limits", default="10,100,1000,10000",
                       help="comma-separated upper limits")

    p_fig = sub.add_parser("figure", parents=[common], help="figure data series")
    p_fig.add_argument("figure_id", choices=("fig1", "fig2", "fig3"))
    return parser


_COMMANDS = {
    "eval": cmd_eval,
    "verify": cmd_verify,
    "zeros": cmd_zeros,
    "integrate": cmd_integrate,
    "figure": cmd_figure,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
        return _COMMANDS[args.command](cfg, args)
    except (RangeTooNarrow, UnmatchedRoot, ToleranceNotMet) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (MadelungError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
