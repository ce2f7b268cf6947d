"""Command-line front end.

Subcommands run eigenvalue ladders or sweeps over an operator described by a
config file and emit plot-ready CSV or structured JSON. Output is fully
deterministic for a given config: rows are written in schedule/grid order no
matter how many workers computed them, and headers echo the configuration
rather than any environment state.

Exit codes: 0 when the run's criteria hold, 1 when they are violated,
2 for usage or configuration errors.
"""

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import analysis
from .analysis import (
    DEFAULT_SCHEDULE,
    EmpiricalMeasure,
    counting,
    eigenvalues_of,
    integrate,
    run_ladder,
    szego_reference,
)
from .compression import (
    commutator_hs_norm,
    compress,
    degree_estimate,
    dfnorm_bound,
)
from .config import build_operator_file
from .errors import BandspecError, ConfigError
from .operators import almost_mathieu_operator, diagonal_part, make_potential

SCHEMA_VERSION = "bandspec/1"

TEST_FUNCTIONS = (
    ("1", lambda x: np.ones_like(x)),
    ("x", lambda x: x),
    ("x^2", lambda x: x * x),
    ("x^3", lambda x: x * x * x),
    ("|x|", lambda x: np.abs(x)),
)


def _fmt(v) -> str:
    return format(float(v), ".17g")


def _write_rows(args, command, columns, rows, extra_comments=()):
    """CSV: '#' header block with the config echo, then header + data rows.
    JSON: one schema-versioned object."""
    echo = dict(args._echo)
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "config": echo,
            "columns": list(columns),
            "rows": [[r if isinstance(r, str) else float(r) for r in row] for row in rows],
        }
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    else:
        lines = [f"# schema = {SCHEMA_VERSION}", f"# command = {command}"]
        for k, v in sorted(echo.items()):
            lines.append(f"# {k} = {v}")
        lines.extend(f"# {c}" for c in extra_comments)
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(v if isinstance(v, str) else _fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def _echo_options(args, built):
    # worker count deliberately left out: output bytes must not depend on it
    echo = dict(built.echo or {})
    echo["schedule"] = ",".join(str(n) for n in args.schedule)
    if getattr(args, "eps", None) is not None:
        echo["eps"] = _fmt(args.eps)
    if getattr(args, "grid_pitch", None) is not None:
        echo["grid_pitch"] = _fmt(args.grid_pitch)
    if getattr(args, "tol", None) is not None:
        echo["tol"] = _fmt(args.tol)
    return echo


def cmd_szego(args, built):
    if built.symbol is None:
        raise ConfigError("the szego command needs a symbol operator config")
    ladder = run_ladder(built.spec, built.filtration, args.schedule, args.workers)
    rows = []
    final_ok = True
    for name, u in TEST_FUNCTIONS:
        ref = szego_reference(built.symbol, u)
        gaps = analysis.weak_star_gap(ladder, ref, u)
        for step, gap in zip(ladder.steps, gaps):
            moment = integrate(EmpiricalMeasure(step.eigs), u)
            rows.append([str(step.n), str(step.dim), name, moment, ref, gap])
        if gaps[-1] > args.tol:
            final_ok = False
    _write_rows(args, "szego", ["n", "dim", "u", "moment", "reference", "gap"], rows)
    return 0 if final_ok else 1


def cmd_spectrum(args, built):
    ladder = run_ladder(built.spec, built.filtration, args.schedule, args.workers)
    est = analysis.spectrum_estimate(ladder, h=args.grid_pitch, eps=args.eps)
    if args.format == "json":
        payload = {
            "schema_version": SCHEMA_VERSION,
            "command": "spectrum",
            "config": dict(args._echo),
            "estimate": est.to_json_dict(),
        }
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
        if args.out is None:
            sys.stdout.write(text)
        else:
            with open(args.out, "w") as fh:
                fh.write(text)
    else:
        rows = analysis.report_to_csv_rows(est.report)
        comments = [
            f"interval_{i} = {_fmt(a)},{_fmt(b)}" for i, (a, b) in enumerate(est.intervals)
        ]
        comments.append(f"eps = {_fmt(est.eps)}")
        comments.append(f"grid_pitch = {_fmt(est.h)}")
        _write_rows(args, "spectrum", rows[0], rows[1:], extra_comments=comments)
    return 0


def cmd_classify(args, built):
    try:
        points = [float(p) for p in args.points.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --points list {args.points!r}") from exc
    if not points:
        raise ConfigError("--points must name at least one value")
    ladder = run_ladder(built.spec, built.filtration, args.schedule, args.workers)
    eps = args.eps
    if eps is None:
        diam = ladder.spectral_diameter()
        eps = 0.05 * diam if diam > 0 else 1e-3
    report = analysis.classify(ladder, np.asarray(points), eps)
    rows = analysis.report_to_csv_rows(report)
    _write_rows(args, "classify", rows[0], rows[1:],
                extra_comments=[f"eps = {_fmt(eps)}"])
    return 0


def cmd_butterfly(args, built):
    if built.kind != "almost_mathieu":
        raise ConfigError("the butterfly command needs an almost_mathieu config")
    try:
        start_s, stop_s, num_s = args.theta_grid.split(":")
        start, stop, num = float(start_s), float(stop_s), int(num_s)
    except ValueError as exc:
        raise ConfigError("--theta-grid must be start:stop:steps") from exc
    if num < 1:
        raise ConfigError("--theta-grid needs at least one step")
    thetas = np.linspace(start, stop, num)
    potential = make_potential((built.echo or {}).get("potential", "zero"))
    n = args.n

    def solve(theta):
        spec = almost_mathieu_operator(potential, float(theta))
        return eigenvalues_of(compress(spec, built.filtration, n))

    if args.workers > 1 and num > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            spectra = list(pool.map(solve, thetas))
    else:
        spectra = [solve(t) for t in thetas]
    dim = spectra[0].dim
    columns = ["theta"] + [f"lambda_{i + 1}" for i in range(dim)]
    rows = [[theta] + list(ev.values) for theta, ev in zip(thetas, spectra)]
    args._echo["n"] = str(n)
    args._echo["theta_grid"] = args.theta_grid
    _write_rows(args, "butterfly", columns, rows)
    return 0


def cmd_appendix(args, built):
    if built.kind != "permutation":
        raise ConfigError("the appendix command needs a permutation config")
    eps = args.eps if args.eps is not None else 0.5
    ladder = run_ladder(built.spec, built.filtration, args.schedule, args.workers)
    rows = []
    ok = True
    for step in ladder.steps:
        count = counting(step.eigs, (-eps, eps))
        dens = count / step.dim
        reference = 0.25 * (1.0 - step.n ** -0.5)
        rows.append([str(step.n), str(step.dim), str(count), dens, reference])
    final = rows[-1]
    if final[3] < final[4]:
        ok = False
    args._echo["eps"] = _fmt(eps)
    _write_rows(args, "appendix",
                ["n", "dim", "count_at_zero", "density", "reference_curve"], rows)
    return 0 if ok else 1


def cmd_degree(args, built):
    spec = built.spec
    if getattr(spec, "band_half_width", None) is None:
        raise ConfigError("the degree command needs a band-limited operator config")
    bound = dfnorm_bound(spec) if spec.index_mode == "bilateral" else float("nan")
    rows = []
    for k in range(-spec.band_half_width, spec.band_half_width + 1):
        deg = degree_estimate(diagonal_part(spec, k), built.filtration,
                              n_max=min(32, max(8, 4 * spec.band_half_width)))
        rows.append(["diagonal", str(k), str(deg), "", ""])
    ok = True
    for n in args.schedule:
        hs = commutator_hs_norm(spec, built.filtration, n)
        if spec.index_mode == "bilateral" and hs > bound + 1e-12:
            ok = False
        rows.append(["commutator", str(n), "", hs, bound])
    _write_rows(args, "degree",
                ["row_kind", "k_or_n", "degree", "hs_norm", "dfnorm_bound"], rows)
    return 0 if ok else 1


def _parse_schedule(text):
    try:
        schedule = [int(v) for v in text.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad --schedule {text!r}") from exc
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise ConfigError("--schedule must be a strictly increasing integer list")
    return schedule


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bandspec",
        description="Spectral estimation for band-limited operators from "
                    "eigenvalues of finite compressions.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--op", required=True, help="operator config file")
    common.add_argument("--schedule", default=",".join(str(n) for n in DEFAULT_SCHEDULE),
                        help="comma list of filtration steps n (default %(default)s)")
    common.add_argument("--eps", type=float, default=None,
                        help="window radius (default: 0.05 * spectral diameter)")
    common.add_argument("--grid-pitch", type=float, default=None, dest="grid_pitch",
                        help="grid pitch for spectrum sweeps (default eps/2)")
    common.add_argument("--tol", type=float, default=0.01,
                        help="criterion tolerance (default %(default)s)")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=1,
                        help="thread workers across ladder/grid tasks")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("szego", parents=[common],
                   help="eigenvalue-average convergence against the symbol reference")
    sub.add_parser("spectrum", parents=[common],
                   help="essential-spectrum interval estimate with classification")
    p_classify = sub.add_parser("classify", parents=[common],
                                help="classify user-supplied points")
    p_classify.add_argument("--points", required=True,
                            help="comma list of lambda values")
    p_butterfly = sub.add_parser("butterfly", parents=[common],
                                 help="sweep theta and record each compression spectrum")
    p_butterfly.add_argument("--theta-grid", required=True, dest="theta_grid",
                             help="start:stop:steps")
    p_butterfly.add_argument("--n", type=int, default=256,
                             help="fixed filtration step for the sweep")
    sub.add_parser("appendix", parents=[common],
                   help="eigenvalue density at 0 for the permutation reflection")
    sub.add_parser("degree", parents=[common],
                   help="per-diagonal degrees, norm bound, commutator ladder")
    return parser


_COMMANDS = {
    "szego": cmd_szego,
    "spectrum": cmd_spectrum,
    "classify": cmd_classify,
    "butterfly": cmd_butterfly,
    "appendix": cmd_appendix,
    "degree": cmd_degree,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.schedule = _parse_schedule(args.schedule)
        if args.workers < 1:
            raise ConfigError("--workers must be >= 1")
        if args.tol is not None and args.tol <= 0:
            raise ConfigError("--tol must be positive")
        built = build_operator_file(args.op)
        args._echo = _echo_options(args, built)
        return _COMMANDS[args.command](args, built)
    except (ConfigError, OSError) as exc:
        print(f"bandspec: {exc}", file=sys.stderr)
        return 2
    except BandspecError as exc:
        print(f"bandspec: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
