"""Command-line entry point.

Subcommands: gen, bounds, table1, sweep, lattice, tiling. Any flag can also
be given in a flat ``key = value`` file passed with ``--config``; flags on
the command line override the file.

Exit codes: 0 success, 2 parameter error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from pathlib import Path

from . import analysis, harness, rgg
from .errors import ParameterError
from .percolation import OUTCOME_FIELDS, outcome_row, run_lattice_theta1
from .seeding import LATTICE, derive_seed

log = logging.getLogger("rggboot")

EXIT_OK, EXIT_PARAM, EXIT_IO = 0, 2, 3


def read_config(path) -> dict[str, str]:
    cfg = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value")
            key, value = (s.strip() for s in line.split("=", 1))
            cfg[key.lstrip("-").replace("-", "_")] = value
    return cfg


def _fmt10(x) -> str:
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        return format(x, ".10g")
    return str(x)


def _writer(out):
    return csv.writer(out, lineterminator="\n")


def cmd_bounds(args, out):
    b = analysis.p_double_prime(args.a, args.gamma)
    w = _writer(out)
    fields = ("a", "gamma", "p_prime", "p_scaled", "p_double_prime", "feasible", "nontrivial")
    w.writerow(fields)
    w.writerow([_fmt10(getattr(b, f)) for f in fields])


def cmd_table1(args, out):
    w = _writer(out)
    w.writerow(["a", "p_prime", "p_scaled", "reference_p_prime", "reference_p_double_prime", "p_prime_match",
                "p_scaled_match"])
    for r in harness.reproduce_table1():
        w.writerow([r.a, f"{r.p_prime:.10f}", f"{r.p_scaled:.10f}", f"{r.reference_p_prime:.10f}",
                    f"{r.reference_p_double_prime:.10f}", int(r.p_prime_match), int(r.p_scaled_match)])


def cmd_gen(args, out):
    ps = rgg.sample_points(args.mode, args.n, args.seed)
    if args.radius is not None:
        radius = args.radius
    elif args.mode == "poisson":
        radius = rgg.radius_for(args.a, args.n)
    else:
        radius = rgg.unit_radius(args.a, args.n)
    g = rgg.build_graph(ps, radius)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    rgg.write_points_csv(ps, out_dir / "points.csv")
    rgg.write_edges_csv(g, out_dir / "edges.csv")
    if args.plot:
        from .plotting import plot_graph

        plot_graph(g, out_dir / "graph.png")
    connected, sizes = rgg.connectivity(g)
    out.write(f"nodes={g.num_nodes} edges={g.num_edges} radius={radius:.10g} connected={int(connected)} "
              f"largest_component={sizes[0] if sizes else 0}\n")


def cmd_sweep(args, out):
    if args.quick:
        args.n = harness.QUICK_PRESET["n"]
        args.trials = harness.QUICK_PRESET["trials"]
    p_values = harness.parse_p_grid(args.p_grid, args.a, args.gamma)
    spec = harness.SweepSpec(
        n=args.n, a=args.a, gamma=args.gamma, p_values=p_values, trials=args.trials,
        master_seed=args.seed, mode=args.mode,
    )
    bounds = analysis.p_double_prime(args.a, args.gamma)
    log.info("sweep n=%d a=%g gamma=%g theta=%d, %d p values x %d trials", spec.n, spec.a, spec.gamma,
             spec.theta, len(p_values), spec.trials)
    trials = []
    rows = harness.run_sweep(spec, workers=args.workers, trial_log=trials)
    csv_path = Path(args.out)
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    harness.emit_csv(rows, csv_path)
    if args.trial_log:
        harness.emit_trial_log(trials, csv_path.with_suffix(".trials.csv"))
    if not args.no_figures:
        from .plotting import plot_sweep
        from .svgchart import emit_chart

        title = f"n={spec.n}, a={spec.a:g}, gamma={spec.gamma:.4g}, theta={spec.theta}, {spec.trials} trials"
        emit_chart(rows, bounds, csv_path.with_suffix(".svg"), log_x=not args.linear_x, title=title)
        plot_sweep(rows, bounds, csv_path.with_suffix(".png"), log_x=not args.linear_x, title=title)
    w = _writer(out)
    w.writerow(["p", "full_fraction", "mean_final_fraction"])
    for r in rows:
        w.writerow([_fmt10(r.p), _fmt10(r.full_fraction), _fmt10(r.mean_final_fraction)])


def cmd_lattice(args, out):
    w = _writer(out)
    w.writerow(OUTCOME_FIELDS + ("within_2N",))
    full = 0
    for t in range(args.trials):
        seed = derive_seed(args.seed, LATTICE, t)
        o = run_lattice_theta1(args.N, args.p, seed, args.step_cap)
        rec = outcome_row(seed, args.p, 1, o)
        ok = o.fully_active and o.steps <= 2 * args.N
        full += ok
        w.writerow([_fmt10(rec[f]) for f in OUTCOME_FIELDS] + [int(ok)])
    log.info("%d/%d runs fully active within 2N=%d steps", full, args.trials, 2 * args.N)


def _parse_seeds(text: str) -> list[int]:
    text = str(text).strip()
    if "-" in text and "," not in text:
        lo, hi = text.split("-")
        return list(range(int(lo), int(hi) + 1))
    if "," in text:
        return [int(s) for s in text.split(",")]
    return list(range(int(text)))


def cmd_tiling(args, out):
    try:
        seeds = _parse_seeds(args.seeds)
    except ValueError:
        raise ParameterError(f"bad seed list {args.seeds!r}") from None
    rep = harness.verify_tiling_claims(args.n, args.a, args.gamma, args.p, seeds)
    w = _writer(out)
    w.writerow(["quantity", "value"])
    for k, v in vars(rep).items():
        if k == "details":
            continue
        w.writerow([k, _fmt10(v) if v is not None else ""])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rggboot", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="flat key=value file with defaults for any flag")
    parser.add_argument("-v", "--verbose", action="store_true")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="sample points and emit point/edge CSVs")
    p.add_argument("--mode", choices=[m.value for m in rgg.PointMode], default="poisson")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--a", type=float, default=4.0)
    p.add_argument("--radius", type=float, default=None, help="overrides the radius derived from --a")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="rgg_out", help="output directory")
    p.add_argument("--plot", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bounds", parents=[common], help="analytic bounds p', p'' for (a, gamma)")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("table1", parents=[common], help="recompute the gamma = 1/20 bounds table")
    p.set_defaults(func=cmd_table1)

    p = sub.add_parser("sweep", parents=[common], help="Monte Carlo sweep over p")
    p.add_argument("--n", type=int, default=15000)
    p.add_argument("--a", type=float, default=30.0)
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--trials", type=int, default=harness.DEFAULT_TRIALS)
    p.add_argument("--p-grid", default="auto", help="auto | geom:lo:hi:k | lin:lo:hi:k | comma list")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mode", choices=[m.value for m in harness.SweepMode], default=harness.SweepMode.FRESH.value)
    p.add_argument("--out", default="sweep.csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--quick", action="store_true", help="n=4000, 20 trials")
    p.add_argument("--linear-x", action="store_true")
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--trial-log", action="store_true", help="also write per-trial outcomes")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("lattice", parents=[common], help="threshold-1 percolation on the square lattice")
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=None)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("tiling", parents=[common], help="empirical check of the cell-tiling events")
    p.add_argument("--n", type=int, default=15000)
    p.add_argument("--a", type=float, default=30.0)
    p.add_argument("--gamma", type=float, default=0.01)
    p.add_argument("--p", type=float, default=0.004)
    p.add_argument("--seeds", default="100", help="count, lo-hi range or comma list")
    p.set_defaults(func=cmd_tiling)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    cfg = read_config(known.config)
    # find the chosen subparser so file values become its defaults
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    command = next((t for t in argv if t in sub_action.choices), None)
    if command is None:
        return
    subparser = sub_action.choices[command]
    dests = {a.dest: a for a in subparser._actions}
    defaults = {}
    for key, value in cfg.items():
        if key not in dests:
            raise ParameterError(f"unknown config key {key!r} for {command}")
        action = dests[key]
        if isinstance(action, argparse._StoreTrueAction):
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = action.type(value) if action.type else value
    subparser.set_defaults(**defaults)
    for action in subparser._actions:
        if action.dest in defaults:
            action.required = False


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        args.func(args, out)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0) if exc.code in (0, None) else EXIT_PARAM
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
