"""Command-line front end.

Four subcommands: estimate (point-estimate mutual information), test
(independence via the relative belief ratio), elicit (choose the prior
concentration), simulate (replication tables over a distribution grid).

estimate/test/elicit emit a JSON report; simulate emits a delimited table
(or JSON with --format json).  With --outdir the output goes to a file
there instead of stdout, figures are rendered next to it, and the written
file paths are printed.

Exit codes: 0 success, 2 input error, 3 numerical degeneracy during the
Monte Carlo, 4 elicitation failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (DegeneratePrior, DegenerateSupport, ElicitationFailed,
                     InsufficientDraws, InvalidParameter, ParseError,
                     Unsupported, ZeroPriorMass)
from .mi import (DEFAULT_A_ESTIMATE, DEFAULT_DRAWS, DEFAULT_K, DEFAULT_N_ATOMS,
                 MiConfig, mi_draws, mi_point_estimate)
from .rbtest import (DEFAULT_A_TEST, DEFAULT_C, DEFAULT_GRID, DEFAULT_TOLERANCE,
                     RbConfig, choose_concentration, run_independence_test,
                     window_probability_profile)
from .report import (config_echo, elicit_report, estimate_report, format_cell,
                     render_json, simulate_report, test_report)
from .rng import RngStream
from .sampling import (describe_distribution, parse_distribution, sample,
                       standardize_columns)
from .simulate import SIMULATION_COLUMNS, SimPlan, run_plan

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DEGENERATE = 3
EXIT_ELICITATION = 4

_DEGENERACY_ERRORS = (DegenerateSupport, DegeneratePrior, ZeroPriorMass,
                      InsufficientDraws)
_INPUT_ERRORS = (InvalidParameter, ParseError, Unsupported, OSError)


# ---------------------------------------------------------------------------
# Configuration


@dataclass(frozen=True)
class RunConfig:
    """One parsed invocation; names follow the command-line flags."""

    subcommand: str
    seed: int = 0
    k: int = DEFAULT_K
    n_atoms: int = DEFAULT_N_ATOMS
    draws: int = DEFAULT_DRAWS
    a: float | None = None  # per-subcommand default applied at use
    c: float = DEFAULT_C
    strength_cells: int = 20
    outdir: Path | None = None
    input: str | None = None
    distribution: object = None
    n: int = 50
    columns: tuple[int, ...] | None = None
    has_header: bool = False
    standardize: bool = False
    d: int = 2
    grid: tuple[float, ...] = DEFAULT_GRID
    tolerance: float = DEFAULT_TOLERANCE
    distributions: tuple = ()
    sizes: tuple[int, ...] = (50,)
    ks: tuple[int, ...] | None = None
    replications: int = 100
    a_test: float = DEFAULT_A_TEST
    run_test: bool = True
    workers: int = 1
    output_format: str = "json"


def _parse_ints(text: str, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise InvalidParameter(f"{what} must be comma-separated integers, "
                               f"got {text!r}") from None


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(","))
    except ValueError:
        raise InvalidParameter(f"{what} must be comma-separated numbers, "
                               f"got {text!r}") from None


def _parse_sweep(text: str) -> tuple[int, ...]:
    lo, sep, hi = text.partition(":")
    try:
        first, last = int(lo), int(hi if sep else lo)
    except ValueError:
        raise InvalidParameter(
            f"sweep must look like lo:hi, got {text!r}") from None
    if not 1 <= first <= last:
        raise InvalidParameter(f"sweep range {text!r} is empty or starts below 1")
    return tuple(range(first, last + 1))


def config_from_args(args: argparse.Namespace) -> RunConfig:
    common = dict(subcommand=args.subcommand, seed=args.seed, k=args.k,
                  n_atoms=args.n_atoms, draws=args.draws, outdir=args.outdir)
    if args.subcommand in ("estimate", "test"):
        distribution = parse_distribution(args.dist) if args.dist else None
        columns = (_parse_ints(args.columns, "--columns")
                   if args.columns else None)
        extra = dict(a=args.a, input=args.input, distribution=distribution,
                     n=args.n, columns=columns, has_header=args.header,
                     standardize=args.standardize)
        if args.subcommand == "test":
            extra.update(c=args.c, strength_cells=args.strength_cells)
        return RunConfig(**common, **extra)
    if args.subcommand == "elicit":
        grid = (_parse_floats(args.grid, "--grid")
                if args.grid is not None else DEFAULT_GRID)
        return RunConfig(**common, c=args.c, d=args.d, grid=grid,
                         tolerance=args.tolerance)
    distributions = tuple(parse_distribution(text) for text in args.dists)
    return RunConfig(**common, distributions=distributions,
                     sizes=_parse_ints(args.sizes, "--sizes"),
                     ks=_parse_sweep(args.k_sweep) if args.k_sweep else None,
                     replications=args.replications, a=args.a,
                     a_test=args.a_test, c=args.c,
                     strength_cells=args.strength_cells,
                     run_test=not args.no_test, standardize=args.standardize,
                     workers=args.workers, output_format=args.format)


# ---------------------------------------------------------------------------
# Input


def load_csv(path, has_header: bool = False, columns=None) -> np.ndarray:
    """Read a comma-separated numeric table into an (n, d) matrix.

    Line and column numbers in errors are 1-based physical positions; the
    optional header row counts as line 1.  ``columns`` selects a 0-based
    subset of columns, in the order given.
    """
    try:
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            rows: list[list[float]] = []
            width = None
            for lineno, record in enumerate(reader, start=1):
                if has_header and lineno == 1:
                    continue
                if not record:
                    continue
                if width is None:
                    width = len(record)
                elif len(record) != width:
                    raise ParseError(
                        f"expected {width} fields, found {len(record)}",
                        line=lineno)
                parsed = []
                for col, cell in enumerate(record, start=1):
                    try:
                        value = float(cell)
                    except ValueError:
                        raise ParseError(f"not a number: {cell.strip()!r}",
                                         line=lineno, column=col) from None
                    if not np.isfinite(value):
                        raise ParseError(f"non-finite value {cell.strip()!r}",
                                         line=lineno, column=col)
                    parsed.append(value)
                rows.append(parsed)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if not rows:
        raise ParseError(f"no data rows in {path}")
    data = np.array(rows)
    if columns is not None:
        bad = [j for j in columns if not 0 <= j < data.shape[1]]
        if bad:
            raise InvalidParameter(
                f"column {bad[0]} out of range for a "
                f"{data.shape[1]}-column table")
        data = data[:, list(columns)]
    return data


def _acquire_data(cfg: RunConfig, root: RngStream):
    """Data matrix plus the source fields for the config echo."""
    if cfg.input is not None:
        data = load_csv(cfg.input, has_header=cfg.has_header,
                        columns=cfg.columns)
        source = {"input": cfg.input,
                  "columns": list(cfg.columns) if cfg.columns else None,
                  "n": int(data.shape[0])}
    else:
        data = sample(cfg.distribution, cfg.n, root.substream(0))
        source = {"distribution": describe_distribution(cfg.distribution),
                  "n": cfg.n}
    if cfg.standardize:
        data = standardize_columns(data)
    return data, source


# ---------------------------------------------------------------------------
# Subcommands


def cmd_estimate(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    root = RngStream(cfg.seed)
    data, source = _acquire_data(cfg, root)
    a = cfg.a if cfg.a is not None else DEFAULT_A_ESTIMATE
    draws = mi_draws(MiConfig(a=a, k=cfg.k, n_atoms=cfg.n_atoms,
                              draws=cfg.draws),
                     root.substream(1), data=data)
    estimate = mi_point_estimate(draws)
    config = config_echo(a=a, k=cfg.k, n_atoms=cfg.n_atoms, draws=cfg.draws,
                         standardize=cfg.standardize, **source)
    doc = estimate_report(estimate, config, cfg.seed,
                          time.perf_counter() - started)
    if cfg.outdir:
        from .figures import save_estimate_figure
        save_estimate_figure(draws.values, estimate.point, estimate.q1,
                             estimate.q3, cfg.outdir)
    return doc


def cmd_test(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    root = RngStream(cfg.seed)
    data, source = _acquire_data(cfg, root)
    a = cfg.a if cfg.a is not None else DEFAULT_A_TEST
    result = run_independence_test(
        data, RbConfig(c=cfg.c, a=a, draws=cfg.draws,
                       grid_size=cfg.strength_cells),
        k=cfg.k, n_atoms=cfg.n_atoms, rng=root.substream(1))
    config = config_echo(a=a, c=cfg.c, k=cfg.k, n_atoms=cfg.n_atoms,
                         draws=cfg.draws, strength_cells=cfg.strength_cells,
                         standardize=cfg.standardize, **source)
    doc = test_report(result, config, cfg.seed, time.perf_counter() - started)
    if cfg.outdir:
        from .figures import save_test_figure
        save_test_figure(result.prior_draws.values,
                         result.posterior_draws.values, cfg.c, result.rb,
                         result.strength, cfg.outdir)
    return doc


def cmd_elicit(cfg: RunConfig) -> dict:
    started = time.perf_counter()
    root = RngStream(cfg.seed)
    profile = window_probability_profile(cfg.c, cfg.d, cfg.grid,
                                         root.substream(1), k=cfg.k,
                                         n_atoms=cfg.n_atoms, draws=cfg.draws)
    chosen = choose_concentration(profile, cfg.tolerance)
    config = config_echo(c=cfg.c, d=cfg.d, k=cfg.k, n_atoms=cfg.n_atoms,
                         draws=cfg.draws, grid=list(cfg.grid),
                         tolerance=cfg.tolerance)
    doc = elicit_report(chosen, profile, config, cfg.seed,
                        time.perf_counter() - started)
    if cfg.outdir:
        from .figures import save_elicit_figure
        save_elicit_figure(profile, chosen, 0.5, cfg.outdir)
    return doc


def _simulate_plan(cfg: RunConfig) -> SimPlan:
    return SimPlan(distributions=cfg.distributions, sizes=cfg.sizes,
                   ks=cfg.ks if cfg.ks is not None else (cfg.k,),
                   replications=cfg.replications,
                   a_estimate=cfg.a if cfg.a is not None else DEFAULT_A_ESTIMATE,
                   a_test=cfg.a_test, c=cfg.c, n_atoms=cfg.n_atoms,
                   draws=cfg.draws, strength_cells=cfg.strength_cells,
                   run_test=cfg.run_test, standardize=cfg.standardize)


def cmd_simulate(cfg: RunConfig, sink) -> list:
    """Run the replication grid, writing the table to ``sink``.

    In CSV mode rows stream out as each cell completes, so an interrupted
    run leaves a usable partial table behind; JSON mode emits the document
    at the end (a partial one if interrupted).  Returns the summaries.
    """
    started = time.perf_counter()
    plan = _simulate_plan(cfg)
    summaries = []
    if cfg.output_format == "csv":
        writer = csv.writer(sink, lineterminator="\n")
        writer.writerow(SIMULATION_COLUMNS)
        sink.flush()
        for summary in run_plan(plan, cfg.seed, cfg.workers):
            summaries.append(summary)
            writer.writerow([format_cell(v) for v in summary.row()])
            sink.flush()
        return summaries
    config = config_echo(a=plan.a_estimate,
                         a_test=plan.a_test if plan.run_test else None,
                         c=plan.c if plan.run_test else None,
                         k=cfg.k if cfg.ks is None else None,
                         n_atoms=plan.n_atoms, draws=plan.draws,
                         strength_cells=(plan.strength_cells
                                         if plan.run_test else None),
                         replications=plan.replications,
                         standardize=plan.standardize)
    try:
        for summary in run_plan(plan, cfg.seed, cfg.workers):
            summaries.append(summary)
    except KeyboardInterrupt:
        doc = simulate_report(summaries, config, cfg.seed,
                              time.perf_counter() - started)
        if summaries:
            sink.write(render_json(doc))
            sink.flush()
        raise
    doc = simulate_report(summaries, config, cfg.seed,
                          time.perf_counter() - started)
    sink.write(render_json(doc))
    sink.flush()
    return summaries


# ---------------------------------------------------------------------------
# Wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bnpmi",
        description="Bayesian nonparametric k-NN estimation and testing "
                    "of mutual information")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p):
        p.add_argument("--seed", type=int, default=0,
                       help="root seed; equal seeds reproduce bytes")
        p.add_argument("-k", "--neighbors", type=int, default=DEFAULT_K,
                       dest="k", help="neighbor order (default 3)")
        p.add_argument("-N", "--atoms", type=int, default=DEFAULT_N_ATOMS,
                       dest="n_atoms",
                       help="atoms per process realization (default 500)")
        p.add_argument("-l", "--draws", type=int, default=DEFAULT_DRAWS,
                       dest="draws",
                       help="Monte Carlo draws per side (default 1000)")
        p.add_argument("--outdir", type=Path, default=None,
                       help="write output and figures here instead of stdout")

    def add_source(p):
        group = p.add_mutually_exclusive_group(required=True)
        group.add_argument("--input", help="CSV file, one observation per row")
        group.add_argument("--dist",
                           help='distribution text such as "normal:d=2" or '
                                '"ubd:variant=circle"')
        p.add_argument("-n", "--size", type=int, default=50, dest="n",
                       help="rows to draw when using --dist (default 50)")
        p.add_argument("--columns",
                       help="comma-separated 0-based column subset of the input")
        p.add_argument("--header", action="store_true",
                       help="skip the first input row")
        p.add_argument("--standardize", action="store_true",
                       help="center and scale each column before analysis")

    est = sub.add_parser("estimate", help="point-estimate mutual information")
    add_source(est)
    add_common(est)
    est.add_argument("-a", "--concentration", type=float, default=None,
                     dest="a", help="prior concentration (default 0.05)")

    tst = sub.add_parser("test", help="test mutual independence")
    add_source(tst)
    add_common(tst)
    tst.add_argument("-a", "--concentration", type=float, default=None,
                     dest="a", help="prior concentration (default 1)")
    tst.add_argument("-c", "--window", type=float, default=DEFAULT_C,
                     dest="c", help="width of the window at zero (default 0.05)")
    tst.add_argument("-M", "--strength-cells", type=int, default=20,
                     dest="strength_cells",
                     help="prior quantile cells for the strength (default 20)")

    eli = sub.add_parser("elicit", help="choose the prior concentration")
    add_common(eli)
    eli.add_argument("-d", "--dim", type=int, default=2, dest="d",
                     help="data dimension (default 2)")
    eli.add_argument("-c", "--window", type=float, default=DEFAULT_C,
                     dest="c", help="width of the window at zero (default 0.05)")
    eli.add_argument("--grid", default=None,
                     help="comma-separated candidate concentrations")
    eli.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                     help="acceptable distance from probability 0.5 "
                          "(default 0.1)")

    sim = sub.add_parser("simulate", help="replication tables over a grid")
    add_common(sim)
    sim.add_argument("--dist", action="append", required=True, dest="dists",
                     metavar="DIST", help="distribution text; repeatable")
    sim.add_argument("-n", "--sizes", default="50",
                     help="comma-separated sample sizes (default 50)")
    sim.add_argument("-r", "--replications", type=int, default=100,
                     help="replications per cell (default 100)")
    sim.add_argument("--k-sweep", default=None, metavar="LO:HI",
                     help="sweep the neighbor order instead of using -k")
    sim.add_argument("-a", "--concentration", type=float, default=None,
                     dest="a",
                     help="concentration for estimation (default 0.05)")
    sim.add_argument("--a-test", type=float, default=DEFAULT_A_TEST,
                     dest="a_test",
                     help="concentration for the test stage (default 1)")
    sim.add_argument("-c", "--window", type=float, default=DEFAULT_C,
                     dest="c", help="width of the window at zero (default 0.05)")
    sim.add_argument("-M", "--strength-cells", type=int, default=20,
                     dest="strength_cells",
                     help="prior quantile cells for the strength (default 20)")
    sim.add_argument("--no-test", action="store_true",
                     help="skip the RB/strength stage")
    sim.add_argument("--standardize", action="store_true",
                     help="center and scale each replication's data")
    sim.add_argument("--workers", type=int, default=1,
                     help="parallel worker processes (default 1)")
    sim.add_argument("--format", choices=("csv", "json"), default="csv",
                     help="table format (default csv)")
    return parser


def _write_output(text: str, cfg: RunConfig, filename: str) -> None:
    if cfg.outdir is None:
        sys.stdout.write(text)
        return
    outdir = Path(cfg.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    target = outdir / filename
    target.write_text(text, encoding="utf-8")
    print(target)


def _dispatch(cfg: RunConfig) -> int:
    if cfg.subcommand == "simulate":
        if cfg.outdir is None:
            cmd_simulate(cfg, sys.stdout)
        else:
            outdir = Path(cfg.outdir)
            outdir.mkdir(parents=True, exist_ok=True)
            suffix = "csv" if cfg.output_format == "csv" else "json"
            target = outdir / f"simulate.{suffix}"
            with open(target, "w", encoding="utf-8") as sink:
                summaries = cmd_simulate(cfg, sink)
            print(target)
            if summaries:
                from .figures import save_simulate_figure
                save_simulate_figure(summaries, outdir)
        return EXIT_OK
    command = {"estimate": cmd_estimate, "test": cmd_test,
               "elicit": cmd_elicit}[cfg.subcommand]
    doc = command(cfg)
    _write_output(render_json(doc), cfg, f"{cfg.subcommand}.json")
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(config_from_args(args))
    except _DEGENERACY_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ElicitationFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        for a, p in exc.profile:
            print(f"  a={a:g}: probability {p:.4f}", file=sys.stderr)
        return EXIT_ELICITATION
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
