#!/usr/bin/env python3
"""
anyonwalk CLI: simulate the V² anyonic quantum walk

Usage:
    anyonwalk simulate --mode exact --level 3 --steps 100
    anyonwalk simulate --mode circulant --level inf --moment-mode finite
    anyonwalk sweep --levels 1,2,3,5,inf --steps 100
    anyonwalk verify-table --levels 1,2,3,4,5,10
    anyonwalk fit --input variance.csv --window 100:200
    anyonwalk dump-moments --level 3 --output moments_k3.json
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from anyonwalk import __version__
from anyonwalk.config.manager import ConfigManager
from anyonwalk.config.models import RunConfig, parse_levels
from anyonwalk.console import configure_console, get_console
from anyonwalk.engine.analysis import fit_quadratic, fit_slope, parse_window
from anyonwalk.engine.anyon_model import parse_level
from anyonwalk.engine.circulant_evolution import DEFAULT_REGULARIZATION
from anyonwalk.exceptions import AnyonWalkError, ConfigurationError, wrap_exception
from anyonwalk.generators.artifacts import (
    moments_document,
    read_variance_csv,
    render_csv,
    write_distributions,
    write_json,
    write_sweep_csv,
    write_variance_csv,
)
from anyonwalk.simulation import run_simulation, sweep
from anyonwalk.utils import atomic_write
from anyonwalk.validators.table_check import DEFAULT_LEVELS, verify_table

logger = logging.getLogger("anyonwalk")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2


def setup_logging(verbose: bool = False, debug: bool = False) -> None:
    """Configure logging based on verbosity settings."""
    if debug:
        level = logging.DEBUG
        fmt = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    elif verbose:
        level = logging.INFO
        fmt = "%(levelname)s: %(message)s"
    else:
        level = logging.WARNING
        fmt = "%(message)s"

    logging.basicConfig(level=level, format=fmt, stream=sys.stderr)
    logging.getLogger("anyonwalk").setLevel(level)


def _report_error(error: AnyonWalkError) -> int:
    """Print an error and map it to an exit code."""
    console = get_console()
    console.print_error(str(error))
    logger.debug("Error details: %s", error.to_dict())
    return EXIT_CONFIG if isinstance(error, ConfigurationError) else EXIT_FAILURE


def _int_list(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ConfigurationError(
            f"Expected a comma-separated list of integers, got {text!r}",
            invalid_key="dist_times",
        ) from None


def parse_offsets(text: str) -> List[int]:
    """"a:b" (inclusive) or a comma list into integer offsets."""
    try:
        if ":" in text:
            lo, hi = (int(part) for part in text.split(":"))
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(token) for token in text.split(",") if token.strip()]
    except ValueError:
        raise ConfigurationError(
            f"Invalid offsets {text!r}",
            invalid_key="offsets",
            suggestion="Use a range such as --offsets=-6:6",
        ) from None


def _distribution_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    # --emit-distributions is absent (None), bare ("") or carries a directory
    emit = getattr(args, "emit_distributions", None)
    if emit is None:
        return {}
    return {"emit_distributions": True, "distributions_dir": emit or None}


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Run settings given on the command line (None means 'not given')."""
    return {
        **_distribution_overrides(args),
        "mode": getattr(args, "mode", None),
        "level": getattr(args, "level", None),
        "steps": args.steps,
        "s0": args.s0,
        "n_sites": args.n_sites,
        "moment_mode": args.moment_mode,
        "provider": args.provider,
        "regularize": args.regularize,
        "check_positivity": args.check_positivity,
        "output_dir": args.output_dir,
        "distribution_times": _int_list(getattr(args, "dist_times", None)),
        "workers": args.workers,
        "disorder": {
            "phase": args.phase,
            "occupation": args.occupation,
            "fill_p": args.fill_p,
            "fixed_filling": args.fixed_filling,
            "seeds": args.seeds,
            "seed": args.seed,
        },
    }


def _build_config(args: argparse.Namespace, config_path: Optional[str]) -> RunConfig:
    return ConfigManager(config_path).build(_overrides(args))


# =============================================================================
# Commands
# =============================================================================


def simulate_command(args: argparse.Namespace, config_path: Optional[str] = None) -> int:
    """Run one simulation and write its variance (and distribution) CSVs."""
    console = get_console()
    try:
        config = _build_config(args, config_path)
        logger.info(
            "simulate: mode=%s level=%s t=%d N=%d",
            config.mode.value,
            config.level_label,
            config.steps,
            config.ring_size,
        )
        with console.status(f"Running {config.mode.value} walk at level {config.level_label}"):
            result = run_simulation(config)

        header = config.to_dict()
        out = Path(config.output_dir)
        written = [write_variance_csv(out / "variance.csv", result.trace, header)]
        if config.emit_distributions:
            dist_out = Path(config.distributions_dir) if config.distributions_dir else out
            written += write_distributions(
                dist_out, result.trace, config.distribution_times, header
            )
    except AnyonWalkError as e:
        return _report_error(e)
    except OSError as e:
        return _report_error(wrap_exception(e, "writing artifacts", config_path))

    final = result.trace.final
    summary: Dict[str, Any] = {
        "mode": config.mode.value,
        "level": config.level_label,
        "ring size N": config.ring_size,
        "iterations t": final.t,
        "walk steps": final.steps,
        "σ² raw (walk-step view)": f"{final.sigma2_raw:.12g}",
        "σ² scaled (double-site view)": f"{final.sigma2_scaled:.12g}",
    }
    if result.slope is not None:
        summary["trailing slope dσ²/dstep"] = f"{result.slope.K3:.6g}"
    if result.ensemble is not None:
        summary["seeds"] = len(result.ensemble.seeds)
        summary["mean displacement"] = (
            f"{result.ensemble.mean_displacement:.4g} ± {result.ensemble.displacement_stderr:.2g}"
        )
    if "fourier" in result.trace.metadata:
        kappa = result.trace.metadata["fourier"]["kappa"]
        summary["κ1"] = f"{kappa['kappa1']:.12g}"
        summary["κ2"] = f"{complex(*kappa['kappa2']):.6g}"
        regularization = result.trace.metadata["fourier"]["regularization"]
        if regularization is not None:
            deficit = result.trace.metadata.get("trace_deficit", 0.0)
            console.print_warning(
                f"normalization regularized with ε = {regularization:g}; "
                f"distributions renormalized (max trace deficit {deficit:.3e})"
            )
    console.print_summary("Simulation", summary)
    for path in written:
        console.print_info(f"wrote {path}")
    return EXIT_OK


def sweep_command(args: argparse.Namespace, config_path: Optional[str] = None) -> int:
    """Run one simulation per level and write sweep.csv."""
    console = get_console()
    try:
        levels = parse_levels(args.levels)
        config = _build_config(args, config_path)
        with console.progress("Levels", total=len(levels)) as progress:
            report = sweep(config, levels, progress=progress)
        written = write_sweep_csv(config.output_dir, report, config.to_dict())
    except AnyonWalkError as e:
        return _report_error(e)

    rows = []
    for result in report.results:
        if result.success:
            rows.append(
                [
                    result.level,
                    "[pass]ok[/pass]",
                    f"{result.final_sigma2_raw:.6g}",
                    f"{result.final_sigma2_scaled:.6g}",
                    f"{result.slope:.4f}" if result.slope is not None else "-",
                    f"{result.duration_s:.2f}s",
                ]
            )
        else:
            rows.append([result.level, f"[fail]{result.error_type}[/fail]", "-", "-", "-", "-"])
    console.print_table(
        ["level", "status", "σ² raw", "σ² scaled", "slope", "time"],
        rows,
        title=f"Sweep: {report.mode}, t = {report.steps}, {report.worker_count} workers",
    )
    for path in written:
        console.print_info(f"wrote {path}")
    if report.failed:
        console.print_error(f"{len(report.failed)} level(s) failed")
        return EXIT_FAILURE
    return EXIT_OK


def verify_table_command(args: argparse.Namespace, config_path: Optional[str] = None) -> int:
    """Compare the closed-form moment table with the bracket oracle."""
    console = get_console()
    try:
        levels = parse_levels(args.levels)
        offsets = parse_offsets(args.offsets)
        report = verify_table(levels, offsets, tolerance=args.tolerance)
        if args.output:
            columns = list(report.rows[0].to_dict()) if report.rows else []
            rows = [list(r.to_dict().values()) for r in report.rows]
            header = {"levels": args.levels, "offsets": args.offsets, "tolerance": args.tolerance}
            atomic_write(args.output, render_csv(columns, rows, header))
    except AnyonWalkError as e:
        return _report_error(e)

    console.print_table(
        ["k", "family", "Δ", "oracle", "table", "|diff|"],
        [
            [r.level, r.family, r.offset, f"{r.oracle:.10g}", f"{r.table:.10g}", f"{r.diff:.2e}"]
            for r in report.rows
        ],
        title="Moment table vs bracket oracle",
    )
    if report.passed:
        console.print_success(str(report))
    else:
        console.print_error(str(report))
    return EXIT_OK if report.passed else EXIT_FAILURE


def fit_command(args: argparse.Namespace, config_path: Optional[str] = None) -> int:
    """Fit σ² = K2·t² + K3·t to a variance CSV and print JSON."""
    try:
        columns = read_variance_csv(args.input)
        window = parse_window(args.window)
        if args.view == "scaled":
            x, y = columns["t"], columns["sigma2_scaled"]
        else:
            x, y = columns["steps"], columns["sigma2_raw"]
        if args.linear:
            result = fit_slope(x, y, window)
        else:
            result = fit_quadratic(x, y, window, with_offset=args.with_offset)
    except AnyonWalkError as e:
        return _report_error(e)

    document = result.to_dict()
    document["view"] = args.view
    print(json.dumps(document, sort_keys=True))
    return EXIT_OK


def dump_moments_command(args: argparse.Namespace, config_path: Optional[str] = None) -> int:
    """Write every moment, averaged moment and κ of one level as JSON."""
    console = get_console()
    try:
        level = parse_level(args.level)
        offsets = parse_offsets(args.offsets)
        if args.n_sites < 9:
            raise ConfigurationError(
                "Averaged moments need at least 9 sites", invalid_key="n_sites"
            )
        document = moments_document(level, offsets, n_sites=args.n_sites)
        if args.output:
            path = write_json(args.output, document)
            console.print_info(f"wrote {path}")
        else:
            print(json.dumps(document, indent=2, sort_keys=True))
    except AnyonWalkError as e:
        return _report_error(e)
    return EXIT_OK


def version_command(args: argparse.Namespace, config_path: Optional[str] = None) -> int:
    """Print version information."""
    console = get_console()
    console.print_rule(f"anyonwalk v{__version__}")
    console.print("V² anyonic quantum walk of SU(2)_k anyons")
    console.print("\nEngines:")
    console.print("  - [level]exact[/level]: seven-band superoperator on the density matrix")
    console.print("  - [level]circulant[/level]: Fourier-diagonal normalized channel")
    console.print("  - [level]closed-form[/level]: Ising binomial distribution")
    console.print("  - [level]rw / qw / disorder[/level]: reference walks")
    return EXIT_OK


# =============================================================================
# Argument parser
# =============================================================================


def _add_run_arguments(parser: argparse.ArgumentParser, with_level: bool = True) -> None:
    """Flags shared by simulate and sweep; None defaults let the config file show through."""
    parser.add_argument(
        "--mode",
        choices=["exact", "circulant", "closed-form", "rw", "qw", "disorder"],
        help="Evolution engine (default: exact)",
    )
    if with_level:
        parser.add_argument("--level", "-k", help="SU(2)_k level: integer >= 1 or 'inf'")
    parser.add_argument("--steps", "-t", type=int, help="Superoperator iterations (default: 100)")
    parser.add_argument("--s0", type=int, help="Start site (default: ring centre)")
    parser.add_argument("--n-sites", "-N", type=int, help="Ring size (default: 4t+1)")
    parser.add_argument(
        "--moment-mode", choices=["finite", "asymptotic"], help="Circulant moment averaging"
    )
    parser.add_argument("--provider", choices=["table", "oracle"], help="Braid moment source")
    parser.add_argument(
        "--regularize",
        type=float,
        nargs="?",
        const=DEFAULT_REGULARIZATION,
        help=f"Tikhonov ε for a singular normalization (bare flag: {DEFAULT_REGULARIZATION:g})",
    )
    parser.add_argument(
        "--check-positivity",
        action="store_true",
        default=None,
        help="Validate the density matrix after every exact iteration",
    )
    parser.add_argument("--output-dir", "-o", help="Directory for CSV artifacts")
    parser.add_argument("--workers", "-j", type=int, help="Worker processes")

    disorder = parser.add_argument_group("disorder")
    disorder.add_argument("--phase", type=float, help="Exchange phase φ in radians (default π/2)")
    disorder.add_argument(
        "--occupation", choices=["bernoulli", "fixed"], help="Island filling law"
    )
    disorder.add_argument("--fill-p", type=float, help="Bernoulli filling probability")
    disorder.add_argument("--fixed-filling", type=int, help="Anyons per island (fixed law)")
    disorder.add_argument("--seeds", type=int, help="Number of disorder realizations")
    disorder.add_argument("--seed", type=int, help="Base random seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anyonwalk",
        description="anyonwalk: V² anyonic quantum walk simulator",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  anyonwalk simulate --mode exact --level 2 --steps 50        Ising walk, variance.csv
  anyonwalk simulate --mode closed-form --level 2 --steps 4 --emit-distributions
  anyonwalk simulate --mode circulant --level 4 --moment-mode finite -N 401
  anyonwalk simulate --mode disorder --seeds 32 --seed 7      Abelian random filling
  anyonwalk sweep --levels 1,2,3,5,inf --steps 100            Variance per level
  anyonwalk verify-table --offsets=-6:6                       Table vs bracket oracle
  anyonwalk fit --input variance.csv --window 100:200         K2, K3 as JSON
  anyonwalk dump-moments --level 3                            All moments as JSON

Configuration is read from .anyonwalk.yaml (or --config); flags override it.
        """,
    )

    parser.add_argument("--version", "-v", action="store_true", help="Show version information")
    parser.add_argument("--verbose", action="store_true", help="Enable verbose output")
    parser.add_argument(
        "--debug", action="store_true", help="Enable debug output (implies --verbose)"
    )
    parser.add_argument("--config", "-c", help="Path to configuration file")
    parser.add_argument("--no-color", action="store_true", help="Disable colored output")

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    simulate_parser = subparsers.add_parser("simulate", help="Run one simulation")
    _add_run_arguments(simulate_parser)
    simulate_parser.add_argument(
        "--emit-distributions",
        nargs="?",
        const="",
        default=None,
        metavar="DIR",
        help="Also write dist_t<t>.csv files, to DIR if given (default: the output directory)",
    )
    simulate_parser.add_argument(
        "--dist-times", help="Comma-separated iterations to dump (default: the final one)"
    )
    simulate_parser.set_defaults(func=simulate_command)

    sweep_parser = subparsers.add_parser("sweep", help="Run one simulation per level")
    sweep_parser.add_argument(
        "--levels", required=True, help="Comma-separated levels, e.g. 1,2,3,5,inf"
    )
    _add_run_arguments(sweep_parser, with_level=False)
    sweep_parser.set_defaults(func=sweep_command)

    verify_parser = subparsers.add_parser(
        "verify-table", help="Check the closed-form moment table against the bracket oracle"
    )
    verify_parser.add_argument(
        "--levels",
        default=",".join(str(level) for level in DEFAULT_LEVELS),
        help="Comma-separated levels (default: 1,2,3,4,5,10)",
    )
    verify_parser.add_argument(
        "--offsets", default="-6:6", help="Offset range a:b, written --offsets=-6:6"
    )
    verify_parser.add_argument("--tolerance", type=float, default=1e-10, help="Maximum |diff|")
    verify_parser.add_argument("--output", help="Also write the rows as CSV")
    verify_parser.set_defaults(func=verify_table_command)

    fit_parser = subparsers.add_parser("fit", help="Fit σ² = K2·t² + K3·t to a variance CSV")
    fit_parser.add_argument("--input", "-i", required=True, help="variance CSV")
    fit_parser.add_argument("--window", "-w", help="Inclusive x range a:b (either side optional)")
    fit_parser.add_argument("--with-offset", action="store_true", help="Fit a constant term")
    fit_parser.add_argument(
        "--linear", action="store_true", help="Fit a straight line (slope and offset) instead"
    )
    fit_parser.add_argument(
        "--view",
        choices=["raw", "scaled"],
        default="raw",
        help="raw: σ² against walk steps (default); scaled: σ² of ŝ against iterations",
    )
    fit_parser.set_defaults(func=fit_command)

    dump_parser = subparsers.add_parser("dump-moments", help="Write all moments of a level as JSON")
    dump_parser.add_argument("--level", "-k", required=True, help="SU(2)_k level")
    dump_parser.add_argument("--offsets", default="-6:6", help="Offset range a:b")
    dump_parser.add_argument(
        "--n-sites", "-N", type=int, default=64, help="Ring size for averaged moments"
    )
    dump_parser.add_argument("--output", help="JSON path (default: stdout)")
    dump_parser.set_defaults(func=dump_moments_command)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(
        verbose=getattr(args, "verbose", False),
        debug=getattr(args, "debug", False) or bool(os.environ.get("ANYONWALK_DEBUG")),
    )
    configure_console(no_color=args.no_color or bool(os.environ.get("NO_COLOR")))

    if args.version:
        return version_command(args)

    if args.command is None:
        parser.print_help()
        return EXIT_OK

    return int(args.func(args, config_path=args.config))


if __name__ == "__main__":
    sys.exit(main())
