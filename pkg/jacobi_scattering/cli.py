"""
Command-line interface for jacobi-scattering.

Subcommands read JSON files, run one stage of the scattering pipeline and
write JSON (or CSV tables) to a file or stdout:

    forward      spectral measure  -> scattering data
    inverse      scattering data   -> spectral measure
    reconstruct  measure or data   -> Jacobi parameters
    roundtrip    scattering data   -> deviation report for forward(inverse(data))
    example      closed-form case  -> computed-vs-exact comparison tables
"""

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from . import __version__
from .config import (
    ConfigError,
    get_config,
    get_grid_log2,
    get_log_level,
    get_n_max,
    get_output_format,
    get_tolerance_ladder,
    load_settings,
    update_settings,
    validate_settings,
)
from .core.harmonics import BesovClassError, DomainError, GridSizeError, JacobiScatteringError
from .core.inverse import AdmissibilityError, inverse, validate_data
from .core.jacobi import jost_function
from .core.reconstruction import (
    UnsupportedGammaError,
    christoffel_kernel,
    jacobi_from_spectral,
    stieltjes_jacobi,
    szego_transform,
    verblunsky,
)
from .core.scattering import InconsistentDataError, ScatteringData, compare_normalizing_constants, forward
from .core.spectral import SpectralMeasure, absolutely_continuous_mass, normalize, total_mass
from .utils.closed_forms import CASES, ClosedFormCase, SingleEigenvalueCase, build_case
from .utils.io import InputError, read_json, write_frame, write_json

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)
logger = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1
TABLE_ROWS = 20
JOST_PROBE = 0.3


class ToleranceError(JacobiScatteringError):
    """Raised when a computed report misses its tolerance."""
    pass


def setup_logging(verbose: bool = False, debug: bool = False) -> None:
    """Configure logging from the flags, falling back to the configured level."""
    if debug:
        logging.getLogger().setLevel(logging.DEBUG)
    elif verbose:
        logging.getLogger().setLevel(logging.INFO)
    else:
        logging.getLogger().setLevel(getattr(logging, get_log_level()))


def apply_settings(args: argparse.Namespace) -> None:
    """
    Merge defaults, the optional config file and command-line flags.

    Raises:
        ConfigError: If the merged settings are invalid
    """
    get_config().reset()
    if args.config:
        load_settings(args.config)
    update_settings({
        "grid_log2": args.grid_log2,
        "n_max": args.nmax,
        "tolerance": args.tol,
        "output_format": args.format,
    })
    if not validate_settings():
        raise ConfigError(f"Invalid settings: {get_config().get_all()}")

    log_file = get_config().get("log_file")
    if log_file:
        handler = logging.FileHandler(log_file)
        handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        logging.getLogger().addHandler(handler)


def load_measure(path: str, grid_log2: Optional[int] = None) -> SpectralMeasure:
    """Read a spectral measure, moving it to another grid when ``grid_log2`` is given."""
    measure = SpectralMeasure.from_dict(read_json(path))
    if grid_log2 is not None and grid_log2 != measure.grid_log2:
        logger.info(f"Resampling log_rho0 from 2^{measure.grid_log2} to 2^{grid_log2} points")
        measure = SpectralMeasure(
            measure.gamma1, measure.gamma2, measure.log_rho0.resample(grid_log2), measure.masses, measure.normalized
        )
    return measure


def cmd_forward(args: argparse.Namespace) -> int:
    """Spectral measure to scattering data."""
    data = forward(load_measure(args.input, args.grid_log2))
    write_json(data.to_dict(), args.output)
    return 0


def cmd_inverse(args: argparse.Namespace) -> int:
    """Scattering data to the normalized spectral measure."""
    data = ScatteringData.from_dict(read_json(args.input))
    measure = inverse(data)
    write_json(measure.to_dict(), args.output)
    return 0


def cmd_reconstruct(args: argparse.Namespace) -> int:
    """Jacobi parameters from a spectral measure or from scattering data."""
    payload = read_json(args.input)
    if "s" in payload:
        measure = inverse(ScatteringData.from_dict(payload))
    else:
        measure = SpectralMeasure.from_dict(payload)

    n_max = get_n_max()
    if args.method == "stieltjes":
        params = stieltjes_jacobi(measure, n_max)
    else:
        params = jacobi_from_spectral(measure, n_max)

    if get_output_format() == "csv":
        write_frame(params.to_frame(), args.output, "csv")
    else:
        write_json(params.to_dict(), args.output)
    return 0


def roundtrip_report(data: ScatteringData) -> Dict[str, Any]:
    """
    Deviations of forward(inverse(data)) from data, judged by the tolerance ladder.

    Inadmissible data yield a report with ``ok`` false and the violated items.
    """
    ladder = get_tolerance_ladder()
    admissibility = validate_data(data, strict=False, tol=ladder["admissibility"])
    report: Dict[str, Any] = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "tolerances": ladder,
        "violations": admissibility.to_dict()["violations"],
    }
    if not admissibility.ok:
        report.update({"admissible": False, "ok": False})
        return report

    measure = inverse(data)
    again = forward(measure)
    s_deviation = float(np.max(np.abs(again.s.samples - data.s.samples)))
    mu_deviations = [abs(m2 - m1) / m1 for m1, m2 in zip(data.mus, again.mus)]
    mass_deviation = abs(total_mass(measure) - 1.0)

    passed = {
        "s": s_deviation <= ladder["roundtrip"],
        "mus": all(d <= ladder["roundtrip"] for d in mu_deviations),
        "mass": mass_deviation <= ladder["mass"],
    }
    report.update({
        "admissible": True,
        "s_max_deviation": s_deviation,
        "mu_relative_deviations": mu_deviations,
        "mass_deviation": mass_deviation,
        "passed": passed,
        "ok": all(passed.values()),
    })
    return report


def cmd_roundtrip(args: argparse.Namespace) -> int:
    """Write the round-trip report; inadmissible data exit with 2, tolerance misses with 1."""
    data = ScatteringData.from_dict(read_json(args.input))
    report = roundtrip_report(data)
    write_json(report, args.output)
    if not report["admissible"]:
        first = report["violations"][0]
        raise AdmissibilityError(f"[{first['item']}] {first['message']}")
    if not report["ok"]:
        failed = [name for name, ok in report["passed"].items() if not ok]
        raise ToleranceError(f"Round trip missed the tolerance for: {', '.join(failed)}")
    return 0


def _rows(quantity: str, indices, computed, exact) -> pd.DataFrame:
    computed = np.asarray(computed, dtype=float)
    exact = np.asarray(exact, dtype=float)
    return pd.DataFrame({
        "quantity": quantity,
        "n": np.asarray(indices, dtype=int),
        "computed": computed,
        "closed_form": exact,
        "abs_error": np.abs(computed - exact),
    })


def example_tables(case: ClosedFormCase, grid_log2: int, n_max: int) -> Dict[str, pd.DataFrame]:
    """
    Run the whole pipeline on a closed-form case and compare every stage.

    The measure goes through forward, inverse and the Szegő-Geronimus-Nevai
    reconstruction; each table lines up computed values with the closed forms.
    """
    rows = min(TABLE_ROWS, n_max)
    measure = case.measure(grid_log2)
    data = forward(measure)
    exact_s = case.scattering(grid_log2).s
    recovered = inverse(data)
    params = jacobi_from_spectral(recovered, n_max)
    base = normalize(recovered.without_masses())
    alphas = verblunsky(szego_transform(base), rows - 1).alphas

    a, b = params.coefficients(rows)
    exact_a, exact_b = case.jacobi_coefficients(rows)
    n = np.arange(1, rows + 1)
    closed_params = case.jacobi(n_max)

    tables = {
        "scattering": pd.concat([
            _rows("s max deviation", [0], [np.max(np.abs(data.s.samples - exact_s.samples))], [0.0]),
            _rows("total mass", [0], [total_mass(recovered)], [1.0]),
            _rows("phi0 at z=0.3", [0], [jost_function(closed_params, JOST_PROBE).real],
                  [case.jost_function(JOST_PROBE).real]),
        ], ignore_index=True),
        "verblunsky": _rows("alpha", np.arange(rows), alphas, case.alphas(rows)),
        "jacobi": pd.concat([
            _rows("a^2", n, a ** 2, exact_a ** 2),
            _rows("b", n, b, exact_b),
        ], ignore_index=True),
    }

    if isinstance(case, SingleEigenvalueCase):
        check = compare_normalizing_constants(closed_params, measure, 0)
        sigma = recovered.sigmas[0]
        base_params = case.base_case().jacobi(n_max)
        kernel_n = np.arange(1, rows + 1)
        kernels = [christoffel_kernel(base_params, case.eigenvalue, k) for k in kernel_n]
        tables["eigenvalue"] = pd.concat([
            _rows("mu", [1], [data.mus[0]], [case.mu1]),
            _rows("guseinov m", [1], [check.guseinov], [case.mu1]),
            _rows("sigma", [1], [sigma], [case.sigma1]),
            _rows("epsilon", [1], [sigma / absolutely_continuous_mass(recovered)], [case.epsilon]),
            _rows("sigma * sum s_n^2", [1], [check.mass_identity], [1.0]),
            _rows("K_n / K_n exact", kernel_n, [k / case.christoffel(n) for k, n in zip(kernels, kernel_n)],
                  np.ones(rows)),
        ], ignore_index=True)
    return tables


def print_tables(case: ClosedFormCase, tables: Dict[str, pd.DataFrame]) -> None:
    """Print the comparison tables to stdout."""
    print("\n" + "="*50)
    print(f"EXAMPLE {case.name.upper()} {case.parameters()}")
    print("="*50)
    for title, frame in tables.items():
        print("\n" + "="*50)
        print(title.upper())
        print("="*50)
        with pd.option_context("display.float_format", "{:.3e}".format):
            print(frame.to_string(index=False))


def cmd_example(args: argparse.Namespace) -> int:
    """Replay a closed-form case; exits with 1 if any comparison misses the tolerance."""
    case = build_case(args.name, a=args.a, b=args.b, z1=args.z1, mu1=args.mu1)
    tolerance = args.tol if args.tol is not None else case.tolerance
    tables = example_tables(case, get_grid_log2(), get_n_max())

    if not args.quiet:
        print_tables(case, tables)
    if args.output:
        write_frame(pd.concat(tables.values(), ignore_index=True), args.output, get_output_format())

    worst = max(float(frame["abs_error"].max()) for frame in tables.values())
    if worst > tolerance:
        raise ToleranceError(f"Largest deviation {worst:.3e} exceeds tolerance {tolerance:.1e}")
    logger.info(f"Example {case.name}: largest deviation {worst:.3e} within {tolerance:.1e}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per pipeline stage."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--grid-log2", type=int, help="Grid size exponent, M = 2^k points (default: 12)")
    common.add_argument("--nmax", type=int, help="Recurrence and reconstruction length (default: 256)")
    common.add_argument("--tol", type=float, help="Admissibility and round-trip tolerance (default: 1e-8)")
    common.add_argument(
        "--format",
        choices=["json", "csv"],
        help="Output format for tables: reconstruct writes columns n,a,b; "
             "example writes quantity,n,computed,closed_form,abs_error (default: output_format setting, json)"
    )
    common.add_argument("--output", "-o", type=str, help="Output file (default: stdout)")
    common.add_argument("--config", type=str, help="JSON configuration file")
    common.add_argument("--verbose", "-v", action="store_true", help="Enable verbose output")
    common.add_argument("--debug", action="store_true", help="Enable debug output")
    common.add_argument("--quiet", "-q", action="store_true", help="Suppress all output except errors")

    parser = argparse.ArgumentParser(
        prog="jacobi-scattering",
        description="Forward and inverse scattering maps for Jacobi matrices with Ryckman-class parameters",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Scattering data of a spectral measure
  jacobi-scattering forward measure.json -o data.json

  # Jacobi parameters straight from scattering data, as CSV
  jacobi-scattering reconstruct data.json --format csv

  # Check forward(inverse(data)) against the tolerance ladder
  jacobi-scattering roundtrip data.json -o report.json

  # Replay the single-eigenvalue closed form
  jacobi-scattering example single-eigenvalue --z1 0.5 --mu1 1

Exit codes: 0 success, 1 tolerance failure, 2 input or admissibility error, 130 interrupted.
        """
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    for name, handler, help_text in (
        ("forward", cmd_forward, "Spectral measure JSON to scattering data JSON"),
        ("inverse", cmd_inverse, "Scattering data JSON to spectral measure JSON"),
        ("roundtrip", cmd_roundtrip, "Report deviations of forward(inverse(data))"),
    ):
        sub = subparsers.add_parser(name, parents=[common], help=help_text)
        sub.add_argument("input", help="Input JSON file")
        sub.set_defaults(handler=handler)

    reconstruct = subparsers.add_parser(
        "reconstruct", parents=[common], help="Jacobi parameters from a measure or scattering data"
    )
    reconstruct.add_argument("input", help="Spectral measure or scattering data JSON")
    reconstruct.add_argument(
        "--method",
        choices=["szego", "stieltjes"],
        default="szego",
        help="Szegő transform with Geronimus relations (gamma = 0 only) or the Stieltjes procedure"
    )
    reconstruct.set_defaults(handler=cmd_reconstruct)

    example = subparsers.add_parser("example", parents=[common], help="Replay a closed-form case")
    example.add_argument("name", help=f"One of {', '.join(CASES)}, or 1-4")
    example.add_argument("--a", type=float, help="Pole or zero parameter a in [0, 1)")
    example.add_argument("--b", type=float, help="Second pole b in [0, 1) (two-pole)")
    example.add_argument("--z1", type=float, help="Eigenvalue parameter z1 in (0, 1) (single-eigenvalue)")
    example.add_argument("--mu1", type=float, help="Normalizing constant mu1 > 0 (single-eigenvalue)")
    example.set_defaults(handler=cmd_example)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        apply_settings(args)

        # Setup logging once the configured level is known
        setup_logging(args.verbose, args.debug)
        if args.quiet:
            logging.getLogger().setLevel(logging.ERROR)

        return args.handler(args)

    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        return 130
    except (InputError, ConfigError) as e:
        logger.error(f"Input error: {e}")
        return 2
    except AdmissibilityError as e:
        logger.error(f"Inadmissible scattering data: {e}")
        return 2
    except UnsupportedGammaError as e:
        logger.error(f"{e}; rerun with --method stieltjes")
        return 2
    except (DomainError, GridSizeError, BesovClassError, InconsistentDataError) as e:
        logger.error(f"Invalid input: {e}")
        return 2
    except ToleranceError as e:
        logger.error(f"Tolerance failure: {e}")
        return 1
    except JacobiScatteringError as e:
        logger.error(f"Numerical failure: {e}")
        return 1
    except Exception as e:
        logger.error(f"Unexpected error: {e}")
        if args.debug:
            import traceback
            traceback.print_exc()
        return 1


if __name__ == "__main__":
    sys.exit(main())
