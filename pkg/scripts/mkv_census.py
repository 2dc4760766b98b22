#!/usr/bin/env python3
"""
mkv-census - Entry Point Script

Simulates the McKean-Vlasov SPDE on the torus, enumerates and classifies its
stationary densities, runs strong-convergence studies and the scalar
Langevin demonstration.

Usage:
    python scripts/mkv_census.py simulate --sigma 0.2 --t-max 3e4
    python scripts/mkv_census.py fixed-points --sigma-list 0.2 0.6 1.0
    python scripts/mkv_census.py stability --roots output/roots.csv
    python scripts/mkv_census.py converge --axis dt --sweep 0.1 0.01 --t-max 10
    python scripts/mkv_census.py langevin --potential double_well --alpha 0.5

Exit codes: 0 success, 2 configuration error, 3 numerical divergence,
4 I/O error, 1 anything else.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add parent directory to path to allow imports
sys.path.insert(0, str(Path(__file__).parent.parent))

from pydantic import ValidationError

from config import get_settings, load_run_config
from src.commands import cmd_converge, cmd_fixed_points, cmd_langevin, cmd_simulate, cmd_stability
from src.utils import ConfigurationError, DivergenceError, RootFileError, setup_logging


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DIVERGENCE = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="TOML run configuration")
    common.add_argument("--out", type=Path, help="output directory")
    common.add_argument("--seed", type=int, help="64-bit master seed")
    common.add_argument("--preset", help="model preset (double_well, four_well, custom)")
    common.add_argument("--sigma", type=float, help="diffusion coefficient")
    common.add_argument("--gamma", type=float, help="noise amplitude")
    common.add_argument("--s", type=float, help="noise decay exponent")
    common.add_argument("--J", type=int, help="resolved Fourier modes")
    common.add_argument("--dt", type=float, help="time step")
    common.add_argument("--t-max", type=float, dest="t_max", help="time horizon")
    common.add_argument("--trials", type=int, help="Monte Carlo trials")
    common.add_argument("--workers", type=int, help="worker processes")
    common.add_argument("--log-level", dest="log_level", help="logging level")

    parser = argparse.ArgumentParser(prog="mkv_census", description=__doc__.split("\n\n")[1])
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("simulate", parents=[common], help="run one SPDE trajectory")

    fixed = sub.add_parser("fixed-points", parents=[common], help="enumerate stationary densities")
    fixed.add_argument("--sigma-list", type=float, nargs="+", dest="sigma_list")

    stability = sub.add_parser("stability", parents=[common], help="spectra of stationary densities")
    stability.add_argument("--roots", type=Path, required=True, help="roots CSV from fixed-points")

    converge = sub.add_parser("converge", parents=[common], help="strong-convergence study")
    converge.add_argument("--axis", choices=["dt", "J"], default="dt")
    converge.add_argument("--sweep", type=float, nargs="+", help="time steps or mode counts")

    langevin = sub.add_parser("langevin", parents=[common], help="scalar Langevin demonstration")
    langevin.add_argument("--potential", choices=["double_well", "multi_well"])
    langevin.add_argument("--alpha", type=float, help="noise intensity")
    return parser


def collect_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Map command-line flags to dotted run-configuration keys."""
    overrides = {
        "model.preset": args.preset,
        "model.sigma": args.sigma,
        "model.gamma": args.gamma,
        "model.s": args.s,
        "simulation.J": args.J,
        "convergence.trials": args.trials,
        "output.directory": str(args.out) if args.out else None,
    }
    if args.command == "langevin":
        overrides.update({
            "langevin.potential": args.potential,
            "langevin.alpha": args.alpha,
            "langevin.dt": args.dt,
            "langevin.t_max": args.t_max,
            "langevin.seed": args.seed,
        })
    else:
        overrides.update({
            "simulation.dt": args.dt,
            "simulation.t_max": args.t_max,
            "simulation.seed": args.seed,
        })
    return overrides


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point.

    Returns:
        Exit code
    """
    args = build_parser().parse_args(argv)
    settings = get_settings()

    setup_logging(
        log_file=settings.get_log_path(),
        log_level=args.log_level or settings.LOG_LEVEL,
        log_format=settings.LOG_FORMAT
    )

    try:
        config_path = args.config or settings.get_run_config_path()
        config = load_run_config(config_path, collect_overrides(args))
        out_dir = Path(config.output.directory) if config.output.directory else settings.get_output_dir()
        workers = args.workers or settings.WORKERS
        logger.info(f"Command: {args.command}")
        logger.info(f"Configuration: {config_path or 'defaults'} (hash {config.config_hash()[:12]})")
        logger.info(f"Output directory: {out_dir}")

        if args.command == "simulate":
            cmd_simulate(config, out_dir)
        elif args.command == "fixed-points":
            cmd_fixed_points(config, args.sigma_list or [config.model.sigma], out_dir, workers=workers)
        elif args.command == "stability":
            cmd_stability(config, args.roots, out_dir)
        elif args.command == "converge":
            cmd_converge(config, args.axis, args.sweep, out_dir, workers=workers, ci_seed=settings.CI_SEED)
        elif args.command == "langevin":
            cmd_langevin(config, out_dir)

        logger.info("\nDone! Check the output folder for results.")
        return EXIT_OK

    except (ConfigurationError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except DivergenceError as e:
        logger.error(f"Numerical divergence at step {e.step}")
        return EXIT_DIVERGENCE
    except FileNotFoundError as e:
        logger.error(f"File not found: {e}")
        return EXIT_IO
    except (OSError, RootFileError) as e:
        logger.error(f"I/O error: {e}")
        return EXIT_IO
    except Exception as e:
        logger.exception(f"An unexpected error occurred: {e}")
        return EXIT_UNEXPECTED


if __name__ == '__main__':
    sys.exit(main())
