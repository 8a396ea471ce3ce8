#!/usr/bin/env python3
"""
jacobi-scattering - Main Entry Point

Usage:
    # Run the CLI
    python main.py --cli [CLI_OPTIONS]

    # Without --cli the CLI help is shown
    python main.py
"""

import sys
import argparse


def main():
    """Main entry point dispatching to the command-line interface."""
    parser = argparse.ArgumentParser(
        description="jacobi-scattering - Unified Entry Point",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )

    parser.add_argument(
        "--cli",
        action="store_true",
        help="Run the command-line interface"
    )

    # Pass through any other arguments to CLI
    parser.add_argument("cli_args", nargs=argparse.REMAINDER, help="CLI arguments")

    args = parser.parse_args()

    if args.cli:
        return run_cli(args.cli_args)
    return run_cli(["--help"])


def run_cli(cli_args):
    """Run the command-line interface and return its exit code."""
    try:
        from jacobi_scattering.cli import main as cli_main
    except ImportError as e:
        print(f"Failed to import CLI: {e}")
        print("Please ensure the package is properly installed.")
        return 1

    # If no CLI args provided, show help
    if not cli_args:
        cli_args = ["--help"]

    try:
        return cli_main(cli_args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0


if __name__ == "__main__":
    sys.exit(main())
