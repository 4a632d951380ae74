"""
Drinfeld tower CLI entry point.

Subcommands verify, supersingular, enumerate, genus and ihara; profiles
lists the YAML profiles. All arithmetic runs in the service layer.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv
from tabulate import tabulate

from src.config import apply_overrides, resolve_params
from src.core.config_loader import ProfileConfig, profile_to_dict
from src.core.logger import logger
from src.core.parser import parse_k_range
from src.core.run_context import RunContext, atomic_write
from src.drinfeld.errors import ConfigError, TowerError
from src.drinfeld.schemas import ChainModel, ParamsModel, ReconciliationModel, ReportModel, VerificationArtifact
from src.drinfeld.services import ConfigService, TowerService, VerificationService, counts_csv, genus_csv

load_dotenv()

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2

EPILOG = """\
Element literals are polynomials in the canonical generator g of the field
they are read into (F_{q^2} for --zeta/--eta, F_{q^4} for --t-point):
"2+g", "1+2*g^2". The letter i is accepted for g: "1+2i", "1-i".

Examples:
  uv run python -m src.main verify --q 3 --eta 1+2i --seed 7
  uv run python -m src.main enumerate --q 3 --eta 1+2i --k 5 --format json
  uv run python -m src.main genus --q 3 --k 1..3 --format csv
  uv run python -m src.main ihara --q 3 --k 30

TOWER_WORKERS sets the thread count of kernel scans and enumeration.
"""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Exact computations with rank-two Drinfeld modules and their reduced tower.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=None, help="Profile name in configs/ or path to a YAML file")
    common.add_argument("--q", type=int, default=None, help="Order of the constant field (prime power)")
    common.add_argument("--zeta", default=None, help="Element of F_{q^2} outside F_q (default: g)")
    common.add_argument("--eta", default=None, help="Reduction point in F_{q^2} (reduced mode)")
    common.add_argument("--mode", choices=["reduced", "specialized"], default=None)
    common.add_argument("--t-point", dest="t_point", default=None, help="Value of t in F_{q^4} (specialized mode)")
    common.add_argument("--nu-index", dest="nu_index", type=int, default=None, help="Which (q+1)-th root to use for nu")
    common.add_argument("--seed", type=int, default=None, help="Seed of every random draw")
    common.add_argument("--samples", type=int, default=None, help="Specializations per verification suite")
    common.add_argument("--k", default=None, help="Level, or range of levels such as 1..3")
    common.add_argument("--format", choices=["json", "csv"], default=None)
    common.add_argument("--output", type=Path, default=None, help="Write the artifact to this path instead of runs/")
    common.add_argument("--workers", type=int, default=None, help="Threads for kernel scans and enumeration")
    common.add_argument("--verbose", action="store_true", help="DEBUG logging")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="Run the identity suites and print a pass/fail matrix")
    sub.add_parser("supersingular", parents=[common], help="Supersingular j-invariants of the reduced tower")
    sub.add_parser("enumerate", parents=[common], help="Enumerate tower points up to level k")
    sub.add_parser("genus", parents=[common], help="Genus table for the levels in --k")
    sub.add_parser("ihara", parents=[common], help="Supersingular count over genus for k = 2..k")
    sub.add_parser("profiles", parents=[common], help="List the profiles in configs/")
    return parser


# =============================================================================
# Output
# =============================================================================


def provenance_line(payload: dict) -> str:
    """Comment line opening every CSV: the seed and the params digest (or q for tables of q alone)."""
    digest = payload.get("params_digest") or payload.get("params", {}).get("digest")
    context = f"params={digest}" if digest else f"q={payload['q']}"
    return f"# {payload['command']} seed={payload['seed']} {context}\n"


def emit(command: str, config: ProfileConfig, args: argparse.Namespace, payload: dict, csv_text: str | None) -> Path:
    """Write one artifact atomically, to --output or to the run folder."""
    as_csv = config.output.format == "csv" and csv_text is not None
    if as_csv:
        content = provenance_line(payload) + csv_text
    else:
        content = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.output:
        path = atomic_write(args.output, content)
    else:
        digest_input = {"command": command, "k": args.k, "profile": profile_to_dict(config)}
        run = RunContext(command, digest_input, base_dir=Path(config.output.directory))
        path = run.write_text(f"{command}.{'csv' if as_csv else 'json'}", content, config.output.format)
        run.write_manifest()
    logger.info(f"Wrote {path}")
    return path


# =============================================================================
# Commands
# =============================================================================


def run_verify(config: ProfileConfig, args: argparse.Namespace) -> int:
    params = resolve_params(config)
    service = VerificationService(
        params,
        seed=config.verification.seed,
        samples=config.verification.specializations,
        max_attempts=config.verification.max_attempts,
        workers=config.enumeration.workers,
    )
    outcome = service.run()
    print(outcome.matrix())
    print()
    print(outcome.discrepancy_table())

    artifact = VerificationArtifact(
        seed=config.verification.seed,
        params=ParamsModel.from_params(params),
        passed=outcome.passed,
        suites={name: [ReportModel.from_report(r) for r in reports] for name, reports in outcome.suites.items()},
        reconciliation=[ReconciliationModel.from_row(row) for row in outcome.reconciliation],
        chains=[ChainModel.from_chain(params, chain) for chain in outcome.chains],
    )
    header = "suite,check,passed,failed,status\n"
    csv_text = header + "".join(",".join(str(c) for c in row) + "\n" for row in outcome.matrix_rows())
    emit("verify", config, args, artifact.model_dump(), csv_text)
    return EXIT_OK if outcome.passed else EXIT_FAILED


def run_supersingular(config: ProfileConfig, args: argparse.Namespace) -> int:
    params = resolve_params(config)
    artifact = TowerService(config.verification.seed).supersingular(params)
    print(f"Supersingular j-invariants ({len(artifact.literals)}): {', '.join(artifact.literals)}")
    csv_text = "j\n" + "".join(f"{literal}\n" for literal in artifact.literals)
    emit("supersingular", config, args, artifact.model_dump(), csv_text)
    return EXIT_OK if artifact.report.passed else EXIT_FAILED


def run_enumerate(config: ProfileConfig, args: argparse.Namespace) -> int:
    params = resolve_params(config)
    k_max = max(parse_k_range(args.k)) if args.k else config.enumeration.k_max
    service = TowerService(config.verification.seed, config.enumeration.workers)
    enumeration = service.enumerate(params, k_max)
    print(service.counts_console(enumeration))
    emit("enumerate", config, args, service.tower_artifact(enumeration).model_dump(), counts_csv(enumeration))
    return EXIT_OK if enumeration.report().passed else EXIT_FAILED


def run_genus(config: ProfileConfig, args: argparse.Namespace) -> int:
    ks = parse_k_range(args.k) if args.k else list(range(1, config.enumeration.k_max + 1))
    service = TowerService(config.verification.seed)
    rows = service.genus(config.field.q, ks)
    print(service.genus_console(rows))
    emit("genus", config, args, service.genus_artifact(config.field.q, rows).model_dump(), genus_csv(rows))
    return EXIT_OK


def run_ihara(config: ProfileConfig, args: argparse.Namespace) -> int:
    k_max = max(parse_k_range(args.k)) if args.k else 30
    service = TowerService(config.verification.seed)
    summary = service.ihara(config.field.q, k_max)
    print(service.genus_console(summary.rows, with_bound=True))
    report = summary.report()
    for check in report.checks:
        print(f"{check.name}: {'PASS' if check.passed else 'FAIL'} ({check.detail})")
    emit("ihara", config, args, service.ihara_artifact(summary).model_dump(), genus_csv(summary.rows))
    return EXIT_OK if report.passed else EXIT_FAILED


def run_profiles(config_service: ConfigService) -> int:
    rows = [summary.to_row() for summary in config_service.list_profiles()]
    print(tabulate(rows, headers=["profile", "q", "mode", "zeta", "eta", "k_max", "seed", "description"]))
    return EXIT_OK


COMMANDS = {
    "verify": run_verify,
    "supersingular": run_supersingular,
    "enumerate": run_enumerate,
    "genus": run_genus,
    "ihara": run_ihara,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logger.set_level(logging.DEBUG if args.verbose else logging.INFO)
    if args.verbose:
        logger.debug("Verbose logging enabled")

    config_service = ConfigService()
    if args.command == "profiles":
        return run_profiles(config_service)

    try:
        config = apply_overrides(config_service.load_profile(args.config), args)
        config_service.validate(config)
        if not args.verbose:
            logger.set_level(config.logging.level)
        logger.info(f"Command {args.command}: q={config.field.q} mode={config.params.mode} seed={config.verification.seed}")
        return COMMANDS[args.command](config, args)
    except FileNotFoundError as e:
        logger.error(f"Config file not found: {e}")
        logger.error("Available profiles in configs/: " + ", ".join(config_service.get_profile_names()))
        return EXIT_CONFIG
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except TowerError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
