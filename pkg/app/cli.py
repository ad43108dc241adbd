"""Command-line surface for redmod.

Every command prints (or writes) one JSON document. Exit codes:

    0  nothing expected to hold failed
    1  at least one claim expected to hold reported ``fails``
    2  bad configuration (unknown claim, malformed spec file, budget)
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from app.config import get_settings
from app.exceptions import BadConfig, RedmodError
from app.models.module import CheckRequest, MultSetSpec
from app.models.report import AuditReport, RunConfig, RunReport
from app.models.ring import RingSpec
from app.services.harness import AuditService, summarize
from app.utils.helpers import dump_document, load_json_file, parse_literal

logger = logging.getLogger("app.cli")

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BAD_CONFIG = 2


def create_parser() -> argparse.ArgumentParser:
    """Create argument parser for CLI."""
    parser = argparse.ArgumentParser(
        prog="redmod",
        description="Audit reducedness, a-torsion and t-regularity claims over finite commutative rings",
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default=None,
        help="Override REDMOD_LOG_LEVEL for this run",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Check one claim on one ring or module")
    check.add_argument("--spec", required=True, help="JSON file with a module or ring spec")
    check.add_argument("--claim", required=True, help="Claim id (see `redmod claims`)")
    check.add_argument("--a", default=None, help="Scalar literal, e.g. 2 or [[1,1]]")
    check.add_argument("--t", type=int, default=1, help="Exponent t (default: 1)")
    check.add_argument("--degree", type=int, default=2, help="Polynomial degree bound for `poly`")
    check.add_argument(
        "--mult-set",
        default=None,
        help="JSON list of generators of a multiplicative set, e.g. [3]",
    )
    check.add_argument("--out", default=None, help="Write the report here instead of stdout")

    gamma = commands.add_parser("gamma", help="Compute Γ_a(M) and a^tΓ_a(M)")
    gamma.add_argument("--spec", required=True, help="JSON file with a module or ring spec")
    gamma.add_argument("--a", required=True, help="Scalar literal")
    gamma.add_argument("--t", type=int, default=1, help="Exponent t (default: 1)")
    gamma.add_argument("--out", default=None)

    catalog = commands.add_parser("catalog", help="Run claims over the ring catalog")
    catalog.add_argument("--max-order", type=int, default=32, help="Largest ring order (default: 32)")
    catalog.add_argument("--claims", nargs="+", default=["all"], help="Claim ids or `all`")
    catalog.add_argument("--t", type=int, nargs="+", default=[1], help="One or more exponents")
    catalog.add_argument("--min-n", type=int, default=None, help="Smallest n for Z_n")
    catalog.add_argument("--max-n", type=int, default=None, help="Largest n for Z_n")
    catalog.add_argument("--degree", type=int, default=2)
    catalog.add_argument("--workers", type=int, default=None, help="Process workers (default: REDMOD_WORKERS)")
    catalog.add_argument("--rings", default=None, help="JSON file with a list of ring specs")
    catalog.add_argument("--out", default=None, help="Write the report here instead of stdout")
    catalog.add_argument("--table", action="store_true", help="Also print a summary table to stderr")

    search = commands.add_parser("search", help="Search catalog rings for counterexamples")
    search.add_argument("--claim", required=True)
    search.add_argument("--t", type=int, default=1)
    search.add_argument("--max-order", type=int, default=16)
    search.add_argument("--out", default=None)

    commands.add_parser("claims", help="List claim ids with scope and expectation")

    return parser


def _emit(document: Any, out: Optional[str]) -> None:
    text = dump_document(document)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        logger.info(f"Wrote {out}")
    else:
        sys.stdout.write(text)


def _format_table(reports: list[AuditReport]) -> str:
    """One line per report: claim, ring, module, a, t, status."""
    header = f"{'claim':<32} {'ring':<22} {'module':<24} {'a':<8} {'t':>2}  status"
    lines = [header, "-" * len(header)]
    for r in reports:
        inst = r.instance
        a = "" if inst.a is None else str(inst.a)
        t = "" if inst.t is None else str(inst.t)
        lines.append(
            f"{r.claim:<32} {inst.ring:<22} {inst.module or '':<24} {a:<8} {t:>2}  {r.status.value}"
        )
    return "\n".join(lines) + "\n"


def cmd_check(args: argparse.Namespace, service: AuditService) -> int:
    mult_set = None
    if args.mult_set is not None:
        generators = parse_literal(args.mult_set)
        if not isinstance(generators, list):
            raise BadConfig("--mult-set must be a JSON list of element literals")
        mult_set = MultSetSpec(generators=generators)
    request = CheckRequest(
        spec=load_json_file(args.spec),
        claim=args.claim,
        a=parse_literal(args.a),
        t=args.t,
        degree=args.degree,
        mult_set=mult_set,
    )
    reports = service.check(request)
    _emit([r.model_dump(mode="json") for r in reports], args.out)
    _, failed_expected = summarize(reports)
    return EXIT_FAILED if failed_expected else EXIT_OK


def cmd_gamma(args: argparse.Namespace, service: AuditService) -> int:
    response = service.gamma(load_json_file(args.spec), parse_literal(args.a), args.t)
    _emit(response.model_dump(mode="json"), args.out)
    return EXIT_OK


def cmd_catalog(args: argparse.Namespace, service: AuditService) -> int:
    rings = None
    if args.rings:
        rings = [RingSpec.model_validate(spec) for spec in load_json_file(args.rings)]
    config = RunConfig(
        claims=args.claims,
        t=args.t,
        min_n=args.min_n,
        max_n=args.max_n,
        max_order=args.max_order,
        rings=rings,
        degree=args.degree,
        workers=args.workers,
    )
    report: RunReport = service.run_report(config)
    _emit(report.model_dump(mode="json"), args.out)
    if args.table:
        sys.stderr.write(_format_table(report.reports))
        sys.stderr.write(
            f"\nholds={report.summary.holds} fails={report.summary.fails} "
            f"hypothesis_not_met={report.summary.hypothesis_not_met} "
            f"skipped={report.summary.skipped} failed_expected={report.failed_expected}\n"
        )
    return report.exit_code


def cmd_search(args: argparse.Namespace, service: AuditService) -> int:
    witnesses = service.search(args.claim, args.t, args.max_order)
    _emit([w.model_dump(mode="json") for w in witnesses], args.out)
    return EXIT_OK


def cmd_claims(args: argparse.Namespace, service: AuditService) -> int:
    _emit(service.claims(), None)
    return EXIT_OK


COMMANDS = {
    "check": cmd_check,
    "gamma": cmd_gamma,
    "catalog": cmd_catalog,
    "search": cmd_search,
    "claims": cmd_claims,
}


def main(argv: Optional[list[str]] = None) -> int:
    """Main entry point for CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)
    settings = get_settings()

    logging.basicConfig(
        level=(args.log_level or settings.log_level).upper(),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )

    service = AuditService(settings)
    try:
        return COMMANDS[args.command](args, service)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e.errors()[0]['msg']}")
        return EXIT_BAD_CONFIG
    except RedmodError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
