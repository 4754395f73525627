"""
Batch command line for LeibnizPairs

    python -m cli validate dual_numbers
    python -m cli cohomology dual_numbers --pair DUAL_PAIR --max-degree 4
    python -m cli cohomology pois3 --pair POIS3 --branch poisson --json
    python -m cli deform lift dual_numbers --jet X2 --order 5
    python -m cli serve

The input argument is a document path or the name of a bundled example.
Exit codes: 0 success (a failed lift is a finding), 1 domain failure,
2 usage or document error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

from leibnizpairs.bicomplex import LEIBNIZ, POISSON
from leibnizpairs.common_utils import setup_logging
from leibnizpairs.config import API_CONFIG, DEFAULT_LIFT_ORDER, DEFAULT_MAX_DEGREE, LOG_FILE, LOG_LEVEL
from leibnizpairs.document import load_document
from leibnizpairs.errors import (BranchError, ContractViolation, DocumentError, LeibnizPairsError,
                                 ObstructionPreconditionError, StructureError)
from leibnizpairs.pipelines import PipelineResult, run_cohomology, run_deform_check, run_deform_lift, run_validate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_USAGE = 2


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leibnizpairs",
                                     description="Exact cohomology and deformations of Leibniz pairs")
    parser.add_argument("-v", "--verbose", action="store_true", help="log pipeline milestones to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    validate = sub.add_parser("validate", help="check every object of a document against its axioms")
    validate.add_argument("input", help="document path or bundled example name")
    validate.add_argument("--json", action="store_true", help="emit JSON instead of text")

    cohomology = sub.add_parser("cohomology", help="Betti table of a pair or Poisson algebra")
    cohomology.add_argument("input", help="document path or bundled example name")
    cohomology.add_argument("--pair", required=True, help="pair or Poisson algebra name")
    cohomology.add_argument("--module", default=None, help="coefficient module (default: regular module)")
    cohomology.add_argument("--max-degree", type=_non_negative, default=DEFAULT_MAX_DEGREE)
    cohomology.add_argument("--branch", choices=(LEIBNIZ, POISSON), default=LEIBNIZ)
    cohomology.add_argument("--representatives", action="store_true",
                            help="attach canonical representative cocycles")
    cohomology.add_argument("--whitehead", action="store_true",
                            help="compare degrees 1-3 with the augmenting column")
    cohomology.add_argument("--semisimple", action="store_true",
                            help="assert that L is semisimple for the comparison")
    cohomology.add_argument("--json", action="store_true")

    deform = sub.add_parser("deform", help="check or lift a deformation jet")
    deform.add_argument("action", choices=("check", "lift"))
    deform.add_argument("input", help="document path or bundled example name")
    deform.add_argument("--jet", required=True, help="jet name")
    deform.add_argument("--order", type=_non_negative, default=DEFAULT_LIFT_ORDER,
                        help="target order for lift")
    deform.add_argument("--json", action="store_true")

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default=API_CONFIG["host"])
    serve.add_argument("--port", type=int, default=API_CONFIG["port"])
    return parser


def _emit(result: PipelineResult, as_json: bool) -> int:
    if as_json:
        sys.stdout.write(json.dumps(result.payload, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(result.text)
    return EXIT_OK if result.ok else EXIT_DOMAIN


def _run(args: argparse.Namespace) -> int:
    if args.command == "serve":
        import uvicorn
        from cli import app
        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK
    doc = load_document(args.input)
    if args.command == "validate":
        return _emit(run_validate(doc), args.json)
    if args.command == "cohomology":
        result = run_cohomology(doc, args.pair, args.max_degree, args.branch, args.module,
                                args.representatives, args.whitehead, args.semisimple)
        return _emit(result, args.json)
    if args.action == "check":
        return _emit(run_deform_check(doc, args.jet), args.json)
    return _emit(run_deform_lift(doc, args.jet, args.order), args.json)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    setup_logging("INFO" if args.verbose else LOG_LEVEL, LOG_FILE)
    try:
        return _run(args)
    except BranchError as exc:
        logger.error(str(exc))
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN
    except DocumentError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE
    except ObstructionPreconditionError as exc:
        sys.stderr.write(f"error: {exc} (order {exc.order})\n")
        return EXIT_DOMAIN
    except ContractViolation as exc:
        logger.error(f"contract violation: {exc}")
        raise
    except (StructureError, LeibnizPairsError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
