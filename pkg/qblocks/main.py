import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional, Tuple

from pydantic import ValidationError

from qblocks.config import settings
from qblocks.exceptions import BlockShapeError, NonDominantWeightError, QBlocksError, WeightParseError
from qblocks.handlers.dot import filtration_dot, quiver_dot
from qblocks.handlers.reports import (
    block_report,
    character_report,
    character_warnings,
    classify_report,
    dump,
    envelope,
    filtration_report,
    projective_frame,
    projective_report,
    quiver_summary,
    render_json,
    render_table,
    verification_report,
)
from qblocks.models import Algebra, Weight, label_sort_key, strip_parity
from qblocks.services.blocks import BlockFamily
from qblocks.services.characters import euler_character
from qblocks.services.grothendieck import GrothendieckService
from qblocks.services.path_algebra import build_algebra, hom_dims, radical_filtration
from qblocks.services.quivers import block_quiver
from qblocks.services.representation_type import representation_type
from qblocks.services.verifier import VerificationSuite
from qblocks.services.weights import block_class

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

Outcome = Tuple[str, int]


def configure_logging(level: str) -> None:
    """Log to stderr so stdout carries only JSON or DOT."""
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", choices=[a.value for a in Algebra], default=Algebra.Q.value)
    common.add_argument("--log-level", default=None, help=f"Logging level (default {settings.LOG_LEVEL})")

    parser = argparse.ArgumentParser(
        prog="qblocks", description="Blocks of q(3) and sq(3): weights, characters, projectives and quivers"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", parents=[common], help="Block class of a dominant weight")
    classify.add_argument("weight")

    block = sub.add_parser("block", parents=[common], help="Block descriptor and quiver summary")
    block.add_argument("weight")
    block.add_argument("--bound", type=int, default=None)
    block.add_argument("--cutoff", type=int, default=None)
    block.add_argument("--cap", type=int, default=None)
    block.add_argument("--table", action="store_true", help="Print the Hom dimension table instead of JSON")

    euler = sub.add_parser("euler", parents=[common], help="Euler characteristic character")
    euler.add_argument("weight")
    euler.add_argument("--depth", type=int, default=None)

    projectives = sub.add_parser("projectives", parents=[common], help="Projective multiplicity table")
    projectives.add_argument("weight")
    projectives.add_argument("--bound", type=int, default=None)
    projectives.add_argument("--table", action="store_true", help="Print a plain text table instead of JSON")

    quiver = sub.add_parser("quiver", parents=[common], help="Ext quiver of the block")
    quiver.add_argument("weight")
    quiver.add_argument("--cutoff", type=int, default=None)
    quiver.add_argument("--dot", action="store_true")
    quiver.add_argument("-o", "--output", default=None, help="Write DOT to this file")

    filtration = sub.add_parser("filtration", parents=[common], help="Radical layers of a projective")
    filtration.add_argument("weight")
    filtration.add_argument("--vertex", required=True, help="Vertex name such as C, L2 or ΠL1")
    filtration.add_argument("--cutoff", type=int, default=None)
    filtration.add_argument("--cap", type=int, default=None)
    filtration.add_argument("--dot", action="store_true")

    wildness = sub.add_parser("wildness", parents=[common], help="Representation type of the block")
    wildness.add_argument("weight")
    wildness.add_argument("--cutoff", type=int, default=None)

    verify = sub.add_parser("verify-all", parents=[common], help="Run every acceptance check")
    verify.add_argument("--bound", type=int, default=None)
    verify.add_argument("--depth", type=int, default=None)
    verify.add_argument("--cap", type=int, default=None)
    return parser


def _inputs(args: argparse.Namespace) -> Dict[str, object]:
    skip = {"command", "log_level"}
    return {k: v for k, v in vars(args).items() if k not in skip and v not in (None, False)}


def _context(args: argparse.Namespace) -> Tuple[Weight, Algebra]:
    return Weight.parse(args.weight), Algebra(args.algebra)


def run_classify(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    return render_json(envelope(args.command, _inputs(args), classify_report(weight, algebra))), EXIT_OK


def run_block(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    block = block_class(weight, algebra)
    family = BlockFamily(block)
    bound = args.bound or settings.BOUND
    cutoff = max(args.cutoff or bound + 2, family.min_cutoff)
    quiver, relations = block_quiver(block, cutoff)
    if args.table:
        algebra_ = build_algebra(quiver, relations, args.cap or settings.CAP)
        return render_table(hom_dims(algebra_)) + "\n", EXIT_OK
    warnings = []
    untrusted = [v for v in quiver.vertices if not quiver.is_trusted(v)]
    if untrusted:
        warnings.append(f"boundary: {', '.join(untrusted)} lie within two steps of the cutoff {cutoff}")
    results = block_report(block, quiver, relations, bound)
    return render_json(envelope(args.command, _inputs(args), results, warnings)), EXIT_OK


def run_euler(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    character = euler_character(weight, algebra, args.depth if args.depth is not None else settings.DEPTH)
    report = envelope(args.command, _inputs(args), character_report(character), character_warnings(character))
    return render_json(report), EXIT_OK


def run_projectives(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    table = GrothendieckService.of(weight, algebra).projective_table(args.bound or settings.BOUND)
    if args.table:
        return render_table(projective_frame(table)) + "\n", EXIT_OK
    return render_json(envelope(args.command, _inputs(args), projective_report(table))), EXIT_OK


def run_quiver(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    block = block_class(weight, algebra)
    family = BlockFamily(block)
    cutoff = max(args.cutoff or settings.BOUND + 2, family.min_cutoff)
    quiver, relations = block_quiver(block, cutoff)
    if not args.dot:
        return render_json(envelope(args.command, _inputs(args), quiver_summary(quiver, relations))), EXIT_OK
    text = quiver_dot(quiver, relations, str(block))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info(f"Wrote DOT for the {block} to {args.output}")
        return render_json(envelope(args.command, _inputs(args), {"written": args.output})), EXIT_OK
    return text, EXIT_OK


def run_filtration(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    block = block_class(weight, algebra)
    family = BlockFamily(block)
    try:
        index, _ = label_sort_key(args.vertex)
    except ValueError:
        raise BlockShapeError(f"Cannot read vertex name {args.vertex!r}")
    cutoff = max(args.cutoff or 0, index + 2, family.min_cutoff)
    quiver, relations = block_quiver(block, cutoff)
    if args.vertex not in quiver.labels:
        known = sorted({strip_parity(v) for v in quiver.vertices}, key=label_sort_key)
        raise BlockShapeError(f"No vertex {args.vertex} in the {block}; vertices are {', '.join(known)} and shifts")
    algebra_ = build_algebra(quiver, relations, args.cap or settings.CAP)
    if args.dot:
        return filtration_dot(radical_filtration(algebra_, args.vertex), quiver), EXIT_OK
    return render_json(envelope(args.command, _inputs(args), filtration_report(algebra_, args.vertex))), EXIT_OK


def run_wildness(args: argparse.Namespace) -> Outcome:
    weight, algebra = _context(args)
    verdict = representation_type(block_class(weight, algebra), args.cutoff)
    return render_json(envelope(args.command, _inputs(args), dump(verdict))), EXIT_OK


def run_verify_all(args: argparse.Namespace) -> Outcome:
    suite = VerificationSuite(args.bound, args.depth, args.cap)
    results = suite.run_all()
    code = EXIT_OK if suite.passed else EXIT_MISMATCH
    return render_json(envelope(args.command, _inputs(args), verification_report(results))), code


COMMANDS: Dict[str, Callable[[argparse.Namespace], Outcome]] = {
    "classify": run_classify,
    "block": run_block,
    "euler": run_euler,
    "projectives": run_projectives,
    "quiver": run_quiver,
    "filtration": run_filtration,
    "wildness": run_wildness,
    "verify-all": run_verify_all,
}


def cli_dispatch(argv: Optional[List[str]] = None) -> int:
    """
    Parse arguments, run one command and print its output.

    Returns:
        0 on success, 1 when verification finds a mismatch, 2 on bad input
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    configure_logging(args.log_level or settings.LOG_LEVEL)
    try:
        output, code = COMMANDS[args.command](args)
    except (QBlocksError, ValidationError) as e:
        if isinstance(e, (WeightParseError, NonDominantWeightError, ValidationError)):
            logger.error(f"Invalid input: {e}")
        else:
            logger.error(f"{args.command} failed: {e}")
        error = {"error": type(e).__name__, "message": str(e)}
        sys.stdout.write(render_json(envelope(args.command, _inputs(args), error)) + "\n")
        return EXIT_USAGE

    sys.stdout.write(output if output.endswith("\n") else output + "\n")
    return code


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
