"""
Command-line driver: segre-instantons <command> [options].

JSON goes to stdout (or -o); logs go to stderr and the log file. Exit code 0
means every check passed, 1 that a mathematical check failed, 2 a usage or
I/O error.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Tuple

import pandas as pd

from src import __version__
from src.algebra.chow import CurveClass, ShapeTag, admissible_semistable_classes, chern_of_monad, chi_end
from src.algebra.field import Field
from src.bundles.hyperext import beilinson_table, ext_dims
from src.bundles.lines import divisor_grid_text, divisor_polynomial, jumping_divisor
from src.bundles.monad import Monad, MonadShape, random_monad, to_document, validate_monad
from src.bundles.stability import ulrich_report, verify_instanton
from src.schema import JumpingDivisor, RunConfig
from src.tools.ErrorAndStatus import (ChernDataError, FieldMismatchError, MonadFormatError, MonadShapeError,
                                      PreconditionError, SegreError, StatusCodes)
from src.tools.FileLoadTool import load_monad_file, save_monad_file
from src.tools.utils import (DEFAULT_GRID, DEFAULT_JOBS, DEFAULT_PAD, DEFAULT_PAD_CHECK, DEFAULT_POINTS,
                             DEFAULT_PRIME, DEFAULT_WINDOW, configure_logging)

logger = logging.getLogger(__name__)

TOOL_NAME = "segre-instantons"
EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2
COMMANDS = ("generate", "verify", "table", "ext", "ulrich", "jump", "chern", "classify")
USAGE_ERRORS = (PreconditionError, MonadShapeError, ChernDataError, MonadFormatError, FieldMismatchError)
TEXT_GRID = 8


class UsageError(Exception):
    pass


def _parse_c2(text: str) -> List[int]:
    try:
        values = [int(x) for x in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"--c2 expects k1,k2,k3, got {text!r}")
    if len(values) != 3:
        raise argparse.ArgumentTypeError(f"--c2 expects three integers, got {text!r}")
    return values


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--c2", type=_parse_c2, help="second Chern class as k1,k2,k3")
    common.add_argument("--shape", choices=[t.value for t in ShapeTag], default=ShapeTag.KERNEL.value)
    fields = common.add_mutually_exclusive_group()
    fields.add_argument("--prime", type=int, default=None, help=f"prime modulus (default {DEFAULT_PRIME})")
    fields.add_argument("--rational", action="store_true", help="work over the rationals")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--window", type=int, default=DEFAULT_WINDOW)
    common.add_argument("--pad", type=int, default=DEFAULT_PAD)
    common.add_argument("--pad-check", action=argparse.BooleanOptionalAction, default=DEFAULT_PAD_CHECK)
    common.add_argument("--grid", type=int, default=DEFAULT_GRID, help="jumping-divisor grid size (0 = automatic)")
    common.add_argument("--family", type=int, choices=(1, 2, 3), default=None)
    common.add_argument("--jobs", type=int, default=DEFAULT_JOBS)
    common.add_argument("--points", type=int, default=DEFAULT_POINTS, help="points for fiberwise validation")
    common.add_argument("--bound", type=int, default=10, help="enumeration bound for classify")
    common.add_argument("-i", "--input", default=None, help="monad file (segre-monad-v1)")
    common.add_argument("-o", "--output", default=None, help="output path")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--log-level", default=None)
    common.add_argument("--log-file", default=None)

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Instanton bundles on P^1 x P^1 x P^1.")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "generate": "draw a random monad and write it",
        "verify": "check the instanton conditions of a monad",
        "table": "cohomology table of the eight twists",
        "ext": "dimensions of Ext^i(E, E)",
        "ulrich": "vanishing checks for charge 2",
        "jump": "jumping-line divisors",
        "chern": "Chern classes of a monad shape",
        "classify": "numerical classes of strictly semistable extensions",
    }
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=helps[name])
    return parser


def run_config(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        command=args.command,
        c2=args.c2,
        shape=args.shape,
        prime=None if args.rational else (args.prime or DEFAULT_PRIME),
        rational=args.rational,
        seed=args.seed,
        window=args.window,
        pad=args.pad,
        pad_check=args.pad_check,
        grid=args.grid,
        bound=args.bound,
        family=args.family,
        jobs=args.jobs,
        points=args.points,
        input=args.input,
        output=args.output,
        format=args.format,
    )


def _field(config: RunConfig) -> Field:
    return Field.rationals() if config.rational else Field.prime(config.prime)


def with_field(config: RunConfig, field: Field) -> RunConfig:
    """The config as it applies to a monad over `field` (files carry their own field)."""
    return config.model_copy(update={"prime": field.p, "rational": not field.is_prime})


def _shape(config: RunConfig) -> MonadShape:
    if config.c2 is None:
        raise UsageError(f"'{config.command}' needs --c2 (or --input)")
    return MonadShape(ShapeTag(config.shape), CurveClass.of(config.c2))


def obtain_monad(config: RunConfig, explicit_field: bool) -> Monad:
    """The monad from --input, or a freshly generated one from --c2/--shape/--seed."""
    if config.input:
        result = load_monad_file(config.input, _field(config) if explicit_field else None)
        if result["status"] != StatusCodes.SUCCESS:
            raise UsageError(result["message"])
        return result["monad"]
    return random_monad(_shape(config), _field(config), config.seed, n_points=config.points)


def cmd_generate(config: RunConfig, monad: Monad) -> Tuple[dict, bool]:
    validity = validate_monad(monad, config.points, config.seed)
    result = {
        "valid": validity.valid,
        "ranks": list(monad.shape.ranks),
        "validity": validity.model_dump(mode="json"),
        "stats": monad.stats.model_dump(mode="json") if monad.stats else None,
    }
    if config.output:
        saved = save_monad_file(monad, config.output)
        if saved["status"] != StatusCodes.SUCCESS:
            raise UsageError(saved["message"])
        result["written"] = config.output
    else:
        result["monad"] = to_document(monad)
    return result, validity.valid


def cmd_verify(config: RunConfig, monad: Monad) -> Tuple[dict, bool]:
    report = verify_instanton(monad, config.window, config.pad, config.pad_check, config.points, config.seed,
                              config.jobs)
    return report.model_dump(mode="json"), report.passed


def cmd_table(config: RunConfig, monad: Monad) -> Tuple[dict, bool]:
    table = beilinson_table(monad, config.pad, config.pad_check)
    return table.model_dump(mode="json") | {"matches_expected": table.matches_expected}, table.matches_expected


def cmd_ext(config: RunConfig, monad: Monad) -> Tuple[dict, bool]:
    report = ext_dims(monad, config.pad, config.pad_check)
    return report.model_dump(mode="json") | {"matches_expected": report.matches_expected}, report.matches_expected


def cmd_ulrich(config: RunConfig, monad: Monad) -> Tuple[dict, bool]:
    report = ulrich_report(monad, config.pad, config.pad_check)
    return report.model_dump(mode="json"), report.passed


def cmd_jump(config: RunConfig, monad: Monad) -> Tuple[dict, bool]:
    families = [config.family] if config.family else [1, 2, 3]
    divisors = []
    for family in families:
        divisors.append(jumping_divisor(monad, family, config.grid, config.seed, pad=config.pad,
                                        pad_check=config.pad_check))
    ok = all(d.convention != "unexpected" and (d.holdout is None or not d.holdout.inconsistent) for d in divisors)
    return {"divisors": [d.model_dump(mode="json") for d in divisors]}, ok


def cmd_chern(config: RunConfig) -> Tuple[dict, bool]:
    shape = _shape(config)
    c1, c2, c3 = chern_of_monad(shape.tag, shape.c2)
    ok = c1.as_tuple() == (0, 0, 0) and c2 == shape.c2 and c3 == 0
    return {
        "c1": list(c1.as_tuple()),
        "c2": list(c2.as_tuple()),
        "c3": c3,
        "ranks": list(shape.ranks),
        "terms": [str(t) for t in shape.terms()],
        "chi_end": chi_end(shape.c2),
    }, ok


def cmd_classify(config: RunConfig) -> Tuple[dict, bool]:
    classes = admissible_semistable_classes(config.bound)
    rows = [{"a": c.a, "b": c.b, "c2": list(c.c2.as_tuple()), "l": c.l, "index": c.index} for c in classes]
    patterns_ok = all(c.c2.charge == 2 * c.l * c.l for c in classes)
    return {"bound": config.bound, "classes": rows}, patterns_ok


def _frame(command: str, result: dict) -> Optional[pd.DataFrame]:
    if command == "table":
        return pd.DataFrame([{"twist": r["label"], **r["dims"], "expected": "/".join(str(v) for v in
                                                                                  r["expected"].values())}
                             for r in result["rows"]])
    if command == "verify":
        return pd.DataFrame(result["checks"])
    if command == "ext":
        return pd.DataFrame([{k: result[k] for k in ("hom", "ext1", "ext2", "ext3", "chi")}])
    if command == "ulrich":
        return pd.DataFrame([{"t": t, **dims, "chi": result["chi"][t]} for t, dims in result["dims"].items()])
    if command == "jump":
        return pd.DataFrame([{"family": d["family"], "bidegree": tuple(d["bidegree"]),
                              "expected": tuple(d["expected_bidegree"]), "convention": d["convention"]}
                             for d in result["divisors"]])
    if command == "classify":
        return pd.DataFrame(result["classes"])
    if command == "chern":
        return pd.DataFrame([{k: result[k] for k in ("c1", "c2", "c3", "chi_end")}])
    if command == "generate":
        return pd.DataFrame([{"valid": result["valid"], "ranks": tuple(result["ranks"])}])
    return None


def render_text(config: RunConfig, result: dict, passed: bool, monad: Optional[Monad] = None) -> str:
    lines = [f"{TOOL_NAME} {__version__} {config.command}: {'PASS' if passed else 'FAIL'}",
             f"field={'Q' if config.rational else f'F_{config.prime}'} seed={config.seed} pad={config.pad} "
             f"window={config.window}"]
    frame = _frame(config.command, result)
    if frame is not None and not frame.empty:
        lines.append(frame.to_string(index=False))
    if config.command == "verify" and result.get("table"):
        lines.append(_frame("table", result["table"]).to_string(index=False))
    if config.command == "jump" and monad is not None:
        size = config.grid or TEXT_GRID
        values = [monad.field(v) for v in range(1, size + 1)]
        for d in result["divisors"]:
            poly = divisor_polynomial(JumpingDivisor.model_validate(d), monad.field)
            lines.append(f"family {d['family']} vanishing grid:")
            lines.append(divisor_grid_text(poly, values, values).rstrip("\n"))
    return "\n".join(lines) + "\n"


def envelope(config: RunConfig, result: dict, passed: bool) -> dict:
    return {
        "tool": TOOL_NAME,
        "version": __version__,
        "config": config.model_dump(mode="json"),
        "status": StatusCodes.SUCCESS.value if passed else StatusCodes.FAILED.value,
        "result": result,
    }


def _emit(text: str, path: Optional[str]) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _error_payload(config: Optional[RunConfig], code: str, message: str) -> str:
    payload = {"tool": TOOL_NAME, "version": __version__, "status": StatusCodes.ERROR.value,
               "error_code": code, "message": message,
               "config": config.model_dump(mode="json") if config else None}
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_file)
    config = run_config(args)
    logger.info(f"=== Starting {TOOL_NAME} {config.command} ===")
    handlers = {"generate": cmd_generate, "verify": cmd_verify, "table": cmd_table, "ext": cmd_ext,
                "ulrich": cmd_ulrich, "jump": cmd_jump}
    monad = None
    try:
        if config.command == "chern":
            result, passed = cmd_chern(config)
        elif config.command == "classify":
            result, passed = cmd_classify(config)
        else:
            explicit_field = args.rational or args.prime is not None
            monad = obtain_monad(config, explicit_field)
            if not explicit_field:
                config = with_field(config, monad.field)
            result, passed = handlers[config.command](config, monad)
    except UsageError as e:
        logger.error(str(e))
        sys.stdout.write(_error_payload(config, "USAGE", str(e)))
        return EXIT_USAGE
    except USAGE_ERRORS as e:
        logger.error(f"{e.code.value}: {e}")
        sys.stdout.write(_error_payload(config, e.code.value, str(e)))
        return EXIT_USAGE
    except SegreError as e:
        logger.error(f"{e.code.value}: {e}")
        sys.stdout.write(_error_payload(config, e.code.value, str(e)))
        return EXIT_CHECK_FAILED

    if config.format == "text":
        text = render_text(config, result, passed, monad)
    else:
        text = json.dumps(envelope(config, result, passed), sort_keys=True, indent=2) + "\n"
    # generate writes the monad itself to -o; the summary goes to stdout
    _emit(text, None if config.command == "generate" else config.output)
    logger.info(f"{config.command} finished: {'PASS' if passed else 'FAIL'}")
    return EXIT_OK if passed else EXIT_CHECK_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
