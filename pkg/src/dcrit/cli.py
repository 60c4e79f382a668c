"""Command line interface: ``dcrit <command> SPEC [options]``."""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .homology import ExactModeError
from .model import ValidationError
from .report import Report
from .specfile import SpecError, parse_range, parse_spec
from .tasks import TaskError, jsonable, run_task

RANGE_FLAGS = ("--degrees", "--weights")

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_COMPUTATION = 4


class CliError(Exception):
    def __init__(self, code: int, payload: dict):
        super().__init__(payload.get("message", ""))
        self.code = code
        self.payload = payload


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(EXIT_PARSE, {"error": "usage", "message": message, "line": 0, "column": 0})


def bundled_specs() -> list[str]:
    root = resources.files("dcrit") / "specs"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".spec"))


def read_spec(name: str) -> tuple[str, str]:
    """Text and display name of a spec given as a path or as a bundled file name."""
    p = Path(name)
    if p.is_file():
        return p.read_text(encoding="utf-8"), p.name
    bundled = resources.files("dcrit") / "specs" / name
    if bundled.is_file():
        return bundled.read_text(encoding="utf-8"), name
    raise CliError(EXIT_PARSE, {"error": "io", "message": f"no such spec file: {name}", "line": 0, "column": 0})


def _range_arg(text):
    try:
        return parse_range(text)
    except SpecError as exc:
        raise argparse.ArgumentTypeError(exc.message) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("spec", help="problem file, or the name of a bundled spec")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for block computations")

    parser = _Parser(prog="dcrit", description="Derived critical loci of equivariant functions.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("validate", parents=[common], help="run the validation cascade and model checks")
    sub.add_parser("build", parents=[common], help="summarize the dg models")
    c = sub.add_parser("cohomology", parents=[common], help="Betti numbers of a complex")
    c.add_argument("--complex", choices=("z", "dcrit", "bv", "mu0"), default="z")
    c.add_argument("--degrees", type=_range_arg, default=(-2, 0), metavar="A..B")
    c.add_argument("--weights", type=_range_arg, default=(0, 4), metavar="A..B")
    c.add_argument("--cap-poly", type=int, default=None)
    c.add_argument("--cap-word", type=int, default=None)
    c.add_argument("--reps", action="store_true", help="include representative cocycles")
    v = sub.add_parser("vanest-compare", parents=[common], help="compare group and Lie algebra models")
    v.add_argument("--degrees", type=_range_arg, default=(-1, 1), metavar="A..B")
    v.add_argument("--weights", type=_range_arg, default=(0, 4), metavar="A..B")
    sub.add_parser("symplectic-check", parents=[common], help="check the shifted symplectic structure")
    sub.add_parser("report", parents=[common], help="run every task listed in the problem file")
    sub.add_parser("list-specs", help="list the bundled specs")
    return parser


def _options(args) -> dict:
    opts = {}
    if args.command == "cohomology":
        opts = {"complex": args.complex, "cap_poly": args.cap_poly, "cap_word": args.cap_word,
                "reps": "true" if args.reps else None}
    if args.command in ("cohomology", "vanest-compare"):
        opts["degrees"] = "{}..{}".format(*args.degrees)
        opts["weights"] = "{}..{}".format(*args.weights)
    return {k: v for k, v in opts.items() if v is not None}


def _task_options(options: dict) -> dict:
    out = {}
    for k, v in options.items():
        out[k.replace("-", "_")] = v
    return out


def run(args) -> tuple[Report, bool]:
    text, name = read_spec(args.spec)
    spec = parse_spec(text, name)
    if args.command == "report":
        todo = [("validate", {})]
        todo += [(t.name, _task_options(t.options)) for t in spec.tasks if t.name != "validate"]
        if not spec.tasks:
            todo.append(("build", {}))
    else:
        todo = [(args.command, _options(args))]
    exact = not any("cap_poly" in o or "cap_word" in o for _, o in todo)
    report = Report.new(name, spec.sha256, exact)
    ok = True
    for task, opts in todo:
        result = run_task(spec.problem, task, dict(opts, jobs=args.jobs))
        report.add(task, opts, result)
        ok = ok and result.get("ok", True)
    return report, ok


def emit(report: Report, fmt: str, out: str | None):
    body = report.to_json() if fmt == "json" else report.to_text()
    if out:
        Path(out).write_text(body, encoding="utf-8")
    else:
        sys.stdout.write(body)


def _fail(code: int, payload: dict) -> int:
    sys.stderr.write(json.dumps(payload, sort_keys=True) + "\n")
    return code


def _join_ranges(argv: list[str]) -> list[str]:
    # "--degrees -1..0" would otherwise be read as an unknown flag
    out = []
    i = 0
    while i < len(argv):
        a = argv[i]
        if a in RANGE_FLAGS and i + 1 < len(argv):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def main(argv=None) -> int:
    argv = _join_ranges(list(sys.argv[1:] if argv is None else argv))
    try:
        args = build_parser().parse_args(argv)
        if args.command == "list-specs":
            sys.stdout.write("\n".join(bundled_specs()) + "\n")
            return EXIT_OK
        if args.jobs is not None and args.jobs < 1:
            raise CliError(EXIT_PARSE, {"error": "usage", "message": "--jobs must be positive",
                                       "line": 0, "column": 0})
        report, ok = run(args)
    except CliError as exc:
        return _fail(exc.code, exc.payload)
    except SpecError as exc:
        code = EXIT_VALIDATION if exc.kind == "validation" else EXIT_PARSE
        return _fail(code, exc.to_dict())
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, {"error": "validation", "message": str(exc),
                                       "witness": jsonable(exc.witness)})
    except (TaskError, ExactModeError, ValueError) as exc:
        return _fail(EXIT_COMPUTATION, {"error": "computation", "message": str(exc)})
    emit(report, args.format, args.out)
    if not ok:
        code = EXIT_VALIDATION if args.command == "validate" else EXIT_CHECK_FAILED
        return _fail(code, {"error": "check-failed", "message": "one or more checks failed"})
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
