"""``angulator`` command line.

Exit status: 0 success, 1 usage/domain/precondition errors, 2 a theorem
check failed, 3 a capacity guard tripped.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from io import StringIO
from typing import Sequence, TextIO

from angulator.errors import AngulatorError, DomainError, UnsupportedError
from angulator.model import HomModel, TypeAModel, load_explicit_model, load_fixture, make_params
from angulator.mutation import (
    Direction,
    check_prop_4_12,
    check_theorem_4_13,
    make_context,
    mutate_set,
)
from angulator.pairs import (
    Strategy,
    check_theorem_3_14,
    classify_self_pair,
    enumerate_weak_cotorsion_pairs,
    is_cluster_tilting,
    is_rigid,
    nc,
    pair_class,
    pairs_document,
)
from angulator.quiver import emit_quiver
from angulator.subfactor import build_subfactor, check_theorem_4_11

PROG = "angulator"


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise _UsageError(message)


def _model_options() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    group = parent.add_argument_group("model selection (exactly one)")
    group.add_argument("--n", type=int, help="type-A rank (with --d)")
    group.add_argument("--d", type=int, help="dimension (with --n)")
    group.add_argument("--fixture", help="built-in explicit model, e.g. example-3-10")
    group.add_argument("--model-file", help="explicit model JSON file")
    parent.add_argument("--format", choices=("text", "json"), default="text")
    return parent


def build_parser() -> argparse.ArgumentParser:
    common = _model_options()
    parser = _Parser(prog=PROG, description="Cotorsion pairs in type-A diagonal models.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("objects", parents=[common], help="list the indecomposable objects")

    p = sub.add_parser("nc", parents=[common], help="objects not intertwining a set")
    p.add_argument("--set", required=True, dest="sets", help="d1,d2,... or - for stdin")

    p = sub.add_parser("pairs", parents=[common], help="enumerate weak cotorsion pairs")
    p.add_argument("--strategy", choices=[s.value for s in Strategy], default=Strategy.NEXT_CLOSURE.value)

    p = sub.add_parser("classify", parents=[common], help="classify (S, S) as a pair")
    p.add_argument("--set", required=True, dest="sets")

    p = sub.add_parser("mutate", parents=[common], help="D-mutation of a set")
    p.add_argument("--direction", choices=[d.value for d in Direction], required=True)
    p.add_argument("--D", dest="dset", default="", help="mutating subcategory; omit for D = 0")
    p.add_argument("--set", required=True, dest="sets")

    p = sub.add_parser("subfactor", parents=[common], help="cells and objects of nc(D)/D (d = 1)")
    p.add_argument("--D", dest="dset", required=True)

    p = sub.add_parser("check", parents=[common], help="exhaustive theorem checks")
    p.add_argument("theorem", choices=("thm-3-14", "thm-4-11", "thm-4-13", "prop-4-12"))
    p.add_argument("--D", dest="dset", default=None)
    p.add_argument(
        "--zero-only",
        action="store_true",
        help="thm-4-13: only D = 0 even on polygon models",
    )

    p = sub.add_parser("quiver", parents=[common], help="DOT text of the Hom or ext graph")
    p.add_argument("--kind", choices=("hom", "ext"), default="hom")
    return parser


def _select_model(args) -> tuple[HomModel, dict]:
    typed = args.n is not None or args.d is not None
    chosen = sum([typed, args.fixture is not None, args.model_file is not None])
    if chosen != 1:
        raise _UsageError("give exactly one of --n/--d, --fixture, --model-file")
    if typed:
        if args.n is None or args.d is None:
            raise _UsageError("--n and --d must be given together")
        model = TypeAModel(make_params(args.n, args.d))
        return model, model.describe()
    if args.fixture is not None:
        model = load_fixture(args.fixture)
        return model, {"fixture": args.fixture}
    try:
        model = load_explicit_model(args.model_file)
    except OSError as exc:
        raise DomainError(f"cannot read {args.model_file}: {exc.strerror}") from None
    return model, {"model_file": args.model_file}


def _read_sets(model: HomModel, text: str, stdin: TextIO) -> tuple[list[frozenset], bool]:
    if text == "-":
        return [model.parse_set(line) for line in stdin.read().splitlines()], True
    return [model.parse_set(text)], False


def _check_threads():
    env = os.environ.get("ANGULATOR_THREADS")
    if env is not None and not (env.isdigit() and int(env) > 0):
        raise DomainError(f"ANGULATOR_THREADS must be a positive integer, got {env!r}")


def _fmt_list(model: HomModel, objs) -> list[str]:
    return [model.format_object(o) for o in model.ordered(objs)]


def _emit(out: TextIO, args, text_lines: list[str], doc) -> None:
    if args.format == "json":
        out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")
    else:
        out.write("".join(line + "\n" for line in text_lines))


def _cmd_objects(model, desc, args, out, stdin):
    names = [model.format_object(o) for o in model.objects]
    _emit(out, args, names, {"model": desc, "objects": names})
    return 0


def _cmd_nc(model, desc, args, out, stdin):
    sets, many = _read_sets(model, args.sets, stdin)
    results = [nc(s, model) for s in sets]
    docs = [{"set": _fmt_list(model, s), "nc": _fmt_list(model, r)} for s, r in zip(sets, results)]
    _emit(out, args, [model.format_set(r) for r in results], docs if many else docs[0])
    return 0


def _cmd_pairs(model, desc, args, out, stdin):
    pairs = enumerate_weak_cotorsion_pairs(model, Strategy(args.strategy))
    lines = [
        "{%s}\t{%s}\t{%s}\t%s"
        % (model.format_set(p.x), model.format_set(p.y), model.format_set(p.core), pair_class(p, model))
        for p in pairs
    ]
    _emit(out, args, lines, pairs_document(model, pairs, desc))
    return 0


def _cmd_classify(model, desc, args, out, stdin):
    sets, many = _read_sets(model, args.sets, stdin)
    docs, lines = [], []
    for s in sets:
        cls = classify_self_pair(s, model)
        lines.append(cls.value)
        docs.append(
            {
                "set": _fmt_list(model, s),
                "rigid": is_rigid(s, model),
                "cluster_tilting": is_cluster_tilting(s, model),
                "class": cls.value,
            }
        )
    _emit(out, args, lines, docs if many else docs[0])
    return 0


def _cmd_mutate(model, desc, args, out, stdin):
    dset = model.parse_set(args.dset)
    ctx = make_context(model, dset)
    direction = Direction(args.direction)
    sets, many = _read_sets(model, args.sets, stdin)
    results = [mutate_set(s, ctx, direction) for s in sets]
    docs = [
        {
            "direction": direction.value,
            "dset": _fmt_list(model, dset),
            "set": _fmt_list(model, s),
            "result": _fmt_list(model, r),
        }
        for s, r in zip(sets, results)
    ]
    _emit(out, args, [model.format_set(r) for r in results], docs if many else docs[0])
    return 0


def _polygon_params(model):
    if not isinstance(model, TypeAModel):
        raise UnsupportedError("this command needs a type-A model given by --n/--d")
    return model.params


def _cmd_subfactor(model, desc, args, out, stdin):
    params = _polygon_params(model)
    sf = build_subfactor(params, model.parse_set(args.dset))
    doc = sf.to_json()
    lines = ["cell %d: %s" % (k, " ".join(map(str, c))) for k, c in enumerate(sf.cells)]
    lines += ["%s -> cell %d local %s" % (o["parent"], o["cell"], o["local"]) for o in doc["objects"]]
    _emit(out, args, lines, doc)
    return 0


def _cmd_check(model, desc, args, out, stdin):
    name = args.theorem
    if name == "thm-3-14":
        report = check_theorem_3_14(model)
    elif name == "thm-4-11":
        if args.dset is None:
            raise _UsageError("check thm-4-11 needs --D")
        report = check_theorem_4_11(_polygon_params(model), model.parse_set(args.dset))
    elif name == "thm-4-13":
        dset = None if args.dset is None else model.parse_set(args.dset)
        report = check_theorem_4_13(model, exhaustive=not args.zero_only, dset=dset)
    else:
        if args.dset is None:
            raise _UsageError("check prop-4-12 needs --D")
        report = check_prop_4_12(make_context(model, model.parse_set(args.dset)))
    status = "passed" if report.passed else "FAILED"
    lines = [f"{name}: {status} ({report.instances_checked} instances)"]
    if report.counterexample is not None:
        lines.append("counterexample: " + json.dumps(report.counterexample))
    _emit(out, args, lines, report.to_json())
    return 0 if report.passed else 2


def _cmd_quiver(model, desc, args, out, stdin):
    out.write(emit_quiver(model, args.kind))
    return 0


COMMANDS = {
    "objects": _cmd_objects,
    "nc": _cmd_nc,
    "pairs": _cmd_pairs,
    "classify": _cmd_classify,
    "mutate": _cmd_mutate,
    "subfactor": _cmd_subfactor,
    "check": _cmd_check,
    "quiver": _cmd_quiver,
}


def run(argv: Sequence[str] | None = None, stdout: TextIO | None = None,
        stderr: TextIO | None = None, stdin: TextIO | None = None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
        _check_threads()
        model, desc = _select_model(args)
        # buffer so nothing is written when a command fails halfway
        buf = StringIO()
        status = COMMANDS[args.command](model, desc, args, buf, stdin)
        stdout.write(buf.getvalue())
        return status
    except _UsageError as exc:
        stderr.write(f"{PROG}: error: {exc}\n")
        return 1
    except AngulatorError as exc:
        stderr.write(f"{PROG}: error: {exc}\n")
        return exc.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
