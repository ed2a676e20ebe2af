"""``bt``: command-line access to behaviours, operators and law suites.

Exit codes: 0 success or true, 1 false or a violation was found, 2 usage
or parse error, 3 a resource bound was exceeded.
"""
import argparse
import os
import sys

from . import axioms, core, formats
from . import lts as lt
from .errors import BehaviourTypeError, FormatError, ResourceLimitError

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
BEHAVIOUR_KINDS = ("traces", "lts", "coalgebra")


class UsageError(Exception):
    pass


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None


def _report_warnings(doc, source):
    for w in doc.warnings:
        print(f"{source}: warning: {w}", file=sys.stderr)


def load_behaviour(spec):
    """``path`` holds one behaviour, or use ``path#NAME`` to pick a document."""
    path, _, wanted = spec.partition("#")
    text = _read(path)
    try:
        docs = [d for d in formats.parse_all(text) if d.kind != "lattice"]
    except FormatError as exc:
        raise FormatError(f"{path}:{exc}") from None
    if wanted:
        docs = [d for d in docs if d.name == wanted]
        if not docs:
            raise UsageError(f"{path}: no document named {wanted!r}")
    if not docs:
        raise UsageError(f"{path}: empty file")
    doc = docs[-1]
    if doc.kind not in BEHAVIOUR_KINDS:
        raise UsageError(f"{path}: expected a behaviour, found a {doc.kind} document")
    _report_warnings(doc, path)
    return doc.body


def load_operator(spec):
    """``@path`` always reads a file; an existing file wins over an inline expression."""
    if spec.startswith("@"):
        text, source = _read(spec[1:]), spec[1:]
    elif os.path.isfile(spec):
        text, source = _read(spec), spec
    else:
        text, source = spec, "<inline>"
    try:
        return formats.parse_operator(text)
    except FormatError as exc:
        raise FormatError(f"{source}:{exc}") from None


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_behaviour(b, args):
    _emit(formats.serialize_behaviour(b, args.name), args.output)


def cmd_compose(args):
    op = load_operator(args.op)
    behaviours = [load_behaviour(p) for p in args.behaviours]
    _emit_behaviour(core.apply_operator(op, behaviours), args)
    return EXIT_OK


def cmd_check(args):
    b1, b2 = load_behaviour(args.left), load_behaviour(args.right)
    relation = {"sim": core.sim_leq, "sem": core.sem_leq, "equiv": core.equiv}[args.relation]
    verdict = relation(b1, b2)
    print("true" if verdict else "false")
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_meet(args):
    _emit_behaviour(core.meet(load_behaviour(args.left), load_behaviour(args.right)), args)
    return EXIT_OK


def cmd_op(args):
    ops = [load_operator(s) for s in args.operands]
    need = {"meet": 2, "compose": 2, "extend": 1, "reduce": 1}[args.action]
    if len(ops) != need:
        raise UsageError(f"op {args.action} takes {need} operator(s)")
    if args.action in ("compose", "extend", "reduce") and args.number is None:
        raise UsageError(f"op {args.action} needs -n")
    if args.action == "meet":
        result = core.op_meet(*ops)
    elif args.action == "compose":
        result = core.op_compose(ops[0], ops[1], args.number)
    elif args.action == "extend":
        result = core.arity_extend(ops[0], args.number)
    else:
        result = core.arity_reduce(ops[0], args.number, args.asserted)
    _emit(formats.serialize(formats.Document("operator", args.name, result)), args.output)
    return EXIT_OK


def cmd_axioms(args):
    functor = None
    if args.kind == "coalgebra":
        functor = formats.parse(f"functor F = {args.functor}").body
    reports = axioms.run_suite(args.kind, seed=args.seed, samples=args.samples, functor=functor)
    for rep in reports:
        print(rep.line())
        for v in rep.violations:
            print(f"  {v.clause}", file=sys.stderr)
    if args.violations:
        os.makedirs(args.violations, exist_ok=True)
        for rep in reports:
            for k, v in enumerate(rep.violations):
                stem = rep.law_id.replace("/", "_").replace(" ", "_")
                path = os.path.join(args.violations, f"{stem}.{k}.bt")
                with open(path, "w", encoding="utf-8") as fh:
                    fh.write(f"# {v.clause}\n" + "".join(v.inputs))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FALSE


def cmd_demo(args):
    fx = lt.negative_premise_counterexample()
    docs = [
        formats.Document("lts", "B1", fx.b1),
        formats.Document("lts", "B1prime", fx.b1prime),
        formats.Document("rules", "R", fx.rules),
        formats.Document("lts", "fB1", fx.apply(fx.b1)),
        formats.Document("lts", "fB1prime", fx.apply(fx.b1prime)),
    ]
    sys.stdout.write(formats.serialize_all(docs))
    print(f"B1 <= B1prime: {'true' if fx.args_leq else 'false'}")
    print(f"f(B1) <= f(B1prime): {'true' if fx.images_leq else 'false'}")
    if args.directory:
        os.makedirs(args.directory, exist_ok=True)
        for doc, fname in ((docs[0], "B1.lts.bt"), (docs[1], "B1prime.lts.bt"),
                           (docs[2], "negative.rules.bt")):
            with open(os.path.join(args.directory, fname), "w", encoding="utf-8") as fh:
                fh.write(formats.serialize(doc))
    return EXIT_OK


def cmd_fmt(args):
    docs = formats.parse_all(_read(args.file))
    for doc in docs:
        _report_warnings(doc, args.file)
    _emit(formats.serialize_all(docs), args.output)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="bt", description="Behaviour-type algebra toolkit.")
    sub = p.add_subparsers(dest="verb", required=True)

    def output(q):
        q.add_argument("-o", "--output", help="write the result here instead of stdout")
        q.add_argument("--name", default="out", help="name of the emitted document")

    q = sub.add_parser("compose", help="apply an operator to behaviours")
    q.add_argument("--op", required=True, help="operator file, @file, or inline expression")
    q.add_argument("behaviours", nargs="+")
    output(q)
    q.set_defaults(run=cmd_compose)

    q = sub.add_parser("check", help="decide a preorder or equivalence")
    q.add_argument("relation", choices=("sim", "sem", "equiv"))
    q.add_argument("left")
    q.add_argument("right")
    q.set_defaults(run=cmd_check)

    q = sub.add_parser("meet", help="meet of two behaviours")
    q.add_argument("left")
    q.add_argument("right")
    output(q)
    q.set_defaults(run=cmd_meet)

    q = sub.add_parser("op", help="combine operator descriptors")
    q.add_argument("action", choices=("meet", "compose", "extend", "reduce"))
    q.add_argument("operands", nargs="+", help="operator files, @files or inline expressions")
    q.add_argument("-n", "--number", type=int,
                   help="position for compose, target arity for extend and reduce")
    q.add_argument("--asserted", action="store_true",
                   help="vouch that the operator reduced is symmetric")
    output(q)
    q.set_defaults(run=cmd_op, name="f")

    q = sub.add_parser("axioms", help="run the law suites")
    q.add_argument("--kind", required=True, choices=BEHAVIOUR_KINDS)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--samples", type=int, default=200)
    q.add_argument("--functor", default="Pw(Id)", help="functor for --kind coalgebra")
    q.add_argument("--violations", metavar="DIR", help="write failing inputs to DIR")
    q.set_defaults(run=cmd_axioms)

    q = sub.add_parser("demo", help="built-in demonstrations")
    q.add_argument("which", choices=("negative-premises",))
    q.add_argument("-d", "--directory", help="also write the fixture files to this directory")
    q.set_defaults(run=cmd_demo)

    q = sub.add_parser("fmt", help="print the canonical form of a file")
    q.add_argument("file")
    output(q)
    q.set_defaults(run=cmd_fmt)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        return args.run(args)
    except ResourceLimitError as exc:
        print(f"bt: resource limit: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (UsageError, FormatError) as exc:
        print(f"bt: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BehaviourTypeError as exc:
        print(f"bt: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
