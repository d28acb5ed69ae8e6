"""``ccs`` command-line front end.

Exit codes: 0 equivalent/success, 1 distinguished or property failure,
2 usage/parse/structural error, 3 state cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from .ccs_dialgebra import async_bisim_dialgebraic, build_ccs_dialgebra, experiment_channels
from .dialgebra import bff_bisim_pr, quotient
from .errors import StateCapExceeded, default_cap
from .gen import random_pair, random_term, related_term, shrink_pair, shrink_term
from .lts import quotient_lts, reachable, strong_bisim
from .mealy import MealyFormatError, MealyMachine, mealy_bisim
from .oracle import FORMS, async_check_pair_trace
from .partition import kanellakis_smolka
from .syntax import CcsSyntaxError, parse, render

DEFAULT_SEED = 2011
MAX_RANDOM_SIZE = 16

EXIT_OK, EXIT_DISTINGUISHED, EXIT_ERROR, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _term(arg):
    if arg.startswith("@"):
        with open(arg[1:], encoding="utf-8") as fh:
            arg = fh.read()
    return parse(arg)


def _emit(out, text):
    out.write(text)
    if not text.endswith("\n"):
        out.write("\n")


def _verdict(out, same):
    _emit(out, "equivalent" if same else "distinguished")
    return EXIT_OK if same else EXIT_DISTINGUISHED


def cmd_parse(args, out):
    if (args.term is None) == (args.file is None):
        raise UsageError("give exactly one of TERM or --file")
    text = args.term
    if args.file is not None:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    _emit(out, repr(parse(text)))
    return EXIT_OK


def cmd_lts(args, out):
    graph = reachable(_term(args.term), cap=args.cap)
    _emit(out, graph.dumps(args.format))
    return EXIT_OK


def cmd_dialgebra(args, out):
    p = _term(args.term)
    d = build_ccs_dialgebra([p], experiment_channels(p, p, args.fresh), args.cap)
    _emit(out, d.dumps(args.format))
    return EXIT_OK


def cmd_check(args, out):
    p, q = _term(args.term1), _term(args.term2)
    if args.semantics == "sync":
        result = strong_bisim(p, q, cap=args.cap)
        code = _verdict(out, result.equivalent)
        if args.certificate:
            _emit(out, json.dumps({"states": [render(s) for s in result.graph.states],
                                   "partition": result.partition.to_json()}, indent=2))
        return code
    if args.semantics == "async":
        if not args.certificate:
            return _verdict(out, async_bisim_dialgebraic(p, q, args.fresh, args.cap))
        d = build_ccs_dialgebra([p, q], experiment_channels(p, q, args.fresh), args.cap)
        part = bff_bisim_pr(d)
        code = _verdict(out, part.same(d.index_of(p), d.index_of(q)))
        _emit(out, json.dumps({"states": [render(s) for s in d.states],
                               "partition": part.to_json()}, indent=2))
        return code
    result = async_check_pair_trace(p, q, args.form, args.cap)
    code = _verdict(out, result.equivalent)
    if args.certificate:
        _emit(out, json.dumps(result.to_json(), indent=2))
    return code


def cmd_minimize(args, out):
    p = _term(args.term)
    if args.semantics == "sync":
        graph = reachable(p, cap=args.cap)
        small = quotient_lts(graph, kanellakis_smolka(len(graph), graph.transitions))
        before, after, text = len(graph), len(small), small.dumps(args.format)
    else:
        d = build_ccs_dialgebra([p], experiment_channels(p, p, args.fresh), args.cap)
        q, _ = quotient(d, bff_bisim_pr(d))
        before, after, text = d.n_states, q.n_states, q.dumps(args.format)
    _emit(out, text)
    print(f"states: {before} -> {after}", file=args.err)
    return EXIT_OK


def _run_agreement(rng, args, out):
    def fails(p, q):
        return (async_bisim_dialgebraic(p, q, args.fresh, args.cap)
                != async_check_pair_trace(p, q, args.form, args.cap).equivalent)

    equivalent = 0
    for i in range(args.count):
        p, q = random_pair(rng, args.size)
        dial = async_bisim_dialgebraic(p, q, args.fresh, args.cap)
        orac = async_check_pair_trace(p, q, args.form, args.cap).equivalent
        if dial != orac:
            p2, q2 = shrink_pair(p, q, fails)
            _emit(out, f"pair {i}: dialgebraic={dial} oracle={orac}")
            _emit(out, f"counterexample: {render(p2)}  vs  {render(q2)}")
            return EXIT_DISTINGUISHED
        equivalent += dial
    _emit(out, f"agreement: {args.count}/{args.count} pairs agree "
               f"({equivalent} equivalent, {args.count - equivalent} distinguished)")
    return EXIT_OK


def _run_inclusion(rng, args, out):
    def fails(p, q):
        return (strong_bisim(p, q, cap=args.cap).equivalent
                and not async_bisim_dialgebraic(p, q, args.fresh, args.cap))

    sync_eq = strict = 0
    for i in range(args.count):
        p, q = random_pair(rng, args.size)
        s = strong_bisim(p, q, cap=args.cap).equivalent
        a = async_bisim_dialgebraic(p, q, args.fresh, args.cap)
        if s and not a:
            p2, q2 = shrink_pair(p, q, fails)
            _emit(out, f"pair {i}: sync-equivalent but async-distinguished")
            _emit(out, f"counterexample: {render(p2)}  vs  {render(q2)}")
            return EXIT_DISTINGUISHED
        sync_eq += s
        strict += a and not s
    _emit(out, f"inclusion: {sync_eq}/{args.count} sync-equivalent pairs, all async-equivalent; "
               f"{strict} pairs async-only")
    return EXIT_OK


def _run_laws(rng, args, out):
    def eq(p, q):
        return async_bisim_dialgebraic(p, q, args.fresh, args.cap)

    chains = 0
    for i in range(args.count):
        p = random_term(rng, args.size)
        q = related_term(rng, p, args.size)
        r = related_term(rng, q, args.size)
        if not eq(p, p):
            _emit(out, f"triple {i}: reflexivity fails")
            _emit(out, f"counterexample: {render(shrink_term(p, lambda t: not eq(t, t)))}")
            return EXIT_DISTINGUISHED
        if eq(p, q) != eq(q, p):
            p2, q2 = shrink_pair(p, q, lambda a, b: eq(a, b) != eq(b, a))
            _emit(out, f"triple {i}: symmetry fails")
            _emit(out, f"counterexample: {render(p2)}  vs  {render(q2)}")
            return EXIT_DISTINGUISHED
        # chain through q so that transitivity is exercised non-vacuously
        for a, b, c in ((p, q, r), (q, p, r), (p, r, q)):
            if eq(a, b) and eq(b, c):
                chains += 1
                if not eq(a, c):
                    _emit(out, f"triple {i}: transitivity fails")
                    _emit(out, f"counterexample: {render(a)} ; {render(b)} ; {render(c)}")
                    return EXIT_DISTINGUISHED
    _emit(out, f"equivalence-laws: {args.count} triples pass "
               f"({chains} non-vacuous transitivity chains)")
    return EXIT_OK


def cmd_random(args, out):
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    if not 1 <= args.size <= MAX_RANDOM_SIZE:
        raise UsageError(f"--size must be between 1 and {MAX_RANDOM_SIZE}")
    rng = random.Random(args.seed)
    runner = {"agreement": _run_agreement, "inclusion": _run_inclusion,
              "equivalence-laws": _run_laws}[args.mode]
    return runner(rng, args, out)


def cmd_mealy(args, out):
    m = MealyMachine.load(args.file)
    for s in (args.s1, args.s2):
        if s not in m.states:
            raise UsageError(f"unknown state {s!r}; machine has {list(m.states)}")
    return _verdict(out, mealy_bisim(m, args.s1, args.s2))


def _nonneg(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="ccs", description="Asynchronous CCS semantics via dialgebras.")
    parser.add_argument("--cap", type=int, default=None,
                        help="state cap (default: $CCS_STATE_CAP or 1000000)")
    sub = parser.add_subparsers(dest="command", required=True)

    fmt = dict(choices=("text", "json", "dot"), default="text")

    sp = sub.add_parser("parse", help="parse a term and print its AST")
    sp.add_argument("term", nargs="?")
    sp.add_argument("-f", "--file")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("lts", help="export the reachable LTS of a term")
    sp.add_argument("term")
    sp.add_argument("--format", **fmt)
    sp.set_defaults(func=cmd_lts)

    sp = sub.add_parser("dialgebra", help="export the CCS dialgebra closure of a term")
    sp.add_argument("term")
    sp.add_argument("--fresh", type=_nonneg, default=0)
    sp.add_argument("--format", **fmt)
    sp.set_defaults(func=cmd_dialgebra)

    sp = sub.add_parser("check", help="compare two terms")
    sp.add_argument("term1")
    sp.add_argument("term2")
    sp.add_argument("--semantics", choices=("sync", "async", "async-oracle"), default="async")
    sp.add_argument("--fresh", type=_nonneg, default=0)
    sp.add_argument("--form", choices=FORMS, default="composed",
                    help="input-clause form used by async-oracle")
    sp.add_argument("--certificate", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("minimize", help="quotient by bisimilarity")
    sp.add_argument("term")
    sp.add_argument("--semantics", choices=("async", "sync"), default="async")
    sp.add_argument("--fresh", type=_nonneg, default=0)
    sp.add_argument("--format", **fmt)
    sp.set_defaults(func=cmd_minimize)

    sp = sub.add_parser("random", help="seeded randomized property run")
    sp.add_argument("--seed", type=_nonneg, default=DEFAULT_SEED)
    sp.add_argument("--size", type=int, default=8)
    sp.add_argument("--count", type=int, default=100)
    sp.add_argument("--mode", choices=("agreement", "inclusion", "equivalence-laws"),
                    default="agreement")
    sp.add_argument("--fresh", type=_nonneg, default=0)
    sp.add_argument("--form", choices=FORMS, default="composed")
    sp.set_defaults(func=cmd_random)

    sp = sub.add_parser("mealy", help="compare two states of a Mealy machine file")
    sp.add_argument("file")
    sp.add_argument("s1")
    sp.add_argument("s2")
    sp.set_defaults(func=cmd_mealy)
    return parser


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    args = parser.parse_args(argv)
    args.err = err
    try:
        if args.cap is None:
            args.cap = default_cap()
        return args.func(args, out)
    except CcsSyntaxError as exc:
        print(f"ccs: syntax error: {exc}", file=err)
        return EXIT_ERROR
    except MealyFormatError as exc:
        print(f"ccs: malformed machine: {exc}", file=err)
        return EXIT_ERROR
    except StateCapExceeded as exc:
        print(f"ccs: {exc}", file=err)
        return EXIT_CAP
    except (UsageError, ValueError, OSError) as exc:
        print(f"ccs: error: {exc}", file=err)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
