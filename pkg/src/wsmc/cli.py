"""Command-line frontend.

Exit codes are uniform across subcommands: 0 success/yes, 1 no or
validation violation, 2 any error (parse, typing, guardedness, or a
refused non-effective goal).  Output is deterministic: regions print in
normalized form and timing never reaches stdout.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import compilers, engine, oracle, terms
from .compilers import CompileError, NonEffectiveGoalError
from .engine import EvaluationError, IterationCapError, Limits, UnguardedTermError
from .model import ModelError, load_model, parse_config, parse_region_text, region_to_text
from .regexes import RegexError
from .terms import TermError


class CliError(Exception):
    pass


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="wsmc",
        description="Symbolic verification of lossy channel systems via "
                    "guarded fixpoint evaluation over regular regions.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_validate = sub.add_parser("validate", help="check model assumptions")
    p_validate.add_argument("model")

    p_eval = sub.add_parser("eval", help="evaluate a fixpoint formula")
    p_eval.add_argument("model")
    group = p_eval.add_mutually_exclusive_group(required=True)
    group.add_argument("-f", "--formula", help="formula text")
    group.add_argument("-F", "--formula-file", help="file containing the formula")
    p_eval.add_argument("--max-iter", type=int, default=None,
                        help="allow unguarded terms up to this many iterations "
                             "per binder")
    p_eval.add_argument("--stats", action="store_true")
    p_eval.add_argument("--out", help="also write the region text to a file")
    p_eval.add_argument("--json", action="store_true")

    p_check = sub.add_parser("check", help="check a named property")
    p_check.add_argument("model")
    p_check.add_argument("property", choices=sorted(PROPERTIES))
    p_check.add_argument("--target", help="region expression")
    p_check.add_argument("--cond", help="second region expression where needed")
    p_check.add_argument("--player", choices=["A", "B"], default="A")
    p_check.add_argument("--formula", help="CTL formula (ctl property)")
    p_check.add_argument("--member", help='configuration "loc : w1, w2, ..."')
    p_check.add_argument("--max-iter", type=int, default=None)
    p_check.add_argument("--json", action="store_true")

    p_oracle = sub.add_parser("oracle", help="brute-force debug oracles")
    oracle_sub = p_oracle.add_subparsers(dest="oracle_command", required=True)
    p_reach = oracle_sub.add_parser("reach", help="bounded explicit reachability")
    p_reach.add_argument("model")
    p_reach.add_argument("--from", dest="start", required=True)
    p_reach.add_argument("--target", required=True)
    p_reach.add_argument("--depth", type=int, default=6)
    p_game = oracle_sub.add_parser("game", help="bounded explicit game search")
    p_game.add_argument("model")
    p_game.add_argument("--from", dest="start", required=True)
    p_game.add_argument("--target", required=True)
    p_game.add_argument("--player", choices=["A", "B"], default="A")
    p_game.add_argument("--depth", type=int, default=8)
    return parser


def _require(value, what):
    if value is None:
        raise CliError("property needs %s" % what)
    return value


def _region_arg(text, model):
    return parse_region_text(_require(text, "--target/--cond"), model)


PROPERTIES = {
    "prestar": lambda m, a: compilers.compile_pre_star(
        m, _region_arg(a.target, m)),
    "release": lambda m, a: compilers.compile_forall_release(
        m, _region_arg(a.target, m), _region_arg(a.cond, m)),
    "game-reach": lambda m, a: compilers.compile_game(
        "reach", m, a.player, _region_arg(a.target, m)),
    "game-inv": lambda m, a: compilers.compile_game(
        "invariant", m, a.player, _region_arg(a.target, m)),
    "game-buchi": lambda m, a: compilers.compile_game(
        "buchi", m, a.player, _region_arg(a.target, m)),
    "game-persist": lambda m, a: compilers.compile_game(
        "persistence", m, a.player, _region_arg(a.target, m)),
    "asym-reach-B": lambda m, a: compilers.compile_asym_game(
        "reach", m, "B", _region_arg(a.target, m)),
    "asym-inv-A": lambda m, a: compilers.compile_asym_game(
        "invariant", m, "A", _region_arg(a.target, m)),
    "asym-reach-A": lambda m, a: compilers.refuse_noneffective("asym-reach-A"),
    "forall-eventually": lambda m, a: compilers.refuse_noneffective(
        "forall-eventually"),
    "exists-recurrent": lambda m, a: compilers.refuse_noneffective(
        "exists-recurrent"),
    "prob-reach-1": lambda m, a: compilers.compile_prob_game(
        "reach_eq1", m, a.player, _region_arg(a.target, m)),
    "prob-inv-1": lambda m, a: compilers.compile_prob_game(
        "invariant_eq1", m, a.player, _region_arg(a.target, m)),
    "prob-reach-pos": lambda m, a: compilers.compile_prob_game(
        "reach_pos", m, a.player, _region_arg(a.target, m)),
    "prob-inv-pos": lambda m, a: compilers.compile_prob_game(
        "invariant_pos", m, a.player, _region_arg(a.target, m)),
    "ctl": None,  # handled separately: evaluates a plan, not one term
}


def _region_sizes(region, model):
    parts = []
    for p in region.summands:
        sizes = ",".join(str(lang.n_states) for lang in p.channel_langs)
        parts.append("%s=%s" % (p.location, sizes or "-"))
    return " ".join(parts) if parts else "-"


def _stats_dict(stats):
    return {"iterations": stats.iterations,
            "max_value_size": stats.max_value_size}


def _emit_region(region, model, args, stats=None):
    text = region_to_text(region, model)
    if getattr(args, "json", False):
        payload = {"verdict": None, "region": text}
        if stats is not None and getattr(args, "stats", False):
            payload["stats"] = _stats_dict(stats)
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)
        print("sizes: %s" % _region_sizes(model.space.normalize(region), model))
        if stats is not None and getattr(args, "stats", False):
            for binder in sorted(stats.iterations):
                counts = ",".join(str(c) for c in stats.iterations[binder])
                print("iterations %s: %s" % (binder, counts))
            print("max value size: %d" % stats.max_value_size)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")


def _emit_verdict(answer: bool, args):
    if getattr(args, "json", False):
        print(json.dumps({"verdict": "yes" if answer else "no", "region": None}))
    else:
        print("yes" if answer else "no")
    return 0 if answer else 1


def _cmd_validate(args):
    model = load_model(args.model)
    report = model.validate()
    if not report:
        print("ok")
        return 0
    for line in report:
        print(line)
    return 1


def _cmd_eval(args):
    model = load_model(args.model)
    algebra = model.algebra()
    if args.formula is not None:
        text = args.formula
    else:
        with open(args.formula_file, "r", encoding="utf-8") as handle:
            text = handle.read()
    term = terms.parse_term(text, algebra)
    if terms.free_vars(term):
        raise CliError("formula is not closed: free %s"
                       % ", ".join(sorted(terms.free_vars(term))))
    limits = Limits(max_iter=args.max_iter)
    value, stats = engine.evaluate(term, {}, algebra, limits)
    print("evaluation took %.3fs" % stats.wall_time, file=sys.stderr)
    _emit_region(value, model, args, stats)
    return 0


def _cmd_check(args):
    model = load_model(args.model)
    limits = Limits(max_iter=args.max_iter)
    if args.property == "ctl":
        region = compilers.eval_ctl(model, _require(args.formula, "--formula"),
                                    limits)
        stats = None
    else:
        compiled = PROPERTIES[args.property](model, args)
        region, stats = compiled.run(limits)
    if args.member is not None:
        config = parse_config(args.member, model)
        return _emit_verdict(model.space.member(config, region), args)
    _emit_region(region, model, args, stats)
    return 0


def _cmd_oracle(args):
    model = load_model(args.model)
    start = parse_config(args.start, model)
    target = parse_region_text(args.target, model)
    if args.oracle_command == "reach":
        print(oracle.bounded_reach(model, start, target, args.depth))
        return 0
    if args.oracle_command == "game":
        print(oracle.bounded_game(model, start, target, args.player, args.depth))
        return 0
    raise CliError("unknown oracle subcommand")


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {"validate": _cmd_validate, "eval": _cmd_eval,
                "check": _cmd_check, "oracle": _cmd_oracle}
    try:
        return handlers[args.command](args)
    except (CliError, CompileError, NonEffectiveGoalError, ModelError,
            RegexError, TermError, EvaluationError, UnguardedTermError,
            IterationCapError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
