"""Command-line front end: ``pcspkit <subcommand> ...``.

Exit codes: 0 for a positive result, 1 for a negative one, 2 for bad input.
"""

import argparse
import json
import random
import sys

from . import acceptance, label_cover as lc, serialize as ser
from .blp import round_search
from .boolean_core import close_relation
from .conditions import ChoiceFunction, check_condition
from .errors import CapacityError, ConstructionError, PcspError, SchemaError
from .minions import (
    build_layered_refutation,
    build_multichoice_refutation,
    heavy_coordinate_bound,
    st_generator_choice_table,
    st_membership,
    symmetric_minor_search,
)
from .threshold import (
    LtfPresentation,
    as_rational,
    canonical_presentation,
    compute_preorder,
    find_fixing_pairs,
    truth_table,
)

# largest generator covered by a restricted choice table (arity 21)
RESTRICTED_TABLE_LARGEST = 10


def _emit(obj, out):
    text = ser.dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_function(args):
    if args.ltf:
        return ser.parse_artifact(args.ltf, "ltf")
    if args.function:
        return ser.parse_artifact(args.function, "function")
    raise SchemaError("", "give --ltf or --function")


def _load_choice(args):
    if getattr(args, "choice", None):
        return ser.parse_artifact(args.choice, "choice")
    if getattr(args, "top3n", None):
        return ChoiceFunction.top3n(args.top3n)
    return ChoiceFunction.dictator()


def _load_template(path):
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemaError("", f"{path} is not valid JSON: {exc.msg}") from None
    return (ser.structure_from_json(ser._field(obj, "source", ""), "source"),
            ser.structure_from_json(ser._field(obj, "target", ""), "target"))


# ------------------------------------------------------------------ subcommands


def cmd_st_member(args):
    f = _load_function(args)
    table = truth_table(f) if isinstance(f, LtfPresentation) else f
    witness = st_membership(table, args.method)
    _emit(ser.witness_to_json(witness), args.out)
    return 0 if witness is not None else 1


def cmd_wp_check(args):
    p = ser.parse_artifact(args.ltf, "ltf")
    found = symmetric_minor_search(p, args.arity)
    canonical = canonical_presentation(p)
    heavy = heavy_coordinate_bound(canonical, as_rational(args.bound))
    _emit({"symmetric_minor": None if found is None else ser.minor_map_to_json(found),
           "canonical": ser.ltf_to_json(canonical), "heavy": heavy}, args.out)
    return 0 if found is None and heavy else 1


def cmd_canonical(args):
    _emit(ser.ltf_to_json(canonical_presentation(ser.parse_artifact(args.ltf, "ltf"))), args.out)
    return 0


def cmd_preorder(args):
    order = compute_preorder(_load_function(args))
    n = order.arity
    _emit({"monotonicity": list(order.monotonicity),
           "classes": [sorted(c) for c in order.classes()],
           "leq": [[order.leq(i, j) for j in range(1, n + 1)] for i in range(1, n + 1)]}, args.out)
    return 0


def cmd_fixing_pairs(args):
    pairs = find_fixing_pairs(_load_function(args))
    _emit({"pairs": [list(p) for p in pairs]}, args.out)
    return 0 if pairs else 1


def cmd_refute_choice(args):
    if args.restrict:
        if not args.top3n:
            raise SchemaError("", "--restrict needs --top3n")
        choice = st_generator_choice_table(args.top3n, args.M, RESTRICTED_TABLE_LARGEST)
    else:
        choice = _load_choice(args)
    if args.kind == "multiple":
        f, pi, g = build_multichoice_refutation(choice, args.M)
        _emit({"f": ser.ltf_to_json(f), "map": ser.minor_map_to_json(pi),
               "g": ser.ltf_to_json(g)}, args.out)
    else:
        _emit(ser.chain_to_json(build_layered_refutation(choice, args.M)), args.out)
    return 0


def cmd_check_condition(args):
    with open(args.chains, encoding="utf-8") as fh:
        obj = json.load(fh)
    items = obj if isinstance(obj, list) else [obj]
    chains = [ser.chain_from_json(c, f"[{k}]") for k, c in enumerate(items)]
    verdicts = check_condition(chains, _load_choice(args), args.M, args.variant)
    _emit(verdicts, args.out)
    return 0 if all(v["satisfied"] for v in verdicts) else 1


def cmd_lc(args):
    if args.lc_command == "smooth":
        delta = lc.measure_smoothness(ser.parse_artifact(args.gamma, "bipartite"), args.max_set)
        _emit({"delta": ser.rational_to_json(delta)}, args.out)
    elif args.lc_command == "layerize":
        phi = lc.layerize(ser.parse_artifact(args.gamma, "bipartite"), args.L)
        _emit(ser.layered_to_json(phi), args.out)
    elif args.lc_command == "mc-gen":
        cond = lc.to_minor_condition(ser.parse_artifact(args.layered, "layered"))
        _emit(ser.condition_to_json(cond), args.out)
    elif args.lc_command == "mc-trivial":
        witness = lc.minor_condition_trivial(ser.parse_artifact(args.condition, "condition"))
        _emit({"trivial": witness is not None,
               "assignment": None if witness is None else ser.layered_assignment_to_json(witness)},
              args.out)
        return 0 if witness is not None else 1
    elif args.lc_command == "random":
        gamma, _ = lc.random_instance(random.Random(args.seed), satisfiable=not args.unplanted)
        _emit(ser.bipartite_to_json(gamma), args.out)
    return 0


def cmd_solve(args):
    source, target = _load_template(args.template)
    inst = ser.parse_artifact(args.instance, "instance")
    for template in (source, target):
        try:
            inst.check_against(template)
        except PcspError as exc:
            raise SchemaError("instance", str(exc)) from None
    h = round_search(inst, source, target)
    if h is None:
        return 1
    _emit(ser.assignment_to_json(h), args.out)
    return 0


def cmd_close_relation(args):
    rel = ser.parse_artifact(args.relation, "relation")
    if args.threshold_half:
        fns = acceptance.threshold_half_functions(args.threshold_half)
    else:
        with open(args.functions, encoding="utf-8") as fh:
            items = json.load(fh)
        fns = [ser.function_from_json(f, f"[{k}]") for k, f in enumerate(items)]
    _emit(ser.relation_to_json(close_relation(rel, fns)), args.out)
    return 0


def cmd_acceptance(args):
    only = {int(c) for c in args.only.split(",")} if args.only else None
    report = acceptance.run(args.seed, only)
    text = acceptance.report_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(c["passed"] for c in report["criteria"]) else 1


# ------------------------------------------------------------------ parser


def _function_inputs(p):
    p.add_argument("--ltf", help="presentation JSON")
    p.add_argument("--function", help="truth-table JSON")


def _choice_inputs(p):
    p.add_argument("--choice", help="choice-function JSON")
    p.add_argument("--top3n", type=int, metavar="N", help="top-3N choice")


def build_parser():
    parser = argparse.ArgumentParser(prog="pcspkit", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=acceptance.DEFAULT_SEED,
                        help="seed for randomized sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.set_defaults(handler=fn)
        return p

    p = add("st-member", cmd_st_member, "decide ST membership")
    _function_inputs(p)
    p.add_argument("--method", default="recursive", choices=("recursive", "template", "bruteforce"))

    p = add("wp-check", cmd_wp_check, "symmetric-minor search and heavy-coordinate bound")
    p.add_argument("--ltf", required=True)
    p.add_argument("--arity", type=int, default=5)
    p.add_argument("--bound", default="1/80")

    p = add("canonical", cmd_canonical, "canonical strict presentation")
    p.add_argument("--ltf", required=True)

    p = add("preorder", cmd_preorder, "coordinate preorder")
    _function_inputs(p)

    p = add("fixing-pairs", cmd_fixing_pairs, "all fixing pairs")
    _function_inputs(p)

    p = add("refute-choice", cmd_refute_choice, "build a refutation of a choice function")
    p.add_argument("--kind", choices=("multiple", "layered"), required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--restrict", action="store_true",
                   help="restrict top-3N to its first M coordinates (table choice)")
    _choice_inputs(p)

    p = add("check-condition", cmd_check_condition, "evaluate a choice condition on chains")
    p.add_argument("--chains", required=True, help="a chain or a list of chains")
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--variant", required=True,
                   choices=("single", "multiple", "layered", "injective_layered"))
    _choice_inputs(p)

    p = add("lc", cmd_lc, "label cover tools")
    lcs = p.add_subparsers(dest="lc_command", required=True)
    q = lcs.add_parser("smooth")
    q.add_argument("--gamma", required=True)
    q.add_argument("--max-set", type=int, default=3)
    q = lcs.add_parser("layerize")
    q.add_argument("--gamma", required=True)
    q.add_argument("--L", type=int, default=2)
    q = lcs.add_parser("mc-gen")
    q.add_argument("--layered", required=True)
    q = lcs.add_parser("mc-trivial")
    q.add_argument("--condition", required=True)
    q = lcs.add_parser("random")
    q.add_argument("--unplanted", action="store_true")

    p = add("solve", cmd_solve, "BLP round-search for a homomorphism")
    p.add_argument("--template", required=True, help='{"source": structure, "target": structure}')
    p.add_argument("--instance", required=True)

    p = add("close-relation", cmd_close_relation, "close a relation under functions")
    p.add_argument("--relation", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--functions", help="JSON list of truth-table functions")
    group.add_argument("--threshold-half", type=int, metavar="K",
                       help="use x -> [sum x > n/2] for odd n <= K")

    p = add("acceptance", cmd_acceptance, "run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion ids")
    return parser


def dispatch(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.handler(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConstructionError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (PcspError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
