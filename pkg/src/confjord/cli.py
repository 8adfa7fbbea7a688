"""
Command-line driver.  Every subcommand produces a VerificationReport and
exits 0 on pass, 1 on a verification failure and 2 on a usage error.
"""

import argparse
import json
import os
import random
import re
import sys
from itertools import product as cartesian

from .conformal_kernel.affine import (AffineSl, Virasoro, check_delta_identity, check_loop_recovery,
                                      loop_reference, witt_reference)
from .conformal_kernel.algebra import (ConformalElement, builtin_mutants, components, load_algebra,
                                       make_sl2_current, make_witt, sl2_structure_constants)
from .conformal_kernel.axioms import check_on_generators, check_weight_grading, run_axiom_suite
from .fermionic_fock import (FockConformalAlgebra, check_action_identities, check_component_paths,
                             check_unit_ideal, oracle_compare, oracle_suite)
from .foundation import MalformedInput, rational
from .matrix_family.elements import MatrixConformalAlgebra, parse_element, yplus_matrix
from .matrix_family.families import (FamilyKind, closure_check, generation_check, ideal_probe, membership,
                                     random_family_element)
from .matrix_family.jordan import check_jordan, check_lie, circle_product, identify_report
from .parallel import pmap
from .report import VerificationReport

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

ELEMENT_HELP = """\
element literals:
  matrix families: [c*]NAME:m1,m2 joined by '+', NAME one of
    Eij        matrix unit (Ei_j when an index exceeds 9)
    sym-Eij    E_ij + E_ji           skew-Eij  E_ij - E_ji
    dag-Eij    E_ij + E_ij^dagger    adag-Eij  E_ij - E_ij^dagger
    e.g. --a E11:0,1   --a "sym-E12:0,1 + 1/2*E21:0,1"
  named algebras: [c*]NAME[@i] joined by '+', with @i for d^i
    e.g. --a e@1   --a "2*h + f@2"
"""


class UsageError(MalformedInput):
    pass


# --------------------------------------------------------------------------
# argument helpers

def _algebra(name, args):
    if name == "witt":
        return make_witt()
    if name == "sl2":
        return make_sl2_current()
    mutants = builtin_mutants()
    if name in mutants:
        return mutants[name]
    if name == "matrix":
        return MatrixConformalAlgebra(args.k, args.max_degree)
    if name == "fock":
        return FockConformalAlgebra(args.rank, args.max_mode)
    if os.path.exists(name):
        with open(name, encoding="utf-8") as fh:
            return load_algebra(fh.read())
    raise UsageError(f"unknown algebra {name!r}; use witt, sl2, {', '.join(mutants)}, matrix, fock or a JSON path")


def _family(args) -> FamilyKind:
    if not args.family:
        raise UsageError("this command needs --family full|star|dagger")
    f = FamilyKind(args.family, args.L, args.k)
    for spec in args.drop or ():
        try:
            w, idx = (int(x) for x in spec.split(":"))
        except ValueError:
            raise UsageError(f"--drop expects W:I, got {spec!r}") from None
        f = f.without(w, idx)
    return f


_NAMED = re.compile(r"^\s*(?:(?P<coef>[-+]?\d+(?:/\d+)?)\s*\*\s*)?(?P<name>[A-Za-z_][\w]*)(?:@(?P<p>\d+))?\s*$")


def parse_named(text, alg) -> ConformalElement:
    total = ConformalElement()
    for chunk in re.split(r"\s*\+\s*", text.strip()):
        m = _NAMED.match(chunk)
        if not m or m.group("name") not in alg.basis:
            raise UsageError(f"cannot parse element {chunk!r} for {alg.label}")
        total = total + ConformalElement.gen(m.group("name"), int(m.group("p") or 0), rational(m.group("coef") or 1))
    return total


def _need(value, flag):
    if value is None:
        raise UsageError(f"missing {flag}")
    return value


# --------------------------------------------------------------------------
# commands

def cmd_axioms(args):
    alg = _algebra(args.algebra, args)
    rep = VerificationReport("axioms", {"algebra": alg.label, "depth": args.depth})
    triples = None
    if args.max_triples is not None:
        gens = alg.generators()
        triples = list(cartesian(gens, repeat=3))
        if len(triples) > args.max_triples:
            triples = random.Random(args.seed).sample(triples, args.max_triples)
    rep.absorb(run_axiom_suite(alg, args.depth, triples), "suite")
    gen = check_on_generators(alg, depth=args.depth, seed=args.seed, max_triples=args.max_triples)
    rep.absorb(gen, "on_generators")
    rep.details.update({k: gen.details[k] for k in ("generator_verdict", "extended_verdict", "verdicts_agree")})
    return rep


def cmd_product(args):
    if args.family or args.k_given:
        if args.family:
            f = _family(args)
            k = f.k
        else:
            f, k = None, args.k
        a = parse_element(_need(args.a, "--a"), k)
        b = parse_element(_need(args.b, "--b"), k)
        rep = VerificationReport("product", {"a": a, "b": b, "k": k, "family": f})
        series = yplus_matrix(a, b)
        rep.details["components"] = [{"power": e, "value": x} for e, x in series.items()]
        if f is not None:
            for name, x in (("a", a), ("b", b)):
                rep.check(("member", name), membership(x, f), {name: x}, "member of family", x)
            rep.check("product.closure", all(membership(x, f) for _, x in series.items()), {}, "member", series)
            if a.weight() == f.L and b.weight() == f.L:
                rep.details["circle"] = circle_product(a, b, f)
        return rep
    alg = _algebra(args.algebra, args)
    a = parse_named(_need(args.a, "--a"), alg)
    b = parse_named(_need(args.b, "--b"), alg)
    rep = VerificationReport("product", {"algebra": alg.label, "a": a, "b": b})
    rep.details["components"] = [{"n": n, "value": x} for n, x in sorted(components(alg.product(a, b)).items())]
    return rep


def cmd_closure(args):
    return closure_check(_family(args), args.w_max if args.w_max is not None else 6)


def _probe_task(task):
    kind, L, k, dropped, seed_index, seed, w_max = task
    f = FamilyKind(kind, L, k, dropped)
    rng = random.Random(seed * 7919 + seed_index)
    el = random_family_element(f, rng, f.L, w_max)
    return ideal_probe(f, el, w_max)


def cmd_ideal_probe(args):
    f = _family(args)
    w_max = args.w_max if args.w_max is not None else 5
    rep = VerificationReport("ideal-probe", {"family": f, "w_max": w_max, "seeds": args.seeds, "seed": args.seed})
    if args.a:
        rep.absorb(ideal_probe(f, parse_element(args.a, f.k), w_max), "given")
        return rep
    tasks = [(f.kind, f.L, f.k, f.dropped, i, args.seed, w_max) for i in range(args.seeds)]
    for i, sub in enumerate(pmap(_probe_task, tasks)):
        rep.absorb(sub, f"seed{i:02d}")
        rep.details.setdefault("seeds_passed", 0)
        rep.details["seeds_passed"] += sub.passed
    return rep


def cmd_jordan(args):
    return check_jordan(_family(args), args.samples, args.seed)


def cmd_lie(args):
    return check_lie(_family(args), args.samples, args.seed)


def cmd_identify(args):
    return identify_report(_family(args))


def cmd_generate(args):
    f = _family(args)
    return generation_check(f, args.w_max if args.w_max is not None else f.L + 3)


def cmd_oracle(args):
    if args.j:
        try:
            j = [int(x) for x in args.j.split(",")]
            m = [int(x) for x in _need(args.m, "--m").split(",")]
            n = [int(x) for x in _need(args.n, "--n").split(",")]
        except ValueError:
            raise UsageError("--j, --m, --n take comma-separated integers") from None
        if len(j) != 4 or len(m) != 2 or len(n) != 2:
            raise UsageError("--j needs 4 indices, --m and --n need 2 each")
        return oracle_compare(*j, *m, *n, r=args.rank)
    rep = VerificationReport("oracle", {"rank": args.rank, "max_mode": args.max_mode})
    rep.absorb(check_action_identities(args.rank, args.max_mode), "identities")
    rep.absorb(check_component_paths(args.rank, args.max_mode, 4), "components")
    rep.absorb(check_unit_ideal(args.rank, args.max_mode), "unit")
    cmp = oracle_suite(args.rank, args.max_mode)
    rep.absorb(cmp, "compare")
    rep.details["distinct_scalars"] = cmp.details["distinct_scalars"]
    rep.details["bidegrees_compared"] = cmp.details["bidegrees_compared"]
    return rep


def cmd_delta(args):
    if args.case == "virasoro":
        case = Virasoro()
    else:
        m = re.fullmatch(r"sl(\d+)", args.case)
        if not m:
            raise UsageError(f"unknown delta case {args.case!r}; use sl<n> or virasoro")
        case = AffineSl(int(m.group(1)))
    return check_delta_identity(case, args.window if args.window is not None else 4)


def cmd_grading(args):
    if args.algebra == "matrix":
        alg = MatrixConformalAlgebra(args.k, args.max_weight - 1)
    else:
        alg = _algebra(args.algebra, args)
    rep = check_weight_grading(alg, args.max_weight)
    if args.algebra == "matrix":
        bound = args.k ** 2
        rep.check("growth.bound", rep.details["N0"] <= bound, {"k": args.k}, bound, rep.details["N0"])
    return rep


def cmd_affinize(args):
    alg = _algebra(args.algebra, args)
    window = args.window if args.window is not None else 6
    if args.algebra == "witt":
        return check_loop_recovery(alg, window, witt_reference)
    if args.algebra == "sl2":
        return check_loop_recovery(alg, window, loop_reference(sl2_structure_constants()[1]))
    from .conformal_kernel.affine import affinize
    table = affinize(alg, window)
    rep = table.verify(min(window, 3))
    rep.details["brackets"] = table.to_json()
    return rep


COMMANDS = {
    "axioms": cmd_axioms, "product": cmd_product, "closure": cmd_closure, "ideal-probe": cmd_ideal_probe,
    "jordan": cmd_jordan, "lie": cmd_lie, "identify": cmd_identify, "generate": cmd_generate,
    "oracle": cmd_oracle, "delta": cmd_delta, "grading": cmd_grading, "affinize": cmd_affinize,
}


# --------------------------------------------------------------------------
# parser

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--algebra", default="witt",
                        help="witt, sl2, witt-e1, sl2-skew, sl2-jacobi, matrix, fock or a JSON file")
    common.add_argument("--depth", type=int, default=2, help="d-power sampling depth")
    common.add_argument("--max-triples", type=int, help="sample at most this many Jacobi triples")
    common.add_argument("--family", choices=("full", "star", "dagger"))
    common.add_argument("--k", type=int, default=None)
    common.add_argument("--L", type=int, default=2)
    common.add_argument("--max-degree", type=int, default=1, help="generators E_ij(0,n), n <= this (matrix)")
    common.add_argument("--rank", type=int, default=2)
    common.add_argument("--max-mode", type=int, default=2)
    common.add_argument("--a")
    common.add_argument("--b")
    common.add_argument("--w-max", type=int)
    common.add_argument("--window", type=int)
    common.add_argument("--max-weight", type=int, default=8)
    common.add_argument("--samples", type=int, default=50)
    common.add_argument("--seeds", type=int, default=20)
    common.add_argument("--case", default="sl2", help="delta case: sl<n> or virasoro")
    common.add_argument("--j", help="oracle indices j1,j2,j3,j4")
    common.add_argument("--m", help="oracle modes m1,m2")
    common.add_argument("--n", help="oracle modes n1,n2")
    common.add_argument("--drop", action="append", metavar="W:I",
                        help="fault injection: drop basis vector I at weight W of the family")

    parser = argparse.ArgumentParser(prog="confjord", description="Exact verification of conformal algebras.",
                                     epilog=ELEMENT_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--replay", metavar="REPORT", help="re-run the invocation recorded in a JSON report")
    sub = parser.add_subparsers(dest="command")
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], epilog=ELEMENT_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def _replay_argv(argv):
    """The invocation minus output-only flags, recorded for --replay."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("--output", "--format"):
            skip = True
            continue
        if tok.startswith(("--output=", "--format=")):
            continue
        out.append(tok)
    return out


def render(rep: VerificationReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(rep.to_dict(), sort_keys=True, indent=2, ensure_ascii=False)
    lines = [rep.summary()]
    d = rep.to_dict()
    for key, value in sorted(d["details"].items()):
        if key == "argv":
            continue
        lines.append(f"  {key}: {json.dumps(value, sort_keys=True, ensure_ascii=False)}")
    for f in d["failures"][:10]:
        lines.append(f"  FAIL {f['check']}: expected {f['expected']} got {f['actual']} inputs {f['inputs']}")
    if rep.failure_count > 10:
        lines.append(f"  ... {rep.failure_count - 10} more failures")
    return "\n".join(lines)


def run(argv):
    """Returns (exit status, report or None)."""
    argv = list(argv)
    if "--replay" in argv:
        i = argv.index("--replay")
        if i + 1 >= len(argv):
            print("error: --replay needs a report path", file=sys.stderr)
            return EXIT_USAGE, None
        path = argv[i + 1]
        try:
            with open(path, encoding="utf-8") as fh:
                recorded = json.load(fh)["parameters"]["argv"]
        except (OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
            print(f"error: cannot replay {path}: {exc}", file=sys.stderr)
            return EXIT_USAGE, None
        # extra flags (e.g. --format json) apply to the replayed run
        return run(list(recorded) + argv[:i] + argv[i + 2:])
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_PASS), None
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE, None
    args.k_given = args.k is not None
    if args.k is None:
        args.k = 2
    try:
        rep = COMMANDS[args.command](args)
    except MalformedInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    rep.parameters = dict(rep.parameters, argv=_replay_argv(argv))
    rep.finish()
    text = render(rep, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return (EXIT_PASS if rep.passed else EXIT_FAIL), rep


def main(argv=None):
    status, _ = run(sys.argv[1:] if argv is None else argv)
    return status


if __name__ == "__main__":
    sys.exit(main())
