"""Command line interface.

Verbs: prob, cond, indep, profile, check, sample, paper-examples, gen.
Output is JSON on stdout (compact by default, ``--pretty`` to indent).
Exit codes: 0 success / bounds hold; 1 conditioning on a zero-probability
sequence or a failed hypothesis; 2 parse, validation or internal errors.
"""

from __future__ import annotations

import argparse
import importlib
import json
import sys

from .errors import (
    ConditionOnZeroError,
    EnumerationCapError,
    ParseError,
    QlllError,
    ValidationError,
)
from .events import parse_event_seq, resolve_event_spec
from .independence import IndependenceQuery, compute_profile, is_independent, is_neg_independent
from .linalg import DEFAULT_TOL
from .lll import LLLInstance, check_general, check_symmetric
from .oracle import enumerate_probability, sample_trajectories
from .probability import pr_state, pr_state_cond, pr_test_cond, pr_test_marginal
from .serialize import dumps as dump_instance
from .serialize import load_path

# The package re-exports the generate() function under the submodule's
# name, so the module itself has to be fetched explicitly.
gen_mod = importlib.import_module(__package__ + ".generate")

EXIT_OK = 0
EXIT_HYPOTHESIS = 1
EXIT_ERROR = 2


def _emit(doc: dict, pretty: bool) -> None:
    if pretty:
        print(json.dumps(doc, indent=2))
    else:
        print(json.dumps(doc, separators=(",", ":")))


def _indices(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(int(piece) for piece in text.split(","))
    except ValueError:
        raise ParseError(f"expected comma-separated integers, got {text!r}")


def _load(args):
    return load_path(args.instance)


def _need_events(assignment, what: str):
    if assignment is None:
        raise ValidationError(f"{what} needs an 'events' array in the instance file")
    return assignment


def _state_events(test, text: str):
    return [resolve_event_spec(test.measurements, i, spec) for i, spec in parse_event_seq(text)]


def cmd_prob(args) -> int:
    test, assignment, _ = _load(args)
    if args.mode == "state":
        if args.seq is None:
            raise ValidationError("state mode needs --seq")
        seq = _state_events(test, args.seq)
        value = pr_state(test.rho, seq)
        query = {"seq": [{"measurement": e.measurement.name, "in": e.sorted_outcomes()} for e in seq]}
    else:
        if args.K is None:
            raise ValidationError("test mode needs --K")
        a = _need_events(assignment, "test mode")
        K = _indices(args.K)
        value = pr_test_marginal(a, K)
        query = {"K": list(K)}
    _emit({"command": "prob", "mode": args.mode, "query": query, "value": value}, args.pretty)
    return EXIT_OK


def cmd_cond(args) -> int:
    test, assignment, _ = _load(args)
    if args.K is None or args.L is None:
        raise ValidationError("cond needs --K (conditioning) and --L (target)")
    if args.mode == "state":
        given = _state_events(test, args.K) if args.K.strip() else []
        then = _state_events(test, args.L)
        value = pr_state_cond(test.rho, given, then)
        query = {
            "given": [{"measurement": e.measurement.name, "in": e.sorted_outcomes()} for e in given],
            "then": [{"measurement": e.measurement.name, "in": e.sorted_outcomes()} for e in then],
        }
    else:
        a = _need_events(assignment, "test mode")
        K, L = _indices(args.K), _indices(args.L)
        value = pr_test_cond(a, K, L)
        query = {"K": list(K), "L": list(L)}
    _emit({"command": "cond", "mode": args.mode, "query": query, "value": value}, args.pretty)
    return EXIT_OK


def cmd_indep(args) -> int:
    _, assignment, _ = _load(args)
    a = _need_events(assignment, "indep")
    K = _indices(args.K)
    if args.neg:
        lhs_a = a.with_complemented(K)
        lhs = pr_test_cond(lhs_a, K, (args.i,))
        rhs = pr_test_marginal(a, (args.i,))
        result = is_neg_independent(a, args.i, K)
        J = list(K)
    else:
        J_t = _indices(args.J) if args.J is not None else K
        query = IndependenceQuery(a, args.i, K, J_t)
        rest = tuple(j for j in K if j not in set(J_t))
        lhs = pr_test_cond(a, K, (args.i,))
        rhs = pr_test_cond(a, rest, (args.i,))
        result = is_independent(query)
        J = list(J_t)
    _emit(
        {
            "command": "indep",
            "query": {"i": args.i, "K": list(K), "J": J, "negated": bool(args.neg)},
            "independent": result,
            "difference": abs(lhs - rhs),
            "tolerance": DEFAULT_TOL.ind,
        },
        args.pretty,
    )
    return EXIT_OK


def cmd_profile(args) -> int:
    _, assignment, _ = _load(args)
    a = _need_events(assignment, "profile")
    profile = compute_profile(a)
    doc = {"command": "profile", **profile.to_json()}
    _emit(doc, args.pretty)
    entries = list(profile.table.values())
    if entries and all(v is None for v in entries):
        return EXIT_ERROR
    return EXIT_OK


def cmd_check(args) -> int:
    _, assignment, x_file = _load(args)
    a = _need_events(assignment, "check")
    if args.variant == "general":
        x = tuple(float(v) for v in args.x.split(",")) if args.x else x_file
        if x is None:
            raise ValidationError("general check needs weights: --x or an 'x' array in the file")
        report = check_general(LLLInstance(a, x))
        ok = all(report.assumption_ok) and report.bound_ok
        _emit(
            {"command": "check", "variant": "general", "report": report.to_json(), "ok": ok},
            args.pretty,
        )
        if not all(report.assumption_ok):
            return EXIT_HYPOTHESIS
        if not report.bound_ok:
            return EXIT_ERROR  # hypothesis held but a proven bound failed
        return EXIT_OK
    report = check_symmetric(a, args.p)
    ok = report.verdict == "pass"
    _emit(
        {"command": "check", "variant": "symmetric", "report": report.to_json(), "ok": ok},
        args.pretty,
    )
    return EXIT_OK if ok else EXIT_HYPOTHESIS


def cmd_sample(args) -> int:
    _, assignment, _ = _load(args)
    a = _need_events(assignment, "sample")
    K = _indices(args.K) if args.K is not None else a.assigned()
    est = sample_trajectories(a, K, args.n, args.seed)
    exact = None
    try:
        exact = enumerate_probability(a, K)
    except EnumerationCapError:
        if args.exact:
            raise
    doc = {"command": "sample", **est.to_json(), "exact": exact}
    doc["discrepancy_sigma"] = (
        None
        if exact is None or est.std_error == 0.0
        else abs(est.estimate - exact) / est.std_error
    )
    _emit(doc, args.pretty)
    return EXIT_OK


def cmd_paper_examples(args) -> int:
    results = gen_mod.worked_examples()
    doc = {
        "command": "paper-examples",
        "results": [ex.to_json() for ex in results],
        "all_pass": all(c.passed for ex in results for c in ex.checks),
    }
    _emit(doc, args.pretty)
    return EXIT_OK if doc["all_pass"] else EXIT_ERROR


def cmd_gen(args) -> int:
    spec = gen_mod.GeneratorSpec(
        kind=args.kind,
        n=args.n,
        local_dim=args.local_dim,
        window=args.window,
        seed=args.seed,
        outcomes=args.outcomes,
    )
    a = gen_mod.generate(spec)
    x = tuple(float(v) for v in args.x.split(",")) if args.x else None
    text = dump_instance(a, x=x, pretty=args.pretty)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlll",
        description=(
            "Probabilities of ordered quantum measurement sequences, "
            "independence relative to a test, and local-lemma bound checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, instance=True):
        if instance:
            p.add_argument("--instance", required=True, help="path to an instance JSON file")
        p.add_argument("--json", action="store_true", help="compact JSON output (default)")
        p.add_argument("--pretty", action="store_true", help="indented JSON output")

    p = sub.add_parser("prob", help="sequence or marginal probability")
    common(p)
    p.add_argument("--mode", choices=["state", "test"], default="test")
    p.add_argument("--seq", help="state mode: event sequence, e.g. 'M1=1;M2=0'")
    p.add_argument("--K", help="test mode: slot indices, e.g. '1,3'")
    p.set_defaults(func=cmd_prob)

    p = sub.add_parser("cond", help="conditional probability")
    common(p)
    p.add_argument("--mode", choices=["state", "test"], default="test")
    p.add_argument("--K", help="conditioning: events (state mode) or slots (test mode)")
    p.add_argument("--L", help="target: events (state mode) or slots (test mode)")
    p.set_defaults(func=cmd_cond)

    p = sub.add_parser("indep", help="independence of one event from earlier ones")
    common(p)
    p.add_argument("--i", type=int, required=True, help="target slot")
    p.add_argument("--K", required=True, help="conditioning slots, e.g. '1,2'")
    p.add_argument("--J", help="slots to drop from K (default: all of K)")
    p.add_argument("--neg", action="store_true", help="negative independence (condition on complements)")
    p.set_defaults(func=cmd_indep)

    p = sub.add_parser("profile", help="negative-independence profile, s and d_min")
    common(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("check", help="local-lemma bound check")
    common(p)
    p.add_argument("--variant", choices=["general", "symmetric"], default="general")
    p.add_argument("--x", help="general: comma-separated weights (overrides the file)")
    p.add_argument("--p", type=float, help="symmetric: probability bound (default: measured max)")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sample", help="Monte Carlo estimate of a marginal")
    common(p)
    p.add_argument("--K", help="slot indices (default: all assigned slots)")
    p.add_argument("--n", type=int, required=True, help="number of trajectories")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--exact", action="store_true", help="fail if exact enumeration is infeasible")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("paper-examples", help="run the bundled worked examples")
    common(p, instance=False)
    p.set_defaults(func=cmd_paper_examples)

    p = sub.add_parser("gen", help="generate an instance file")
    common(p, instance=False)
    p.add_argument("--kind", required=True, choices=[k.value for k in gen_mod.GeneratorKind])
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--local-dim", type=int, default=2, dest="local_dim")
    p.add_argument("--window", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--outcomes", type=int)
    p.add_argument("--x", help="embed weights into the file")
    p.add_argument("--out", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConditionOnZeroError as exc:
        _emit({"error": exc.to_json()}, getattr(args, "pretty", False))
        return EXIT_HYPOTHESIS
    except QlllError as exc:
        _emit({"error": exc.to_json()}, getattr(args, "pretty", False))
        return EXIT_ERROR


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
