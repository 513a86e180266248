"""Command-line front end.

Exit status: 0 for success, ENTAILED or ACCEPTED; 1 for COUNTERMODEL,
REJECTED or a violated formula; 2 for UNKNOWN; 3 for usage, parse or
validation errors.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .decision import SearchBounds, canonical_space, decide_entailment
from .errors import ApproxEntError, EvaluationError, SpaceError
from .formats import format_model, load_model, load_proof, load_theory
from .grades import format_grade, scale_from_tokens
from .proofs import check_proof
from .semantics import gimp_witness, sat_formula
from .syntax import Gimp, parse, parse_formula, to_text, variables

OK, NEGATIVE, UNKNOWN, USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _scale(args):
    return scale_from_tokens(args.scale.split()) if args.scale else None


def _bounds(args) -> SearchBounds:
    if not args.bounds:
        return SearchBounds()
    try:
        return SearchBounds.parse(args.bounds)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--bounds: {exc}") from None


def _write(path, text: str):
    Path(path).write_text(text)


# ---------------------------------------------------------------- commands


def cmd_parse(args, out) -> int:
    sources = []
    if args.file:
        sources = [line.split("#", 1)[0] for line in Path(args.file).read_text().splitlines()]
    if args.expr:
        sources.append(args.expr)
    sources = [s for s in sources if s.strip()]
    if not sources:
        raise UsageError("parse needs an expression or --file")
    scale = _scale(args)
    for src in sources:
        print(to_text(parse(src, scale=scale)), file=out)
    return OK


def _describe(ev, f) -> str:
    if isinstance(f, Gimp):
        w = gimp_witness(ev, f)
        if w is not None:
            return f"witness {ev.space.worlds[w]} is in the left side but below grade {format_grade(f.grade)} of the right side"
    return ""


def cmd_check(args, out) -> int:
    model = load_model(args.model, args.variant, _scale(args))
    ev = model.evaluation
    items = []
    query = None
    if args.theory:
        th = load_theory(args.theory, model.variant, model.scale)
        items += [("member", f) for f in th.formulas]
        query = th.query
    for text in args.formula or ():
        items.append(("formula", parse_formula(text, model.sig, model.scale, model.variant)))
    if query is not None:
        items.append(("query", query))
    if not items:
        raise UsageError("check needs a theory file or --formula")
    for _, f in items:
        missing = variables(f) - set(model.sig.variables)
        if missing:
            raise UsageError(f"{to_text(f)} uses variables not in the model: {', '.join(sorted(missing))}")
    any_violated = False
    members_ok = True
    for kind, f in items:
        ok = sat_formula(ev, f)
        any_violated |= not ok
        if kind == "member" and not ok:
            members_ok = False
        line = f"{'SATISFIED' if ok else 'VIOLATED'} {kind}: {to_text(f)}"
        why = "" if ok else _describe(ev, f)
        print(line + (f"  ({why})" if why else ""), file=out)
    if query is not None and members_ok and not sat_formula(ev, query):
        print("COUNTERMODEL CONFIRMED: every member holds and the query fails", file=out)
    return NEGATIVE if any_violated else OK


def cmd_entail(args, out) -> int:
    th = load_theory(args.theory, args.variant, _scale(args))
    query = th.query
    if args.query:
        query = parse_formula(args.query, th.sig, th.scale, th.variant)
    if query is None:
        raise UsageError("no query: add a 'query' line to the theory or pass --query")
    start = time.perf_counter()
    verdict = decide_entailment(th.variant, th.sig, th.scale, th.formulas, query, _bounds(args),
                                workers=args.workers)
    took = time.perf_counter() - start
    if verdict.verdict == "ENTAILED":
        print(f"ENTAILED ({verdict.checked} candidate models, {took:.2f}s)", file=out)
        return OK
    if verdict.verdict == "UNKNOWN":
        print(f"UNKNOWN: {verdict.reason} ({verdict.checked} candidate models)", file=out)
        return UNKNOWN
    text = format_model(verdict.evaluation)
    print(f"COUNTERMODEL ({verdict.checked} candidate models, {took:.2f}s)", file=out)
    print(text, end="", file=out)
    if args.out:
        _write(args.out, text)
    return NEGATIVE


def cmd_prove(args, out) -> int:
    th = load_theory(args.theory, args.variant, _scale(args))
    script = load_proof(args.proof, th.scale)
    result = check_proof(th.formulas, script, th.variant, th.sig, th.scale)
    if result.accepted:
        print(f"ACCEPTED: {to_text(result.conclusion)}", file=out)
        if th.query is not None and result.conclusion != th.query:
            print(f"note: the conclusion differs from the query {to_text(th.query)}", file=out)
        return OK
    print(f"REJECTED at line {result.line}: {result.reason}", file=out)
    return NEGATIVE


def cmd_canon(args, out) -> int:
    model = load_model(args.model, args.variant, _scale(args))
    result = canonical_space(model.evaluation, model.variant)
    ev = model.evaluation
    for w, k in enumerate(result.mapping):
        target = result.space.worlds[k] if isinstance(k, int) else k
        print(f"map {ev.space.worlds[w]} -> {target}", file=out)
    print(format_model(result.evaluation), end="", file=out)
    if args.out:
        _write(args.out, format_model(result.evaluation))
    if result.isomorphic:
        print("ISOMORPHIC", file=out)
        return OK
    print("NOT ISOMORPHIC", file=out)
    for m in result.mismatches:
        print(f"  {m}", file=out)
    return NEGATIVE


def cmd_fuzz(args, out) -> int:
    from . import fuzz
    quick = args.quick
    worlds = 3 if quick else 4
    shapes = ((2, 2),) if quick else ((2, 2), (3, 2))
    total_fail = 0

    def show(title, report):
        nonlocal total_fail
        total_fail += report.total_failures
        print(f"[{title}] {report.models} models, {report.total_checked} checks, "
              f"{report.total_failures} failures", file=out)
        for line in report.lines():
            print(f"  {line}", file=out)
        for key, fails in report.failures.items():
            for f in fails[:3]:
                print(f"  FAIL {key}: {f}", file=out)

    show("plain axioms", fuzz.run_axiom_suite("plain", max_worlds=worlds))
    show("chain axioms", fuzz.run_axiom_suite("chain", max_worlds=worlds))
    show("product axioms", fuzz.run_axiom_suite("product", shapes=shapes))
    lemma = fuzz.SuiteReport()
    for scale in fuzz.fixture_scales():
        for space in fuzz.all_chains(scale, worlds):
            lemma.models += 1
            bad = fuzz.chain_lemma_violations(space)
            lemma.add("chain lemmas", not bad, lambda b=bad: ", ".join(b[:3]))
        for space in fuzz.all_products(scale, 3, 4 if quick else 6):
            lemma.models += 1
            bad = fuzz.product_lemma_violations(space)
            lemma.add("product lemmas", not bad, lambda b=bad: ", ".join(b[:3]))
    show("lemmas", lemma)
    show("modal shapes", fuzz.run_modal_suite(max_worlds=worlds))
    show(f"random (seed {args.seed})", fuzz.run_random_suite(args.seed, models=5 if quick else 30))
    return NEGATIVE if total_fail else OK


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--variant", choices=["lae", "laec", "laepc"], help="logic variant (default: from the file)")
    common.add_argument("--scale", help="grade scale, e.g. 'godel' or 'lukasiewicz 0 1/2 1'")
    common.add_argument("--bounds", help="'exhaustive' or worlds=N,chain=N,levels=N,subsets=N,sims=N")
    common.add_argument("--workers", type=int, default=1, help="parallel search workers")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the produced model here")

    p = argparse.ArgumentParser(prog="approxent", description="Graded approximate entailment toolkit.")
    sub = p.add_subparsers(dest="command", required=True)
    sp = sub.add_parser("parse", parents=[common], help="print formulas in canonical form")
    sp.add_argument("expr", nargs="?")
    sp.add_argument("--file")
    sp = sub.add_parser("check", parents=[common], help="evaluate formulas in a model")
    sp.add_argument("model")
    sp.add_argument("theory", nargs="?")
    sp.add_argument("--formula", action="append")
    sp = sub.add_parser("entail", parents=[common], help="decide whether a theory entails its query")
    sp.add_argument("theory")
    sp.add_argument("--query")
    sp = sub.add_parser("prove", parents=[common], help="check a proof script")
    sp.add_argument("theory")
    sp.add_argument("proof")
    sp = sub.add_parser("canon", parents=[common], help="rebuild a model canonically")
    sp.add_argument("model")
    sp = sub.add_parser("fuzz", parents=[common], help="run the soundness suites")
    sp.add_argument("--quick", action="store_true", help="smaller fixture families")
    return p


COMMANDS = {"parse": cmd_parse, "check": cmd_check, "entail": cmd_entail, "prove": cmd_prove,
            "canon": cmd_canon, "fuzz": cmd_fuzz}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code == 0 else USAGE
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return USAGE
    try:
        return COMMANDS[args.command](args, out)
    except (SpaceError, EvaluationError) as exc:
        items = getattr(exc, "violations", None) or getattr(exc, "diagnostics", [])
        print("error: invalid model", file=sys.stderr)
        for item in items:
            print(f"  {item}", file=sys.stderr)
        return USAGE
    except (ApproxEntError, UsageError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
