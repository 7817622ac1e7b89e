"""Command-line front door: translation, evaluation, the self-check oracle,
the interval lemma suite, cover extraction, and topology batch checks.

Exit codes: 0 all verdicts pass, 1 some check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import cuts, semantics, topology
from .cover import (
    covl_covu_crosscheck,
    decide_cover,
    extract_subcover,
    parse_cover_spec,
)
from .cuts import format_ext
from .formulas import ParseError, parse_affine, render
from .report import RunReport
from .semantics import BudgetError, EvalError, Interpretation
from .translation import translate

EXPECTED_FILTER_COUNTS = {1: 3, 2: 15}  # regression values from enumeration


def _cmd_translate(args) -> RunReport:
    report = RunReport(f"translate --formula {args.formula!r} --part {args.part}"
                       + (" --simplify" if args.simplify else ""))
    formula = parse_affine(args.formula)
    pair = translate(formula, simplify=args.simplify)
    if args.part in ("pos", "both"):
        report.info("positive", formula=render(pair.pos))
    if args.part in ("neg", "both"):
        report.info("negative", formula=render(pair.neg))
    return report


def _cmd_eval(args) -> RunReport:
    report = RunReport(f"eval --formula {args.formula!r} --model {args.model} --mode {args.mode}")
    formula = parse_affine(args.formula, require_closed=True)
    interp = Interpretation.load(args.model)
    pair_value = classical = None
    if args.mode in ("pair", "both"):
        pair_value = semantics.eval_pair(formula, interp)
        report.info("pair_value", value=str(pair_value), pos=pair_value.pos, neg=pair_value.neg)
    if args.mode in ("translated", "both"):
        tp = translate(formula)
        classical = (
            semantics.eval_classical(tp.pos, interp),
            semantics.eval_classical(tp.neg, interp),
        )
        report.info("translated_value", pos=classical[0], neg=classical[1])
    if args.mode == "both":
        report.add(
            "pair_vs_translated_agree",
            (pair_value.pos, pair_value.neg) == classical,
        )
        disjoint = semantics.check_disjointness(formula, interp)
        report.add("disjointness", disjoint.ok, violations=len(disjoint.violations))
    return report


def _cmd_selfcheck(args) -> RunReport:
    report = RunReport(
        f"selfcheck --depth {args.depth} --atoms {args.atoms} --carrier {args.carrier}"
    )
    oracle = semantics.equivalence_oracle(args.depth, args.atoms, args.carrier)
    report.add(
        "pair_equals_translated_classical",
        oracle.ok,
        formulas_checked=oracle.formulas_checked,
        distinct_signatures=oracle.distinct_signatures,
        assignments=oracle.assignments,
        mismatches=len(oracle.mismatches),
    )
    for mismatch in oracle.mismatches[:5]:
        report.info(
            "mismatch",
            formula=mismatch.formula,
            assignment=mismatch.assignment,
            pair=str(mismatch.pair),
            classical=mismatch.classical,
        )
    return report


def _cmd_lemmas(args) -> RunReport:
    report = RunReport(
        f"lemmas --triples {args.triples} --seed {args.seed} --stability {args.stability}"
    )
    suite = cuts.lemma_suite(triples=args.triples, seed=args.seed, stability_extra=args.stability)
    for check in suite.checks:
        report.add(
            check.name,
            check.passed,
            instances=check.instances,
            failures=check.failures[:3],
        )
    return report


def _cmd_cover(args) -> RunReport:
    report = RunReport(f"cover --spec {args.spec!r}" + (" --verify" if args.verify else ""))
    problem = parse_cover_spec(args.spec)
    decision = decide_cover(problem)
    result = extract_subcover(problem, verify=args.verify)
    report.add(
        "covered",
        decision.covered,
        witness=None if decision.witness is None else str(decision.witness),
    )
    report.add("engines_agree", decision.covered == result.success)
    if result.success:
        report.info(
            "subcover",
            indices=list(result.indices),
            chain=[format_ext(v) for v in result.witness_chain],
        )
        if args.verify:
            report.add("inclusion_verified", result.verified)
    else:
        report.info("stuck_at", point=str(result.stuck))
    crosscheck = covl_covu_crosscheck(problem)
    report.add(
        "covl_covu_crosscheck",
        crosscheck.passed,
        reflect_covered=crosscheck.reflect_covered,
        covl_failures=crosscheck.covl_failures[:3],
    )
    return report


def _topo_axioms(report: RunReport, args) -> None:
    carrier = topology.FiniteCarrier(args.carrier)
    if args.tables:
        table = topology.load_table(args.tables)
        if not isinstance(table, topology.InteriorOperator):
            raise ValueError("--tables for the axioms suite must hold an operator document")
        ops = {"loaded": (table, args.level)}
    else:
        ops = {name: (op, "full") for name, op in topology.operator_zoo(carrier).items()}
    for name, (op, level) in ops.items():
        axiom_report = topology.check_operator_axioms(op, level)
        for result in axiom_report.results:
            if result.required:
                report.add(
                    f"{name}.{result.name}",
                    result.holds,
                    counterexamples=result.counterexamples[:2],
                )
            else:
                report.info(f"{name}.{result.name}", holds=result.holds)


def _topo_correspondence(report: RunReport, args) -> None:
    carrier = topology.FiniteCarrier(args.carrier)
    for name, op in topology.operator_zoo(carrier).items():
        rt = topology.roundtrip_check(op)
        report.add(
            f"{name}.roundtrip",
            rt.passed,
            disagreements=rt.disagreements,
        )
        union = topology.union_of_opens_check(op)
        report.add(
            f"{name}.union_of_opens",
            union.passed,
            families=union.families_checked,
        )


def _documented_bases(carrier) -> dict[str, topology.BasisFamily]:
    singletons = tuple(
        carrier.index[tuple(0 if x == p else 2 for x in carrier.points)]
        for p in carrier.points
    )
    decidable = tuple(
        carrier.index[tuple(0 if x == p else 1 for x in carrier.points)]
        for p in carrier.points
    )
    return {
        "singletons": topology.BasisFamily(carrier, singletons),
        "decidable_singletons": topology.BasisFamily(carrier, decidable),
        "whole_space": topology.BasisFamily(carrier, (carrier.full,)),
        "empty": topology.BasisFamily(carrier, ()),
    }


def _topo_basis(report: RunReport, args) -> None:
    carrier = topology.FiniteCarrier(args.carrier)
    if args.tables:
        table = topology.load_table(args.tables)
        if not isinstance(table, topology.BasisFamily):
            raise ValueError("--tables for the basis suite must hold a basis document")
        families = {"loaded": table}
    else:
        families = _documented_bases(carrier)
    for name, basis in families.items():
        basis_report = topology.check_basis(basis)
        report.info(f"{name}.is_basis", value=basis_report.is_basis)
        op = topology.basis_interior(basis)
        moore = topology.check_operator_axioms(op, "moore")
        report.add(f"{name}.moore_axioms", moore.passed)
        if basis_report.is_basis:
            full = topology.check_operator_axioms(op, "full")
            report.add(f"{name}.full_axioms", full.passed)


def _topo_product(report: RunReport, args) -> None:
    carrier = topology.FiniteCarrier(min(args.carrier, 2))
    zoo = topology.operator_zoo(carrier)
    pairs = [
        ("discrete", "discrete"),
        ("discrete", "basis_singletons"),
        ("basis_singletons", "basis_singletons"),
    ]
    for nx, ny in pairs:
        product = topology.product_axiom_check(zoo[nx], zoo[ny])
        report.add(f"{nx}x{ny}.tensor_full", product.tensor_report.passed)
        report.add(f"{nx}x{ny}.with_cech", product.with_report.passed)
        report.info(f"{nx}x{ny}.with_I3", holds=product.with_i3_holds)


def _topo_filters(report: RunReport, args) -> None:
    carrier = topology.FiniteCarrier(args.carrier)
    if args.tables:
        table = topology.load_table(args.tables)
        if not isinstance(table, topology.SubsetFilter):
            raise ValueError("--tables for the filters suite must hold a filter document")
        report.add("loaded.is_filter", topology.is_filter(table))
        return
    filters = topology.enumerate_filters(carrier)
    expected = EXPECTED_FILTER_COUNTS.get(carrier.size)
    report.add(
        "filter_count",
        expected is None or len(filters) == expected,
        count=len(filters),
        expected=expected,
    )
    families = [()]
    for s in range(carrier.n_subsets):
        families.append((s,))
    bad = [
        family
        for family in families
        if not topology.is_filter(topology.family_filter_table(carrier, family))
    ]
    report.add("lemma_isfilter_singletons", not bad, failures=len(bad))


def _topo_compact(report: RunReport, args) -> None:
    props = topology.check_compactness_props(max_carrier=min(args.carrier, 2))
    for section in props.sections:
        report.add(
            section.name,
            section.passed,
            instances=section.instances,
            counterexamples=section.counterexamples[:2],
        )


_TOPO_SUITES = {
    "axioms": _topo_axioms,
    "correspondence": _topo_correspondence,
    "basis": _topo_basis,
    "product": _topo_product,
    "filters": _topo_filters,
    "compact": _topo_compact,
}


def _cmd_topo(args) -> RunReport:
    report = RunReport(f"topo --suite {args.suite} --carrier {args.carrier}"
                       + (f" --tables {args.tables}" if args.tables else ""))
    _TOPO_SUITES[args.suite](report, args)
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="afftop",
        description="Affine-logic toolkit: translate, evaluate, and machine-check",
    )
    parser.add_argument("--json", action="store_true", help="emit a JSON report")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("translate", help="antithesis-translate a formula")
    p.add_argument("--formula", required=True)
    p.add_argument("--part", choices=("pos", "neg", "both"), default="both")
    p.add_argument("--simplify", action="store_true")
    p.set_defaults(handler=_cmd_translate)

    p = sub.add_parser("eval", help="evaluate a closed formula in a model")
    p.add_argument("--formula", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--mode", choices=("pair", "translated", "both"), default="both")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("selfcheck", help="exhaustive pair-vs-classical oracle")
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--atoms", type=int, default=2)
    p.add_argument("--carrier", type=int, default=1)
    p.set_defaults(handler=_cmd_selfcheck)

    p = sub.add_parser("lemmas", help="interval lemma suite over cut grids")
    p.add_argument("--triples", type=int, default=50)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--stability", type=int, default=100)
    p.set_defaults(handler=_cmd_lemmas)

    p = sub.add_parser("cover", help="decide coverage and extract a subcover")
    p.add_argument("--spec", required=True, help='"a b ; q1 r1 ; q2 r2 ; ..."')
    p.add_argument("--verify", action="store_true")
    p.set_defaults(handler=_cmd_cover)

    p = sub.add_parser("topo", help="finite-model topology batch checks")
    p.add_argument("--suite", choices=sorted(_TOPO_SUITES), required=True)
    p.add_argument("--carrier", type=int, default=2)
    p.add_argument("--tables", default=None)
    p.add_argument("--level", choices=("moore", "cech", "full"), default="full")
    p.set_defaults(handler=_cmd_topo)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    start = time.perf_counter()
    try:
        report = args.handler(args)
    except (ParseError, EvalError, BudgetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.elapsed_s = time.perf_counter() - start
    print(report.to_json() if args.json else report.render_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
