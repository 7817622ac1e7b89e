"""Finite-model semantics: classical truth for intuitionistic formulas and the
three-valued pair algebra for affine formulas.

A `PairValue` is a (pos, neg) pair of booleans.  The three disjoint values
proven (T,F), refuted (F,T), and undetermined (F,F) form the truth algebra;
the contradictory (T,T) is representable so corrupt atom tables can be
detected, but every valid `Interpretation` excludes it.

`eval_pair` applies the translation table rows directly as operations on
pair values; `eval_classical` evaluates translated formulas over the same
atom tables.  `equivalence_oracle` exhaustively confirms that the two routes
agree: eval_pair(f) = (eval_classical(f+), eval_classical(f-)).
"""

from __future__ import annotations

import itertools
import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from . import formulas as fm
from .translation import translate


class EvalError(ValueError):
    """Unknown atom/sort, arity mismatch, or unbound variable."""


class BudgetError(RuntimeError):
    """An enumeration was requested beyond its documented budget."""


# ---------------------------------------------------------------------------
# Pair values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PairValue:
    pos: bool
    neg: bool

    @property
    def disjoint(self) -> bool:
        return not (self.pos and self.neg)

    def __str__(self) -> str:
        if self.pos and self.neg:
            return "contradictory"
        if self.pos:
            return "proven"
        if self.neg:
            return "refuted"
        return "undetermined"


PROVEN = PairValue(True, False)
REFUTED = PairValue(False, True)
UNDETERMINED = PairValue(False, False)

PAIR_BY_CODE = {"pos": PROVEN, "neg": REFUTED, "und": UNDETERMINED}
CODE_BY_PAIR = {PROVEN: "pos", REFUTED: "neg", UNDETERMINED: "und"}


def pair_tensor(a: PairValue, b: PairValue) -> PairValue:
    return PairValue(
        a.pos and b.pos,
        ((not a.pos) or b.neg) and ((not b.pos) or a.neg),
    )


def pair_par(a: PairValue, b: PairValue) -> PairValue:
    return PairValue(
        ((not a.neg) or b.pos) and ((not b.neg) or a.pos),
        a.neg and b.neg,
    )


def pair_with(a: PairValue, b: PairValue) -> PairValue:
    return PairValue(a.pos and b.pos, a.neg or b.neg)


def pair_plus(a: PairValue, b: PairValue) -> PairValue:
    return PairValue(a.pos or b.pos, a.neg and b.neg)


def pair_lneg(a: PairValue) -> PairValue:
    return PairValue(a.neg, a.pos)


def pair_ofcourse(a: PairValue) -> PairValue:
    return PairValue(a.pos, not a.pos)


def pair_whynot(a: PairValue) -> PairValue:
    return PairValue(not a.neg, a.neg)


def pair_lolli(a: PairValue, b: PairValue) -> PairValue:
    return pair_par(pair_lneg(a), b)


def pair_forall(values: Iterable[PairValue]) -> PairValue:
    pos, neg = True, False
    for v in values:
        pos = pos and v.pos
        neg = neg or v.neg
    return PairValue(pos, neg)


def pair_exists(values: Iterable[PairValue]) -> PairValue:
    pos, neg = False, True
    for v in values:
        pos = pos or v.pos
        neg = neg and v.neg
    return PairValue(pos, neg)


# ---------------------------------------------------------------------------
# Interpretations
# ---------------------------------------------------------------------------

@dataclass
class AtomTable:
    arg_sorts: tuple[str, ...]
    entries: dict[tuple[int, ...], PairValue]


@dataclass
class Interpretation:
    """Finite sorts plus total, disjoint pair-valued atom tables."""

    sorts: dict[str, int]
    atoms: dict[str, AtomTable]

    def carrier(self, sort: str) -> range:
        if sort not in self.sorts:
            raise EvalError(f"unknown sort {sort!r}")
        return range(self.sorts[sort])

    def atom_value(self, name: str, args: tuple[int, ...]) -> PairValue:
        table = self.atoms.get(name)
        if table is None:
            raise EvalError(f"unknown atom {name!r}")
        entry = table.entries.get(args)
        if entry is None:
            if len(args) != len(table.arg_sorts):
                raise EvalError(
                    f"atom {name!r} expects {len(table.arg_sorts)} argument(s), got {len(args)}"
                )
            raise EvalError(f"atom {name!r} has no table entry for {args}")
        return entry

    def validate(self) -> list[str]:
        """Totality over declared carriers, disjointness, and sort existence."""
        problems = []
        for name, table in sorted(self.atoms.items()):
            for sort in table.arg_sorts:
                if sort not in self.sorts:
                    problems.append(f"atom {name!r} uses unknown sort {sort!r}")
            if any(sort not in self.sorts for sort in table.arg_sorts):
                continue
            for args in itertools.product(*(range(self.sorts[s]) for s in table.arg_sorts)):
                value = table.entries.get(args)
                if value is None:
                    problems.append(f"atom {name!r} is missing an entry for {args}")
                elif not value.disjoint:
                    problems.append(f"atom {name!r} entry {args} is contradictory (pos and neg)")
            for args in table.entries:
                if len(args) != len(table.arg_sorts) or any(
                    not (0 <= v < self.sorts[s]) for v, s in zip(args, table.arg_sorts)
                ):
                    problems.append(f"atom {name!r} entry {args} is outside its carrier")
        return problems

    def to_dict(self) -> dict:
        atoms = {}
        for name, table in sorted(self.atoms.items()):
            entries = {
                ",".join(str(v) for v in args): CODE_BY_PAIR[value]
                for args, value in sorted(table.entries.items())
            }
            atoms[name] = {"args": list(table.arg_sorts), "table": entries}
        return {"sorts": dict(sorted(self.sorts.items())), "atoms": atoms}

    @classmethod
    def from_dict(cls, data: dict) -> "Interpretation":
        try:
            sorts = {str(k): int(v) for k, v in data["sorts"].items()}
            atoms = {}
            for name, spec in data["atoms"].items():
                entries = {}
                for key, code in spec["table"].items():
                    args = tuple(int(v) for v in key.split(",")) if key else ()
                    if code not in PAIR_BY_CODE:
                        raise EvalError(
                            f"atom {name!r}: entry value must be pos|neg|und, got {code!r}"
                        )
                    entries[args] = PAIR_BY_CODE[code]
                atoms[str(name)] = AtomTable(tuple(spec.get("args", [])), entries)
        except (KeyError, TypeError, ValueError) as exc:
            raise EvalError(f"malformed interpretation document: {exc}") from exc
        interp = cls(sorts, atoms)
        problems = interp.validate()
        if problems:
            raise EvalError("invalid interpretation: " + "; ".join(problems))
        return interp

    @classmethod
    def load(cls, path) -> "Interpretation":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _resolve_args(args: tuple[fm.Arg, ...], env: Mapping[str, int]) -> tuple[int, ...]:
    try:
        return tuple(env[a] if a.__class__ is str else a for a in args)
    except KeyError as exc:
        raise EvalError(f"unbound variable {exc.args[0]!r}") from None


# ---------------------------------------------------------------------------
# Classical evaluation of intuitionistic formulas
# ---------------------------------------------------------------------------

def eval_classical(f: fm.IntFormula, interp: Interpretation, env: Mapping[str, int] | None = None) -> bool:
    """Tarskian truth over finite carriers; polarity-marked atoms read the
    corresponding half of their atom table."""
    env = {} if env is None else dict(env)
    return _eval_classical(f, interp, env)


def _ec_atom(f, interp, env):
    name = f.name
    if name.endswith("+"):
        return interp.atom_value(name[:-1], _resolve_args(f.args, env)).pos
    if name.endswith("-"):
        return interp.atom_value(name[:-1], _resolve_args(f.args, env)).neg
    raise EvalError(f"atom {name!r} has no polarity marker (+/-)")


def _ec_quant(f, interp, env):
    saved = env.get(f.var)
    had = f.var in env
    want_all = f.__class__ is fm.IntForall
    result = want_all
    for v in interp.carrier(f.sort):
        env[f.var] = v
        r = _eval_classical(f.body, interp, env)
        if want_all:
            if not r:
                result = False
                break
        elif r:
            result = True
            break
    if had:
        env[f.var] = saved
    else:
        env.pop(f.var, None)
    return result


_CLASSICAL_HANDLERS = {
    fm.IntAtom: _ec_atom,
    fm.IntTrue: lambda f, i, e: True,
    fm.IntFalse: lambda f, i, e: False,
    fm.And: lambda f, i, e: _eval_classical(f.left, i, e) and _eval_classical(f.right, i, e),
    fm.Or: lambda f, i, e: _eval_classical(f.left, i, e) or _eval_classical(f.right, i, e),
    fm.Implies: lambda f, i, e: (not _eval_classical(f.left, i, e)) or _eval_classical(f.right, i, e),
    fm.Not: lambda f, i, e: not _eval_classical(f.body, i, e),
    fm.IntForall: _ec_quant,
    fm.IntExists: _ec_quant,
}


def _eval_classical(f: fm.IntFormula, interp: Interpretation, env: dict[str, int]) -> bool:
    handler = _CLASSICAL_HANDLERS.get(f.__class__)
    if handler is None:
        raise TypeError(f"not an intuitionistic formula: {f!r}")
    return handler(f, interp, env)


# ---------------------------------------------------------------------------
# Pair evaluation of affine formulas
# ---------------------------------------------------------------------------

def eval_pair(f: fm.AffineFormula, interp: Interpretation, env: Mapping[str, int] | None = None) -> PairValue:
    """Evaluate an affine formula in the pair algebra, row by row."""
    env = {} if env is None else dict(env)
    return _eval_pair(f, interp, env)


def _ep_quant(f, interp, env):
    saved = env.get(f.var)
    had = f.var in env
    values = []
    for v in interp.carrier(f.sort):
        env[f.var] = v
        values.append(_eval_pair(f.body, interp, env))
    if had:
        env[f.var] = saved
    else:
        env.pop(f.var, None)
    return pair_forall(values) if f.__class__ is fm.Forall else pair_exists(values)


def _ep_big(f, interp, env):
    op, unit = (pair_tensor, PROVEN) if f.__class__ is fm.BigTensor else (pair_par, REFUTED)
    if not f.items:
        return unit
    out = _eval_pair(f.items[-1], interp, env)
    for item in reversed(f.items[:-1]):
        out = op(_eval_pair(item, interp, env), out)
    return out


_PAIR_HANDLERS = {
    fm.Atom: lambda f, i, e: i.atom_value(f.name, _resolve_args(f.args, e)),
    fm.Top: lambda f, i, e: PROVEN,
    fm.Bot: lambda f, i, e: REFUTED,
    fm.Tensor: lambda f, i, e: pair_tensor(_eval_pair(f.left, i, e), _eval_pair(f.right, i, e)),
    fm.Par: lambda f, i, e: pair_par(_eval_pair(f.left, i, e), _eval_pair(f.right, i, e)),
    fm.With: lambda f, i, e: pair_with(_eval_pair(f.left, i, e), _eval_pair(f.right, i, e)),
    fm.Plus: lambda f, i, e: pair_plus(_eval_pair(f.left, i, e), _eval_pair(f.right, i, e)),
    fm.Lollipop: lambda f, i, e: pair_lolli(_eval_pair(f.left, i, e), _eval_pair(f.right, i, e)),
    fm.LinNeg: lambda f, i, e: pair_lneg(_eval_pair(f.body, i, e)),
    fm.OfCourse: lambda f, i, e: pair_ofcourse(_eval_pair(f.body, i, e)),
    fm.WhyNot: lambda f, i, e: pair_whynot(_eval_pair(f.body, i, e)),
    fm.Forall: _ep_quant,
    fm.Exists: _ep_quant,
    fm.BigTensor: _ep_big,
    fm.BigPar: _ep_big,
}


def _eval_pair(f: fm.AffineFormula, interp: Interpretation, env: dict[str, int]) -> PairValue:
    handler = _PAIR_HANDLERS.get(f.__class__)
    if handler is None:
        raise TypeError(f"not an affine formula: {f!r}")
    return handler(f, interp, env)


# ---------------------------------------------------------------------------
# Disjointness check
# ---------------------------------------------------------------------------

@dataclass
class DisjointnessViolation:
    formula: str
    env: dict[str, int]
    value: PairValue


@dataclass
class DisjointnessReport:
    value: PairValue
    violations: list[DisjointnessViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def check_disjointness(f: fm.AffineFormula, interp: Interpretation) -> DisjointnessReport:
    """Evaluate a closed formula, recording every subformula whose value is
    contradictory; valid interpretations must produce none."""
    free = fm.free_vars(f)
    if free:
        raise EvalError(f"formula must be closed, free: {sorted(free)}")
    report = DisjointnessReport(UNDETERMINED)
    report.value = _eval_checked(f, interp, {}, report.violations)
    return report


def _eval_checked(f, interp, env, violations) -> PairValue:
    if isinstance(f, fm.Atom):
        value = interp.atom_value(f.name, _resolve_args(f.args, env))
        if not value.disjoint:
            violations.append(DisjointnessViolation(fm.render(f), dict(env), value))
        return value
    if isinstance(f, (fm.Forall, fm.Exists)):
        saved = env.get(f.var)
        had = f.var in env
        values = []
        for v in interp.carrier(f.sort):
            env[f.var] = v
            values.append(_eval_checked(f.body, interp, env, violations))
        if had:
            env[f.var] = saved
        else:
            env.pop(f.var, None)
        value = pair_forall(values) if isinstance(f, fm.Forall) else pair_exists(values)
    elif isinstance(f, (fm.Tensor, fm.Par, fm.With, fm.Plus, fm.Lollipop)):
        op = {
            fm.Tensor: pair_tensor,
            fm.Par: pair_par,
            fm.With: pair_with,
            fm.Plus: pair_plus,
            fm.Lollipop: pair_lolli,
        }[type(f)]
        value = op(
            _eval_checked(f.left, interp, env, violations),
            _eval_checked(f.right, interp, env, violations),
        )
    elif isinstance(f, (fm.LinNeg, fm.OfCourse, fm.WhyNot)):
        op = {fm.LinNeg: pair_lneg, fm.OfCourse: pair_ofcourse, fm.WhyNot: pair_whynot}[type(f)]
        value = op(_eval_checked(f.body, interp, env, violations))
    elif isinstance(f, (fm.BigTensor, fm.BigPar)):
        value = _eval_checked(fm._unfold_big(f), interp, env, violations)
    elif isinstance(f, (fm.Top, fm.Bot)):
        value = PROVEN if isinstance(f, fm.Top) else REFUTED
    else:
        raise TypeError(f"not an affine formula: {f!r}")
    if not value.disjoint:
        violations.append(DisjointnessViolation(fm.render(f), dict(env), value))
    return value


# ---------------------------------------------------------------------------
# Equivalence oracle
# ---------------------------------------------------------------------------

ORACLE_MAX_DEPTH = 3
ORACLE_MAX_ATOMS = 2
ORACLE_MAX_CARRIER = 2

_ORACLE_ATOMS = ("p", "q", "r")
_ORACLE_SORT = "S"
_ORACLE_VAR = "x"


@dataclass
class OracleMismatch:
    formula: str
    assignment: dict[str, str]
    env: dict[str, int]
    pair: PairValue
    classical: tuple[bool, bool]


@dataclass
class OracleReport:
    max_depth: int
    atom_count: int
    carrier_size: int
    assignments: int
    formulas_checked: int
    distinct_signatures: int
    mismatches: list[OracleMismatch] = field(default_factory=list)
    elapsed_s: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.mismatches


def oracle_interpretations(atom_count: int, carrier_size: int) -> list[Interpretation]:
    """All disjoint assignments of `atom_count` unary atoms over one sort."""
    names = _ORACLE_ATOMS[:atom_count]
    values = (PROVEN, REFUTED, UNDETERMINED)
    points = range(carrier_size)
    out = []
    per_atom = list(itertools.product(values, repeat=carrier_size))
    for combo in itertools.product(per_atom, repeat=atom_count):
        atoms = {
            name: AtomTable((_ORACLE_SORT,), {(x,): table[x] for x in points})
            for name, table in zip(names, combo)
        }
        out.append(Interpretation({_ORACLE_SORT: carrier_size}, atoms))
    return out


def _oracle_leaves(atom_count: int) -> list[fm.AffineFormula]:
    leaves: list[fm.AffineFormula] = [fm.Top(), fm.Bot()]
    for name in _ORACLE_ATOMS[:atom_count]:
        leaves.append(fm.Atom(name, (_ORACLE_VAR,)))
    return leaves


_ORACLE_UNARY = (
    fm.LinNeg,
    fm.OfCourse,
    fm.WhyNot,
    lambda b: fm.Forall(_ORACLE_VAR, _ORACLE_SORT, b),
    lambda b: fm.Exists(_ORACLE_VAR, _ORACLE_SORT, b),
)
_ORACLE_BINARY = (fm.Tensor, fm.Par, fm.With, fm.Plus, fm.Lollipop)


def equivalence_oracle(max_depth: int, atom_count: int, carrier_size: int) -> OracleReport:
    """Exhaustively check eval_pair(f) = (eval_classical(f+), eval_classical(f-)).

    Formulas are enumerated bottom-up over the full connective set, including
    one quantified variable; subformulas whose joint semantic signature was
    already seen are kept as single representatives, which covers all deeper
    formulas built from their structural twins.  Every constructed formula is
    checked with the real evaluators on every disjoint assignment.
    """
    if max_depth > ORACLE_MAX_DEPTH or atom_count > ORACLE_MAX_ATOMS or carrier_size > ORACLE_MAX_CARRIER:
        raise BudgetError(
            f"oracle budget is depth <= {ORACLE_MAX_DEPTH}, atoms <= {ORACLE_MAX_ATOMS}, "
            f"carrier <= {ORACLE_MAX_CARRIER}"
        )
    if max_depth < 0 or atom_count < 1 or carrier_size < 1:
        raise BudgetError("oracle parameters must be positive (depth may be 0)")

    start = time.perf_counter()
    interps = oracle_interpretations(atom_count, carrier_size)
    envs = [{_ORACLE_VAR: v} for v in range(carrier_size)]
    report = OracleReport(max_depth, atom_count, carrier_size, len(interps), 0, 0)

    def signature(f: fm.AffineFormula) -> tuple:
        sig = []
        pair = translate(f)
        for idx, interp in enumerate(interps):
            for env in envs:
                value = eval_pair(f, interp, env)
                classical = (
                    eval_classical(pair.pos, interp, env),
                    eval_classical(pair.neg, interp, env),
                )
                if (value.pos, value.neg) != classical:
                    report.mismatches.append(
                        OracleMismatch(
                            fm.render(f),
                            _describe_assignment(interps[idx]),
                            dict(env),
                            value,
                            classical,
                        )
                    )
                sig.append((value.pos, value.neg, *classical))
        return tuple(sig)

    seen: dict[tuple, fm.AffineFormula] = {}
    frontier: list[fm.AffineFormula] = []
    for leaf in _oracle_leaves(atom_count):
        report.formulas_checked += 1
        sig = signature(leaf)
        if sig not in seen:
            seen[sig] = leaf
            frontier.append(leaf)

    older: list[fm.AffineFormula] = []
    for _ in range(max_depth):
        new: list[fm.AffineFormula] = []

        def consider(candidate: fm.AffineFormula) -> None:
            report.formulas_checked += 1
            sig = signature(candidate)
            if sig not in seen:
                seen[sig] = candidate
                new.append(candidate)

        # Each candidate with at least one argument in the newest frontier is
        # built exactly once: frontier x everything, plus older x frontier.
        everything = older + frontier
        for f in frontier:
            for ctor in _ORACLE_UNARY:
                consider(ctor(f))
            for g in everything:
                for ctor in _ORACLE_BINARY:
                    consider(ctor(f, g))
        for f in older:
            for g in frontier:
                for ctor in _ORACLE_BINARY:
                    consider(ctor(f, g))
        older = everything
        frontier = new

    report.distinct_signatures = len(seen)
    report.elapsed_s = time.perf_counter() - start
    return report


def _describe_assignment(interp: Interpretation) -> dict[str, str]:
    out = {}
    for name, table in sorted(interp.atoms.items()):
        codes = [CODE_BY_PAIR[table.entries[(x,)]] for x in range(interp.sorts[_ORACLE_SORT])]
        out[name] = ",".join(codes)
    return out
