"""Finite-model checking of interior operators, open-set collections, bases,
products, filters, and compactness on tiny carriers.

Subsets of an m-point carrier are three-valued tables over {pos, neg, und},
encoded as strings over "pnu" ("pu" = pos at 0, und at 1).  Axioms and
definitions are built as affine formulas over derived atom tables and
pair-evaluated, so every verdict automatically agrees with the classical
evaluation of its antithesis translation.  The filter quantifier inside
compactness is realized by enumeration: a subset is reported compact when,
for every enumerated filter positively excluding its complement, some point
of the subset is positively a cluster point.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import formulas as fm
from .semantics import (
    AtomTable,
    BudgetError,
    Interpretation,
    PairValue,
    PROVEN,
    REFUTED,
    UNDETERMINED,
    eval_pair,
    pair_lneg,
    pair_par,
    pair_plus,
    pair_tensor,
    pair_with,
)

TRIT_POS, TRIT_NEG, TRIT_UND = 0, 1, 2
TRIT_CHARS = "pnu"
PAIR_OF_TRIT = (PROVEN, REFUTED, UNDETERMINED)

MAX_OPERATOR_CARRIER = 4
MAX_FILTER_CARRIER = 2


def trit_of_pair(v: PairValue) -> int:
    if not v.disjoint:
        raise ValueError(f"contradictory pair value {v} has no trit encoding")
    if v.pos:
        return TRIT_POS
    if v.neg:
        return TRIT_NEG
    return TRIT_UND


def _trit_op(op):
    return lambda a, b: trit_of_pair(op(PAIR_OF_TRIT[a], PAIR_OF_TRIT[b]))


_T_TENSOR = _trit_op(pair_tensor)
_T_PAR = _trit_op(pair_par)
_T_WITH = _trit_op(pair_with)
_T_PLUS = _trit_op(pair_plus)


class FiniteCarrier:
    """An m-point carrier with the full table of three-valued subsets and
    precomputed subset-level operations."""

    _cache: dict[int, "FiniteCarrier"] = {}

    def __new__(cls, size: int):
        if size in cls._cache:
            return cls._cache[size]
        if not (1 <= size <= MAX_OPERATOR_CARRIER):
            raise BudgetError(f"carrier size must be 1..{MAX_OPERATOR_CARRIER}, got {size}")
        self = super().__new__(cls)
        self._init(size)
        cls._cache[size] = self
        return self

    def _init(self, size: int) -> None:
        self.size = size
        self.points = range(size)
        self.subsets: tuple[tuple[int, ...], ...] = tuple(
            itertools.product(range(3), repeat=size)
        )
        self.index = {s: i for i, s in enumerate(self.subsets)}
        n = len(self.subsets)
        self.n_subsets = n
        self.full = self.index[(TRIT_POS,) * size]
        self.empty = self.index[(TRIT_NEG,) * size]
        self.all_und = self.index[(TRIT_UND,) * size]
        subs = self.subsets
        pts = self.points
        self.box = tuple(
            tuple(self.index[tuple(_T_TENSOR(s[x], t[x]) for x in pts)] for t in subs)
            for s in subs
        )
        self.madd = tuple(
            tuple(self.index[tuple(_T_PAR(s[x], t[x]) for x in pts)] for t in subs)
            for s in subs
        )
        self.meet = tuple(
            tuple(self.index[tuple(_T_WITH(s[x], t[x]) for x in pts)] for t in subs)
            for s in subs
        )
        self.join = tuple(
            tuple(self.index[tuple(_T_PLUS(s[x], t[x]) for x in pts)] for t in subs)
            for s in subs
        )
        swap = {TRIT_POS: TRIT_NEG, TRIT_NEG: TRIT_POS, TRIT_UND: TRIT_UND}
        self.comp = tuple(self.index[tuple(swap[v] for v in s)] for s in subs)
        self.incl_pos = tuple(
            tuple(
                all(
                    (s[x] != TRIT_POS or t[x] == TRIT_POS)
                    and (t[x] != TRIT_NEG or s[x] == TRIT_NEG)
                    for x in pts
                )
                for t in subs
            )
            for s in subs
        )
        self.incl_neg = tuple(
            tuple(any(s[x] == TRIT_POS and t[x] == TRIT_NEG for x in pts) for t in subs)
            for s in subs
        )

    def incl_pair(self, s: int, t: int) -> PairValue:
        return PairValue(self.incl_pos[s][t], self.incl_neg[s][t])

    def mem_pair(self, s: int, x: int) -> PairValue:
        return PAIR_OF_TRIT[self.subsets[s][x]]

    def subset_str(self, s: int) -> str:
        return "".join(TRIT_CHARS[v] for v in self.subsets[s])

    def subset_index(self, text: str) -> int:
        if len(text) != self.size or any(ch not in TRIT_CHARS for ch in text):
            raise ValueError(f"subset encoding must be {self.size} chars over 'pnu': {text!r}")
        return self.index[tuple(TRIT_CHARS.index(ch) for ch in text)]

    def equivalent(self, s: int, t: int) -> bool:
        # Mutual inclusion, positively; on three-valued tables this is equality.
        return self.incl_pos[s][t] and self.incl_pos[t][s]


@dataclass(frozen=True)
class InteriorOperator:
    carrier: FiniteCarrier
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.carrier.n_subsets:
            raise ValueError("operator table must cover every subset")

    def int_of(self, s: int) -> int:
        return self.table[s]

    def clo_of(self, s: int) -> int:
        comp = self.carrier.comp
        return comp[self.table[comp[s]]]

    def clo_table(self) -> tuple[int, ...]:
        return tuple(self.clo_of(s) for s in range(self.carrier.n_subsets))


def discrete_operator(carrier: FiniteCarrier) -> InteriorOperator:
    return InteriorOperator(carrier, tuple(range(carrier.n_subsets)))


def indiscrete_operator(carrier: FiniteCarrier) -> InteriorOperator:
    return InteriorOperator(
        carrier,
        tuple(s if s == carrier.full else carrier.empty for s in range(carrier.n_subsets)),
    )


def all_neg_operator(carrier: FiniteCarrier) -> InteriorOperator:
    """Maps every subset to the all-negative subset; fails I4."""
    return InteriorOperator(carrier, (carrier.empty,) * carrier.n_subsets)


# ---------------------------------------------------------------------------
# Formula-backed axiom checks
# ---------------------------------------------------------------------------

def _table(arg_sorts: tuple[str, ...], fn) -> AtomTable:
    return AtomTable(arg_sorts, dict(fn))


def _operator_interp(op: InteriorOperator) -> Interpretation:
    c = op.carrier
    subs = range(c.n_subsets)
    mem = {(s, x): c.mem_pair(s, x) for s in subs for x in c.points}
    int_mem = {(s, x): c.mem_pair(op.table[s], x) for s in subs for x in c.points}
    int_int = {(s, x): c.mem_pair(op.table[op.table[s]], x) for s in subs for x in c.points}
    int_meet = {
        (s, t, x): c.mem_pair(op.table[c.meet[s][t]], x)
        for s in subs
        for t in subs
        for x in c.points
    }
    return Interpretation(
        sorts={"SUB": c.n_subsets, "X": c.size},
        atoms={
            "mem": _table(("SUB", "X"), mem),
            "int_mem": _table(("SUB", "X"), int_mem),
            "int_int_mem": _table(("SUB", "X"), int_int),
            "int_meet_mem": _table(("SUB", "SUB", "X"), int_meet),
        },
    )


def _incl_formula(s: fm.Arg, t: fm.Arg, var: str, atom: str = "mem") -> fm.AffineFormula:
    return fm.Forall(
        var, "X", fm.Lollipop(fm.Atom(atom, (s, var)), fm.Atom(atom, (t, var)))
    )


def _axiom_specs(full_index: int):
    """Axiom name -> (quantifier prefix, body formula)."""
    i1 = fm.Lollipop(fm.Atom("int_mem", ("s", "x")), fm.Atom("mem", ("s", "x")))
    i2 = fm.Lollipop(
        _incl_formula("s", "t", "x"),
        fm.Forall("x", "X", fm.Lollipop(fm.Atom("int_mem", ("s", "x")), fm.Atom("int_mem", ("t", "x")))),
    )
    i3 = fm.Lollipop(fm.Atom("int_mem", ("s", "x")), fm.Atom("int_int_mem", ("s", "x")))
    i4 = fm.Lollipop(fm.Atom("mem", (full_index, "x")), fm.Atom("int_mem", (full_index, "x")))
    i5 = fm.Lollipop(
        fm.Tensor(fm.Atom("int_mem", ("s", "x")), fm.Atom("int_mem", ("t", "x"))),
        fm.Atom("int_meet_mem", ("s", "t", "x")),
    )
    return {
        "I1": ((("s", "SUB"), ("x", "X")), i1),
        "I2": ((("s", "SUB"), ("t", "SUB")), i2),
        "I3": ((("s", "SUB"), ("x", "X")), i3),
        "I4": ((("x", "X"),), i4),
        "I5": ((("s", "SUB"), ("t", "SUB"), ("x", "X")), i5),
    }


LEVEL_AXIOMS = {
    "moore": ("I1", "I2", "I3"),
    "cech": ("I1", "I2", "I4", "I5"),
    "full": ("I1", "I2", "I3", "I4", "I5"),
}


@dataclass
class AxiomResult:
    name: str
    required: bool
    holds: bool
    counterexamples: list[str] = field(default_factory=list)


@dataclass
class OperatorAxiomReport:
    level: str
    results: list[AxiomResult]

    @property
    def passed(self) -> bool:
        return all(r.holds for r in self.results if r.required)

    def result(self, name: str) -> AxiomResult:
        return next(r for r in self.results if r.name == name)


def _check_prefixed(
    prefix, body, interp: Interpretation, describe, limit: int = 5
) -> tuple[bool, list[str]]:
    """Pair-evaluate a universally prefixed formula; on failure re-evaluate
    the body per environment to collect witnesses."""
    formula = body
    for var, sort in reversed(prefix):
        formula = fm.Forall(var, sort, formula)
    holds = eval_pair(formula, interp).pos
    failures: list[str] = []
    if not holds:
        ranges = [range(interp.sorts[sort]) for _, sort in prefix]
        for combo in itertools.product(*ranges):
            env = {var: value for (var, _), value in zip(prefix, combo)}
            if not eval_pair(body, interp, env).pos:
                failures.append(describe(env))
                if len(failures) >= limit:
                    break
    return holds, failures


def _describe_env(carrier: FiniteCarrier, prefix):
    def describe(env: dict[str, int]) -> str:
        parts = []
        for var, sort in prefix:
            value = env[var]
            parts.append(
                f"{var}={carrier.subset_str(value)}" if sort.startswith("SUB") else f"{var}={value}"
            )
        return ", ".join(parts)

    return describe


def check_operator_axioms(op: InteriorOperator, level: str = "full") -> OperatorAxiomReport:
    if level not in LEVEL_AXIOMS:
        raise ValueError(f"level must be one of {sorted(LEVEL_AXIOMS)}, got {level!r}")
    interp = _operator_interp(op)
    required = set(LEVEL_AXIOMS[level])
    results = []
    for name, (prefix, body) in _axiom_specs(op.carrier.full).items():
        holds, failures = _check_prefixed(prefix, body, interp, _describe_env(op.carrier, prefix))
        results.append(AxiomResult(name, name in required, holds, failures))
    return OperatorAxiomReport(level, results)


# ---------------------------------------------------------------------------
# Bases
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BasisFamily:
    carrier: FiniteCarrier
    members: tuple[int, ...]


def _basis_interp(basis: BasisFamily) -> Interpretation:
    c = basis.carrier
    bmem = {
        (i, x): c.mem_pair(member, x)
        for i, member in enumerate(basis.members)
        for x in c.points
    }
    bincl = {
        (i, s): c.incl_pair(member, s)
        for i, member in enumerate(basis.members)
        for s in range(c.n_subsets)
    }
    bincl2 = {
        (i, j): c.incl_pair(mi, mj)
        for i, mi in enumerate(basis.members)
        for j, mj in enumerate(basis.members)
    }
    mem = {(s, x): c.mem_pair(s, x) for s in range(c.n_subsets) for x in c.points}
    return Interpretation(
        sorts={"I": len(basis.members), "SUB": c.n_subsets, "X": c.size},
        atoms={
            "bmem": _table(("I", "X"), bmem),
            "bincl": _table(("I", "SUB"), bincl),
            "bincl2": _table(("I", "I"), bincl2),
            "mem": _table(("SUB", "X"), mem),
        },
    )


_BASIS_INT_FORMULA = fm.Exists(
    "i", "I", fm.Tensor(fm.Atom("bmem", ("i", "x")), fm.Atom("bincl", ("i", "s")))
)


def basis_interior(basis: BasisFamily) -> InteriorOperator:
    """int s = {x | some member contains x and is included in s}."""
    c = basis.carrier
    interp = _basis_interp(basis)
    table = []
    for s in range(c.n_subsets):
        trits = tuple(
            trit_of_pair(eval_pair(_BASIS_INT_FORMULA, interp, {"s": s, "x": x}))
            for x in c.points
        )
        table.append(c.index[trits])
    return InteriorOperator(c, tuple(table))


_BASIS_COND1 = ((("x", "X"),), fm.Exists("i", "I", fm.Atom("bmem", ("i", "x"))))
_BASIS_COND2 = (
    (("x", "X"), ("i0", "I"), ("i1", "I")),
    fm.Lollipop(
        fm.Tensor(fm.Atom("bmem", ("i0", "x")), fm.Atom("bmem", ("i1", "x"))),
        fm.Exists(
            "i2",
            "I",
            fm.Tensor(
                fm.Atom("bmem", ("i2", "x")),
                fm.With(fm.Atom("bincl2", ("i2", "i0")), fm.Atom("bincl2", ("i2", "i1"))),
            ),
        ),
    ),
)


@dataclass
class BasisReport:
    condition1: bool
    condition2: bool
    failures: list[str] = field(default_factory=list)

    @property
    def is_basis(self) -> bool:
        return self.condition1 and self.condition2


def check_basis(basis: BasisFamily) -> BasisReport:
    interp = _basis_interp(basis)
    out = []
    failures = []
    for prefix, body in (_BASIS_COND1, _BASIS_COND2):
        holds, fails = _check_prefixed(prefix, body, interp, _describe_env(basis.carrier, prefix))
        out.append(holds)
        failures.extend(fails)
    return BasisReport(out[0], out[1], failures)


def is_basis(basis: BasisFamily) -> bool:
    return check_basis(basis).is_basis


# ---------------------------------------------------------------------------
# Open-set collections and the operator correspondence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OpenCollection:
    """Three-valued collection of open subsets: one trit per subset."""

    carrier: FiniteCarrier
    trits: tuple[int, ...]

    def pair(self, s: int) -> PairValue:
        return PAIR_OF_TRIT[self.trits[s]]


def opens_from_interior(op: InteriorOperator) -> OpenCollection:
    """O = {s | s within int s}."""
    c = op.carrier
    return OpenCollection(
        c, tuple(trit_of_pair(c.incl_pair(s, op.table[s])) for s in range(c.n_subsets))
    )


def _union_subset(opens: OpenCollection, s: int) -> int:
    """{x | exists t, (t in O) tensor (t within s) tensor (x in t)} as a subset."""
    c = opens.carrier
    trits = []
    for x in c.points:
        values = (
            pair_tensor(
                pair_tensor(opens.pair(t), c.incl_pair(t, s)), c.mem_pair(t, x)
            )
            for t in range(c.n_subsets)
        )
        pos, neg = False, True
        for v in values:
            pos = pos or v.pos
            neg = neg and v.neg
        trits.append(trit_of_pair(PairValue(pos, neg)))
    return c.index[tuple(trits)]


def interior_from_opens(opens: OpenCollection) -> InteriorOperator:
    c = opens.carrier
    return InteriorOperator(c, tuple(_union_subset(opens, s) for s in range(c.n_subsets)))


def _opens_interp(opens: OpenCollection) -> Interpretation:
    c = opens.carrier
    subs = range(c.n_subsets)
    mem = {(s, x): c.mem_pair(s, x) for s in subs for x in c.points}
    in_opens = {(s,): opens.pair(s) for s in subs}
    union_open = {(s,): opens.pair(_union_subset(opens, s)) for s in subs}
    box_incl = {
        (s, t, u): c.incl_pair(c.box[s][t], u) for s in subs for t in subs for u in subs
    }
    meet_incl = {
        (u, s, t): c.incl_pair(u, c.meet[s][t]) for u in subs for s in subs for t in subs
    }
    return Interpretation(
        sorts={"SUB": c.n_subsets, "X": c.size},
        atoms={
            "mem": _table(("SUB", "X"), mem),
            "in_opens": _table(("SUB",), in_opens),
            "union_open": _table(("SUB",), union_open),
            "box_incl": _table(("SUB", "SUB", "SUB"), box_incl),
            "meet_incl": _table(("SUB", "SUB", "SUB"), meet_incl),
        },
    )


def _opens_axiom_specs(full_index: int):
    o1 = fm.Lollipop(
        fm.Atom("in_opens", ("s",)),
        fm.Lollipop(
            fm.Tensor(_incl_formula("s", "t", "x"), _incl_formula("t", "s", "x")),
            fm.Atom("in_opens", ("t",)),
        ),
    )
    o2 = fm.Atom("union_open", ("s",))
    o3 = fm.Atom("in_opens", (full_index,))
    o4 = fm.Lollipop(
        fm.Tensor(fm.Atom("in_opens", ("s",)), fm.Atom("in_opens", ("t",))),
        fm.Exists(
            "u",
            "SUB",
            fm.Tensor(
                fm.Atom("in_opens", ("u",)),
                fm.Tensor(fm.Atom("box_incl", ("s", "t", "u")), fm.Atom("meet_incl", ("u", "s", "t"))),
            ),
        ),
    )
    return {
        "O1": ((("s", "SUB"), ("t", "SUB")), o1),
        "O2": ((("s", "SUB"),), o2),
        "O3": ((), o3),
        "O4": ((("s", "SUB"), ("t", "SUB")), o4),
    }


LEVEL_OPENS = {"moore": ("O1", "O2"), "full": ("O1", "O2", "O3", "O4")}


def check_opens_axioms(opens: OpenCollection, level: str = "full") -> OperatorAxiomReport:
    if level not in LEVEL_OPENS:
        raise ValueError(f"level must be one of {sorted(LEVEL_OPENS)}, got {level!r}")
    interp = _opens_interp(opens)
    required = set(LEVEL_OPENS[level])
    results = []
    for name, (prefix, body) in _opens_axiom_specs(opens.carrier.full).items():
        holds, failures = _check_prefixed(
            prefix, body, interp, _describe_env(opens.carrier, prefix)
        )
        results.append(AxiomResult(name, name in required, holds, failures))
    return OperatorAxiomReport(level, results)


@dataclass
class RoundtripReport:
    opens_report: OperatorAxiomReport
    agreement: bool
    disagreements: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.opens_report.passed and self.agreement


def roundtrip_check(op: InteriorOperator, level: str = "moore") -> RoundtripReport:
    """Derived opens satisfy O1/O2 (O3/O4 too at level "full"), and the
    interior rebuilt from them agrees with the original up to mutual
    inclusion on every subset."""
    c = op.carrier
    opens = opens_from_interior(op)
    opens_report = check_opens_axioms(opens, level)
    rebuilt = interior_from_opens(opens)
    disagreements = [
        f"s={c.subset_str(s)}: int {c.subset_str(op.table[s])} "
        f"vs rebuilt {c.subset_str(rebuilt.table[s])}"
        for s in range(c.n_subsets)
        if not c.equivalent(op.table[s], rebuilt.table[s])
    ]
    return RoundtripReport(opens_report, not disagreements, disagreements[:5])


@dataclass
class UnionOfOpensReport:
    families_checked: int
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def union_of_opens_check(op: InteriorOperator, max_family: int = 3) -> UnionOfOpensReport:
    """Indexed families of positively open subsets have positively open
    (additive) unions under a Moore operator."""
    c = op.carrier
    open_subsets = [s for s in range(c.n_subsets) if c.incl_pair(s, op.table[s]).pos]
    report = UnionOfOpensReport(0)
    for size in range(1, max_family + 1):
        for family in itertools.combinations_with_replacement(open_subsets, size):
            trits = []
            for x in c.points:
                pos = any(c.mem_pair(s, x).pos for s in family)
                neg = all(c.mem_pair(s, x).neg for s in family)
                trits.append(trit_of_pair(PairValue(pos, neg)))
            union = c.index[tuple(trits)]
            report.families_checked += 1
            if not c.incl_pair(union, op.table[union]).pos:
                report.failures.append(
                    "family " + ",".join(c.subset_str(s) for s in family)
                )
    return report


# ---------------------------------------------------------------------------
# Products
# ---------------------------------------------------------------------------

def product_points(cx: FiniteCarrier, cy: FiniteCarrier):
    """Flat index z = x * |Y| + y."""
    return [(x, y) for x in cx.points for y in cy.points]


def _product_subset(cx, cy, cp, u: int, v: int, combine) -> int:
    trits = tuple(
        trit_of_pair(combine(cx.mem_pair(u, x), cy.mem_pair(v, y)))
        for x, y in product_points(cx, cy)
    )
    return cp.index[trits]


_PRODUCT_FORMULA = fm.Exists(
    "u",
    "SUBX",
    fm.Exists(
        "v",
        "SUBY",
        fm.Tensor(
            fm.Tensor(fm.Atom("int_mem_x", ("u", "x")), fm.Atom("int_mem_y", ("v", "y"))),
            fm.Atom("prod_incl", ("u", "v", "s")),
        ),
    ),
)


def product_interior(opx: InteriorOperator, opy: InteriorOperator, flavor: str) -> InteriorOperator:
    """int s = {z | exists u, v with z in (int u) x-tensor (int v) and
    u x-flavor v within s}; flavor is "tensor" or "with"."""
    if flavor not in ("tensor", "with"):
        raise ValueError(f"flavor must be 'tensor' or 'with', got {flavor!r}")
    cx, cy = opx.carrier, opy.carrier
    cp = FiniteCarrier(cx.size * cy.size)
    combine = pair_tensor if flavor == "tensor" else pair_with
    prod_incl = {
        (u, v, s): cp.incl_pair(_product_subset(cx, cy, cp, u, v, combine), s)
        for u in range(cx.n_subsets)
        for v in range(cy.n_subsets)
        for s in range(cp.n_subsets)
    }
    int_mem_x = {
        (u, x): cx.mem_pair(opx.table[u], x) for u in range(cx.n_subsets) for x in cx.points
    }
    int_mem_y = {
        (v, y): cy.mem_pair(opy.table[v], y) for v in range(cy.n_subsets) for y in cy.points
    }
    interp = Interpretation(
        sorts={
            "SUBX": cx.n_subsets,
            "SUBY": cy.n_subsets,
            "SUBP": cp.n_subsets,
            "X": cx.size,
            "Y": cy.size,
        },
        atoms={
            "int_mem_x": _table(("SUBX", "X"), int_mem_x),
            "int_mem_y": _table(("SUBY", "Y"), int_mem_y),
            "prod_incl": _table(("SUBX", "SUBY", "SUBP"), prod_incl),
        },
    )
    points = product_points(cx, cy)
    table = []
    for s in range(cp.n_subsets):
        trits = tuple(
            trit_of_pair(eval_pair(_PRODUCT_FORMULA, interp, {"s": s, "x": x, "y": y}))
            for x, y in points
        )
        table.append(cp.index[trits])
    return InteriorOperator(cp, tuple(table))


@dataclass
class ProductAxiomReport:
    tensor_report: OperatorAxiomReport
    with_report: OperatorAxiomReport
    with_i3_holds: bool  # informational; the with-flavor does not claim I3

    @property
    def passed(self) -> bool:
        return self.tensor_report.passed and self.with_report.passed


def product_axiom_check(opx: InteriorOperator, opy: InteriorOperator) -> ProductAxiomReport:
    tensor_op = product_interior(opx, opy, "tensor")
    with_op = product_interior(opx, opy, "with")
    tensor_report = check_operator_axioms(tensor_op, "full")
    with_report = check_operator_axioms(with_op, "cech")
    return ProductAxiomReport(tensor_report, with_report, with_report.result("I3").holds)


# ---------------------------------------------------------------------------
# Filters
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SubsetFilter:
    """Three-valued subset of the power set: one trit per subset."""

    carrier: FiniteCarrier
    trits: tuple[int, ...]

    def pair(self, s: int) -> PairValue:
        return PAIR_OF_TRIT[self.trits[s]]


def _filter_interp(flt: SubsetFilter) -> Interpretation:
    c = flt.carrier
    subs = range(c.n_subsets)
    mem = {(s, x): c.mem_pair(s, x) for s in subs for x in c.points}
    in_filter = {(s,): flt.pair(s) for s in subs}
    box_in_filter = {(s, t): flt.pair(c.box[s][t]) for s in subs for t in subs}
    return Interpretation(
        sorts={"SUB": c.n_subsets, "X": c.size},
        atoms={
            "mem": _table(("SUB", "X"), mem),
            "in_filter": _table(("SUB",), in_filter),
            "box_in_filter": _table(("SUB", "SUB"), box_in_filter),
        },
    )


def filter_formula(full_index: int) -> fm.AffineFormula:
    """!(monotone tensor inhabited-by-X tensor closed-under-box)."""
    monotone = fm.Forall(
        "s",
        "SUB",
        fm.Forall(
            "t",
            "SUB",
            fm.Lollipop(
                fm.Atom("in_filter", ("s",)),
                fm.Lollipop(_incl_formula("s", "t", "x"), fm.Atom("in_filter", ("t",))),
            ),
        ),
    )
    inhabited = fm.Atom("in_filter", (full_index,))
    closed = fm.Forall(
        "s",
        "SUB",
        fm.Forall(
            "t",
            "SUB",
            fm.Lollipop(
                fm.Tensor(fm.Atom("in_filter", ("s",)), fm.Atom("in_filter", ("t",))),
                fm.Atom("box_in_filter", ("s", "t")),
            ),
        ),
    )
    return fm.OfCourse(fm.Tensor(monotone, fm.Tensor(inhabited, closed)))


def filter_pair_value(flt: SubsetFilter) -> PairValue:
    """Pair-evaluate the filter definition formula on this table."""
    return eval_pair(filter_formula(flt.carrier.full), _filter_interp(flt))


def _is_filter_trits(c: FiniteCarrier, trits: Sequence[int]) -> bool:
    # Value-level positive part of the filter formula; agrees with
    # filter_pair_value(...).pos (cross-checked in the test suite).
    if trits[c.full] != TRIT_POS:
        return False
    n = c.n_subsets
    incl_pos, incl_neg = c.incl_pos, c.incl_neg
    for s in range(n):
        fs = trits[s]
        ip_row, in_row = incl_pos[s], incl_neg[s]
        for t in range(n):
            ft = trits[t]
            bp = ip_row[t]
            if fs == TRIT_POS:
                if bp and ft != TRIT_POS:
                    return False
                if ft == TRIT_NEG and not in_row[t]:
                    return False
            if bp and ft == TRIT_NEG and fs != TRIT_NEG:
                return False
    box = c.box
    for s in range(n):
        fs = trits[s]
        box_row = box[s]
        for t in range(n):
            ft = trits[t]
            fk = trits[box_row[t]]
            if fs == TRIT_POS and ft == TRIT_POS and fk != TRIT_POS:
                return False
            if fk == TRIT_NEG:
                if not (
                    (fs != TRIT_POS or ft == TRIT_NEG)
                    and (ft != TRIT_POS or fs == TRIT_NEG)
                ):
                    return False
    return True


def is_filter(flt: SubsetFilter) -> bool:
    return _is_filter_trits(flt.carrier, flt.trits)


_FILTER_CACHE: dict[int, tuple[SubsetFilter, ...]] = {}


def enumerate_filters(carrier: FiniteCarrier) -> tuple[SubsetFilter, ...]:
    """All three-valued filter tables; hard-capped at two-point carriers."""
    if carrier.size > MAX_FILTER_CARRIER:
        raise BudgetError(
            f"filter enumeration is capped at carriers of size {MAX_FILTER_CARRIER}"
        )
    if carrier.size not in _FILTER_CACHE:
        found = tuple(
            SubsetFilter(carrier, trits)
            for trits in itertools.product(range(3), repeat=carrier.n_subsets)
            if _is_filter_trits(carrier, trits)
        )
        _FILTER_CACHE[carrier.size] = found
    return _FILTER_CACHE[carrier.size]


def reachable_mult_unions(carrier: FiniteCarrier, family: Sequence[int]) -> frozenset[int]:
    """Subset values of all finite multiplicative-union folds over the family
    (with repetitions), including the empty fold's unit."""
    seen = {carrier.empty}
    frontier = {carrier.empty}
    while frontier:
        new = set()
        for v in frontier:
            for u in family:
                w = carrier.madd[u][v]
                if w not in seen:
                    new.add(w)
        seen |= new
        frontier = new
    return frozenset(seen)


def family_filter_table(carrier: FiniteCarrier, family: Sequence[int]) -> SubsetFilter:
    """The filter of the finite-subcover lemma: subsets whose complement is
    included in some finite multiplicative union of family members."""
    folds = sorted(reachable_mult_unions(carrier, family))
    trits = []
    for s in range(carrier.n_subsets):
        comp = carrier.comp[s]
        pos = any(carrier.incl_pos[comp][v] for v in folds)
        neg = all(carrier.incl_neg[comp][v] for v in folds)
        trits.append(trit_of_pair(PairValue(pos, neg)))
    return SubsetFilter(carrier, tuple(trits))


# ---------------------------------------------------------------------------
# Compactness
# ---------------------------------------------------------------------------

def cluster_positive(op: InteriorOperator, flt: SubsetFilter, x: int, clo=None) -> bool:
    """Positive part of: every filter member's closure contains x."""
    c = op.carrier
    clo = op.clo_table() if clo is None else clo
    for t in range(c.n_subsets):
        ft = flt.trits[t]
        ct = c.subsets[clo[t]][x]
        if ft == TRIT_POS and ct != TRIT_POS:
            return False
        if ct == TRIT_NEG and ft != TRIT_NEG:
            return False
    return True


def is_compact_bruteforce(s: int, op: InteriorOperator) -> bool:
    """For every enumerated filter positively excluding the complement of s,
    some point is positively in s and positively a cluster point."""
    c = op.carrier
    comp_s = c.comp[s]
    clo = op.clo_table()
    for flt in enumerate_filters(c):
        if flt.trits[comp_s] != TRIT_NEG:
            continue
        if not any(
            c.subsets[s][x] == TRIT_POS and cluster_positive(op, flt, x, clo)
            for x in c.points
        ):
            return False
    return True


def compact_subsets(op: InteriorOperator) -> tuple[int, ...]:
    return tuple(
        s for s in range(op.carrier.n_subsets) if is_compact_bruteforce(s, op)
    )


def preimage_subset(cx: FiniteCarrier, cy: FiniteCarrier, f: Sequence[int], t: int) -> int:
    return cx.index[tuple(cy.subsets[t][f[x]] for x in cx.points)]


def image_subset(cx: FiniteCarrier, cy: FiniteCarrier, f: Sequence[int], s: int) -> int:
    """f(s) = {y | for every t, s within f^-1(t) implies y in t}."""
    trits = []
    for y in cy.points:
        pos, neg = True, False
        for t in range(cy.n_subsets):
            pre = preimage_subset(cx, cy, f, t)
            incl = cx.incl_pair(s, pre)
            ty = cy.subsets[t][y]
            if incl.pos and ty != TRIT_POS:
                pos = False
            if ty == TRIT_NEG and not incl.neg:
                pos = False
            if incl.pos and ty == TRIT_NEG:
                neg = True
        trits.append(trit_of_pair(PairValue(pos, neg)))
    return cy.index[tuple(trits)]


def continuity_positive(
    f: Sequence[int], opx: InteriorOperator, opy: InteriorOperator
) -> bool:
    """Positive part of: f^-1(int t) within int f^-1(t), for every t."""
    cx, cy = opx.carrier, opy.carrier
    for t in range(cy.n_subsets):
        lhs = preimage_subset(cx, cy, f, opy.table[t])
        rhs = opx.table[preimage_subset(cx, cy, f, t)]
        if not cx.incl_pair(lhs, rhs).pos:
            return False
    return True


def operator_zoo(carrier: FiniteCarrier) -> dict[str, InteriorOperator]:
    """The documented operators used for brute-force proposition checks."""
    singletons = tuple(
        carrier.index[tuple(TRIT_POS if x == p else TRIT_UND for x in carrier.points)]
        for p in carrier.points
    )
    decidable_singletons = tuple(
        carrier.index[tuple(TRIT_POS if x == p else TRIT_NEG for x in carrier.points)]
        for p in carrier.points
    )
    return {
        "discrete": discrete_operator(carrier),
        "indiscrete": indiscrete_operator(carrier),
        "basis_singletons": basis_interior(BasisFamily(carrier, singletons)),
        "basis_decidable": basis_interior(BasisFamily(carrier, decidable_singletons)),
        "basis_whole": basis_interior(BasisFamily(carrier, (carrier.full,))),
    }


@dataclass
class CheckSection:
    name: str
    instances: int = 0
    counterexamples: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.counterexamples

    def record(self, ok: bool, describe) -> None:
        self.instances += 1
        if not ok and len(self.counterexamples) < 10:
            self.counterexamples.append(describe())


@dataclass
class CompactnessReport:
    sections: list[CheckSection] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)


def _whynot_union_of_interiors(op: InteriorOperator, family: Sequence[int]) -> list[PairValue]:
    c = op.carrier
    out = []
    for x in c.points:
        neg = all(c.mem_pair(op.table[u], x).neg for u in family)
        out.append(PairValue(not neg, neg))
    return out


def check_compactness_props(max_carrier: int = 2, max_family: int = 2) -> CompactnessReport:
    """Brute-force the compactness propositions on carriers of size 1..2:
    the finite-subcover lemma's families induce filters, covered compact
    subsets admit finite multiplicative-union subcovers, closed subsets cut
    compactness down (additively for decidable ones, multiplicatively for
    self-tensor ones), compactness respects mutual inclusion, and continuous
    images of compact subsets are compact."""
    if max_carrier > MAX_FILTER_CARRIER:
        raise BudgetError(f"compactness checks are capped at carriers of size {MAX_FILTER_CARRIER}")
    report = CompactnessReport()
    isfilter = CheckSection("lemma_isfilter")
    subcover = CheckSection("finite_subcover")
    closed_add = CheckSection("closed_in_compact_additive")
    closed_mult = CheckSection("closed_in_compact_multiplicative")
    invariance = CheckSection("mutual_inclusion_invariance")
    image = CheckSection("image_of_compact")
    report.sections = [isfilter, subcover, closed_add, closed_mult, invariance, image]

    carriers = [FiniteCarrier(m) for m in range(1, max_carrier + 1)]
    zoos = {c.size: operator_zoo(c) for c in carriers}
    compacts = {
        (c.size, name): compact_subsets(op)
        for c in carriers
        for name, op in zoos[c.size].items()
    }

    for c in carriers:
        families = [()]
        for size in range(1, max_family + 1):
            families.extend(itertools.combinations_with_replacement(range(c.n_subsets), size))
        for family in families:
            flt = family_filter_table(c, family)
            isfilter.record(
                is_filter(flt),
                lambda c=c, family=family: (
                    f"m={c.size} family=" + ",".join(c.subset_str(u) for u in family)
                ),
            )

        for op_name, op in zoos[c.size].items():
            for s in compacts[(c.size, op_name)]:
                for family in families:
                    if not family:
                        continue
                    whynot = _whynot_union_of_interiors(op, family)
                    hyp = all(
                        ((c.mem_pair(s, x).pos and not whynot[x].pos) is False)
                        and ((whynot[x].neg and not c.mem_pair(s, x).neg) is False)
                        for x in c.points
                    )
                    if not hyp:
                        continue
                    folds = reachable_mult_unions(c, family)
                    subcover.record(
                        any(c.incl_pos[s][v] for v in folds),
                        lambda c=c, op_name=op_name, s=s, family=family: (
                            f"m={c.size} op={op_name} s={c.subset_str(s)} family="
                            + ",".join(c.subset_str(u) for u in family)
                        ),
                    )

                clo = op.clo_table()
                compact_here = set(compacts[(c.size, op_name)])
                for cc in range(c.n_subsets):
                    closed = c.incl_pair(clo[cc], cc).pos
                    if not closed:
                        continue
                    decidable = c.incl_pair(c.full, c.join[cc][c.comp[cc]]).pos
                    for s in compacts[(c.size, op_name)]:
                        if decidable:
                            closed_add.record(
                                c.meet[s][cc] in compact_here,
                                lambda c=c, op_name=op_name, s=s, cc=cc: (
                                    f"m={c.size} op={op_name} s={c.subset_str(s)} c={c.subset_str(cc)}"
                                ),
                            )
                        if c.incl_pair(cc, c.box[cc][cc]).pos:
                            closed_mult.record(
                                c.box[s][cc] in compact_here,
                                lambda c=c, op_name=op_name, s=s, cc=cc: (
                                    f"m={c.size} op={op_name} s={c.subset_str(s)} c={c.subset_str(cc)}"
                                ),
                            )

                for s in compacts[(c.size, op_name)]:
                    for t in range(c.n_subsets):
                        if c.equivalent(s, t):
                            invariance.record(
                                t in compact_here,
                                lambda c=c, op_name=op_name, s=s, t=t: (
                                    f"m={c.size} op={op_name} s={c.subset_str(s)} t={c.subset_str(t)}"
                                ),
                            )

    for cx in carriers:
        for cy in carriers:
            for f in itertools.product(cy.points, repeat=cx.size):
                for nx, opx in zoos[cx.size].items():
                    for ny, opy in zoos[cy.size].items():
                        if not continuity_positive(f, opx, opy):
                            continue
                        compact_target = set(compacts[(cy.size, ny)])
                        for s in compacts[(cx.size, nx)]:
                            fs = image_subset(cx, cy, f, s)
                            image.record(
                                fs in compact_target,
                                lambda cx=cx, cy=cy, f=f, nx=nx, ny=ny, s=s, fs=fs: (
                                    f"f={f} ops=({nx},{ny}) s={cx.subset_str(s)} "
                                    f"image={cy.subset_str(fs)}"
                                ),
                            )

    return report


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def operator_to_dict(op: InteriorOperator) -> dict:
    c = op.carrier
    return {
        "kind": "operator",
        "carrier": c.size,
        "table": {c.subset_str(s): c.subset_str(op.table[s]) for s in range(c.n_subsets)},
    }


def basis_to_dict(basis: BasisFamily) -> dict:
    c = basis.carrier
    return {
        "kind": "basis",
        "carrier": c.size,
        "members": [c.subset_str(s) for s in basis.members],
    }


def filter_to_dict(flt: SubsetFilter) -> dict:
    c = flt.carrier
    codes = {TRIT_POS: "pos", TRIT_NEG: "neg", TRIT_UND: "und"}
    return {
        "kind": "filter",
        "carrier": c.size,
        "table": {c.subset_str(s): codes[flt.trits[s]] for s in range(c.n_subsets)},
    }


def table_from_dict(data: dict):
    try:
        kind = data["kind"]
        carrier = FiniteCarrier(int(data["carrier"]))
        if kind == "operator":
            table = [carrier.empty] * carrier.n_subsets
            for key, value in data["table"].items():
                table[carrier.subset_index(key)] = carrier.subset_index(value)
            if len(data["table"]) != carrier.n_subsets:
                raise ValueError("operator table must cover every subset")
            return InteriorOperator(carrier, tuple(table))
        if kind == "basis":
            return BasisFamily(carrier, tuple(carrier.subset_index(s) for s in data["members"]))
        if kind == "filter":
            codes = {"pos": TRIT_POS, "neg": TRIT_NEG, "und": TRIT_UND}
            trits = [TRIT_UND] * carrier.n_subsets
            for key, value in data["table"].items():
                trits[carrier.subset_index(key)] = codes[value]
            if len(data["table"]) != carrier.n_subsets:
                raise ValueError("filter table must cover every subset")
            return SubsetFilter(carrier, tuple(trits))
        raise ValueError(f"unknown table kind {kind!r}")
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed table document: {exc}") from exc


def load_table(path):
    with open(path, "r", encoding="utf-8") as fh:
        return table_from_dict(json.load(fh))
