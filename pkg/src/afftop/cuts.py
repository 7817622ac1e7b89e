"""Exact rationals with infinities, interval-domain cuts, complemented
subsets, and the interval lemma suite.

A cut is a pair of extended rationals lower <= upper standing for the
interval-domain element whose lowercut is {q | q < lower} and whose uppercut
is {q | upper < q}.  The four order predicates of a rational against a cut
are then decidable comparisons; the stipulated constants -inf < x, -inf <= x,
x < inf, x <= inf are true, and their mirror images false.

Complemented subsets are (pos, neg) predicate pairs; their algebra delegates
pointwise to the pair-value operations so the subset operators and the
formula semantics share one source of truth.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Union

from .semantics import (
    PairValue,
    pair_lneg,
    pair_ofcourse,
    pair_par,
    pair_plus,
    pair_tensor,
    pair_whynot,
    pair_with,
)


# ---------------------------------------------------------------------------
# Extended rationals
# ---------------------------------------------------------------------------

class Infinity:
    """Signed infinity, totally ordered against Fraction."""

    __slots__ = ("positive",)

    def __init__(self, positive: bool):
        self.positive = positive

    def __repr__(self) -> str:
        return "inf" if self.positive else "-inf"

    def __neg__(self) -> "Infinity":
        return POS_INF if self is NEG_INF else NEG_INF

    def __eq__(self, other) -> bool:
        return isinstance(other, Infinity) and other.positive == self.positive

    def __hash__(self) -> int:
        return hash(("Infinity", self.positive))

    def __lt__(self, other) -> bool:
        if isinstance(other, Infinity):
            return (not self.positive) and other.positive
        return not self.positive

    def __gt__(self, other) -> bool:
        if isinstance(other, Infinity):
            return self.positive and not other.positive
        return self.positive

    def __le__(self, other) -> bool:
        return self == other or self < other

    def __ge__(self, other) -> bool:
        return self == other or self > other


POS_INF = Infinity(True)
NEG_INF = Infinity(False)

Ext = Union[Fraction, Infinity]


def is_finite(v: Ext) -> bool:
    return not isinstance(v, Infinity)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def parse_ext(text: str) -> Ext:
    stripped = text.strip()
    if stripped == "inf":
        return POS_INF
    if stripped == "-inf":
        return NEG_INF
    return parse_rational(stripped)


def format_ext(v: Ext) -> str:
    if isinstance(v, Infinity):
        return repr(v)
    return str(v)


# ---------------------------------------------------------------------------
# Cuts and their order predicates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cut:
    lower: Ext
    upper: Ext

    def __post_init__(self):
        if self.upper < self.lower:
            raise ValueError(f"cut requires lower <= upper, got {self}")

    def __repr__(self) -> str:
        return f"Cut({format_ext(self.lower)}, {format_ext(self.upper)})"


def rel_q_lt_x(q: Ext, x: Cut) -> bool:
    """q < x, i.e. q is in the lowercut."""
    if isinstance(q, Infinity):
        return not q.positive
    return q < x.lower


def rel_q_le_x(q: Ext, x: Cut) -> bool:
    """q <= x, i.e. q is in the closed lowercut."""
    if isinstance(q, Infinity):
        return not q.positive
    return q <= x.lower


def rel_x_lt_q(x: Cut, q: Ext) -> bool:
    """x < q, i.e. q is in the uppercut."""
    if isinstance(q, Infinity):
        return q.positive
    return x.upper < q


def rel_x_le_q(x: Cut, q: Ext) -> bool:
    """x <= q, i.e. q is in the closed uppercut."""
    if isinstance(q, Infinity):
        return q.positive
    return x.upper <= q


class CutRelations(NamedTuple):
    q_lt_x: bool
    q_le_x: bool
    x_lt_q: bool
    x_le_q: bool


def cut_relations(q: Fraction, x: Cut) -> CutRelations:
    """The four order relations of a rational against a cut."""
    return CutRelations(rel_q_lt_x(q, x), rel_q_le_x(q, x), rel_x_lt_q(x, q), rel_x_le_q(x, q))


# ---------------------------------------------------------------------------
# Complemented subsets
# ---------------------------------------------------------------------------

class CSubset:
    """A complemented subset: disjoint (pos, neg) predicates on a carrier.

    Internally a single x -> PairValue function, so stacked subset operations
    evaluate each operand once per point."""

    __slots__ = ("_fn",)

    def __init__(self, pos: Callable, neg: Callable):
        self._fn = lambda x: PairValue(pos(x), neg(x))

    def value_at(self, x) -> PairValue:
        return self._fn(x)

    def pos(self, x) -> bool:
        return self._fn(x).pos

    def neg(self, x) -> bool:
        return self._fn(x).neg

    @classmethod
    def from_value_fn(cls, fn: Callable) -> "CSubset":
        out = cls.__new__(cls)
        out._fn = fn
        return out

    @classmethod
    def from_pairs(cls, values: Iterable[PairValue]) -> "CSubset":
        table = tuple(values)
        return cls.from_value_fn(lambda x: table[x])


def _lift2(op):
    def build(u: CSubset, v: CSubset) -> CSubset:
        return CSubset.from_value_fn(lambda x: op(u.value_at(x), v.value_at(x)))
    return build


mult_union = _lift2(pair_par)        # the translated multiplicative union
mult_meet = _lift2(pair_tensor)      # the translated multiplicative intersection
meet = _lift2(pair_with)             # additive intersection
join = _lift2(pair_plus)             # additive union


def complement_subset(u: CSubset) -> CSubset:
    return CSubset.from_value_fn(lambda x: pair_lneg(u.value_at(x)))


def bang_subset(u: CSubset) -> CSubset:
    return CSubset.from_value_fn(lambda x: pair_ofcourse(u.value_at(x)))


def quest_subset(u: CSubset) -> CSubset:
    return CSubset.from_value_fn(lambda x: pair_whynot(u.value_at(x)))


# Unit of the multiplicative-union fold: the translation of the empty subset
# (positive part empty, negative part the whole carrier).
MULT_UNION_UNIT = CSubset(lambda x: False, lambda x: True)

EMPTY_SUBSET = MULT_UNION_UNIT
FULL_SUBSET = CSubset(lambda x: True, lambda x: False)


def mult_union_fold(subsets: Iterable[CSubset]) -> CSubset:
    """Right-nested multiplicative-union fold over the empty-subset unit."""
    out = MULT_UNION_UNIT
    for u in reversed(list(subsets)):
        out = mult_union(u, out)
    return out


class InclusionResult(NamedTuple):
    holds: bool
    witness: object  # a carrier point where an inclusion fails, or None


def included(u: CSubset, v: CSubset, points: Iterable) -> InclusionResult:
    """u+ within v+ and v- within u-, checked over the given points."""
    for x in points:
        if u.pos(x) and not v.pos(x):
            return InclusionResult(False, x)
        if v.neg(x) and not u.neg(x):
            return InclusionResult(False, x)
    return InclusionResult(True, None)


# ---------------------------------------------------------------------------
# Interval cuts
# ---------------------------------------------------------------------------

INTERVAL_KINDS = ("closed", "open", "closed-open", "open-closed")


@dataclass(frozen=True)
class IntervalSpec:
    kind: str
    a: Ext
    b: Ext

    def __post_init__(self):
        if self.kind not in INTERVAL_KINDS:
            raise ValueError(f"kind must be one of {INTERVAL_KINDS}, got {self.kind!r}")
        if self.kind in ("closed", "closed-open") and not is_finite(self.a):
            raise ValueError(f"closed left endpoint must be finite: {self}")
        if self.kind in ("closed", "open-closed") and not is_finite(self.b):
            raise ValueError(f"closed right endpoint must be finite: {self}")


def interval_cut(spec: IntervalSpec) -> CSubset:
    """The four interval translations to complemented subsets of cuts."""
    a, b = spec.a, spec.b
    if spec.kind == "closed":
        return CSubset(
            lambda x: rel_q_le_x(a, x) and rel_x_le_q(x, b),
            lambda x: ((not rel_q_le_x(a, x)) or rel_q_lt_x(b, x))
            and ((not rel_x_le_q(x, b)) or rel_x_lt_q(x, a)),
        )
    if spec.kind == "open":
        return CSubset(
            lambda x: rel_q_lt_x(a, x) and rel_x_lt_q(x, b),
            lambda x: ((not rel_q_lt_x(a, x)) or rel_q_le_x(b, x))
            and ((not rel_x_lt_q(x, b)) or rel_x_le_q(x, a)),
        )
    if spec.kind == "closed-open":
        return CSubset(
            lambda x: rel_q_le_x(a, x) and rel_x_lt_q(x, b),
            lambda x: ((not rel_q_le_x(a, x)) or rel_q_le_x(b, x))
            and ((not rel_x_lt_q(x, b)) or rel_x_lt_q(x, a)),
        )
    return CSubset(
        lambda x: rel_q_lt_x(a, x) and rel_x_le_q(x, b),
        lambda x: ((not rel_q_lt_x(a, x)) or rel_q_lt_x(b, x))
        and ((not rel_x_le_q(x, b)) or rel_x_le_q(x, a)),
    )


def closed_cut(a, b) -> CSubset:
    return interval_cut(IntervalSpec("closed", a, b))


def open_cut(a, b) -> CSubset:
    return interval_cut(IntervalSpec("open", a, b))


def closed_open_cut(a, b) -> CSubset:
    return interval_cut(IntervalSpec("closed-open", a, b))


def open_closed_cut(a, b) -> CSubset:
    return interval_cut(IntervalSpec("open-closed", a, b))


# ---------------------------------------------------------------------------
# Grids of cuts
# ---------------------------------------------------------------------------

def grid_values(endpoints: Iterable[Fraction]) -> list[Ext]:
    """Endpoint values, midpoints of consecutive ones, one probe value below
    and above (a lone 0 when there are no endpoints), and both infinities."""
    finite = sorted(set(Fraction(e) for e in endpoints))
    values = set(finite)
    for lo, hi in zip(finite, finite[1:]):
        values.add((lo + hi) / 2)
    if finite:
        values.add(finite[0] - 1)
        values.add(finite[-1] + 1)
    else:
        values.add(Fraction(0))
    return [NEG_INF] + sorted(values) + [POS_INF]


def grid_cuts(endpoints: Iterable[Fraction]) -> list[Cut]:
    """All cuts with endpoints drawn from the enriched value grid."""
    values = grid_values(endpoints)
    return [Cut(l, u) for i, l in enumerate(values) for u in values[i:]]


# ---------------------------------------------------------------------------
# Lemma suite
# ---------------------------------------------------------------------------

@dataclass
class LemmaCheck:
    name: str
    instances: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


@dataclass
class LemmaSuiteReport:
    seed: int
    triples: int
    stability_extra: int
    checks: list[LemmaCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def random_rational(rng: random.Random, span: int = 16) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def _display_implications(a: Fraction, q: Fraction, r: Fraction, x: Cut) -> tuple[bool, bool]:
    """The two pointwise implications unfolding [a,r) within [a,q] mult-union (q,r)."""
    a_le_x = rel_q_le_x(a, x)
    x_lt_r = rel_x_lt_q(x, r)
    q_lt_x = rel_q_lt_x(q, x)
    x_le_q = rel_x_le_q(x, q)
    closed_aq_neg = ((not a_le_x) or q_lt_x) and ((not x_le_q) or rel_x_lt_q(x, a))
    open_qr_pos = q_lt_x and x_lt_r
    open_qr_neg = ((not q_lt_x) or rel_q_le_x(r, x)) and ((not x_lt_r) or x_le_q)
    closed_aq_pos = a_le_x and x_le_q
    first = (not (a_le_x and x_lt_r)) or (
        ((not closed_aq_neg) or open_qr_pos) and ((not open_qr_neg) or closed_aq_pos)
    )
    co_ar_neg = ((not a_le_x) or rel_q_le_x(r, x)) and ((not x_lt_r) or rel_x_lt_q(x, a))
    second = (not (closed_aq_neg and open_qr_neg)) or co_ar_neg
    return first, second


def _check_on_grid(check: LemmaCheck, name_args: str, holds: bool) -> None:
    check.instances += 1
    if not holds:
        check.failures.append(name_args)


def lemma_suite(triples: int = 50, seed: int = 2024, stability_extra: int = 100) -> LemmaSuiteReport:
    """Run the interval lemma facts over canonical grids of random rational
    triples, then re-run each verdict on a grid enriched with random extra
    cuts and require it to be unchanged."""
    rng = random.Random(seed)
    report = LemmaSuiteReport(seed, triples, stability_extra)
    union_lemma = LemmaCheck("interval_union: [a,c) within [a,b] mult-union (b,c)")
    widen = LemmaCheck("b<c gives [a,b] within [a,c)")
    degenerate = LemmaCheck("degenerate [a,b] with a>b: empty positive, total negative")
    display1 = LemmaCheck("first displayed implication of the subcover theorem")
    display2 = LemmaCheck("second displayed implication of the subcover theorem")
    basis1 = LemmaCheck("open-interval basis condition 1: (-inf,inf) contains all cuts")
    basis2 = LemmaCheck("open-interval basis condition 2: meets refine both intervals")
    stability = LemmaCheck("grid stability under added random cuts")
    report.checks = [union_lemma, widen, degenerate, display1, display2, basis1, basis2, stability]

    for _ in range(triples):
        a, b, c = (random_rational(rng) for _ in range(3))
        grids = [grid_cuts([a, b, c])]
        extra = sorted(random_rational(rng, 64) for _ in range(2 * stability_extra))
        extra_cuts = [
            Cut(min(lo, hi), max(lo, hi))
            for lo, hi in zip(extra[0::2], extra[1::2])
        ]
        grids.append(grids[0] + extra_cuts)
        tag = f"(a,b,c)=({a},{b},{c})"

        verdicts = []
        for grid in grids:
            target = closed_open_cut(a, c)
            union = mult_union(closed_cut(a, b), open_cut(b, c))
            verdicts.append(included(target, union, grid).holds)
        _check_on_grid(union_lemma, tag, verdicts[0])
        _check_on_grid(stability, "interval_union " + tag, verdicts[0] == verdicts[1])

        if b < c:
            verdicts = [
                included(closed_cut(a, b), closed_open_cut(a, c), grid).holds for grid in grids
            ]
            _check_on_grid(widen, tag, verdicts[0])
            _check_on_grid(stability, "widen " + tag, verdicts[0] == verdicts[1])

        lo, hi = min(a, b), max(a, b)
        if lo != hi:
            deg = closed_cut(hi, lo)
            verdicts = [
                all(not deg.pos(x) and deg.neg(x) for x in grid) for grid in grids
            ]
            _check_on_grid(degenerate, f"[{hi},{lo}]", verdicts[0])
            _check_on_grid(stability, "degenerate " + tag, verdicts[0] == verdicts[1])

        verdicts1, verdicts2 = [], []
        for grid in grids:
            firsts, seconds = zip(*(_display_implications(a, b, c, x) for x in grid))
            verdicts1.append(all(firsts))
            verdicts2.append(all(seconds))
        _check_on_grid(display1, tag, verdicts1[0])
        _check_on_grid(display2, tag, verdicts2[0])
        _check_on_grid(stability, "display1 " + tag, verdicts1[0] == verdicts1[1])
        _check_on_grid(stability, "display2 " + tag, verdicts2[0] == verdicts2[1])

        q0, r0, q1, r1 = (random_rational(rng) for _ in range(4))
        q2, r2 = max(q0, q1), min(r0, r1)
        pair_grids = [grid_cuts([q0, r0, q1, r1])]
        pair_grids.append(pair_grids[0] + extra_cuts)
        i0, i1, i2 = open_cut(q0, r0), open_cut(q1, r1), open_cut(q2, r2)
        btags = f"(q0,r0,q1,r1)=({q0},{r0},{q1},{r1})"
        verdicts = []
        for grid in pair_grids:
            pointwise = all(
                (not (i0.pos(x) and i1.pos(x))) or i2.pos(x) for x in grid
            )
            refines = included(i2, i0, grid).holds and included(i2, i1, grid).holds
            verdicts.append(pointwise and refines)
        _check_on_grid(basis2, btags, verdicts[0])
        _check_on_grid(stability, "basis2 " + btags, verdicts[0] == verdicts[1])

        whole = open_cut(NEG_INF, POS_INF)
        verdicts = [all(whole.pos(x) for x in grid) for grid in grids]
        _check_on_grid(basis1, tag, verdicts[0])
        _check_on_grid(stability, "basis1 " + tag, verdicts[0] == verdicts[1])

    return report
