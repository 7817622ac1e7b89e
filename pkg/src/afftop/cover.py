"""Finite Heine-Borel engine: decides coverage of [a, b] by finite families
of open rational intervals, extracts the greedy finite subcover, verifies the
cut-level inclusion, and cross-checks the lowercut/uppercut covering
conditions.

Three independent routes must agree on every instance: interval merging
(decide_cover), the greedy sweep (extract_subcover), and the complemented-
subset inclusion over a cut grid (verify_subcover_inclusion).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .cuts import (
    Cut,
    Ext,
    Infinity,
    NEG_INF,
    POS_INF,
    closed_cut,
    format_ext,
    grid_cuts,
    included,
    interval_cut,
    IntervalSpec,
    is_finite,
    mult_union_fold,
    parse_ext,
    parse_rational,
)


@dataclass(frozen=True)
class CoverProblem:
    a: Fraction
    b: Fraction
    family: tuple[tuple[Ext, Ext], ...]


def parse_cover_spec(text: str) -> CoverProblem:
    """Parse "a b ; q1 r1 ; q2 r2 ; ..." with rationals or -inf/inf."""
    chunks = [chunk.strip() for chunk in text.split(";")]
    if not chunks or not chunks[0]:
        raise ValueError("cover spec must start with 'a b'")
    head = chunks[0].split()
    if len(head) != 2:
        raise ValueError(f"expected two interval bounds, got {chunks[0]!r}")
    a, b = parse_rational(head[0]), parse_rational(head[1])
    family = []
    for chunk in chunks[1:]:
        if not chunk:
            continue
        parts = chunk.split()
        if len(parts) != 2:
            raise ValueError(f"expected 'q r' in family entry, got {chunk!r}")
        family.append((parse_ext(parts[0]), parse_ext(parts[1])))
    return CoverProblem(a, b, tuple(family))


def format_cover_spec(p: CoverProblem) -> str:
    entries = " ; ".join(f"{format_ext(q)} {format_ext(r)}" for q, r in p.family)
    head = f"{p.a} {p.b}"
    return f"{head} ; {entries}" if entries else head


@dataclass(frozen=True)
class CoverDecision:
    covered: bool
    witness: Optional[Fraction]  # an uncovered point of [a, b] when not covered


def _merged_components(family) -> list[tuple[Ext, Ext]]:
    """Maximal open components of the union; (q,r) and (r,s) do not merge."""
    nonempty = sorted((q, r) for q, r in family if q < r)
    out: list[tuple[Ext, Ext]] = []
    for q, r in nonempty:
        if out and q < out[-1][1]:
            last_q, last_r = out[-1]
            out[-1] = (last_q, max(last_r, r))
        else:
            out.append((q, r))
    return out


def decide_cover(p: CoverProblem) -> CoverDecision:
    """Coverage of every real point of [a, b]; the failure witness is the
    infimum of the uncovered points, always a or a family endpoint."""
    if p.a > p.b:
        return CoverDecision(True, None)
    for q, r in _merged_components(p.family):
        if q < p.a and p.a < r:
            if p.b < r:
                return CoverDecision(True, None)
            # r is the left edge of the first gap at or left of b.
            return CoverDecision(False, Fraction(r))
    return CoverDecision(False, p.a)


@dataclass(frozen=True)
class SubcoverResult:
    success: bool
    indices: tuple[int, ...]
    witness_chain: tuple[Ext, ...]
    stuck: Optional[Fraction] = None
    verified: bool = False


def extract_subcover(p: CoverProblem, verify: bool = False) -> SubcoverResult:
    """Greedy sweep: from t = a repeatedly take the interval containing t
    with the largest reach (lowest index on ties) until the reach passes b."""
    if p.a > p.b:
        verified = verify_subcover_inclusion(p, ()) if verify else False
        return SubcoverResult(True, (), (), verified=verified)
    t: Ext = p.a
    indices: list[int] = []
    chain: list[Ext] = []
    while True:
        best = -1
        best_reach: Ext = NEG_INF
        for i, (q, r) in enumerate(p.family):
            if q < t and t < r and best_reach < r:
                best = i
                best_reach = r
        if best < 0:
            return SubcoverResult(False, tuple(indices), tuple(chain), stuck=Fraction(t))
        indices.append(best)
        chain.append(best_reach)
        t = best_reach
        if p.b < t:
            break
    verified = verify_subcover_inclusion(p, tuple(indices)) if verify else False
    return SubcoverResult(True, tuple(indices), tuple(chain), verified=verified)


def verify_subcover_inclusion(p: CoverProblem, indices: Iterable[int]) -> bool:
    """[a,b]_cut within the multiplicative-union fold of the selected open
    interval cuts, checked over the canonical grid of the involved endpoints
    (a, b, and the selected intervals' finite endpoints)."""
    endpoints = {p.a, p.b}
    selected = []
    for i in indices:
        q, r = p.family[i]
        selected.append(interval_cut(IntervalSpec("open", q, r)))
        for v in (q, r):
            if is_finite(v):
                endpoints.add(Fraction(v))
    fold = mult_union_fold(selected)
    target = closed_cut(p.a, p.b)
    return included(target, fold, grid_cuts(endpoints)).holds


# ---------------------------------------------------------------------------
# CovL / CovU cross-check
# ---------------------------------------------------------------------------

def reflect_problem(p: CoverProblem) -> CoverProblem:
    """Negate all endpoints and swap pair orders: the CovU mirror of CovL."""
    return CoverProblem(-p.b, -p.a, tuple((-r, -q) for q, r in p.family))


def _in_lowercut(q: Ext, sup: Ext) -> bool:
    # q in L for the lowercut with supremum sup; infinite q by stipulation.
    if isinstance(q, Infinity):
        return not q.positive
    return q < sup


def _in_closed_lowercut(r: Ext, sup: Ext) -> bool:
    # r in the upwards-closure of L.
    if isinstance(r, Infinity):
        return r.positive
    return r <= sup


def covl_at(p: CoverProblem, sup: Ext) -> tuple[bool, bool]:
    """(hypothesis, conclusion) of CovL at the rational-endpoint lowercut
    with the given supremum: if q_i in L implies r_i in closed-L for every
    family member, then a in closed-L implies b in L."""
    hypothesis = all(
        (not _in_lowercut(q, sup)) or _in_closed_lowercut(r, sup) for q, r in p.family
    )
    conclusion = (not _in_closed_lowercut(p.a, sup)) or _in_lowercut(p.b, sup)
    return hypothesis, conclusion


def lowercut_samples(p: CoverProblem) -> list[Ext]:
    finite = {p.a, p.b}
    for q, r in p.family:
        if is_finite(q):
            finite.add(Fraction(q))
        if is_finite(r):
            finite.add(Fraction(r))
    values = sorted(finite)
    samples: list[Ext] = [NEG_INF, POS_INF]
    samples.extend(values)
    samples.extend((lo + hi) / 2 for lo, hi in zip(values, values[1:]))
    samples.append(values[0] - 1)
    samples.append(values[-1] + 1)
    return samples


@dataclass
class CrosscheckReport:
    covered: bool
    reflect_covered: bool
    covl_all_hold: bool
    covl_failures: list[str]

    @property
    def reflect_agrees(self) -> bool:
        return self.covered == self.reflect_covered

    @property
    def covl_consistent(self) -> bool:
        # For finite families the sampled lowercut suprema include every
        # potential gap, so restricted CovL decides coverage exactly.
        return self.covl_all_hold == self.covered

    @property
    def passed(self) -> bool:
        return self.reflect_agrees and self.covl_consistent


def covl_covu_crosscheck(p: CoverProblem) -> CrosscheckReport:
    covered = decide_cover(p).covered
    reflected = decide_cover(reflect_problem(p)).covered
    failures = []
    for sup in lowercut_samples(p):
        hypothesis, conclusion = covl_at(p, sup)
        if hypothesis and not conclusion:
            failures.append(f"lowercut sup {format_ext(sup)}")
    return CrosscheckReport(covered, reflected, not failures, failures)
