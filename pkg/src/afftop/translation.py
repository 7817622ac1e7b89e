"""Antithesis translation: an affine formula P maps to intuitionistic (P+, P-).

Every connective row is implemented literally; P -o Q is handled through its
expansion ~P @ Q, whose rows simplify to

    (P -o Q)+ = (P+ -> Q+) /\\ (Q- -> P-)
    (P -o Q)- = P+ /\\ Q-

An atom `a` becomes the polarity-marked pair of atoms `a+` and `a-`; an
interpretation supplies both halves jointly.

The optional simplification drops, in the positive part of A -o ?B only, the
conjunct A+ -> ~B- that is already entailed by disjointness, leaving B- -> A-.
It is never applied implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import (
    AffineFormula,
    And,
    Atom,
    BigPar,
    BigTensor,
    Bot,
    Exists,
    Forall,
    Implies,
    IntAtom,
    IntExists,
    IntFalse,
    IntForall,
    IntFormula,
    IntTrue,
    LinNeg,
    Lollipop,
    Not,
    OfCourse,
    Or,
    Par,
    Plus,
    Tensor,
    Top,
    WhyNot,
    With,
    _unfold_big,
)


@dataclass(frozen=True)
class TranslationPair:
    pos: IntFormula
    neg: IntFormula


def _is_neg_then_whynot(f: AffineFormula) -> tuple[AffineFormula, AffineFormula] | None:
    """Match A -o ?B, also in its expanded form ~A @ ?B."""
    if isinstance(f, Lollipop) and isinstance(f.right, WhyNot):
        return f.left, f.right.body
    if isinstance(f, Par) and isinstance(f.left, LinNeg) and isinstance(f.right, WhyNot):
        return f.left.body, f.right.body
    return None


def translate_pos(f: AffineFormula, simplify: bool = False) -> IntFormula:
    if simplify:
        match = _is_neg_then_whynot(f)
        if match is not None:
            a, b = match
            return Implies(translate_neg(b, simplify), translate_neg(a, simplify))
    if isinstance(f, Atom):
        return IntAtom(f.name + "+", f.args)
    if isinstance(f, Top):
        return IntTrue()
    if isinstance(f, Bot):
        return IntFalse()
    if isinstance(f, With):
        return And(translate_pos(f.left, simplify), translate_pos(f.right, simplify))
    if isinstance(f, Plus):
        return Or(translate_pos(f.left, simplify), translate_pos(f.right, simplify))
    if isinstance(f, LinNeg):
        return translate_neg(f.body, simplify)
    if isinstance(f, Tensor):
        return And(translate_pos(f.left, simplify), translate_pos(f.right, simplify))
    if isinstance(f, Par):
        return And(
            Implies(translate_neg(f.left, simplify), translate_pos(f.right, simplify)),
            Implies(translate_neg(f.right, simplify), translate_pos(f.left, simplify)),
        )
    if isinstance(f, Lollipop):
        return translate_pos(Par(LinNeg(f.left), f.right), simplify)
    if isinstance(f, OfCourse):
        return translate_pos(f.body, simplify)
    if isinstance(f, WhyNot):
        return Not(translate_neg(f.body, simplify))
    if isinstance(f, Exists):
        return IntExists(f.var, f.sort, translate_pos(f.body, simplify))
    if isinstance(f, Forall):
        return IntForall(f.var, f.sort, translate_pos(f.body, simplify))
    if isinstance(f, (BigTensor, BigPar)):
        return translate_pos(_unfold_big(f), simplify)
    raise TypeError(f"not an affine formula: {f!r}")


def translate_neg(f: AffineFormula, simplify: bool = False) -> IntFormula:
    if isinstance(f, Atom):
        return IntAtom(f.name + "-", f.args)
    if isinstance(f, Top):
        return IntFalse()
    if isinstance(f, Bot):
        return IntTrue()
    if isinstance(f, With):
        return Or(translate_neg(f.left, simplify), translate_neg(f.right, simplify))
    if isinstance(f, Plus):
        return And(translate_neg(f.left, simplify), translate_neg(f.right, simplify))
    if isinstance(f, LinNeg):
        return translate_pos(f.body, simplify)
    if isinstance(f, Tensor):
        return And(
            Implies(translate_pos(f.left, simplify), translate_neg(f.right, simplify)),
            Implies(translate_pos(f.right, simplify), translate_neg(f.left, simplify)),
        )
    if isinstance(f, Par):
        return And(translate_neg(f.left, simplify), translate_neg(f.right, simplify))
    if isinstance(f, Lollipop):
        return translate_neg(Par(LinNeg(f.left), f.right), simplify)
    if isinstance(f, OfCourse):
        return Not(translate_pos(f.body, simplify))
    if isinstance(f, WhyNot):
        return translate_neg(f.body, simplify)
    if isinstance(f, Exists):
        return IntForall(f.var, f.sort, translate_neg(f.body, simplify))
    if isinstance(f, Forall):
        return IntExists(f.var, f.sort, translate_neg(f.body, simplify))
    if isinstance(f, (BigTensor, BigPar)):
        return translate_neg(_unfold_big(f), simplify)
    raise TypeError(f"not an affine formula: {f!r}")


def translate(f: AffineFormula, simplify: bool = False) -> TranslationPair:
    return TranslationPair(translate_pos(f, simplify), translate_neg(f, simplify))
