import random

from afftop import formulas as fm
from afftop.formulas import (
    And,
    Atom,
    Bot,
    Exists,
    Forall,
    Implies,
    IntAtom,
    IntExists,
    IntFalse,
    IntForall,
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
    desugar,
    free_vars,
    node_count,
)
from afftop.translation import TranslationPair, translate, translate_neg, translate_pos
from conftest import random_open_formula

p, q = Atom("p"), Atom("q")
pp, pn = IntAtom("p+"), IntAtom("p-")
qp, qn = IntAtom("q+"), IntAtom("q-")


# --- the twelve translation-table rows, checked by syntactic AST equality ---

def test_row_atom():
    assert translate(p) == TranslationPair(pp, pn)


def test_row_with():
    assert translate_pos(With(p, q)) == And(pp, qp)
    assert translate_neg(With(p, q)) == Or(pn, qn)


def test_row_plus():
    assert translate_pos(Plus(p, q)) == Or(pp, qp)
    assert translate_neg(Plus(p, q)) == And(pn, qn)


def test_row_linneg():
    assert translate_pos(LinNeg(p)) == pn
    assert translate_neg(LinNeg(p)) == pp


def test_row_tensor():
    assert translate_pos(Tensor(p, q)) == And(pp, qp)
    assert translate_neg(Tensor(p, q)) == And(Implies(pp, qn), Implies(qp, pn))


def test_row_par():
    assert translate_pos(Par(p, q)) == And(Implies(pn, qp), Implies(qn, pp))
    assert translate_neg(Par(p, q)) == And(pn, qn)


def test_row_top():
    assert translate_pos(Top()) == IntTrue()
    assert translate_neg(Top()) == IntFalse()


def test_row_bot():
    assert translate_pos(Bot()) == IntFalse()
    assert translate_neg(Bot()) == IntTrue()


def test_row_ofcourse():
    assert translate_pos(OfCourse(p)) == pp
    assert translate_neg(OfCourse(p)) == Not(pp)


def test_row_whynot():
    assert translate_pos(WhyNot(p)) == Not(pn)
    assert translate_neg(WhyNot(p)) == pn


def test_row_exists():
    f = Exists("x", "S", Atom("p", ("x",)))
    assert translate_pos(f) == IntExists("x", "S", IntAtom("p+", ("x",)))
    assert translate_neg(f) == IntForall("x", "S", IntAtom("p-", ("x",)))


def test_row_forall():
    f = Forall("x", "S", Atom("p", ("x",)))
    assert translate_pos(f) == IntForall("x", "S", IntAtom("p+", ("x",)))
    assert translate_neg(f) == IntExists("x", "S", IntAtom("p-", ("x",)))


# --- derived behavior ---

def test_linneg_pair_swaps():
    pair = translate(LinNeg(p))
    assert (pair.pos, pair.neg) == (pn, pp)
    double = translate(LinNeg(LinNeg(p)))
    assert (double.pos, double.neg) == (pp, pn)


def test_whynot_pair():
    pair = translate(WhyNot(p))
    assert (pair.pos, pair.neg) == (Not(pn), pn)


def test_lollipop_positive_shape():
    assert translate_pos(Lollipop(p, q)) == And(Implies(pp, qp), Implies(qn, pn))
    assert translate_neg(Lollipop(p, q)) == And(pp, qn)


def test_lollipop_matches_par_expansion_node_for_node():
    rng = random.Random(3)
    for _ in range(200):
        a = random_open_formula(rng, rng.randint(0, 4))
        b = random_open_formula(rng, rng.randint(0, 4))
        assert translate(Lollipop(a, b)) == translate(Par(LinNeg(a), b))


def test_negation_duality_fuzz():
    rng = random.Random(4)
    for _ in range(300):
        f = random_open_formula(rng, rng.randint(0, 6))
        pair = translate(f)
        negated = translate(LinNeg(f))
        assert (negated.pos, negated.neg) == (pair.neg, pair.pos)


def test_translate_commutes_with_desugar():
    rng = random.Random(5)
    for _ in range(300):
        f = random_open_formula(rng, rng.randint(0, 6))
        assert translate(f) == translate(desugar(f))


def test_translation_preserves_free_vars():
    rng = random.Random(6)
    for _ in range(200):
        f = random_open_formula(rng, rng.randint(0, 6))
        pair = translate(f)
        assert free_vars(pair.pos) == free_vars(f)
        assert free_vars(pair.neg) == free_vars(f)


def _atom_names(f):
    if isinstance(f, IntAtom):
        return {f.name}
    if isinstance(f, (IntTrue, IntFalse)):
        return set()
    if isinstance(f, (And, Or, Implies)):
        return _atom_names(f.left) | _atom_names(f.right)
    if isinstance(f, Not):
        return _atom_names(f.body)
    return _atom_names(f.body)


def test_atoms_stay_local():
    rng = random.Random(8)
    for _ in range(200):
        f = random_open_formula(rng, rng.randint(0, 6))
        pair = translate(f)
        introduced = _atom_names(pair.pos) | _atom_names(pair.neg)
        assert all(name.endswith(("+", "-")) for name in introduced)
        sources = {name[:-1] for name in introduced}
        assert sources <= {"p", "q", "r2", "s_t"}


def _depth(f):
    if isinstance(f, (Atom, Top, Bot)):
        return 0
    if isinstance(f, (Tensor, Par, With, Plus, Lollipop)):
        return 1 + max(_depth(f.left), _depth(f.right))
    if isinstance(f, (LinNeg, OfCourse, WhyNot)):
        return 1 + _depth(f.body)
    return 1 + _depth(f.body)


def _leaves(f):
    if isinstance(f, (Atom, Top, Bot)):
        return 1
    if isinstance(f, (Tensor, Par, With, Plus, Lollipop)):
        return _leaves(f.left) + _leaves(f.right)
    return _leaves(f.body)


def test_output_size_bound():
    # Each table row duplicates each subtranslation at most once per branch,
    # so combined output size stays within 6 * 2^depth * leaves.
    rng = random.Random(9)
    for _ in range(300):
        f = random_open_formula(rng, rng.randint(0, 6))
        pair = translate(f)
        combined = node_count(pair.pos) + node_count(pair.neg)
        assert combined <= 6 * (2 ** _depth(f)) * _leaves(f)


def test_simplified_lolli_whynot():
    pair = translate(Lollipop(p, WhyNot(q)), simplify=True)
    assert pair.pos == Implies(qn, pn)
    assert pair.neg == And(pp, qn)
    expanded = translate(Par(LinNeg(p), WhyNot(q)), simplify=True)
    assert expanded.pos == Implies(qn, pn)


def test_simplification_never_implicit():
    pair = translate(Lollipop(p, WhyNot(q)))
    assert pair.pos == And(Implies(pp, Not(qn)), Implies(qn, pn))


def test_big_folds_translate_via_unfolding():
    f = fm.BigTensor((p, q))
    assert translate(f) == translate(Tensor(p, q))
    assert translate(fm.BigPar(())) == translate(Bot())
