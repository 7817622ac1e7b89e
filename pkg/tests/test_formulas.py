import random

import pytest

from afftop.formulas import (
    Atom,
    BigPar,
    BigTensor,
    Bot,
    Exists,
    Forall,
    LinNeg,
    Lollipop,
    OfCourse,
    Par,
    ParseError,
    Plus,
    Tensor,
    Top,
    WhyNot,
    With,
    desugar,
    free_vars,
    node_count,
    parse_affine,
    render,
)
from conftest import random_open_formula

p, q, r = Atom("p"), Atom("q"), Atom("r")


def test_parse_tensor():
    assert parse_affine("p * q") == Tensor(p, q)


def test_parse_lolli_binds_loosest():
    assert parse_affine("p -o ?q") == Lollipop(p, WhyNot(q))


def test_parse_quantifier_scopes_to_end():
    parsed = parse_affine("forall x:S. p(x) & q(x)")
    assert parsed == Forall("x", "S", With(Atom("p", ("x",)), Atom("q", ("x",))))


def test_parse_precedence_mult_over_par():
    assert parse_affine("p @ q * r") == Par(p, Tensor(q, r))
    assert parse_affine("p * q + r") == Plus(Tensor(p, q), r)


def test_parse_left_associative_chains():
    assert parse_affine("p * q * r") == Tensor(Tensor(p, q), r)
    assert parse_affine("p @ q + r") == Plus(Par(p, q), r)


def test_parse_lolli_right_associative():
    assert parse_affine("p -o q -o r") == Lollipop(p, Lollipop(q, r))


def test_parse_unary_chain_and_constants():
    assert parse_affine("~!?p") == LinNeg(OfCourse(WhyNot(p)))
    assert parse_affine("top * bot") == Tensor(Top(), Bot())


def test_parse_int_constant_argument():
    assert parse_affine("p(x, 3)") == Atom("p", ("x", 3))


def test_parse_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_affine("p *\n* q")
    assert err.value.line == 2
    assert err.value.col == 1


def test_parse_error_unbalanced():
    with pytest.raises(ParseError):
        parse_affine("(p * q")


def test_closed_mode_rejects_unbound():
    with pytest.raises(ParseError, match="unbound"):
        parse_affine("p(x)", require_closed=True)
    parse_affine("forall x:S. p(x)", require_closed=True)


def test_render_examples():
    assert render(Tensor(p, q)) == "p * q"
    assert render(LinNeg(Tensor(p, q))) == "~(p * q)"
    assert render(BigPar(())) == "bot"


def test_render_quantifier_under_operator_parenthesized():
    f = Lollipop(p, Forall("x", "S", Atom("q", ("x",))))
    assert parse_affine(render(f)) == f


def test_roundtrip_fuzz():
    rng = random.Random(20240809)
    for _ in range(600):
        f = random_open_formula(rng, rng.randint(0, 8))
        assert parse_affine(render(f)) == f


def test_desugar_examples():
    assert desugar(Lollipop(p, q)) == Par(LinNeg(p), q)
    assert desugar(BigTensor((p, q, r))) == Tensor(p, Tensor(q, r))
    assert desugar(p) == p
    assert desugar(BigTensor(())) == Top()
    assert desugar(BigPar(())) == Bot()
    assert desugar(BigPar((p,))) == p


def test_desugar_idempotent_and_preserves_free_vars():
    rng = random.Random(7)
    for _ in range(300):
        f = random_open_formula(rng, rng.randint(0, 6))
        once = desugar(f)
        assert desugar(once) == once
        assert free_vars(once) == free_vars(f)


def test_big_nodes_render_as_their_unfolding():
    f = BigTensor((p, q, r))
    assert parse_affine(render(f)) == desugar(f)


def test_free_vars_examples():
    assert free_vars(Atom("p", ("x",))) == {"x"}
    assert free_vars(Forall("x", "S", Atom("p", ("x",)))) == frozenset()
    assert free_vars(Tensor(Atom("p", ("x",)), Exists("y", "S", Atom("q", ("y",))))) == {"x"}


def test_free_vars_shadowing():
    f = Forall("x", "S", Tensor(Atom("p", ("x",)), Exists("x", "S", Atom("q", ("x",)))))
    assert free_vars(f) == frozenset()


def test_node_count():
    assert node_count(p) == 1
    assert node_count(Tensor(p, WhyNot(q))) == 4
