"""Shared random generators and independent oracles for the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from afftop import formulas as fm
from afftop.cover import CoverProblem
from afftop.cuts import Infinity
from afftop.semantics import (
    AtomTable,
    Interpretation,
    PAIR_BY_CODE,
)

UNARY = (fm.LinNeg, fm.OfCourse, fm.WhyNot)
BINARY = (fm.Tensor, fm.Par, fm.With, fm.Plus, fm.Lollipop)


def random_closed_formula(rng: random.Random, max_depth: int, atom_sigs: dict[str, int],
                          sort: str = "S", carrier: int = 2) -> fm.AffineFormula:
    """A random closed formula; atom arguments are bound variables when any
    are in scope, carrier constants otherwise."""
    names = sorted(atom_sigs)

    def leaf(bound):
        roll = rng.random()
        if roll < 0.1:
            return fm.Top()
        if roll < 0.2:
            return fm.Bot()
        name = rng.choice(names)
        args = []
        for _ in range(atom_sigs[name]):
            if bound and rng.random() < 0.8:
                args.append(rng.choice(bound))
            else:
                args.append(rng.randrange(carrier))
        return fm.Atom(name, tuple(args))

    def go(depth, bound):
        if depth == 0 or rng.random() < 0.25:
            return leaf(bound)
        roll = rng.random()
        if roll < 0.3:
            return rng.choice(UNARY)(go(depth - 1, bound))
        if roll < 0.75:
            ctor = rng.choice(BINARY)
            return ctor(go(depth - 1, bound), go(depth - 1, bound))
        var = f"x{len(bound)}" if rng.random() < 0.9 or not bound else rng.choice(bound)
        ctor = fm.Forall if rng.random() < 0.5 else fm.Exists
        return ctor(var, sort, go(depth - 1, bound + (var,)))

    return go(max_depth, ())


def random_open_formula(rng: random.Random, max_depth: int) -> fm.AffineFormula:
    """A random formula for grammar round-trips; free variables allowed,
    no BigTensor/BigPar (the grammar has no syntax for them)."""
    names = ["p", "q", "r2", "s_t"]
    variables = ["x", "y", "zz"]

    def leaf():
        roll = rng.random()
        if roll < 0.1:
            return fm.Top()
        if roll < 0.2:
            return fm.Bot()
        name = rng.choice(names)
        arity = rng.randrange(3)
        args = tuple(
            rng.choice(variables) if rng.random() < 0.7 else rng.randrange(4)
            for _ in range(arity)
        )
        return fm.Atom(name, args)

    def go(depth):
        if depth == 0 or rng.random() < 0.2:
            return leaf()
        roll = rng.random()
        if roll < 0.3:
            return rng.choice(UNARY)(go(depth - 1))
        if roll < 0.8:
            return rng.choice(BINARY)(go(depth - 1), go(depth - 1))
        ctor = fm.Forall if rng.random() < 0.5 else fm.Exists
        return ctor(rng.choice(variables), rng.choice(["S", "T"]), go(depth - 1))

    return go(max_depth)


def random_interpretation(rng: random.Random, atom_sigs: dict[str, int],
                          sort: str = "S", size: int = 2) -> Interpretation:
    codes = ("pos", "neg", "und")
    atoms = {}
    for name, arity in atom_sigs.items():
        entries = {
            args: PAIR_BY_CODE[rng.choice(codes)]
            for args in itertools.product(range(size), repeat=arity)
        }
        atoms[name] = AtomTable((sort,) * arity, entries)
    return Interpretation({sort: size}, atoms)


def random_cover_problem(rng: random.Random, max_family: int = 12, span: int = 16) -> CoverProblem:
    def rational():
        return Fraction(rng.randint(-span, span), rng.randint(1, span))

    family = tuple((rational(), rational()) for _ in range(rng.randint(0, max_family)))
    return CoverProblem(rational(), rational(), family)


def midpoint_cover_oracle(p: CoverProblem) -> bool:
    """Coverage decided by checking every endpoint of [a, b] and every
    midpoint of consecutive endpoints; sufficient for finite families."""
    if p.a > p.b:
        return True
    points = {p.a, p.b}
    for q, r in p.family:
        for v in (q, r):
            if not isinstance(v, Infinity) and p.a <= v <= p.b:
                points.add(Fraction(v))
    ordered = sorted(points)
    ordered += [(x + y) / 2 for x, y in zip(ordered, ordered[1:])]
    return all(any(q < v and v < r for q, r in p.family) for v in ordered)
