"""Formula ASTs for affine logic and its intuitionistic translation targets.

The affine grammar (ASCII, whitespace-insensitive):

    formula := quant | lolli
    quant   := ("forall"|"exists") var ":" sort "." formula
    lolli   := par ("-o" lolli)?                    right-assoc, loosest
    par     := mult (("@"|"+") mult)*               "@" = multiplicative or
    mult    := unary (("*"|"&") unary)*             "*" = multiplicative and
    unary   := ("~"|"!"|"?") unary | atomexp
    atomexp := "top" | "bot" | name ("(" args ")")? | "(" formula ")"

"*" and "&" bind tighter than "@", "+", and "-o".  Atom arguments are
variable names or nonnegative integer constants.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

Arg = Union[str, int]  # variable name or carrier-element constant


# ---------------------------------------------------------------------------
# Affine formulas
# ---------------------------------------------------------------------------

class AffineFormula:
    """Base class for affine-logic formulas."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(AffineFormula):
    """Atomic predicate applied to variables/constants."""
    name: str
    args: tuple[Arg, ...] = ()


@dataclass(frozen=True)
class Top(AffineFormula):
    pass


@dataclass(frozen=True)
class Bot(AffineFormula):
    pass


@dataclass(frozen=True)
class Tensor(AffineFormula):
    """Multiplicative conjunction: P * Q."""
    left: AffineFormula
    right: AffineFormula


@dataclass(frozen=True)
class Par(AffineFormula):
    """Multiplicative disjunction: P @ Q."""
    left: AffineFormula
    right: AffineFormula


@dataclass(frozen=True)
class With(AffineFormula):
    """Additive conjunction: P & Q."""
    left: AffineFormula
    right: AffineFormula


@dataclass(frozen=True)
class Plus(AffineFormula):
    """Additive disjunction: P + Q."""
    left: AffineFormula
    right: AffineFormula


@dataclass(frozen=True)
class Lollipop(AffineFormula):
    """Linear implication: P -o Q."""
    left: AffineFormula
    right: AffineFormula


@dataclass(frozen=True)
class LinNeg(AffineFormula):
    """Linear negation: ~P."""
    body: AffineFormula


@dataclass(frozen=True)
class OfCourse(AffineFormula):
    """Exponential !P."""
    body: AffineFormula


@dataclass(frozen=True)
class WhyNot(AffineFormula):
    """Exponential ?P."""
    body: AffineFormula


@dataclass(frozen=True)
class Forall(AffineFormula):
    var: str
    sort: str
    body: AffineFormula


@dataclass(frozen=True)
class Exists(AffineFormula):
    var: str
    sort: str
    body: AffineFormula


@dataclass(frozen=True)
class BigTensor(AffineFormula):
    """Finite * fold; the empty fold is top."""
    items: tuple[AffineFormula, ...]


@dataclass(frozen=True)
class BigPar(AffineFormula):
    """Finite @ fold; the empty fold is bot."""
    items: tuple[AffineFormula, ...]


# ---------------------------------------------------------------------------
# Intuitionistic formulas (translation targets)
# ---------------------------------------------------------------------------

class IntFormula:
    """Base class for intuitionistic formulas."""

    __slots__ = ()


@dataclass(frozen=True)
class IntAtom(IntFormula):
    """Atomic predicate; translated atoms carry a '+'/'-' polarity suffix."""
    name: str
    args: tuple[Arg, ...] = ()


@dataclass(frozen=True)
class IntTrue(IntFormula):
    pass


@dataclass(frozen=True)
class IntFalse(IntFormula):
    pass


@dataclass(frozen=True)
class And(IntFormula):
    left: IntFormula
    right: IntFormula


@dataclass(frozen=True)
class Or(IntFormula):
    left: IntFormula
    right: IntFormula


@dataclass(frozen=True)
class Implies(IntFormula):
    left: IntFormula
    right: IntFormula


@dataclass(frozen=True)
class Not(IntFormula):
    body: IntFormula


@dataclass(frozen=True)
class IntForall(IntFormula):
    var: str
    sort: str
    body: IntFormula


@dataclass(frozen=True)
class IntExists(IntFormula):
    var: str
    sort: str
    body: IntFormula


Formula = Union[AffineFormula, IntFormula]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

class ParseError(ValueError):
    """Syntax or scoping error, with 1-based line/column position."""

    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


_KEYWORDS = {"forall", "exists", "top", "bot"}
_PUNCT = {"(", ")", ",", ":", ".", "*", "&", "@", "+", "~", "!", "?"}


def _tokenize(text: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if text.startswith("-o", i):
            tokens.append(("LOLLI", "-o", line, col))
            i += 2
            col += 2
            continue
        if ch in _PUNCT:
            tokens.append(("PUNCT", ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("INT", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KEYWORD" if word in _KEYWORDS else "NAME"
            tokens.append((kind, word, line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("EOF", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, message: str):
        _, _, line, col = self.peek()
        raise ParseError(message, line, col)

    def expect(self, value: str):
        kind, val, _, _ = self.peek()
        if val != value or kind == "EOF":
            self.error(f"expected {value!r}, found {val!r}" if val else f"expected {value!r}")
        return self.advance()

    def parse_formula(self) -> AffineFormula:
        kind, val, _, _ = self.peek()
        if kind == "KEYWORD" and val in ("forall", "exists"):
            self.advance()
            nkind, var, _, _ = self.peek()
            if nkind != "NAME":
                self.error("expected a variable name after quantifier")
            self.advance()
            self.expect(":")
            skind, sort, _, _ = self.peek()
            if skind != "NAME":
                self.error("expected a sort name")
            self.advance()
            self.expect(".")
            body = self.parse_formula()
            ctor = Forall if val == "forall" else Exists
            return ctor(var, sort, body)
        return self.parse_lolli()

    def parse_lolli(self) -> AffineFormula:
        left = self.parse_par()
        if self.peek()[1] == "-o":
            self.advance()
            return Lollipop(left, self.parse_lolli())
        return left

    def parse_par(self) -> AffineFormula:
        node = self.parse_mult()
        while self.peek()[1] in ("@", "+"):
            op = self.advance()[1]
            rhs = self.parse_mult()
            node = Par(node, rhs) if op == "@" else Plus(node, rhs)
        return node

    def parse_mult(self) -> AffineFormula:
        node = self.parse_unary()
        while self.peek()[1] in ("*", "&"):
            op = self.advance()[1]
            rhs = self.parse_unary()
            node = Tensor(node, rhs) if op == "*" else With(node, rhs)
        return node

    def parse_unary(self) -> AffineFormula:
        kind, val, _, _ = self.peek()
        if val in ("~", "!", "?"):
            self.advance()
            body = self.parse_unary()
            ctor = {"~": LinNeg, "!": OfCourse, "?": WhyNot}[val]
            return ctor(body)
        return self.parse_atomexp()

    def parse_atomexp(self) -> AffineFormula:
        kind, val, _, _ = self.peek()
        if val == "(":
            self.advance()
            inner = self.parse_formula()
            self.expect(")")
            return inner
        if kind == "KEYWORD":
            if val == "top":
                self.advance()
                return Top()
            if val == "bot":
                self.advance()
                return Bot()
            self.error(f"unexpected keyword {val!r}")
        if kind == "NAME":
            self.advance()
            if self.peek()[1] == "(":
                self.advance()
                args = [self.parse_arg()]
                while self.peek()[1] == ",":
                    self.advance()
                    args.append(self.parse_arg())
                self.expect(")")
                return Atom(val, tuple(args))
            return Atom(val)
        self.error(f"unexpected token {val!r}" if val else "unexpected end of input")

    def parse_arg(self) -> Arg:
        kind, val, _, _ = self.peek()
        if kind == "NAME":
            self.advance()
            return val
        if kind == "INT":
            self.advance()
            return int(val)
        self.error("expected a variable name or integer constant")


def parse_affine(text: str, require_closed: bool = False) -> AffineFormula:
    """Parse the ASCII affine grammar; optionally reject open formulas."""
    parser = _Parser(text)
    formula = parser.parse_formula()
    kind, val, line, col = parser.peek()
    if kind != "EOF":
        raise ParseError(f"trailing input starting at {val!r}", line, col)
    if require_closed:
        free = free_vars(formula)
        if free:
            names = ", ".join(sorted(free))
            raise ParseError(f"unbound variable(s): {names}", 1, 1)
    return formula


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

# Precedence levels: 0 formula (quantifier scope), 1 lolli, 2 par, 3 mult,
# 4 unary, 5 atoms.  A node is parenthesized when its level is below the
# level its context demands.

def _render_args(args: tuple[Arg, ...]) -> str:
    if not args:
        return ""
    return "(" + ", ".join(str(a) for a in args) + ")"


def _render_affine(f: AffineFormula, level: int) -> str:
    if isinstance(f, Atom):
        return f.name + _render_args(f.args)
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, (LinNeg, OfCourse, WhyNot)):
        sym = {LinNeg: "~", OfCourse: "!", WhyNot: "?"}[type(f)]
        return sym + _render_affine(f.body, 4)
    if isinstance(f, (Tensor, With)):
        sym = "*" if isinstance(f, Tensor) else "&"
        text = f"{_render_affine(f.left, 3)} {sym} {_render_affine(f.right, 4)}"
        return f"({text})" if level > 3 else text
    if isinstance(f, (Par, Plus)):
        sym = "@" if isinstance(f, Par) else "+"
        text = f"{_render_affine(f.left, 2)} {sym} {_render_affine(f.right, 3)}"
        return f"({text})" if level > 2 else text
    if isinstance(f, Lollipop):
        text = f"{_render_affine(f.left, 2)} -o {_render_affine(f.right, 1)}"
        return f"({text})" if level > 1 else text
    if isinstance(f, (Forall, Exists)):
        word = "forall" if isinstance(f, Forall) else "exists"
        text = f"{word} {f.var}:{f.sort}. {_render_affine(f.body, 0)}"
        return f"({text})" if level > 0 else text
    if isinstance(f, (BigTensor, BigPar)):
        return _render_affine(_unfold_big(f), level)
    raise TypeError(f"not an affine formula: {f!r}")


def _render_int(f: IntFormula, level: int) -> str:
    if isinstance(f, IntAtom):
        return f.name + _render_args(f.args)
    if isinstance(f, IntTrue):
        return "true"
    if isinstance(f, IntFalse):
        return "false"
    if isinstance(f, Not):
        return "~" + _render_int(f.body, 4)
    if isinstance(f, And):
        text = f"{_render_int(f.left, 3)} /\\ {_render_int(f.right, 4)}"
        return f"({text})" if level > 3 else text
    if isinstance(f, Or):
        text = f"{_render_int(f.left, 2)} \\/ {_render_int(f.right, 3)}"
        return f"({text})" if level > 2 else text
    if isinstance(f, Implies):
        text = f"{_render_int(f.left, 2)} -> {_render_int(f.right, 1)}"
        return f"({text})" if level > 1 else text
    if isinstance(f, (IntForall, IntExists)):
        word = "forall" if isinstance(f, IntForall) else "exists"
        text = f"{word} {f.var}:{f.sort}. {_render_int(f.body, 0)}"
        return f"({text})" if level > 0 else text
    raise TypeError(f"not an intuitionistic formula: {f!r}")


def render(f: Formula) -> str:
    """Render a formula; affine output reparses to a structurally equal AST."""
    if isinstance(f, AffineFormula):
        return _render_affine(f, 0)
    return _render_int(f, 0)


# ---------------------------------------------------------------------------
# Desugaring and variable bookkeeping
# ---------------------------------------------------------------------------

def _unfold_big(f: AffineFormula) -> AffineFormula:
    """Right-nest one BigTensor/BigPar node (empty fold is its unit)."""
    binop, unit = (Tensor, Top()) if isinstance(f, BigTensor) else (Par, Bot())
    if not f.items:
        return unit
    out = f.items[-1]
    for item in reversed(f.items[:-1]):
        out = binop(item, out)
    return out


def desugar(f: AffineFormula) -> AffineFormula:
    """Expand P -o Q into ~P @ Q and unfold n-ary folds to binary nodes."""
    if isinstance(f, (Atom, Top, Bot)):
        return f
    if isinstance(f, Lollipop):
        return Par(LinNeg(desugar(f.left)), desugar(f.right))
    if isinstance(f, (BigTensor, BigPar)):
        return desugar(_unfold_big(f))
    if isinstance(f, (Tensor, Par, With, Plus)):
        return type(f)(desugar(f.left), desugar(f.right))
    if isinstance(f, (LinNeg, OfCourse, WhyNot)):
        return type(f)(desugar(f.body))
    if isinstance(f, (Forall, Exists)):
        return type(f)(f.var, f.sort, desugar(f.body))
    raise TypeError(f"not an affine formula: {f!r}")


def free_vars(f: Formula) -> frozenset[str]:
    """Free variables of an affine or intuitionistic formula."""
    if isinstance(f, (Atom, IntAtom)):
        return frozenset(a for a in f.args if isinstance(a, str))
    if isinstance(f, (Top, Bot, IntTrue, IntFalse)):
        return frozenset()
    if isinstance(f, (Tensor, Par, With, Plus, Lollipop, And, Or, Implies)):
        return free_vars(f.left) | free_vars(f.right)
    if isinstance(f, (LinNeg, OfCourse, WhyNot, Not)):
        return free_vars(f.body)
    if isinstance(f, (Forall, Exists, IntForall, IntExists)):
        return free_vars(f.body) - {f.var}
    if isinstance(f, (BigTensor, BigPar)):
        out: frozenset[str] = frozenset()
        for item in f.items:
            out |= free_vars(item)
        return out
    raise TypeError(f"not a formula: {f!r}")


def node_count(f: Formula) -> int:
    """Number of AST nodes (atoms and constants count as one)."""
    if isinstance(f, (Atom, IntAtom, Top, Bot, IntTrue, IntFalse)):
        return 1
    if isinstance(f, (Tensor, Par, With, Plus, Lollipop, And, Or, Implies)):
        return 1 + node_count(f.left) + node_count(f.right)
    if isinstance(f, (LinNeg, OfCourse, WhyNot, Not)):
        return 1 + node_count(f.body)
    if isinstance(f, (Forall, Exists, IntForall, IntExists)):
        return 1 + node_count(f.body)
    if isinstance(f, (BigTensor, BigPar)):
        return 1 + sum(node_count(item) for item in f.items)
    raise TypeError(f"not a formula: {f!r}")
