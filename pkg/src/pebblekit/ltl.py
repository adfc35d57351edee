"""
LTL with one freeze register, next and until, over data words.

Formulas are immutable trees of frozen dataclasses. ``down φ`` stores the
current symbol in the register, ``up`` tests the current symbol against it.
Satisfaction follows the usual finite-word reading: ``X φ`` fails at the
last position and ``φ U ψ`` is non-strict (ψ may hold right away).

Concrete syntax::

    formula := until
    until   := binary ("U" binary)*          right-associative
    binary  := unary (("&" | "|") unary)*    & binds tighter than |
    unary   := "~" unary | "X" unary | "down" unary | atom
    atom    := "true" | "false" | "up" | "(" formula ")"

Example:
    >>> f = parse("down (X ~up & ~(X X true))")
    >>> fqr(f), to_text(f)
    (1, 'down (X ~up & ~X X true)')
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

from lark import Lark, Transformer
from lark.exceptions import UnexpectedInput, VisitError

from pebblekit.datawords import DataWord, Symbol

logger = logging.getLogger(__name__)


class LtlError(Exception):
    """Base exception for formula errors"""
    pass

class FormulaSyntaxError(LtlError):
    """Raised when formula text does not follow the grammar"""

    def __init__(self, message: str, line: int = -1, column: int = -1):
        self.line = line
        self.column = column
        where = f" at line {line}, column {column}" if line > 0 else ""
        super().__init__(f"{message}{where}")

class FreeRegisterRead(LtlError):
    """Raised when up is evaluated with an empty register"""
    pass

class InvalidPosition(LtlError):
    """Raised when a formula is evaluated outside positions 1..n"""
    pass

class NotASentence(LtlError):
    """Raised when a sentence is required but the formula has a free up"""
    pass


@dataclass(frozen=True)
class Top:
    pass

@dataclass(frozen=True)
class Bottom:
    pass

@dataclass(frozen=True)
class Up:
    pass

@dataclass(frozen=True)
class Not:
    child: "Formula"

@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

@dataclass(frozen=True)
class Next:
    child: "Formula"

@dataclass(frozen=True)
class Until:
    left: "Formula"
    right: "Formula"

@dataclass(frozen=True)
class Down:
    child: "Formula"


Formula = Union[Top, Bottom, Up, Not, Or, And, Next, Until, Down]

TRUE = Top()
FALSE = Bottom()
UP = Up()


# Parsing and printing

_GRAMMAR = r"""
    ?start: until
    ?until: disj
          | disj "U" until      -> until
    ?disj: conj
         | disj "|" conj        -> disj
    ?conj: unary
         | conj "&" unary       -> conj
    ?unary: "~" unary           -> neg
          | "X" unary           -> nxt
          | "down" unary        -> down
          | atom
    ?atom: "true"               -> tt
         | "false"              -> ff
         | "up"                 -> up
         | "(" until ")"

    %import common.WS
    %ignore WS
"""


class _ToFormula(Transformer):
    def until(self, children):
        return Until(children[0], children[1])

    def disj(self, children):
        return Or(children[0], children[1])

    def conj(self, children):
        return And(children[0], children[1])

    def neg(self, children):
        return Not(children[0])

    def nxt(self, children):
        return Next(children[0])

    def down(self, children):
        return Down(children[0])

    def tt(self, _):
        return TRUE

    def ff(self, _):
        return FALSE

    def up(self, _):
        return UP


_parser = Lark(_GRAMMAR, parser="lalr")


def parse(text: str) -> Formula:
    """Parse formula text.

    Raises:
        FormulaSyntaxError: With the line and column of the offending input
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as e:
        raise FormulaSyntaxError(f"Cannot parse formula {text.strip()!r}", e.line, e.column)
    try:
        return _ToFormula().transform(tree)
    except VisitError as e:
        raise FormulaSyntaxError(f"Cannot build formula {text.strip()!r}: {e.orig_exc}")


_UNTIL, _OR, _AND, _UNARY = range(4)


def to_text(f: Formula) -> str:
    """Print with the fewest parentheses that parse back to the same tree."""
    return _to_text(f, _UNTIL)


def _to_text(f: Formula, context: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Up):
        return "up"
    if isinstance(f, Not):
        text, own = "~" + _to_text(f.child, _UNARY), _UNARY
    elif isinstance(f, Next):
        text, own = "X " + _to_text(f.child, _UNARY), _UNARY
    elif isinstance(f, Down):
        text, own = "down " + _to_text(f.child, _UNARY), _UNARY
    elif isinstance(f, Or):
        text, own = f"{_to_text(f.left, _OR)} | {_to_text(f.right, _AND)}", _OR
    elif isinstance(f, And):
        text, own = f"{_to_text(f.left, _AND)} & {_to_text(f.right, _UNARY)}", _AND
    elif isinstance(f, Until):
        text, own = f"{_to_text(f.left, _OR)} U {_to_text(f.right, _UNTIL)}", _UNTIL
    else:
        raise LtlError(f"Not a formula: {f!r}")
    return f"({text})" if own < context else text


# Structural measures

def fqr(f: Formula) -> int:
    """Freeze quantifier rank: nesting depth of down."""
    if isinstance(f, (Top, Bottom, Up)):
        return 0
    if isinstance(f, Down):
        return fqr(f.child) + 1
    if isinstance(f, (Not, Next)):
        return fqr(f.child)
    return max(fqr(f.left), fqr(f.right))


def formula_size(f: Formula) -> int:
    if isinstance(f, (Top, Bottom, Up)):
        return 1
    if isinstance(f, (Not, Next, Down)):
        return 1 + formula_size(f.child)
    return 1 + formula_size(f.left) + formula_size(f.right)


def _has_free_up(f: Formula) -> bool:
    if isinstance(f, Up):
        return True
    if isinstance(f, (Top, Bottom, Down)):
        return False
    if isinstance(f, (Not, Next)):
        return _has_free_up(f.child)
    return _has_free_up(f.left) or _has_free_up(f.right)


def is_sentence(f: Formula) -> bool:
    return not _has_free_up(f)


# Semantics

def evaluate(w: DataWord, l: int, reg: Optional[Symbol], f: Formula) -> bool:
    """Does ``w, l ⊨_reg f`` hold?

    Args:
        w: non-empty word
        l: position in 1..n
        reg: register content, or None when empty
        f: formula

    Raises:
        InvalidPosition: If l is outside 1..n
        FreeRegisterRead: If up is reached with an empty register
    """
    n = len(w)
    if not 1 <= l <= n:
        raise InvalidPosition(f"Position {l} outside 1..{n}")

    @lru_cache(maxsize=None)
    def holds(pos: int, content: Optional[Symbol], g: Formula) -> bool:
        if isinstance(g, Top):
            return True
        if isinstance(g, Bottom):
            return False
        if isinstance(g, Up):
            if content is None:
                raise FreeRegisterRead(f"up evaluated at position {pos} with an empty register")
            return content == w.symbol_at(pos)
        if isinstance(g, Not):
            return not holds(pos, content, g.child)
        if isinstance(g, Or):
            return holds(pos, content, g.left) or holds(pos, content, g.right)
        if isinstance(g, And):
            return holds(pos, content, g.left) and holds(pos, content, g.right)
        if isinstance(g, Next):
            return pos < n and holds(pos + 1, content, g.child)
        if isinstance(g, Down):
            return holds(pos, w.symbol_at(pos), g.child)
        if isinstance(g, Until):
            for later in range(pos, n + 1):
                if holds(later, content, g.right):
                    return True
                if not holds(later, content, g.left):
                    return False
            return False
        raise LtlError(f"Not a formula: {g!r}")

    return holds(l, reg, f)


def sentence_holds(w: DataWord, f: Formula) -> bool:
    """Truth of a sentence at position 1; false on the empty word.

    Raises:
        NotASentence: If f has a free up
    """
    if not is_sentence(f):
        raise NotASentence(f"{to_text(f)} has a free occurrence of up")
    if len(w) == 0:
        return False
    return evaluate(w, 1, None, f)


# The φ_k / ψ_k families

def _differs_next() -> Formula:
    return Next(Not(UP))


def _jump_to_next_occurrence(rest: Formula) -> Formula:
    """X(down X((~up) U (up & rest)))"""
    return Next(Down(Next(Until(Not(UP), And(UP, rest)))))


def build_phi(k: int) -> Formula:
    """φ_1 = X~up & ~X X true, φ_{k+1} = X~up & X(down X(~up U (up & φ_k)))."""
    if k < 1:
        raise LtlError(f"build_phi needs k >= 1, got {k}")
    phi: Formula = And(_differs_next(), Not(Next(Next(TRUE))))
    for _ in range(1, k):
        phi = And(_differs_next(), _jump_to_next_occurrence(phi))
    return phi


def build_psi(k: int) -> Formula:
    """ψ_1 = down φ_1, ψ_k = down X~up & X(down X(~up U (up & φ_{k-1}))) for k >= 2."""
    if k < 1:
        raise LtlError(f"build_psi needs k >= 1, got {k}")
    if k == 1:
        return Down(build_phi(1))
    return And(Down(_differs_next()), _jump_to_next_occurrence(build_phi(k - 1)))
