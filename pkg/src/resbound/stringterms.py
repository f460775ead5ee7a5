"""Evaluable string claims: the term operations atoms can be backed by.

Symbol strings support concatenation, per-position projection, symbol
substitution, length, and numeric value (strings read as binary numerals).
A claim equates two terms; scenarios attach claims to atoms, whose ground
truth is then computed here rather than declared.  The object logic stays
propositional: the engine sees ordinary atoms with deciders, and this module
is what makes those atoms mean something.

Claim grammar (whitespace ignored; positions are 1-based):

    claim   := expr '==' expr
    expr    := strexpr | numexpr
    strexpr := LITERAL
             | 'concat(' strexpr ',' strexpr ')'
             | 'proj(' strexpr ',' numexpr ')'
             | 'subst(' strexpr ',' numexpr ',' strexpr ')'
    numexpr := INTEGER | 'len(' strexpr ')' | 'val(' strexpr ')'

A LITERAL is a run of symbols from the scenario alphabet (the operation
names themselves only act as operations when followed by a parenthesis).
``val`` reads a 0/1 string as a binary numeral.  Both sides of ``==`` must
evaluate to the same kind, string or number.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from .errors import StatementSyntaxError
from .expressions import Alphabet


@dataclass(frozen=True)
class Lit:
    text: str


@dataclass(frozen=True)
class Concat:
    left: "StrTerm"
    right: "StrTerm"


@dataclass(frozen=True)
class Proj:
    inner: "StrTerm"
    index: "NumTerm"


@dataclass(frozen=True)
class Subst:
    inner: "StrTerm"
    index: "NumTerm"
    symbol: "StrTerm"


@dataclass(frozen=True)
class IntLit:
    value: int
    raw: str = ""  # original spelling; as a string literal leading zeros matter


@dataclass(frozen=True)
class Length:
    inner: "StrTerm"


@dataclass(frozen=True)
class Value:
    inner: "StrTerm"


StrTerm = Union[Lit, Concat, Proj, Subst]
NumTerm = Union[IntLit, Length, Value]
Term = Union[StrTerm, NumTerm]


@dataclass(frozen=True)
class Claim:
    left: Term
    right: Term


_STR_OPS = {"concat": 2, "proj": 2, "subst": 3}
_NUM_OPS = {"len": 1, "val": 1}
_TOKEN = re.compile(r"\s*(==|[(),]|[^\s(),=]+)")


class _Parser:
    def __init__(self, text: str):
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                raise StatementSyntaxError(f"bad claim character at {pos}: {text[pos:pos + 8]!r}")
            self.tokens.append(m.group(1))
            pos = m.end()
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None:
            raise StatementSyntaxError("unexpected end of claim")
        if expected is not None and tok != expected:
            raise StatementSyntaxError(f"expected {expected!r}, found {tok!r}")
        self.pos += 1
        return tok

    def expr(self) -> Term:
        tok = self.peek()
        if tok is None:
            raise StatementSyntaxError("missing term")
        follows_paren = (
            self.pos + 1 < len(self.tokens) and self.tokens[self.pos + 1] == "("
        )
        if follows_paren and tok in _STR_OPS:
            return self.str_op()
        if follows_paren and tok in _NUM_OPS:
            return self.num_op()
        self.take()
        if re.fullmatch(r"\d+", tok):
            # bare digit runs double as string literals when a string is
            # required; the caller resolves the kind (see _as_string)
            return IntLit(int(tok), tok)
        return Lit(tok)

    def str_op(self) -> StrTerm:
        name = self.take()
        self.take("(")
        if name == "concat":
            left = self.expr()
            self.take(",")
            right = self.expr()
            self.take(")")
            return Concat(_as_string(left), _as_string(right))
        if name == "proj":
            inner = self.expr()
            self.take(",")
            index = self.expr()
            self.take(")")
            return Proj(_as_string(inner), _as_number(index))
        inner = self.expr()
        self.take(",")
        index = self.expr()
        self.take(",")
        symbol = self.expr()
        self.take(")")
        return Subst(_as_string(inner), _as_number(index), _as_string(symbol))

    def num_op(self) -> NumTerm:
        name = self.take()
        self.take("(")
        inner = self.expr()
        self.take(")")
        ctor = Length if name == "len" else Value
        return ctor(_as_string(inner))


def _as_string(term: Term) -> StrTerm:
    if isinstance(term, IntLit):
        return Lit(term.raw or str(term.value))
    if isinstance(term, (Length, Value)):
        raise StatementSyntaxError("numeric term where a string is required")
    return term


def _as_number(term: Term) -> NumTerm:
    if isinstance(term, (IntLit, Length, Value)):
        return term
    raise StatementSyntaxError("string term where a number is required")


def parse_claim(text: str) -> Claim:
    parser = _Parser(text)
    left = parser.expr()
    parser.take("==")
    right = parser.expr()
    if parser.peek() is not None:
        raise StatementSyntaxError(f"trailing claim tokens: {' '.join(parser.tokens[parser.pos:])}")
    left_is_num = isinstance(left, (IntLit, Length, Value))
    right_is_num = isinstance(right, (IntLit, Length, Value))
    if left_is_num != right_is_num:
        # a bare digit run can still be a string literal; coerce when the
        # other side is unambiguously a string
        if isinstance(left, IntLit) and not right_is_num:
            left = _as_string(left)
        elif isinstance(right, IntLit) and not left_is_num:
            right = _as_string(right)
        else:
            raise StatementSyntaxError("claim compares a string with a number")
    return Claim(left, right)


class ClaimEvaluationError(StatementSyntaxError):
    code = "string-claim"


def eval_term(term: Term, alphabet: Alphabet) -> Union[str, int]:
    if isinstance(term, Lit):
        for ch in term.text:
            if ch not in alphabet:
                raise ClaimEvaluationError(f"literal symbol {ch!r} not in alphabet")
        return term.text
    if isinstance(term, IntLit):
        return term.value
    if isinstance(term, Concat):
        return eval_term(term.left, alphabet) + eval_term(term.right, alphabet)
    if isinstance(term, Proj):
        text = eval_term(term.inner, alphabet)
        index = eval_term(term.index, alphabet)
        if not 1 <= index <= len(text):
            raise ClaimEvaluationError(f"projection index {index} out of range for {text!r}")
        return text[index - 1]
    if isinstance(term, Subst):
        text = eval_term(term.inner, alphabet)
        index = eval_term(term.index, alphabet)
        symbol = eval_term(term.symbol, alphabet)
        if len(symbol) != 1:
            raise ClaimEvaluationError("substitution needs a single symbol")
        if not 1 <= index <= len(text):
            raise ClaimEvaluationError(f"substitution index {index} out of range for {text!r}")
        return text[: index - 1] + symbol + text[index:]
    if isinstance(term, Length):
        return len(eval_term(term.inner, alphabet))
    if isinstance(term, Value):
        text = eval_term(term.inner, alphabet)
        if not text or any(ch not in "01" for ch in text):
            raise ClaimEvaluationError(f"{text!r} is not a binary numeral")
        return int(text, 2)
    raise ClaimEvaluationError(f"unknown term {term!r}")


def eval_claim(claim: Claim, alphabet: Alphabet) -> bool:
    return eval_term(claim.left, alphabet) == eval_term(claim.right, alphabet)


def claim_truth(text: str, alphabet: Alphabet) -> bool:
    return eval_claim(parse_claim(text), alphabet)
