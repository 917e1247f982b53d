"""Pi-terms (omega-terms): parse, render, inspect.

Grammar (whitespace between tokens is ignored)::

    term   := factor { factor }
    factor := atom [ "^" power ]
    atom   := letter | "(" term ")"
    power  := "w" | integer >= 1
    letter := "a" .. "z"

Concatenation is left-associative and ``^`` binds tighter than concatenation.
The recursive-descent machinery is shared with the generalized-word literal
parser in :mod:`efpi.genword`, which accepts more powers.
"""

from __future__ import annotations

import string
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import dataclass
from typing import Generic, TypeVar

from .errors import AlphabetError, TermSyntaxError

ASCII_ALPHABET = frozenset(string.ascii_lowercase)


@dataclass(frozen=True)
class Letter:
    symbol: str


@dataclass(frozen=True)
class Concat:
    left: PiTerm
    right: PiTerm


@dataclass(frozen=True)
class PiPower:
    inner: PiTerm


@dataclass(frozen=True)
class FinPower:
    inner: PiTerm
    k: int

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"finite power must be >= 1, got {self.k}")


PiTerm = Letter | Concat | PiPower | FinPower

N = TypeVar("N")


class Parser(ABC, Generic[N]):
    """Recursive descent over the shared concrete syntax.

    Subclasses decide which power suffixes are legal and how nodes are built.
    """

    def __init__(self, text: str, alphabet: Iterable[str] | None = None):
        self.text = text
        self.pos = 0
        self.alphabet = frozenset(alphabet) if alphabet is not None else ASCII_ALPHABET

    # -- hooks ----------------------------------------------------------------
    @abstractmethod
    def letter(self, symbol: str) -> N: ...

    @abstractmethod
    def concat(self, left: N, right: N) -> N: ...

    @abstractmethod
    def power(self, node: N, offset: int) -> N:
        """Consume the power suffix after ``^`` (already eaten) and wrap ``node``."""

    # -- scanning -------------------------------------------------------------
    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def error(self, message: str, offset: int | None = None) -> TermSyntaxError:
        return TermSyntaxError(message, self.pos if offset is None else offset)

    def read_int(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            raise self.error("expected an integer")
        return int(self.text[start : self.pos])

    # -- grammar --------------------------------------------------------------
    def parse(self) -> N:
        node = self.term()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r}")
        return node

    def term(self) -> N:
        node = self.factor()
        while self.peek() and self.peek() not in ")^":
            node = self.concat(node, self.factor())
        return node

    def factor(self) -> N:
        node = self.atom()
        if self.peek() == "^":
            offset = self.pos
            self.pos += 1
            self.skip_ws()
            node = self.power(node, offset)
        return node

    def atom(self) -> N:
        ch = self.peek()
        if not ch:
            raise self.error("unexpected end of input")
        if ch == "(":
            self.pos += 1
            node = self.term()
            if self.peek() != ")":
                raise self.error("expected ')'")
            self.pos += 1
            return node
        if ch.isalpha():
            if ch not in self.alphabet:
                raise AlphabetError(ch, self.pos)
            self.pos += 1
            return self.letter(ch)
        raise self.error(f"unexpected {ch!r}")


class _TermParser(Parser[PiTerm]):
    def letter(self, symbol: str) -> PiTerm:
        return Letter(symbol)

    def concat(self, left: PiTerm, right: PiTerm) -> PiTerm:
        return Concat(left, right)

    def power(self, node: PiTerm, offset: int) -> PiTerm:
        ch = self.peek()
        if ch == "w":
            self.pos += 1
            return PiPower(node)
        if ch.isdigit():
            k = self.read_int()
            if k < 1:
                raise self.error("finite power must be at least 1", offset)
            return FinPower(node, k)
        raise self.error("expected 'w' or a positive integer after '^'")


def parse_term(text: str, alphabet: Iterable[str] | None = None) -> PiTerm:
    return _TermParser(text, alphabet).parse()


def _needs_parens(t: PiTerm) -> bool:
    return not isinstance(t, Letter)


def render_term(t: PiTerm) -> str:
    """Canonical text; ``parse_term(render_term(t)) == t``."""
    match t:
        case Letter(symbol):
            return symbol
        case Concat(left, right):
            rhs = render_term(right)
            if isinstance(right, Concat):
                rhs = f"({rhs})"
            return render_term(left) + rhs
        case PiPower(inner):
            base = render_term(inner)
            return f"({base})^w" if _needs_parens(inner) else f"{base}^w"
        case FinPower(inner, k):
            base = render_term(inner)
            return f"({base})^{k}" if _needs_parens(inner) else f"{base}^{k}"


def term_letters(t: PiTerm) -> frozenset[str]:
    out: set[str] = set()
    stack: list[PiTerm] = [t]
    while stack:
        node = stack.pop()
        match node:
            case Letter(symbol):
                out.add(symbol)
            case Concat(left, right):
                stack.extend((left, right))
            case PiPower(inner) | FinPower(inner, _):
                stack.append(inner)
    return frozenset(out)


def parse_identity(text: str, alphabet: Iterable[str] | None = None) -> tuple[PiTerm, PiTerm]:
    """Split ``"s = t"`` and parse both sides."""
    if text.count("=") != 1:
        raise TermSyntaxError("an identity needs exactly one '='", text.find("=") + 1 or 0)
    cut = text.index("=")
    left = parse_term(text[:cut], alphabet)
    # parse the right side in place so error offsets point into the full text
    rhs = _TermParser(text, alphabet)
    rhs.pos = cut + 1
    return left, rhs.parse()
