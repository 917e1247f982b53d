"""Game configurations, single rounds and the immediate winning condition."""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from enum import Enum

from ..errors import EmptyReductError, WrongSideError
from ..fragments import (
    Atom,
    Eq,
    Family,
    Formula,
    FragmentDesc,
    Label,
    Less,
    Not,
    Quantifier,
    Side,
    Valuation,
    variable_pool,
)
from ..genword import (
    Ord,
    Position,
    Steps,
    WordExpr,
    compare_steps,
    is_position,
    label,
    letters,
    render_word,
)


class Winner(str, Enum):
    DUPLICATOR = "duplicator"
    SPOILER = "spoiler"


@dataclass(frozen=True)
class Valuated:
    word: WordExpr
    valuation: Valuation = field(default_factory=Valuation)

    def __str__(self) -> str:
        return f"<{render_word(self.word)}, {self.valuation}>"


@dataclass(frozen=True)
class GameConfig:
    fragment: FragmentDesc
    left: Valuated
    right: Valuated

    def __post_init__(self) -> None:
        lv, rv = self.left.valuation.variables, self.right.valuation.variables
        if lv != rv:
            raise ValueError(f"valuations bind different variables: {lv} vs {rv}")
        if self.fragment.family is Family.FO2 and not set(lv) <= {"x", "y"}:
            raise ValueError(f"FO2 configurations bind only x and y, got {lv}")

    @classmethod
    def start(cls, fragment: FragmentDesc, u: WordExpr, v: WordExpr) -> GameConfig:
        return cls(fragment, Valuated(u), Valuated(v))

    def side(self, s: Side) -> Valuated:
        return self.left if s is Side.LEFT else self.right

    def swapped(self) -> GameConfig:
        return GameConfig(self.fragment, self.right, self.left)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.left.valuation.variables

    def alphabet(self) -> frozenset[str]:
        return letters(self.left.word) | letters(self.right.word)


@dataclass(frozen=True)
class Move:
    quantifier: Quantifier
    variable: str
    quest: Position
    # None when the answering side has no position at all
    response: Position | None


def step(c: GameConfig, m: Move) -> GameConfig:
    """One round: bind ``x`` on both sides, swap sides for negated quantifiers."""
    sub = c.fragment.reduct(m.quantifier, m.variable)
    if sub is None:
        raise EmptyReductError(
            f"{c.fragment} has no round {m.quantifier.symbol}{m.variable} left"
        )
    quest_side = m.quantifier.quest_side
    asked, answering = c.side(quest_side), c.side(quest_side.other)
    if not is_position(asked.word, m.quest):
        raise WrongSideError(
            f"{m.quantifier.value} quests go on the {quest_side.value} word; "
            f"{m.quest} is not a position there"
        )
    if m.response is None or not is_position(answering.word, m.response):
        raise WrongSideError(
            f"the response must be a position of the {quest_side.other.value} word, "
            f"got {m.response}"
        )
    asked = Valuated(asked.word, asked.valuation.bind(m.variable, m.quest))
    answering = Valuated(answering.word, answering.valuation.bind(m.variable, m.response))
    left, right = (asked, answering) if quest_side is Side.LEFT else (answering, asked)
    if m.quantifier.swaps:
        left, right = right, left
    return GameConfig(sub, left, right)


@functools.lru_cache(maxsize=1 << 16)
def letter_at(w: WordExpr, steps: Steps) -> str:
    return label(w, Position(steps))


def _literal(atom: Atom, holds_left: bool) -> Formula:
    return atom if holds_left else Not(atom)


def spoiler_wins_now(c: GameConfig) -> Formula | None:
    """A literal true on the left and false on the right, if the pinned positions disagree.

    Checks every atom over the bound variables: labels, equality and strict order
    (``x <= y`` follows from those two).
    """
    names = c.variables
    lval, rval = c.left.valuation, c.right.valuation
    lw, rw = c.left.word, c.right.word
    for x in names:
        a, b = letter_at(lw, lval.get(x).steps), letter_at(rw, rval.get(x).steps)
        if a != b:
            return Label(x, a)
    for i, x in enumerate(names):
        for y in names[i + 1 :]:
            lo = compare_steps(lval.get(x).steps, lval.get(y).steps)
            ro = compare_steps(rval.get(x).steps, rval.get(y).steps)
            if lo is ro:
                continue
            if Ord.EQ in (lo, ro):
                return _literal(Eq(x, y), lo is Ord.EQ)
            # one side has x < y, the other y < x
            return _literal(Less(x, y), lo is Ord.LT)
    return None


def candidate_variables(c: GameConfig) -> tuple[str, ...]:
    """Variables worth choosing: FO2's two, or every bound one plus one fresh one for FO."""
    if c.fragment.family is Family.FO2:
        return variable_pool(Family.FO2, 2)
    bound = c.variables
    for name in variable_pool(Family.FO, len(bound) + 1):
        if name not in bound:
            return (*bound, name)
    return bound


def legal_rounds(c: GameConfig) -> list[tuple[Quantifier, str]]:
    """Every (quantifier, variable) with a non-empty reduct, in a fixed order."""
    return [
        (q, x)
        for x in candidate_variables(c)
        for q in Quantifier
        if c.fragment.reduct(q, x) is not None
    ]
