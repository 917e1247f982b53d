"""Bounded-depth games: memoized minimax over representative quests."""

from __future__ import annotations

import hashlib
import logging
from collections.abc import Hashable
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

from ..config import default_budget
from ..fragments import Formula, FragmentDesc, Quantifier
from ..genword import Position, WordExpr, is_finite
from .game import GameConfig, Move, Winner, legal_rounds, spoiler_wins_now, step
from .quests import memo_key, ordered_responses, representative_quests

logger = logging.getLogger(__name__)


class Certification(str, Enum):
    EXACT_FINITE = "exact-finite"
    REPRESENTATIVE = "representative"
    RULE_BASED = "rule-based"


@dataclass(frozen=True)
class Verdict:
    winner: Winner
    certification: Certification
    budget: int | None = None
    # Spoiler's line of play, ending where ``witness`` tells the words apart
    trace: tuple[Move, ...] = ()
    witness: Formula | None = None
    explored: int = 0


class MemoBackend(Protocol):
    """Persistent outcomes keyed by ``stable_key``; ``True`` means Spoiler wins."""

    def lookup(self, key: str) -> bool | None: ...


def stable_key(c: GameConfig, budget: int) -> str:
    """Run-independent digest of a configuration and the search parameters."""
    body = repr((c.left, c.right))
    if c.fragment.negation_closed:
        body = min(body, repr((c.right, c.left)))
    return hashlib.sha256(f"{c.fragment}|B={budget}|{body}".encode()).hexdigest()


class Solver:
    """Decides bounded games and remembers every subgame it settles.

    One instance may serve many decisions with the same budget; the memo only
    ever gains entries and repeated inserts store the same value. Not thread-safe:
    share an instance only within one thread.
    """

    def __init__(self, budget: int, backend: MemoBackend | None = None):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        self.budget = budget
        self.backend = backend
        self._memo: dict[Hashable, bool] = {}
        # outcomes decided during this run, for the caller to persist
        self.fresh: dict[str, bool] = {}
        self.explored = 0
        self.cache_hits = 0

    # -- queries --------------------------------------------------------------
    def spoiler_wins(self, c: GameConfig) -> bool:
        if spoiler_wins_now(c) is not None:
            return True
        depth = c.fragment.depth
        if depth is None:
            raise ValueError(f"{c.fragment} is unbounded; use decide_unbounded")
        if depth == 0:
            return False
        key = memo_key(c)
        known = self._memo.get(key)
        if known is not None:
            return known
        persisted = self._from_backend(c)
        if persisted is not None:
            result = persisted
        else:
            self.explored += 1
            result = self.winning_move(c) is not None
            if self.backend is not None:
                self.fresh[stable_key(c, self.budget)] = result
        self._memo.setdefault(key, result)
        return result

    def _from_backend(self, c: GameConfig) -> bool | None:
        if self.backend is None:
            return None
        hit = self.backend.lookup(stable_key(c, self.budget))
        if hit is not None:
            self.cache_hits += 1
            logger.debug("cache hit for %s", c.fragment)
        return hit

    def radius(self, c: GameConfig) -> int:
        depth = c.fragment.depth
        assert depth is not None
        return c.fragment.radius(depth, self.budget)

    def spoiler_rounds(self, c: GameConfig) -> list[tuple[Quantifier, str]]:
        """Rounds Spoiler needs to try; negated ones mirror plain ones when negation-closed."""
        rounds = legal_rounds(c)
        if c.fragment.negation_closed:
            rounds = [(q, x) for q, x in rounds if not q.swaps]
        return rounds

    def responses(self, c: GameConfig, q: Quantifier, x: str, quest: Position) -> list[Position]:
        depth = c.fragment.depth or 0
        return ordered_responses(c, q, x, quest, self.radius(c), rank=depth > 1)

    def good_response(
        self, c: GameConfig, q: Quantifier, x: str, quest: Position
    ) -> Position | None:
        """A response after which Duplicator still wins, if the search finds one."""
        for r in self.responses(c, q, x, quest):
            if not self.spoiler_wins(step(c, Move(q, x, quest, r))):
                return r
        return None

    def winning_move(self, c: GameConfig) -> Move | None:
        """Spoiler's first move (in search order) that every response loses to."""
        radius = self.radius(c)
        for q, x in self.spoiler_rounds(c):
            for quest in representative_quests(c, q.quest_side, radius):
                if self.good_response(c, q, x, quest) is not None:
                    continue
                # no surviving response: show a losing one, or none for an empty domain
                tries = self.responses(c, q, x, quest) or representative_quests(
                    c, q.quest_side.other, radius
                )
                return Move(q, x, quest, tries[0] if tries else None)
        return None

    def principal_line(self, c: GameConfig) -> tuple[tuple[Move, ...], Formula | None]:
        """Spoiler's winning line against Duplicator's most stubborn answers."""
        moves: list[Move] = []
        while True:
            witness = spoiler_wins_now(c)
            if witness is not None:
                return tuple(moves), witness
            m = self.winning_move(c)
            if m is None:
                return tuple(moves), None
            moves.append(m)
            if m.response is None:
                return tuple(moves), None
            c = step(c, m)


def decide_bounded(
    c: GameConfig, budget: int | None = None, solver: Solver | None = None
) -> Verdict:
    depth = c.fragment.depth
    if depth is None:
        raise ValueError(f"{c.fragment} is unbounded; use decide_unbounded")
    if solver is None:
        solver = Solver(budget or default_budget(depth))
    before = solver.explored
    exact = is_finite(c.left.word) and is_finite(c.right.word)
    certification = Certification.EXACT_FINITE if exact else Certification.REPRESENTATIVE
    if not solver.spoiler_wins(c):
        verdict = Verdict(
            Winner.DUPLICATOR, certification, solver.budget, explored=solver.explored - before
        )
    else:
        trace, witness = solver.principal_line(c)
        verdict = Verdict(
            Winner.SPOILER,
            certification,
            solver.budget,
            trace=trace,
            witness=witness,
            explored=solver.explored - before,
        )
    logger.debug(
        "%s: %s (%s, B=%d, %d subgames)",
        c.fragment,
        verdict.winner.value,
        certification.value,
        solver.budget,
        verdict.explored,
    )
    return verdict


def _duplicator(f: FragmentDesc, u: WordExpr, v: WordExpr, solver: Solver) -> bool:
    return not solver.spoiler_wins(GameConfig.start(f, u, v))


def is_reflexive_instance(u: WordExpr, f: FragmentDesc, budget: int | None = None) -> bool:
    """Duplicator wins on ``(u, u)``."""
    solver = Solver(budget or default_budget(f.depth or 0))
    return _duplicator(f, u, u, solver)


def transitivity_instance(
    u: WordExpr, v: WordExpr, w: WordExpr, f: FragmentDesc, budget: int | None = None
) -> bool:
    """False only if Duplicator wins on (u, v) and (v, w) but loses on (u, w)."""
    solver = Solver(budget or default_budget(f.depth or 0))
    if _duplicator(f, u, v, solver) and _duplicator(f, v, w, solver):
        return _duplicator(f, u, w, solver)
    return True
