"""Unbounded games: certificates where they exist, a bounded sweep where they don't.

Three answers, from strongest to weakest:

* ``spoiler-certified`` by a region-class mismatch, or by a bounded game Spoiler wins;
* ``duplicator-certified`` by a finite set of compressed configurations that
  Duplicator never has to leave (or by identical sides);
* ``duplicator-up-to-depth`` when only the bounded sweep speaks for Duplicator.
"""

from __future__ import annotations

import logging
from collections import deque
from collections.abc import Hashable
from dataclasses import dataclass
from enum import Enum

from ..config import DEFAULT_CLOSURE_BUDGET, DEFAULT_CLOSURE_LIMIT, default_budget
from ..fragments import Family, Side
from ..genword import RegionClass, TauKind, WordExpr, powers, region_classes
from .bounded import MemoBackend, Solver, Verdict, decide_bounded
from .game import GameConfig, Move, Winner, legal_rounds, spoiler_wins_now, step
from .quests import abstract_config, memo_key, ordered_responses, representative_quests

logger = logging.getLogger(__name__)

_CERTIFIABLE = frozenset(
    {TauKind.FIN, TauKind.OMEGA, TauKind.OMEGA_STAR, TauKind.ZETA, TauKind.SIGMA}
)


class UnboundedStatus(str, Enum):
    DUPLICATOR_CERTIFIED = "duplicator-certified"
    SPOILER_CERTIFIED = "spoiler-certified"
    DUPLICATOR_UP_TO_DEPTH = "duplicator-up-to-depth"


@dataclass(frozen=True)
class RegionCertificate:
    """``region_class`` occurs on ``side`` and nowhere on the other word."""

    side: Side
    region_class: RegionClass
    left_classes: frozenset[RegionClass]
    right_classes: frozenset[RegionClass]
    rule: str = "region-class"


@dataclass(frozen=True)
class ClosedSetCertificate:
    states: int
    closure_budget: int
    width: int
    rule: str = "closed-set"


@dataclass(frozen=True)
class IdentityCertificate:
    rule: str = "identical-sides"


Certificate = RegionCertificate | ClosedSetCertificate | IdentityCertificate


@dataclass(frozen=True)
class UnboundedVerdict:
    status: UnboundedStatus
    # largest depth the sweep verified, or the depth of a bounded Spoiler win
    depth: int | None = None
    certificate: Certificate | None = None
    bounded: Verdict | None = None

    @property
    def winner(self) -> Winner:
        if self.status is UnboundedStatus.SPOILER_CERTIFIED:
            return Winner.SPOILER
        return Winner.DUPLICATOR

    @property
    def rule(self) -> str:
        if self.certificate is not None:
            return self.certificate.rule
        if self.status is UnboundedStatus.SPOILER_CERTIFIED:
            return "bounded-depth"
        return "sweep"


def spoiler_region_certificate(c: GameConfig) -> RegionCertificate | None:
    """Spoiler wins when one word has a position of a class the other lacks.

    Spoiler pins such a position; any answer sits finitely far from an end the
    quest is infinitely far from, and walking toward that end with two
    variables exposes it after finitely many rounds.
    """
    if c.fragment.depth is not None:
        raise ValueError("region certificates concern unbounded games")
    left, right = region_classes(c.left.word), region_classes(c.right.word)
    for side, mine, theirs in ((Side.RIGHT, right, left), (Side.LEFT, left, right)):
        missing = sorted(mine - theirs)
        if missing:
            return RegionCertificate(side, missing[0], left, right)
    return None


def certifiable(w: WordExpr) -> bool:
    return all(t.kind in _CERTIFIABLE for t in powers(w))


def closed_set_certificate(
    c: GameConfig,
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    limit: int = DEFAULT_CLOSURE_LIMIT,
    widths: tuple[int, ...] = (1, 2, 3),
) -> ClosedSetCertificate | None:
    """Search for a set of compressed configurations Duplicator can stay inside forever.

    Every member must show no literal disagreement, and for every Spoiler quest
    one of the ``width`` best-ranked answers must lead back into the set.
    """
    for width in widths:
        found = _closed_set(c, closure_budget, limit, width)
        if found is not None:
            return found
    return None


def _closed_set(c: GameConfig, cap: int, limit: int, width: int) -> ClosedSetCertificate | None:
    radius = cap + 1
    start = abstract_config(c, cap)
    known: dict[Hashable, GameConfig] = {memo_key(start): start}
    obligations: dict[Hashable, list[list[Hashable]]] = {}
    bad: set[Hashable] = set()
    frontier = deque([start])
    while frontier:
        s = frontier.popleft()
        key = memo_key(s)
        if spoiler_wins_now(s) is not None:
            bad.add(key)
            continue
        needs: list[list[Hashable]] = []
        for q, x in legal_rounds(s):
            if q.swaps:
                continue
            for quest in representative_quests(s, q.quest_side, radius):
                options: list[Hashable] = []
                for r in ordered_responses(s, q, x, quest, radius)[:width]:
                    child = abstract_config(step(s, Move(q, x, quest, r)), cap)
                    ck = memo_key(child)
                    if ck not in known:
                        if len(known) >= limit:
                            logger.warning(
                                "closed-set search hit its limit of %d configurations (width %d)",
                                limit,
                                width,
                            )
                            return None
                        known[ck] = child
                        frontier.append(child)
                    options.append(ck)
                needs.append(options)
        obligations[key] = needs

    alive = set(known) - bad
    changed = True
    while changed:
        changed = False
        for key in list(alive):
            if any(not any(o in alive for o in opts) for opts in obligations.get(key, [])):
                alive.discard(key)
                changed = True
    if memo_key(start) not in alive:
        logger.debug("no closed set at width %d (%d configurations)", width, len(known))
        return None
    return ClosedSetCertificate(len(alive), cap, width)


def decide_unbounded(
    c: GameConfig,
    max_depth: int,
    budget: int | None = None,
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    closure_limit: int = DEFAULT_CLOSURE_LIMIT,
    backend: MemoBackend | None = None,
    solvers: dict[int, Solver] | None = None,
) -> UnboundedVerdict:
    """Certificates first, then the bounded sweep; ``solvers`` (keyed by budget) may be shared."""
    if c.fragment.depth is not None:
        raise ValueError(f"{c.fragment} is bounded; use decide_bounded")

    if c.left == c.right:
        return UnboundedVerdict(UnboundedStatus.DUPLICATOR_CERTIFIED, None, IdentityCertificate())

    region = spoiler_region_certificate(c)
    if region is not None:
        logger.info(
            "Spoiler wins by region class %s on the %s", region.region_class, region.side.value
        )
        return UnboundedVerdict(UnboundedStatus.SPOILER_CERTIFIED, None, region)

    if (
        c.fragment.family is Family.FO2
        and certifiable(c.left.word)
        and certifiable(c.right.word)
    ):
        closed = closed_set_certificate(c, closure_budget, closure_limit)
        if closed is not None:
            logger.info("Duplicator stays in a closed set of %d configurations", closed.states)
            return UnboundedVerdict(UnboundedStatus.DUPLICATOR_CERTIFIED, None, closed)

    solvers = {} if solvers is None else solvers
    for n in range(max_depth + 1):
        b = budget or default_budget(n)
        if b not in solvers:
            solvers[b] = Solver(b, backend)
        solver = solvers[b]
        verdict = decide_bounded(
            GameConfig(c.fragment.with_depth(n), c.left, c.right), solver=solver
        )
        logger.debug("sweep depth %d: %s", n, verdict.winner.value)
        if verdict.winner is Winner.SPOILER:
            return UnboundedVerdict(UnboundedStatus.SPOILER_CERTIFIED, n, bounded=verdict)
    return UnboundedVerdict(UnboundedStatus.DUPLICATOR_UP_TO_DEPTH, max_depth)
