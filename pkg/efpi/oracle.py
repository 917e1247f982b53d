"""Brute-force ground truth on finite words.

Nothing here uses the engine's search: games are solved by plain minimax over
integer offsets of the flattened words, and the logic side enumerates
complete Hintikka sentences and evaluates them with the Tarskian evaluator.
"""

from __future__ import annotations

import itertools
import logging
import random
from collections.abc import Iterator
from dataclasses import dataclass, field

from .config import default_budget
from .engine import GameConfig, Solver, Winner, decide_bounded, transitivity_instance
from .errors import BudgetExceededError, NonFiniteWordError
from .fragments import (
    FALSE,
    TRUE,
    Exists,
    Family,
    Formula,
    FragmentDesc,
    Label,
    Less,
    Not,
    Quantifier,
    Side,
    Valuation,
    conj,
    holds_on_string,
    variable_pool,
)
from .genword import (
    Lit,
    WordExpr,
    finite_approx,
    flatten,
    is_finite,
    is_sigma_rational,
    positions,
    render_word,
)

logger = logging.getLogger(__name__)

MAX_ENUM_DEPTH = 2
MAX_ENUM_ALPHABET = 2
MAX_GRID_LENGTH = 5
MAX_GRID_DEPTH = 3


# -- exact games ----------------------------------------------------------------
Pins = tuple[tuple[str, int], ...]


def _cmp(a: int, b: int) -> int:
    return (a > b) - (a < b)


class _ExactGame:
    """Minimax on plain strings with variables pinned to integer offsets.

    A state is ``(depth, u, v, pins_u, pins_v)``; negated quantifiers swap
    ``u`` and ``v`` exactly as the round rules say.
    """

    def __init__(self, family: Family):
        self.family = family
        self.memo: dict[tuple[int, str, str, Pins, Pins], bool] = {}

    def variables(self, bound: tuple[str, ...]) -> tuple[str, ...]:
        if self.family is Family.FO2:
            return variable_pool(Family.FO2, 2)
        fresh = next(v for v in variable_pool(Family.FO, len(bound) + 1) if v not in bound)
        return (*bound, fresh)

    @staticmethod
    def disagree(u: str, v: str, pu: Pins, pv: Pins) -> bool:
        for (_, i), (_, j) in zip(pu, pv, strict=True):
            if u[i] != v[j]:
                return True
        for a in range(len(pu)):
            for b in range(a + 1, len(pu)):
                if _cmp(pu[a][1], pu[b][1]) != _cmp(pv[a][1], pv[b][1]):
                    return True
        return False

    @staticmethod
    def types(w: str, pins: Pins, x: str) -> frozenset[tuple[str, tuple[int, ...]]]:
        """Atomic types a fresh pin for ``x`` can realize in ``w``."""
        others = [i for z, i in pins if z != x]
        return frozenset((w[p], tuple(_cmp(p, i) for i in others)) for p in range(len(w)))

    def spoiler(self, depth: int, u: str, v: str, pu: Pins, pv: Pins) -> bool:
        if self.disagree(u, v, pu, pv):
            return True
        if depth == 0:
            return False
        key = (depth, u, v, pu, pv)
        known = self.memo.get(key)
        if known is not None:
            return known
        bound = tuple(z for z, _ in pu)
        if depth == 1:
            # with one round left, Spoiler wins iff some pin type occurs on one side only
            result = any(
                self.types(u, pu, x) != self.types(v, pv, x) for x in self.variables(bound)
            )
        else:
            result = any(
                self._wins_round(depth, u, v, pu, pv, q, x)
                for x in self.variables(bound)
                for q in Quantifier
            )
        self.memo[key] = result
        return result

    def _wins_round(
        self, depth: int, u: str, v: str, pu: Pins, pv: Pins, q: Quantifier, x: str
    ) -> bool:
        left_quest = q.quest_side is Side.LEFT
        asked, answering = (u, v) if left_quest else (v, u)
        for i in range(len(asked)):
            # all() over no answers is a Spoiler win: Duplicator cannot move
            if all(
                self.spoiler(depth - 1, *self._after(u, v, pu, pv, q, x, i, j))
                for j in range(len(answering))
            ):
                return True
        return False

    @staticmethod
    def _after(
        u: str, v: str, pu: Pins, pv: Pins, q: Quantifier, x: str, i: int, j: int
    ) -> tuple[str, str, Pins, Pins]:
        at_u, at_v = (i, j) if q.quest_side is Side.LEFT else (j, i)
        nu = tuple(sorted({**dict(pu), x: at_u}.items()))
        nv = tuple(sorted({**dict(pv), x: at_v}.items()))
        if q.swaps:
            return v, u, nv, nu
        return u, v, nu, nv


def _pins(w: WordExpr, alpha: Valuation) -> Pins:
    where = {p: i for i, p in enumerate(positions(w))}
    return tuple((z, where[p]) for z, p in alpha.items)


def decide_finite_exact(c: GameConfig) -> Winner:
    """Minimax over every quest and every response of both finite words."""
    for side in (c.left, c.right):
        if not is_finite(side.word):
            raise NonFiniteWordError("exact games need finite words on both sides")
    depth = c.fragment.depth
    if depth is None:
        raise ValueError(f"{c.fragment} is unbounded")
    game = _ExactGame(c.fragment.family)
    u, v = flatten(c.left.word), flatten(c.right.word)
    won = game.spoiler(
        depth, u, v, _pins(c.left.word, c.left.valuation), _pins(c.right.word, c.right.valuation)
    )
    return Winner.SPOILER if won else Winner.DUPLICATOR


# -- sentence enumeration -------------------------------------------------------
def _other(var: str) -> str:
    return "y" if var == "x" else "x"


def _types(depth: int, var: str, alphabet: tuple[str, ...]) -> list[Formula]:
    """Complete two-variable types of ``var`` at quantifier depth ``depth``.

    Depth 0 fixes the letter; each further level says, for every type one level
    down, whether it occurs strictly left and strictly right of ``var``.
    """
    if depth == 0:
        return [Label(var, a) for a in alphabet]
    y = _other(var)
    below = _types(depth - 1, y, alphabet)
    claims = [Exists(y, conj([Less(y, var), t])) for t in below]
    claims += [Exists(y, conj([Less(var, y), t])) for t in below]
    out: list[Formula] = []
    for a in alphabet:
        for signs in itertools.product((True, False), repeat=len(claims)):
            parts: list[Formula] = [Label(var, a)]
            parts += [cl if keep else Not(cl) for cl, keep in zip(claims, signs, strict=True)]
            out.append(conj(parts))
    return out


def type_count(depth: int, alphabet_size: int) -> int:
    if depth == 0:
        return alphabet_size
    return alphabet_size * 2 ** (2 * type_count(depth - 1, alphabet_size))


def sentence_count(depth: int, alphabet_size: int) -> int:
    return 2 + sum(2 * type_count(j, alphabet_size) for j in range(depth))


def enumerate_formulas(
    f: FragmentDesc, alphabet: str | set[str] | frozenset[str], depth: int
) -> list[Formula]:
    """Sentences of ``f`` up to quantifier depth ``depth``, one per equivalence class needed.

    ``T``, ``F`` and ``Ex t`` / ``!Ex t`` for every complete type ``t`` of depth
    below ``depth``. Every sentence of that depth (FO sentences of depth 2 need
    only two variables) is a Boolean combination of these.
    """
    sigma = tuple(sorted(set(alphabet)))
    if depth > MAX_ENUM_DEPTH or len(sigma) > MAX_ENUM_ALPHABET:
        raise BudgetExceededError(
            f"enumeration is limited to depth <= {MAX_ENUM_DEPTH} "
            f"and {MAX_ENUM_ALPHABET} letters, got depth {depth} over {len(sigma)}"
        )
    if f.depth is not None and depth > f.depth:
        raise ValueError(f"{f} has no sentences of depth {depth}")
    out: list[Formula] = [TRUE, FALSE]
    for j in range(depth):
        for t in _types(j, "x", sigma):
            out.append(Exists("x", t))
            out.append(Not(Exists("x", t)))
    logger.debug("enumerated %d sentences of %s over %s", len(out), f, "".join(sigma))
    return out


def implication_check(u: str, v: str, f: FragmentDesc) -> bool:
    """Every enumerated sentence true on ``u`` is true on ``v``."""
    if f.depth is None:
        raise ValueError(f"{f} is unbounded")
    alphabet = set(u) | set(v) or {"a"}
    for phi in enumerate_formulas(f, alphabet, f.depth):
        if holds_on_string(u, phi) and not holds_on_string(v, phi):
            logger.debug("%r satisfies a sentence %r does not", u, v)
            return False
    return True


# -- sigma words against finite approximations ---------------------------------
def crosscheck_winners(
    u: WordExpr, v: WordExpr, f: FragmentDesc, k: int
) -> tuple[Winner, Winner]:
    """Engine verdict on ``(u, v)`` and the exact verdict on their k-approximations."""
    if not (is_sigma_rational(u) and is_sigma_rational(v)):
        raise ValueError("crosscheck takes sigma-rational words")
    if f.depth is None:
        raise ValueError(f"{f} is unbounded")
    engine = decide_bounded(GameConfig.start(f, u, v)).winner
    approx = GameConfig.start(f, Lit(finite_approx(u, k)), Lit(finite_approx(v, k)))
    return engine, decide_finite_exact(approx)


def crosscheck_sigma(u: WordExpr, v: WordExpr, f: FragmentDesc, n: int, k: int) -> bool:
    if f.depth != n:
        f = f.with_depth(n)
    engine, exact = crosscheck_winners(u, v, f, k)
    return engine is exact


BUILTIN_PAIRS: tuple[tuple[str, str], ...] = (
    ("a^s", "a^s"),
    ("a^s", "a^s a^s"),
    ("a^s", "aaa"),
    ("(ab)^s", "(ab)^s ab"),
    ("a^s b", "a^s a b"),
    ("a^s b", "b a^s"),
)


# -- grids ----------------------------------------------------------------------
@dataclass
class GridReport:
    name: str
    checked: int = 0
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def record(self, u: str, v: str, detail: str | None) -> None:
        self.checked += 1
        if detail is not None:
            self.mismatches.append((u, v, detail))


def words_up_to(alphabet: str, maxlen: int) -> Iterator[str]:
    """Every word over ``alphabet`` of length at most ``maxlen``, shortest first."""
    for n in range(maxlen + 1):
        for letters in itertools.product(sorted(alphabet), repeat=n):
            yield "".join(letters)


def _guard(depth: int, maxlen: int) -> None:
    if depth > MAX_GRID_DEPTH or maxlen > MAX_GRID_LENGTH:
        raise BudgetExceededError(
            f"grids are limited to depth <= {MAX_GRID_DEPTH} and length <= {MAX_GRID_LENGTH}"
        )


def sentence_grid(f: FragmentDesc, maxlen: int, alphabet: str = "ab") -> GridReport:
    """Game verdict Duplicator exactly when every sentence true on u holds on v."""
    if f.depth is None:
        raise ValueError(f"{f} is unbounded")
    _guard(f.depth, maxlen)
    report = GridReport(f"sentences {f}")
    words = list(words_up_to(alphabet, maxlen))
    for u, v in itertools.product(words, repeat=2):
        game = decide_finite_exact(GameConfig.start(f, Lit(u), Lit(v)))
        implied = implication_check(u, v, f)
        agree = (game is Winner.DUPLICATOR) == implied
        report.record(u, v, None if agree else f"game {game.value}, implication {implied}")
    return report


def exact_grid(
    f: FragmentDesc,
    maxlen: int,
    alphabet: str = "ab",
    sample: int | None = None,
    seed: int = 0,
) -> GridReport:
    """Engine against brute force on every pair (or ``sample`` random pairs)."""
    if f.depth is None:
        raise ValueError(f"{f} is unbounded")
    _guard(f.depth, maxlen)
    report = GridReport(f"exact {f}")
    words = list(words_up_to(alphabet, maxlen))
    pairs = list(itertools.product(words, repeat=2))
    if sample is not None and sample < len(pairs):
        pairs = random.Random(seed).sample(pairs, sample)
    solver = Solver(default_budget(f.depth))
    for u, v in pairs:
        c = GameConfig.start(f, Lit(u), Lit(v))
        engine = decide_bounded(c, solver=solver).winner
        exact = decide_finite_exact(c)
        report.record(u, v, None if engine is exact else f"engine {engine.value}")
    return report


def crosscheck_grid(
    pairs: tuple[tuple[WordExpr, WordExpr], ...], f: FragmentDesc, k: int
) -> GridReport:
    report = GridReport(f"crosscheck {f} k={k}")
    for u, v in pairs:
        engine, exact = crosscheck_winners(u, v, f, k)
        detail = None if engine is exact else f"engine {engine.value}, approx {exact.value}"
        report.record(render_word(u), render_word(v), detail)
    return report


def preorder_grid(
    f: FragmentDesc, maxlen: int, alphabet: str = "ab", samples: int = 200, seed: int = 0
) -> GridReport:
    """Reflexivity on every word, transitivity on ``samples`` random triples."""
    if f.depth is None:
        raise ValueError(f"{f} is unbounded")
    _guard(f.depth, maxlen)
    report = GridReport(f"preorder {f}")
    words = list(words_up_to(alphabet, maxlen))
    solver = Solver(default_budget(f.depth))
    for u in words:
        c = GameConfig.start(f, Lit(u), Lit(u))
        report.record(u, u, None if not solver.spoiler_wins(c) else "not reflexive")
    rng = random.Random(seed)
    for _ in range(samples):
        u, v, w = (rng.choice(words) for _ in range(3))
        ok = transitivity_instance(Lit(u), Lit(v), Lit(w), f, solver.budget)
        report.record(f"{u} {v}", w, None if ok else "not transitive")
    return report
