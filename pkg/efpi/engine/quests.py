"""Finite stand-ins for infinite domains: which quests and responses the search tries.

A word with finitely many positions contributes all of them. Otherwise each
power contributes the indices within ``radius`` of its ends, the pinned indices
with their ``radius``-neighbourhoods, and one deep index per unbounded gap.
"""

from __future__ import annotations

import functools
from collections import defaultdict
from collections.abc import Hashable, Iterable
from fractions import Fraction

from ..fragments import Quantifier, Side, Valuation
from ..genword import (
    LEFT,
    RIGHT,
    At,
    Cat,
    Index,
    Lit,
    Offset,
    Part,
    Position,
    Pow,
    Steps,
    Tau,
    TauKind,
    WordExpr,
    compare_steps,
    count_after,
    count_before,
    distance,
    index_pred,
    index_succ,
    index_valid,
    is_empty,
    is_finite,
    is_position,
    positions,
    size,
    sort_key,
)
from .game import GameConfig, Valuated, letter_at

# finite subwords up to this many positions are enumerated outright
_SMALL = 24


def representative_quests(c: GameConfig, side: Side, radius: int) -> list[Position]:
    """Positions of ``side``'s word the search tries, in word order."""
    if radius < 1:
        raise ValueError("radius must be >= 1")
    here, there = c.side(side), c.side(side.other)
    w = here.word
    if is_finite(w):
        return positions(w)
    pins = tuple(sorted({p.steps for _, p in here.valuation.items}, key=sort_key))
    found = set(_reps(w, pins, radius))
    for _, p in there.valuation.items:
        if is_position(w, p):
            found.add(p.steps)
    return [Position(s) for s in sorted(found, key=sort_key)]


@functools.lru_cache(maxsize=4096)
def _reps(w: WordExpr, pins: tuple[Steps, ...], radius: int) -> frozenset[Steps]:
    n = size(w)
    if n is not None and n <= _SMALL:
        return frozenset(p.steps for p in positions(w))
    match w:
        case Lit(text):
            return frozenset((Offset(i),) for i in range(len(text)))
        case Cat(left, right):
            lp = tuple(p[1:] for p in pins if p[0] == LEFT)
            rp = tuple(p[1:] for p in pins if p[0] == RIGHT)
            return frozenset(
                [(LEFT, *s) for s in _reps(left, lp, radius)]
                + [(RIGHT, *s) for s in _reps(right, rp, radius)]
            )
        case Pow(tau, inner):
            if is_empty(inner):
                return frozenset()
            by_index: dict[Index, list[Steps]] = defaultdict(list)
            for p in pins:
                head = p[0]
                assert isinstance(head, At)
                by_index[head.index].append(p[1:])
            out: set[Steps] = set()
            for idx in index_representatives(tau, by_index, radius):
                inner_pins = tuple(by_index.get(idx, ()))
                out.update((At(idx), *s) for s in _reps(inner, inner_pins, radius))
            return frozenset(out)


def _gap_fill(anchors: list[int], radius: int) -> list[int]:
    """Midpoints of gaps too wide for the anchors' neighbourhoods to cover."""
    return [
        (a + b) // 2 for a, b in zip(anchors, anchors[1:], strict=False) if b - a > 2 * radius + 1
    ]


def _two_sided(values: list[int], radius: int) -> list[int]:
    """Deep picks inside an unbounded two-way part pinned at ``values``."""
    if not values:
        return [0]
    return [values[0] - radius - 1, values[-1] + radius + 1, *_gap_fill(values, radius)]


def index_representatives(
    tau: Tau, pinned: Iterable[Index], radius: int
) -> list[Index]:
    pinned = sorted(set(pinned), key=Index.key)
    out: set[Index] = set()

    def add(idx: Index) -> None:
        if index_valid(tau, idx):
            out.add(idx)

    kind = tau.kind
    if kind is TauKind.FIN:
        for i in range(min(radius, tau.k)):
            add(Index(Part.FIN, i))
            add(Index(Part.FIN, tau.k - 1 - i))
    if kind in (TauKind.OMEGA, TauKind.SIGMA, TauKind.RHO):
        for i in range(radius):
            add(Index(Part.W, i))
    if kind in (TauKind.OMEGA_STAR, TauKind.SIGMA, TauKind.RHO):
        for j in range(radius):
            add(Index(Part.W_STAR, j))

    for p in pinned:
        add(p)
        fwd: Index | None = p
        back: Index | None = p
        for _ in range(radius):
            fwd = index_succ(tau, fwd) if fwd is not None else None
            back = index_pred(tau, back) if back is not None else None
            if fwd is not None:
                add(fwd)
            if back is not None:
                add(back)

    def values(part: Part, q: Fraction | None = None) -> list[int]:
        return sorted(p.i for p in pinned if p.part is part and p.q == q)

    if kind is TauKind.FIN:
        for i in _gap_fill([-1, *values(Part.FIN), tau.k], radius):
            add(Index(Part.FIN, i))
    if kind in (TauKind.OMEGA, TauKind.SIGMA, TauKind.RHO):
        ws = values(Part.W)
        for i in _gap_fill([-1, *ws], radius):
            add(Index(Part.W, i))
        if kind is TauKind.OMEGA:
            add(Index(Part.W, max([radius - 1, *ws]) + radius + 1))
    if kind in (TauKind.OMEGA_STAR, TauKind.SIGMA, TauKind.RHO):
        js = values(Part.W_STAR)
        for j in _gap_fill([-1, *js], radius):
            add(Index(Part.W_STAR, j))
        if kind is TauKind.OMEGA_STAR:
            add(Index(Part.W_STAR, max([radius - 1, *js]) + radius + 1))
    if kind in (TauKind.ZETA, TauKind.SIGMA):
        for i in _two_sided(values(Part.Z), radius):
            add(Index(Part.Z, i))
    if kind is TauKind.RHO:
        qs = sorted({p.q for p in pinned if p.part is Part.ZN and p.q is not None})
        for q in qs:
            for i in _two_sided(values(Part.ZN, q), radius):
                add(Index(Part.ZN, i, q))
        fresh = [Fraction(0)] if not qs else [qs[0] - 1, qs[-1] + 1]
        fresh += [(a + b) / 2 for a, b in zip(qs, qs[1:], strict=False)]
        for q in fresh:
            add(Index(Part.ZN, 0, q))
    return sorted(out, key=Index.key)


# -- responses ----------------------------------------------------------------

_Cls = tuple[int, int]


def distance_class(d: int | None, cap: int) -> _Cls:
    """Exact below ``cap``, then "far", then "infinite"."""
    if d is None:
        return (2, 0)
    if d >= cap:
        return (1, 0)
    return (0, d)


def _profile(w: WordExpr, steps: Steps, cap: int) -> tuple[_Cls, _Cls]:
    before = distance_class(count_before(w, steps), cap)
    return (before, distance_class(count_after(w, steps), cap))


def keeps_partial_iso(
    asked: Valuated, quest: Steps, answering: Valuated, response: Steps, x: str
) -> bool:
    """Binding ``x`` to quest/response leaves no literal disagreement."""
    if letter_at(asked.word, quest) != letter_at(answering.word, response):
        return False
    for y, p in asked.valuation.items:
        if y == x:
            continue
        if compare_steps(quest, p.steps) is not compare_steps(
            response, answering.valuation.get(y).steps
        ):
            return False
    return True


def ordered_responses(
    c: GameConfig,
    q: Quantifier,
    x: str,
    quest: Position,
    radius: int,
    rank: bool = True,
) -> list[Position]:
    """Duplicator's candidate answers that survive the round, most promising first.

    Candidates losing on the spot are dropped. Ranking prefers the mapped quest
    itself, then equal distances to the word ends, then equal distances to the
    other pinned positions.
    """
    side = q.quest_side
    asked, answering = c.side(side), c.side(side.other)
    candidates = representative_quests(c, side.other, radius)
    survivors = [
        r for r in candidates if keeps_partial_iso(asked, quest.steps, answering, r.steps, x)
    ]
    if not rank or len(survivors) < 2:
        return survivors
    cap = radius + 1
    want = _profile(asked.word, quest.steps, cap)
    others = [
        (p.steps, answering.valuation.get(y).steps)
        for y, p in asked.valuation.items
        if y != x
    ]
    want_gaps = [distance_class(distance(asked.word, quest.steps, a), cap) for a, _ in others]

    def score(r: Position) -> tuple[int, int, int]:
        got = _profile(answering.word, r.steps, cap)
        gaps = [distance_class(distance(answering.word, r.steps, b), cap) for _, b in others]
        return (
            0 if r.steps == quest.steps else 1,
            sum(g != w for g, w in zip(got, want, strict=True)),
            sum(g != w for g, w in zip(gaps, want_gaps, strict=True)),
        )

    return sorted(survivors, key=score)


# -- abstract configurations --------------------------------------------------


def _compress_part(values: list[int], cap: int, anchored: bool) -> dict[int, int]:
    """Cap every gap at ``cap + 1``; anchored parts also cap the distance to their end."""
    out: dict[int, int] = {}
    prev_old: int | None = None
    prev_new = 0
    for v in sorted(set(values)):
        if prev_old is None:
            new = min(v, cap + 1) if anchored else 0
        else:
            new = prev_new + min(v - prev_old, cap + 1)
        out[v] = new
        prev_old, prev_new = v, new
    return out


def _compress_indices(idxs: list[Index], cap: int) -> dict[Index, Index]:
    mapping: dict[Index, Index] = {}
    groups: dict[tuple[Part, Fraction | None], list[int]] = defaultdict(list)
    for idx in idxs:
        groups[(idx.part, idx.q)].append(idx.i)
    for (part, q), vals in groups.items():
        if part in (Part.FIN, Part.ZN):
            table = {v: v for v in vals}
        else:
            table = _compress_part(vals, cap, anchored=part is not Part.Z)
        for v in vals:
            mapping[Index(part, v, q)] = Index(part, table[v], q)
    return mapping


def _compress(
    w: WordExpr, pins: list[tuple[str, Steps]], cap: int
) -> list[tuple[str, Steps]]:
    if not pins:
        return []
    match w:
        case Lit():
            return pins
        case Cat(left, right):
            out: list[tuple[str, Steps]] = []
            for branch, sub in ((LEFT, left), (RIGHT, right)):
                mine = [(v, s[1:]) for v, s in pins if s[0] == branch]
                out += [(v, (branch, *s)) for v, s in _compress(sub, mine, cap)]
            return out
        case Pow(_, inner):
            groups: dict[Index, list[tuple[str, Steps]]] = defaultdict(list)
            for v, s in pins:
                head = s[0]
                assert isinstance(head, At)
                groups[head.index].append((v, s[1:]))
            mapping = _compress_indices(list(groups), cap)
            out = []
            for idx, members in groups.items():
                out += [(v, (At(mapping[idx]), *s)) for v, s in _compress(inner, members, cap)]
            return out


def _compress_side(side: Valuated, cap: int) -> Valuated:
    pins = [(v, p.steps) for v, p in side.valuation.items]
    squeezed = _compress(side.word, pins, cap)
    return Valuated(side.word, Valuation.of({v: Position(s) for v, s in squeezed}))


def abstract_config(c: GameConfig, cap: int) -> GameConfig:
    """Same configuration with every index gap between pins (and to part ends) capped."""
    return GameConfig(c.fragment, _compress_side(c.left, cap), _compress_side(c.right, cap))


def memo_key(c: GameConfig) -> Hashable:
    """Orientation-free for negation-closed fragments: (A, B) and (B, A) decide alike."""
    if c.fragment.negation_closed:
        return (c.fragment, frozenset({(c.left, c.right), (c.right, c.left)}))
    return (c.fragment, c.left, c.right)
