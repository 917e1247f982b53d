import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efpi.config import default_budget
from efpi.engine import (
    Certification,
    GameConfig,
    Move,
    Solver,
    Valuated,
    Winner,
    decide_bounded,
    is_reflexive_instance,
    legal_rounds,
    representative_quests,
    spoiler_wins_now,
    stable_key,
    step,
    transitivity_instance,
)
from efpi.errors import EmptyReductError, WrongSideError
from efpi.fragments import (
    Eq,
    Family,
    FragmentDesc,
    Label,
    Less,
    Quantifier,
    Side,
    Valuation,
    eval_formula,
)
from efpi.genword import Cat, Lit, Offset, Position, parse_word, positions


def fo(n: int | None) -> FragmentDesc:
    return FragmentDesc(Family.FO, n)


def fo2(n: int | None) -> FragmentDesc:
    return FragmentDesc(Family.FO2, n)


def at(i: int) -> Position:
    return Position((Offset(i),))


def game(f: FragmentDesc, u: str, v: str) -> GameConfig:
    return GameConfig.start(f, parse_word(u), parse_word(v))


@pytest.mark.parametrize(
    ("f", "u", "v", "winner"),
    [
        (fo(1), "aa", "aaa", Winner.DUPLICATOR),
        (fo(2), "aa", "aaa", Winner.SPOILER),
        (fo2(2), "aa", "aaa", Winner.SPOILER),
        (fo(2), "aaa", "aaaa", Winner.DUPLICATOR),
        (fo(1), "ab", "ba", Winner.DUPLICATOR),
        (fo2(2), "ab", "ba", Winner.SPOILER),
        (fo(0), "a", "b", Winner.DUPLICATOR),
        (fo(1), "a", "b", Winner.SPOILER),
        (fo2(1), "a", "", Winner.SPOILER),
        (fo2(3), "abab", "abab", Winner.DUPLICATOR),
    ],
)
def test_finite_games(f: FragmentDesc, u: str, v: str, winner: Winner):
    verdict = decide_bounded(game(f, u, v))
    assert verdict.winner is winner
    assert verdict.certification is Certification.EXACT_FINITE


def test_spoiler_trace_replays_to_the_witness():
    c = game(fo2(2), "ab", "ba")
    verdict = decide_bounded(c)
    assert verdict.witness is not None
    assert 0 < len(verdict.trace) <= 2
    for m in verdict.trace:
        c = step(c, m)
    assert spoiler_wins_now(c) == verdict.witness
    assert eval_formula(c.left.word, c.left.valuation, verdict.witness)
    assert not eval_formula(c.right.word, c.right.valuation, verdict.witness)


def test_empty_domain_ends_the_trace_without_a_response():
    verdict = decide_bounded(game(fo2(1), "a", ""))
    assert verdict.trace[-1].response is None
    assert verdict.witness is None


def test_unbounded_fragment_is_rejected():
    with pytest.raises(ValueError):
        decide_bounded(game(fo2(None), "a", "a"))


def test_step_binds_both_sides():
    c = game(fo(2), "ab", "ba")
    after = step(c, Move(Quantifier.EXISTS, "x", at(0), at(1)))
    assert after.fragment == fo(1)
    assert after.left.valuation.get("x") == at(0)
    assert after.right.valuation.get("x") == at(1)
    assert spoiler_wins_now(after) is None


def test_negated_quantifier_swaps_sides():
    u, v = parse_word("ab"), parse_word("b")
    c = GameConfig.start(fo(1), u, v)
    after = step(c, Move(Quantifier.NOT_EXISTS, "x", at(0), at(1)))
    assert after.left.word == v
    assert after.left.valuation.get("x") == at(0)
    assert after.right.word == u
    assert after.right.valuation.get("x") == at(1)


def test_step_errors():
    c = game(fo2(1), "a", "ab")
    with pytest.raises(EmptyReductError):
        step(game(fo2(0), "a", "a"), Move(Quantifier.EXISTS, "x", at(0), at(0)))
    with pytest.raises(EmptyReductError):
        step(c, Move(Quantifier.EXISTS, "z", at(0), at(0)))
    with pytest.raises(WrongSideError):
        step(c, Move(Quantifier.EXISTS, "x", at(1), at(0)))
    with pytest.raises(WrongSideError):
        step(c, Move(Quantifier.EXISTS, "x", at(0), None))
    with pytest.raises(WrongSideError):
        step(c, Move(Quantifier.FORALL, "x", at(0), at(1)))


def _pinned(u: str, v: str, left: dict[str, int], right: dict[str, int]) -> GameConfig:
    return GameConfig(
        fo(0),
        Valuated(Lit(u), Valuation.of({k: at(i) for k, i in left.items()})),
        Valuated(Lit(v), Valuation.of({k: at(i) for k, i in right.items()})),
    )


def test_immediate_wins():
    assert spoiler_wins_now(_pinned("ab", "ab", {"x": 0}, {"x": 1})) == Label("x", "a")
    assert spoiler_wins_now(_pinned("aa", "aa", {"x": 0, "y": 1}, {"x": 1, "y": 0})) == Less(
        "x", "y"
    )
    literal = spoiler_wins_now(_pinned("aa", "aa", {"x": 0, "y": 1}, {"x": 0, "y": 0}))
    assert literal is not None and literal != Eq("x", "y")
    assert spoiler_wins_now(_pinned("aa", "aa", {"x": 0, "y": 0}, {"x": 1, "y": 1})) is None


def test_configs_must_bind_the_same_variables():
    with pytest.raises(ValueError):
        _pinned("a", "a", {"x": 0}, {})
    with pytest.raises(ValueError):
        GameConfig(
            fo2(1),
            Valuated(Lit("a"), Valuation.of({"z": at(0)})),
            Valuated(Lit("a"), Valuation.of({"z": at(0)})),
        )


def test_fo_offers_one_fresh_variable():
    c = step(game(fo(3), "ab", "ab"), Move(Quantifier.EXISTS, "x", at(0), at(0)))
    assert {x for _, x in legal_rounds(c)} == {"x", "y"}
    assert {x for _, x in legal_rounds(game(fo2(3), "a", "a"))} == {"x", "y"}


def test_representatives_of_a_finite_word_are_all_positions():
    c = game(fo(1), "abc", "a^s")
    assert representative_quests(c, Side.LEFT, 1) == positions(Lit("abc"))
    with pytest.raises(ValueError):
        representative_quests(c, Side.LEFT, 0)


def test_stable_key_ignores_orientation_but_not_budget():
    c = game(fo(2), "ab", "ba")
    assert stable_key(c, 6) == stable_key(c.swapped(), 6)
    assert stable_key(c, 6) != stable_key(c, 7)
    assert len(stable_key(c, 6)) == 64


def test_preorder_helpers():
    assert is_reflexive_instance(parse_word("abab"), fo(2))
    assert is_reflexive_instance(parse_word("a^s b"), fo2(1))
    assert transitivity_instance(
        parse_word("aaa"), parse_word("aaaa"), parse_word("aaaaa"), fo(2)
    )


class DictBackend:
    def __init__(self, known: dict[str, bool]):
        self.known = known

    def lookup(self, key: str) -> bool | None:
        return self.known.get(key)


@pytest.mark.parametrize(("u", "v"), [("aa", "aaa"), ("aba", "aab")])
def test_solver_reuses_persisted_outcomes(u: str, v: str):
    c = game(fo(2), u, v)
    first = Solver(6, DictBackend({}))
    before = decide_bounded(c, solver=first)
    assert first.fresh
    second = Solver(6, DictBackend(dict(first.fresh)))
    after = decide_bounded(c, solver=second)
    assert after.winner is before.winner
    assert second.cache_hits >= 1
    assert second.explored < first.explored


def test_solver_without_backend_records_nothing():
    solver = Solver(6)
    decide_bounded(game(fo(2), "aa", "aaa"), solver=solver)
    assert solver.fresh == {}
    assert solver.explored > 0
    with pytest.raises(ValueError):
        Solver(0)


words = st.text(alphabet="ab", max_size=4)


@settings(max_examples=60, deadline=None)
@given(words, words, st.integers(min_value=0, max_value=2))
def test_winner_does_not_depend_on_orientation(u: str, v: str, n: int):
    forward = decide_bounded(game(fo(n), u, v)).winner
    assert decide_bounded(game(fo(n), v, u)).winner is forward
    # quantifier depth two never needs a third variable
    assert decide_bounded(game(fo2(n), u, v)).winner is forward


@pytest.mark.slow
@pytest.mark.parametrize(
    ("f", "u", "v", "winner"),
    [
        (fo(2), "a^s", "aaa", Winner.DUPLICATOR),
        (fo(3), "a^s", "aaa", Winner.SPOILER),
        (fo2(3), "a^s", "aaa", Winner.SPOILER),
        (fo(1), "a^s", "a^s a^s", Winner.DUPLICATOR),
        (fo(2), "a^s", "a^s a^s", Winner.DUPLICATOR),
        (fo(2), "a^z", "a^z a^z", Winner.DUPLICATOR),
        (fo(3), "a^z", "a^z a^z", Winner.DUPLICATOR),
        (fo(3), "a^s", "a^s a^s", Winner.DUPLICATOR),
        (fo2(1), "a^s b", "a^s", Winner.SPOILER),
        (fo2(2), "a^o", "a^o*", Winner.SPOILER),
    ],
)
def test_infinite_games(f: FragmentDesc, u: str, v: str, winner: Winner):
    verdict = decide_bounded(game(f, u, v))
    assert verdict.winner is winner
    assert verdict.certification is Certification.REPRESENTATIVE


def test_two_negated_rounds_restore_the_orientation():
    u, v = parse_word("ab"), parse_word("b")
    c = GameConfig.start(fo(2), u, v)
    once = step(c, Move(Quantifier.NOT_EXISTS, "x", at(0), at(1)))
    twice = step(once, Move(Quantifier.NOT_EXISTS, "y", at(0), at(0)))
    assert (twice.left.word, twice.right.word) == (u, v)
    plain = step(
        step(c, Move(Quantifier.FORALL, "x", at(0), at(1))),
        Move(Quantifier.EXISTS, "y", at(0), at(0)),
    )
    assert twice == plain


@settings(max_examples=60, deadline=None)
@given(words, words, st.integers(min_value=0, max_value=2))
def test_spoiler_wins_persist_at_greater_depth(u: str, v: str, n: int):
    for f in (fo, fo2):
        if decide_bounded(game(f(n), u, v)).winner is Winner.SPOILER:
            assert decide_bounded(game(f(n + 1), u, v)).winner is Winner.SPOILER


FIXTURE_B = ("a^o a^o*", "a^o a^z a^o*")


@pytest.mark.slow
@pytest.mark.parametrize("n", range(4))
def test_zeta_middle_is_invisible_at_bounded_depth(n: int):
    verdict = decide_bounded(game(fo2(n), *FIXTURE_B))
    assert verdict.winner is Winner.DUPLICATOR


SIGMA_POOL = ["a", "aa", "ab", "a^s", "a^s a^s", "(ab)^s", "b a^s"]


@pytest.mark.slow
@pytest.mark.parametrize("n", [1, 2])
def test_duplicator_wins_survive_concatenation(n: int):
    solver = Solver(default_budget(n))
    duplicator = [
        (u, v)
        for u in SIGMA_POOL
        for v in SIGMA_POOL
        if decide_bounded(game(fo2(n), u, v), solver=solver).winner is Winner.DUPLICATOR
    ]
    assert any(u != v for u, v in duplicator)
    rng = random.Random(n)
    for _ in range(50):
        (u1, v1), (u2, v2) = rng.choice(duplicator), rng.choice(duplicator)
        joined = GameConfig.start(
            fo2(n), Cat(parse_word(u1), parse_word(u2)), Cat(parse_word(v1), parse_word(v2))
        )
        verdict = decide_bounded(joined, solver=solver)
        assert verdict.winner is Winner.DUPLICATOR, (u1, u2, v1, v2)


@pytest.mark.slow
@pytest.mark.parametrize(
    ("f", "u", "v"),
    [
        (fo(2), "a^s", "aaa"),
        (fo(2), "a^s", "a^s a^s"),
        (fo(2), "a^z", "a^z a^z"),
        (fo2(1), "a^s b", "a^s"),
        (fo2(2), "a^o", "a^o*"),
        (fo2(2), "a^s b", "b a^s"),
        (fo2(3), *FIXTURE_B),
    ],
)
def test_doubling_the_budget_changes_no_verdict(f: FragmentDesc, u: str, v: str):
    assert f.depth is not None
    b = default_budget(f.depth)
    c = game(f, u, v)
    assert decide_bounded(c, budget=2 * b).winner is decide_bounded(c, budget=b).winner
