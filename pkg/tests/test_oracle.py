import pytest

from efpi.engine import GameConfig, Valuated, Winner
from efpi.errors import BudgetExceededError, NonFiniteWordError
from efpi.fragments import FALSE, TRUE, Family, FragmentDesc, Valuation, in_fragment
from efpi.genword import Lit, Offset, Position, parse_word
from efpi.oracle import (
    BUILTIN_PAIRS,
    GridReport,
    crosscheck_grid,
    crosscheck_sigma,
    crosscheck_winners,
    decide_finite_exact,
    enumerate_formulas,
    exact_grid,
    implication_check,
    preorder_grid,
    sentence_count,
    sentence_grid,
    type_count,
    words_up_to,
)


def fo(n: int | None) -> FragmentDesc:
    return FragmentDesc(Family.FO, n)


def fo2(n: int | None) -> FragmentDesc:
    return FragmentDesc(Family.FO2, n)


def exact(f: FragmentDesc, u: str, v: str) -> Winner:
    return decide_finite_exact(GameConfig.start(f, Lit(u), Lit(v)))


@pytest.mark.parametrize(
    ("f", "u", "v", "winner"),
    [
        (fo(1), "aa", "aaa", Winner.DUPLICATOR),
        (fo(2), "aa", "aaa", Winner.SPOILER),
        (fo(2), "aaa", "aaaa", Winner.DUPLICATOR),
        (fo(3), "aaa", "aaaa", Winner.SPOILER),
        (fo(3), "aaaaaaa", "aaaaaaaa", Winner.DUPLICATOR),
        (fo2(2), "ab", "ba", Winner.SPOILER),
        (fo2(1), "ab", "ba", Winner.DUPLICATOR),
        (fo2(1), "", "a", Winner.SPOILER),
        (fo2(3), "", "", Winner.DUPLICATOR),
    ],
)
def test_exact_games(f: FragmentDesc, u: str, v: str, winner: Winner):
    assert exact(f, u, v) is winner


def test_exact_games_respect_pins():
    at = [Position((Offset(i),)) for i in range(3)]
    c = GameConfig(
        fo2(0),
        Valuated(Lit("aba"), Valuation.of({"x": at[0]})),
        Valuated(Lit("aba"), Valuation.of({"x": at[1]})),
    )
    assert decide_finite_exact(c) is Winner.SPOILER
    same = GameConfig(
        fo2(1),
        Valuated(Lit("aba"), Valuation.of({"x": at[0]})),
        Valuated(Lit("aba"), Valuation.of({"x": at[2]})),
    )
    # x is first on one side and last on the other
    assert decide_finite_exact(same) is Winner.SPOILER


def test_exact_games_need_finite_bounded_input():
    with pytest.raises(NonFiniteWordError):
        decide_finite_exact(GameConfig.start(fo(1), parse_word("a^s"), Lit("a")))
    with pytest.raises(ValueError):
        decide_finite_exact(GameConfig.start(fo(None), Lit("a"), Lit("a")))


@pytest.mark.parametrize(("depth", "count"), [(0, 2), (1, 6), (2, 70)])
def test_enumeration_sizes(depth: int, count: int):
    sentences = enumerate_formulas(fo2(2), "ab", depth)
    assert len(sentences) == count == sentence_count(depth, 2)
    assert sentences[:2] == [TRUE, FALSE]
    assert all(in_fragment(fo2(depth), phi) for phi in sentences)


def test_type_counts():
    assert type_count(0, 2) == 2
    assert type_count(1, 2) == 32
    assert type_count(1, 1) == 4


def test_enumeration_limits():
    with pytest.raises(BudgetExceededError):
        enumerate_formulas(fo2(3), "ab", 3)
    with pytest.raises(BudgetExceededError):
        enumerate_formulas(fo2(2), "abc", 1)
    with pytest.raises(ValueError):
        enumerate_formulas(fo2(1), "ab", 2)


@pytest.mark.parametrize(
    ("u", "v", "f", "implied"),
    [
        ("ab", "ba", fo2(2), False),
        ("ab", "ba", fo2(1), True),
        ("aa", "aaa", fo(1), True),
        ("aaa", "aaaa", fo(2), True),
        ("", "a", fo(1), False),
        ("a", "", fo(1), False),
        ("", "", fo(2), True),
    ],
)
def test_implication_check(u: str, v: str, f: FragmentDesc, implied: bool):
    assert implication_check(u, v, f) is implied


def test_words_up_to():
    assert list(words_up_to("ba", 2)) == ["", "a", "b", "aa", "ab", "ba", "bb"]


def test_grid_report():
    report = GridReport("demo")
    report.record("a", "b", None)
    assert report.ok and report.checked == 1
    report.record("a", "c", "differs")
    assert not report.ok
    assert report.mismatches == [("a", "c", "differs")]


@pytest.mark.parametrize("f", [fo(1), fo2(1), fo2(2), fo(2)])
def test_games_agree_with_sentences(f: FragmentDesc):
    report = sentence_grid(f, 3)
    assert report.ok, report.mismatches
    assert report.checked == 15 * 15


def test_grid_limits():
    with pytest.raises(BudgetExceededError):
        sentence_grid(fo2(1), 6)
    with pytest.raises(BudgetExceededError):
        exact_grid(fo(4), 2)
    with pytest.raises(ValueError):
        preorder_grid(fo(None), 2)


@pytest.mark.parametrize("f", [fo(1), fo(2), fo2(2)])
def test_engine_matches_brute_force(f: FragmentDesc):
    report = exact_grid(f, 3)
    assert report.ok, report.mismatches


@pytest.mark.slow
def test_engine_matches_brute_force_on_longer_words():
    assert exact_grid(fo(2), 4).ok
    assert exact_grid(fo2(2), 4).ok
    for f in (fo(3), fo2(3)):
        sampled = exact_grid(f, 4, sample=200, seed=7)
        assert sampled.checked == 200
        assert sampled.ok, (f, sampled.mismatches)


def test_preorder():
    report = preorder_grid(fo2(2), 3, samples=40)
    assert report.ok
    assert report.checked == 15 + 40


@pytest.mark.parametrize(
    ("u", "v", "f", "expected"),
    [
        ("a^s", "aaa", fo(2), Winner.DUPLICATOR),
        ("a^s b", "b a^s", fo2(2), Winner.SPOILER),
    ],
)
def test_crosscheck_winners(u: str, v: str, f: FragmentDesc, expected: Winner):
    engine, approx = crosscheck_winners(parse_word(u), parse_word(v), f, 4)
    assert engine is approx is expected


def test_crosscheck_rejects_other_powers():
    with pytest.raises(ValueError):
        crosscheck_winners(parse_word("a^o"), Lit("a"), fo(1), 4)
    with pytest.raises(ValueError):
        crosscheck_winners(Lit("a"), Lit("a"), fo(None), 4)


@pytest.mark.slow
def test_crosscheck_deeper_games():
    assert crosscheck_sigma(parse_word("a^s"), parse_word("aaa"), fo(2), 3, 4)


@pytest.mark.slow
def test_builtin_pairs():
    pairs = tuple((parse_word(u), parse_word(v)) for u, v in BUILTIN_PAIRS)
    report = crosscheck_grid(pairs, fo2(2), 8)
    assert report.checked == len(BUILTIN_PAIRS)
    assert report.ok, report.mismatches
