from collections import defaultdict
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efpi.errors import InvalidPositionError, NonFiniteWordError
from efpi.genword import (
    LEFT,
    OMEGA,
    OMEGA_STAR,
    RHO,
    RIGHT,
    SIGMA,
    ZETA,
    At,
    Cat,
    Index,
    Lit,
    Offset,
    Ord,
    Part,
    Position,
    Pow,
    RegionClass,
    RegionSignature,
    RegionStep,
    Steps,
    Tau,
    WordExpr,
    approx_size,
    compare,
    distance,
    eval_term,
    finite_approx,
    first_steps,
    flatten,
    in_n_border,
    is_finite,
    is_sigma_rational,
    label,
    last_steps,
    parse_position,
    parse_word,
    positions,
    pred,
    region_classes,
    region_signature,
    render_word,
    size,
    succ,
)
from efpi.pi_term import parse_term

A_SIGMA = Pow(SIGMA, Lit("a"))


def at(part: Part, i: int, q: Fraction | None = None) -> Position:
    return Position((At(Index(part, i, q)), Offset(0)))


def test_eval_term_finite():
    w = eval_term(parse_term("(xy)^w"), Tau.fin(3))
    assert flatten(w) == "xyxyxy"


def test_eval_term_sigma_keeps_structure():
    w = eval_term(parse_term("x^w y"), SIGMA)
    assert w == Cat(Pow(SIGMA, Lit("x")), Lit("y"))
    assert is_sigma_rational(w)
    assert not is_finite(w)


@pytest.mark.parametrize("tau", [ZETA, OMEGA, Tau.fin(0)])
def test_eval_term_rejects_other_powers(tau: Tau):
    with pytest.raises(ValueError):
        eval_term(parse_term("x^w"), tau)


@pytest.mark.parametrize(
    ("text", "word"),
    [
        ("a^s", A_SIGMA),
        ("a^w", A_SIGMA),
        ("a^z a^z", Cat(Pow(ZETA, Lit("a")), Pow(ZETA, Lit("a")))),
        ("(ab)^o*", Pow(OMEGA_STAR, Lit("ab"))),
        ("a^o b", Cat(Pow(OMEGA, Lit("a")), Lit("b"))),
        ("a^r", Pow(RHO, Lit("a"))),
        ("ab^0", Cat(Lit("a"), Pow(Tau.fin(0), Lit("b")))),
        ("aab", Lit("aab")),
        ("", Lit("")),
    ],
)
def test_parse_word(text: str, word: WordExpr):
    assert parse_word(text) == word


def test_render_word():
    assert render_word(parse_word("a^s a^s")) == "a^s a^s"
    assert render_word(parse_word("(ab)^s ab")) == "(ab)^s ab"
    assert render_word(Lit("")) == "ε"


@pytest.mark.parametrize(
    ("text", "n"),
    [("abc", 3), ("(ab)^3 c", 7), ("a^s", None), ("a^0 b", 1), ("(a^0)^s", 0), ("a^z", None)],
)
def test_size(text: str, n: int | None):
    assert size(parse_word(text)) == n


def test_sigma_order_of_parts():
    # omega part < zeta part < omega* part
    assert compare(A_SIGMA, at(Part.W, 5), at(Part.Z, -100)) is Ord.LT
    assert compare(A_SIGMA, at(Part.Z, 100), at(Part.W_STAR, 3)) is Ord.LT
    assert compare(A_SIGMA, at(Part.W_STAR, 3), at(Part.W_STAR, 4)) is Ord.GT
    assert compare(A_SIGMA, at(Part.Z, 2), at(Part.Z, 2)) is Ord.EQ


def test_first_and_last_positions():
    assert first_steps(A_SIGMA) == (At(Index(Part.W, 0)), Offset(0))
    assert last_steps(A_SIGMA) == (At(Index(Part.W_STAR, 0)), Offset(0))
    zeta = Pow(ZETA, Lit("a"))
    assert first_steps(zeta) is None
    assert last_steps(zeta) is None


def test_successor_crosses_copies_and_parts():
    w = Pow(SIGMA, Lit("ab"))
    p = Position((At(Index(Part.W, 3)), Offset(1)))
    assert succ(w, p) == Position((At(Index(Part.W, 4)), Offset(0)))
    assert pred(w, Position((At(Index(Part.W, 0)), Offset(0)))) is None
    assert succ(w, Position((At(Index(Part.Z, -1)), Offset(1)))) == Position(
        (At(Index(Part.Z, 0)), Offset(0))
    )
    assert succ(w, Position((At(Index(Part.W_STAR, 0)), Offset(1)))) is None


def test_rho_dense_copies():
    w = Pow(RHO, Lit("a"))
    half = at(Part.ZN, 0, Fraction(1, 2))
    third = at(Part.ZN, 7, Fraction(1, 3))
    assert compare(w, third, half) is Ord.LT
    assert label(w, half) == "a"


@pytest.mark.parametrize(
    "steps",
    [
        (Offset(0),),
        (At(Index(Part.FIN, 0)), Offset(0)),
        (At(Index(Part.W, -1)), Offset(0)),
        (At(Index(Part.W, 0)),),
        (At(Index(Part.W, 0)), Offset(1)),
    ],
)
def test_invalid_positions(steps: tuple[At | Offset, ...]):
    with pytest.raises(InvalidPositionError):
        label(A_SIGMA, Position(steps))


def test_flatten_rejects_infinite_words():
    with pytest.raises(NonFiniteWordError):
        flatten(A_SIGMA)
    with pytest.raises(NonFiniteWordError):
        positions(A_SIGMA)


@pytest.mark.parametrize(
    ("text", "k", "expected"),
    [("a^s", 2, "aaaaaa"), ("a^o b", 2, "aab"), ("(ab)^o*", 1, "ab"), ("a^z", 1, "aaa")],
)
def test_finite_approx(text: str, k: int, expected: str):
    w = parse_word(text)
    assert finite_approx(w, k) == expected
    assert approx_size(w, k) == len(expected)


def test_finite_approx_needs_positive_k():
    with pytest.raises(ValueError):
        finite_approx(A_SIGMA, 0)


@pytest.mark.parametrize(
    ("text", "classes"),
    [
        ("aab", {"a(fin,fin)", "b(fin,fin)"}),
        ("a^s", {"a(fin,inf)", "a(inf,inf)", "a(inf,fin)"}),
        ("a^s b", {"a(fin,inf)", "a(inf,inf)", "a(inf,fin)", "b(inf,fin)"}),
        ("a^z", {"a(inf,inf)"}),
        ("b a^o", {"b(fin,inf)", "a(fin,inf)"}),
        ("(a^s)^2", {"a(fin,inf)", "a(inf,inf)", "a(inf,fin)"}),
    ],
)
def test_region_classes(text: str, classes: set[str]):
    assert {str(c) for c in region_classes(parse_word(text))} == classes


def test_region_classes_sort():
    assert sorted([RegionClass("b", True, True), RegionClass("a", False, True)])[0].letter == "a"


def test_distance():
    w = A_SIGMA
    assert distance(w, at(Part.W, 0).steps, at(Part.W, 3).steps) == 3
    assert distance(w, at(Part.W_STAR, 0).steps, at(Part.W_STAR, 4).steps) == 4
    assert distance(w, at(Part.W, 0).steps, at(Part.Z, 0).steps) is None
    cat = parse_word("ab a^s")
    first = (LEFT, Offset(0))
    third_copy = (RIGHT, At(Index(Part.W, 2)), Offset(0))
    assert distance(cat, first, third_copy) == 4


@pytest.mark.parametrize(
    "text",
    ["@0", "L/@2", "R/P[w:3]/@0", "P[w*:-2]/@1", "P[z:-5]/@0", "P[zn(1/3):4]/@0", "P[fin:0]/@0"],
)
def test_position_text_round_trip(text: str):
    assert str(parse_position(text)) == text


@pytest.mark.parametrize("text", ["", "Q", "P[w:x]", "P[zn(1/0):0]", "P[w*:3]"])
def test_parse_position_rejects(text: str):
    with pytest.raises(InvalidPositionError):
        parse_position(text)


def _finite_words() -> st.SearchStrategy[WordExpr]:
    lits = st.text(alphabet="ab", min_size=0, max_size=3).map(Lit)
    return st.recursive(
        lits,
        lambda inner: st.one_of(
            st.builds(Cat, inner, inner),
            st.builds(Pow, st.integers(min_value=0, max_value=3).map(Tau.fin), inner),
        ),
        max_leaves=5,
    )


@settings(max_examples=150)
@given(_finite_words())
def test_finite_words_agree_with_their_flattening(w: WordExpr):
    text = flatten(w)
    ps = positions(w)
    assert len(ps) == len(text) == size(w)
    assert "".join(label(w, p) for p in ps) == text
    for i, p in enumerate(ps):
        nxt = succ(w, p)
        assert nxt == (ps[i + 1] if i + 1 < len(ps) else None)
        prv = pred(w, p)
        assert prv == (ps[i - 1] if i > 0 else None)
    for i in range(0, len(ps), 2):
        for j in range(len(ps)):
            expected = Ord.LT if i < j else Ord.EQ if i == j else Ord.GT
            assert compare(w, ps[i], ps[j]) is expected
            assert distance(w, ps[i].steps, ps[j].steps) == abs(i - j)


# -- positions of sigma words ---------------------------------------------------------
SIGMA_WORDS = [
    Pow(SIGMA, Lit("ab")),
    Cat(Lit("b"), A_SIGMA),
    Cat(A_SIGMA, Pow(SIGMA, Lit("ba"))),
    Pow(SIGMA, A_SIGMA),
]


def _sigma_index(reach: int) -> st.SearchStrategy[Index]:
    return st.one_of(
        st.integers(0, reach).map(lambda i: Index(Part.W, i)),
        st.integers(-reach, reach).map(lambda i: Index(Part.Z, i)),
        st.integers(0, reach).map(lambda i: Index(Part.W_STAR, i)),
    )


def _steps_in(w: WordExpr) -> st.SearchStrategy[Steps]:
    match w:
        case Lit(text):
            return st.integers(0, len(text) - 1).map(lambda i: (Offset(i),))
        case Cat(left, right):
            return st.one_of(
                _steps_in(left).map(lambda s: (LEFT, *s)),
                _steps_in(right).map(lambda s: (RIGHT, *s)),
            )
        case Pow(_, inner):
            return st.tuples(_sigma_index(4), _steps_in(inner)).map(
                lambda t: (At(t[0]), *t[1])
            )


def _window(w: WordExpr, reach: int) -> list[Position]:
    """Every position of a sigma word whose indices stay within ``reach`` of 0."""

    def go(node: WordExpr) -> list[Steps]:
        match node:
            case Lit(text):
                return [(Offset(i),) for i in range(len(text))]
            case Cat(left, right):
                return [(LEFT, *s) for s in go(left)] + [(RIGHT, *s) for s in go(right)]
            case Pow(_, inner):
                idxs = (
                    [Index(Part.W, i) for i in range(reach)]
                    + [Index(Part.Z, i) for i in range(-reach, reach + 1)]
                    + [Index(Part.W_STAR, i) for i in range(reach)]
                )
                return [(At(idx), *s) for idx in idxs for s in go(inner)]

    return [Position(s) for s in go(w)]


_FLIP = {Ord.LT: Ord.GT, Ord.GT: Ord.LT, Ord.EQ: Ord.EQ}


@settings(max_examples=300)
@given(st.data())
def test_order_is_total_on_sigma_words(data: st.DataObject):
    w = data.draw(st.sampled_from(SIGMA_WORDS))
    p, q, r = (Position(data.draw(_steps_in(w))) for _ in range(3))
    pq = compare(w, p, q)
    assert (pq is Ord.EQ) == (p == q)
    assert compare(w, q, p) is _FLIP[pq]
    if pq is Ord.LT and compare(w, q, r) is Ord.LT:
        assert compare(w, p, r) is Ord.LT


@settings(max_examples=300)
@given(st.data())
def test_successor_and_predecessor_are_inverse(data: st.DataObject):
    w = data.draw(st.sampled_from(SIGMA_WORDS))
    p = Position(data.draw(_steps_in(w)))
    nxt = succ(w, p)
    if nxt is not None:
        assert pred(w, nxt) == p
        assert compare(w, p, nxt) is Ord.LT
    prv = pred(w, p)
    if prv is not None:
        assert succ(w, prv) == p


# -- borders and region signatures ------------------------------------------------------
def test_border_membership():
    spots = [at(Part.W, 1), at(Part.W, 2), at(Part.W_STAR, 1), at(Part.Z, 0)]
    assert [in_n_border(A_SIGMA, p, 2) for p in spots] == [True, False, True, False]


def test_border_is_decided_by_the_innermost_infinite_power():
    nested = Pow(SIGMA, A_SIGMA)
    outer_end = Position((At(Index(Part.W, 0)), At(Index(Part.Z, 0)), Offset(0)))
    inner_end = Position((At(Index(Part.Z, 4)), At(Index(Part.W_STAR, 1)), Offset(0)))
    assert not in_n_border(nested, outer_end, 3)
    assert in_n_border(nested, inner_end, 2)

    cat = Cat(Lit("ab"), A_SIGMA)
    assert not in_n_border(cat, Position((LEFT, Offset(0))), 5)
    assert in_n_border(cat, Position((RIGHT, At(Index(Part.W, 0)), Offset(0))), 1)
    fin = Pow(Tau.fin(3), Lit("a"))
    assert not in_n_border(fin, Position((At(Index(Part.FIN, 0)), Offset(0))), 3)


def test_rho_border_uses_its_end_parts():
    w = Pow(RHO, Lit("a"))
    assert in_n_border(w, at(Part.W, 0), 1)
    assert in_n_border(w, at(Part.W_STAR, 0), 1)
    assert not in_n_border(w, at(Part.ZN, 0, Fraction(1, 2)), 5)


def test_border_rejects_invalid_positions():
    with pytest.raises(InvalidPositionError):
        in_n_border(A_SIGMA, Position((Offset(0),)), 1)


@pytest.mark.parametrize("n", range(6))
def test_border_of_a_sigma_power_has_2n_positions(n: int):
    assert sum(in_n_border(A_SIGMA, p, n) for p in _window(A_SIGMA, n + 3)) == 2 * n


def test_border_grows_with_n():
    window = _window(A_SIGMA, 8)
    for n in range(7):
        now = {p for p in window if in_n_border(A_SIGMA, p, n)}
        assert now <= {p for p in window if in_n_border(A_SIGMA, p, n + 1)}


def test_region_signature():
    assert region_signature(A_SIGMA, at(Part.W, 0), 4) == (RegionStep(Part.W, 0, None), Offset(0))
    assert region_signature(A_SIGMA, at(Part.W, 9), 4) == (
        RegionStep(Part.W, None, None),
        Offset(0),
    )
    assert region_signature(A_SIGMA, at(Part.W_STAR, 2), 4) == (
        RegionStep(Part.W_STAR, None, 2),
        Offset(0),
    )
    zeta = region_signature(A_SIGMA, at(Part.Z, 7), 100)[0]
    assert isinstance(zeta, RegionStep) and zeta.deep
    fin = Pow(Tau.fin(5), Lit("a"))
    assert region_signature(fin, Position((At(Index(Part.FIN, 1)), Offset(0))), 2) == (
        RegionStep(Part.FIN, 1, None),
        Offset(0),
    )
    cat = Cat(Lit("b"), A_SIGMA)
    assert region_signature(cat, Position((RIGHT, At(Index(Part.W, 1)), Offset(0))), 3) == (
        RIGHT,
        RegionStep(Part.W, 1, None),
        Offset(0),
    )


def test_region_signature_needs_a_positive_budget():
    with pytest.raises(ValueError):
        region_signature(A_SIGMA, at(Part.W, 0), 0)


@pytest.mark.parametrize("budget", [1, 2, 3, 4])
@pytest.mark.parametrize("w", SIGMA_WORDS, ids=render_word)
def test_equal_signatures_agree_on_every_border_below_the_budget(w: WordExpr, budget: int):
    groups: defaultdict[RegionSignature, list[Position]] = defaultdict(list)
    for p in _window(w, 5):
        groups[region_signature(w, p, budget)].append(p)
    assert any(len(g) > 1 for g in groups.values())
    for group in groups.values():
        for n in range(budget):
            assert len({in_n_border(w, p, n) for p in group}) == 1
