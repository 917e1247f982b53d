"""Generalized words built from finite words by concatenation and order-type powers.

A word is a construction tree (``Lit``, ``Cat``, ``Pow``); a position is the path
through that tree, with an exact index value at every power. Nothing here ever
materializes an infinite domain: order, labels, neighbours, borders and region
signatures are all computed on paths.

Index layout per power:

    Fin(k)   fin:0 .. fin:k-1
    Omega    w:0, w:1, ...
    Omega*   ..., w*:-1, w*:0      (stored as distance from the right, j >= 0)
    Zeta     z:i for every integer i
    Sigma    w-part, then z-part, then w*-part
    Rho      w-part, then zn(q):i for rational q and integer i, then w*-part
"""

from __future__ import annotations

import functools
import re
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Final

from .errors import InvalidPositionError, NonFiniteWordError
from .pi_term import Concat, FinPower, Letter, Parser, PiPower, PiTerm


class TauKind(str, Enum):
    FIN = "fin"
    OMEGA = "o"
    OMEGA_STAR = "o*"
    ZETA = "z"
    SIGMA = "s"
    RHO = "r"


@dataclass(frozen=True)
class Tau:
    kind: TauKind
    k: int = 0

    def __post_init__(self) -> None:
        if self.kind is TauKind.FIN and self.k < 0:
            raise ValueError(f"finite power must be >= 0, got {self.k}")
        if self.kind is not TauKind.FIN and self.k:
            raise ValueError("only Fin carries a count")

    @classmethod
    def fin(cls, k: int) -> Tau:
        return cls(TauKind.FIN, k)

    @property
    def infinite(self) -> bool:
        return self.kind is not TauKind.FIN

    def __str__(self) -> str:
        return str(self.k) if self.kind is TauKind.FIN else self.kind.value


OMEGA: Final = Tau(TauKind.OMEGA)
OMEGA_STAR: Final = Tau(TauKind.OMEGA_STAR)
ZETA: Final = Tau(TauKind.ZETA)
SIGMA: Final = Tau(TauKind.SIGMA)
RHO: Final = Tau(TauKind.RHO)


class Part(str, Enum):
    FIN = "fin"
    W = "w"
    W_STAR = "w*"
    Z = "z"
    ZN = "zn"


_PART_RANK = {Part.FIN: 0, Part.W: 0, Part.Z: 1, Part.ZN: 1, Part.W_STAR: 2}


@dataclass(frozen=True)
class Index:
    """Index value inside one power. ``i`` is the distance from the right for ``w*``."""

    part: Part
    i: int
    q: Fraction | None = None

    def key(self) -> tuple[int, Fraction, int]:
        """Sort key agreeing with the order of the index set."""
        rank = _PART_RANK[self.part]
        if self.part is Part.W_STAR:
            return (rank, Fraction(0), -self.i)
        return (rank, self.q if self.q is not None else Fraction(0), self.i)

    def __str__(self) -> str:
        if self.part is Part.W_STAR:
            return f"w*:{-self.i}" if self.i else "w*:0"
        if self.part is Part.ZN:
            assert self.q is not None
            return f"zn({self.q.numerator}/{self.q.denominator}):{self.i}"
        return f"{self.part.value}:{self.i}"


@dataclass(frozen=True)
class Branch:
    right: bool

    def __str__(self) -> str:
        return "R" if self.right else "L"


@dataclass(frozen=True)
class At:
    index: Index

    def __str__(self) -> str:
        return f"P[{self.index}]"


@dataclass(frozen=True)
class Offset:
    i: int

    def __str__(self) -> str:
        return f"@{self.i}"


Step = Branch | At | Offset
Steps = tuple[Step, ...]

LEFT: Final = Branch(False)
RIGHT: Final = Branch(True)


@dataclass(frozen=True)
class Position:
    steps: Steps

    def __str__(self) -> str:
        return "/".join(str(s) for s in self.steps)

    def under(self, step: Step) -> Position:
        return Position((step, *self.steps))


@dataclass(frozen=True)
class Lit:
    text: str


@dataclass(frozen=True)
class Cat:
    left: WordExpr
    right: WordExpr


@dataclass(frozen=True)
class Pow:
    tau: Tau
    inner: WordExpr


WordExpr = Lit | Cat | Pow


class Ord(str, Enum):
    LT = "<"
    EQ = "="
    GT = ">"


# -- index sets ---------------------------------------------------------------


def index_valid(tau: Tau, idx: Index) -> bool:
    if idx.part is Part.ZN:
        if tau.kind is not TauKind.RHO or idx.q is None:
            return False
    elif idx.q is not None:
        return False
    match tau.kind:
        case TauKind.FIN:
            return idx.part is Part.FIN and 0 <= idx.i < tau.k
        case TauKind.OMEGA:
            return idx.part is Part.W and idx.i >= 0
        case TauKind.OMEGA_STAR:
            return idx.part is Part.W_STAR and idx.i >= 0
        case TauKind.ZETA:
            return idx.part is Part.Z
        case TauKind.SIGMA:
            return idx.part is Part.Z or (idx.part in (Part.W, Part.W_STAR) and idx.i >= 0)
        case TauKind.RHO:
            return idx.part is Part.ZN or (idx.part in (Part.W, Part.W_STAR) and idx.i >= 0)


def first_index(tau: Tau) -> Index | None:
    match tau.kind:
        case TauKind.FIN:
            return Index(Part.FIN, 0) if tau.k else None
        case TauKind.OMEGA | TauKind.SIGMA | TauKind.RHO:
            return Index(Part.W, 0)
        case TauKind.OMEGA_STAR | TauKind.ZETA:
            return None


def last_index(tau: Tau) -> Index | None:
    match tau.kind:
        case TauKind.FIN:
            return Index(Part.FIN, tau.k - 1) if tau.k else None
        case TauKind.OMEGA_STAR | TauKind.SIGMA | TauKind.RHO:
            return Index(Part.W_STAR, 0)
        case TauKind.OMEGA | TauKind.ZETA:
            return None


def index_succ(tau: Tau, idx: Index) -> Index | None:
    match idx.part:
        case Part.FIN:
            return Index(Part.FIN, idx.i + 1) if idx.i + 1 < tau.k else None
        case Part.W | Part.Z:
            return Index(idx.part, idx.i + 1)
        case Part.ZN:
            return Index(Part.ZN, idx.i + 1, idx.q)
        case Part.W_STAR:
            return Index(Part.W_STAR, idx.i - 1) if idx.i > 0 else None


def index_pred(tau: Tau, idx: Index) -> Index | None:
    match idx.part:
        case Part.FIN | Part.W:
            return Index(idx.part, idx.i - 1) if idx.i > 0 else None
        case Part.Z:
            return Index(Part.Z, idx.i - 1)
        case Part.ZN:
            return Index(Part.ZN, idx.i - 1, idx.q)
        case Part.W_STAR:
            return Index(Part.W_STAR, idx.i + 1)


# -- structural facts ---------------------------------------------------------


@functools.cache
def size(w: WordExpr) -> int | None:
    """Number of positions, ``None`` when infinite."""
    match w:
        case Lit(text):
            return len(text)
        case Cat(left, right):
            a, b = size(left), size(right)
            if a == 0:
                return b
            if b == 0:
                return a
            return None if a is None or b is None else a + b
        case Pow(tau, inner):
            n = size(inner)
            if n == 0:
                return 0
            if tau.infinite or n is None:
                return None
            return n * tau.k


def is_finite(w: WordExpr) -> bool:
    return size(w) is not None


def is_empty(w: WordExpr) -> bool:
    return size(w) == 0


def is_sigma_rational(w: WordExpr) -> bool:
    match w:
        case Lit():
            return True
        case Cat(left, right):
            return is_sigma_rational(left) and is_sigma_rational(right)
        case Pow(tau, inner):
            return tau.kind in (TauKind.SIGMA, TauKind.FIN) and is_sigma_rational(inner)


@functools.cache
def letters(w: WordExpr) -> frozenset[str]:
    """Letters labelling at least one position."""
    match w:
        case Lit(text):
            return frozenset(text)
        case Cat(left, right):
            return letters(left) | letters(right)
        case Pow(tau, inner):
            if tau.kind is TauKind.FIN and tau.k == 0:
                return frozenset()
            return letters(inner)


def powers(w: WordExpr) -> Iterator[Tau]:
    match w:
        case Lit():
            return
        case Cat(left, right):
            yield from powers(left)
            yield from powers(right)
        case Pow(tau, inner):
            yield tau
            yield from powers(inner)


# -- positions ----------------------------------------------------------------


def _bad(w: WordExpr, steps: Steps, why: str) -> InvalidPositionError:
    return InvalidPositionError(f"{Position(steps)} is not a position of {render_word(w)}: {why}")


def walk(w: WordExpr, steps: Steps) -> list[tuple[WordExpr, Step]]:
    """Pair every step with the node it is taken at; raises on a malformed path."""
    out: list[tuple[WordExpr, Step]] = []
    node = w
    for n, step in enumerate(steps):
        last = n == len(steps) - 1
        match node, step:
            case Lit(text), Offset(i):
                if not last:
                    raise _bad(w, steps, "path continues past a literal")
                if not 0 <= i < len(text):
                    raise _bad(w, steps, f"offset {i} outside literal of length {len(text)}")
                out.append((node, step))
                return out
            case Cat(left, right), Branch(go_right):
                out.append((node, step))
                node = right if go_right else left
            case Pow(tau, inner), At(idx):
                if not index_valid(tau, idx):
                    raise _bad(w, steps, f"index {idx} does not fit power ^{tau}")
                out.append((node, step))
                node = inner
            case _:
                raise _bad(w, steps, f"step {step} does not match the word structure")
    raise _bad(w, steps, "path ends before reaching a letter")


def validate(w: WordExpr, p: Position) -> None:
    walk(w, p.steps)


def is_position(w: WordExpr, p: Position) -> bool:
    try:
        walk(w, p.steps)
    except InvalidPositionError:
        return False
    return True


def label(w: WordExpr, p: Position) -> str:
    node, step = walk(w, p.steps)[-1]
    assert isinstance(node, Lit) and isinstance(step, Offset)
    return node.text[step.i]


def compare_steps(a: Steps, b: Steps) -> Ord:
    """Order of two already-validated paths of the same word."""
    for s, t in zip(a, b, strict=False):
        if s == t:
            continue
        match s, t:
            case Branch(r1), Branch(r2):
                return Ord.LT if r2 and not r1 else Ord.GT
            case At(i1), At(i2):
                return Ord.LT if i1.key() < i2.key() else Ord.GT
            case Offset(o1), Offset(o2):
                return Ord.LT if o1 < o2 else Ord.GT
            case _:
                raise InvalidPositionError(f"paths diverge structurally at {s} / {t}")
    return Ord.EQ


def compare(w: WordExpr, p1: Position, p2: Position) -> Ord:
    """``ord(p1, p2)`` in the order of ``w``: index first at powers, left before right."""
    validate(w, p1)
    validate(w, p2)
    return compare_steps(p1.steps, p2.steps)


@functools.cache
def first_steps(w: WordExpr) -> Steps | None:
    match w:
        case Lit(text):
            return (Offset(0),) if text else None
        case Cat(left, right):
            if is_empty(left):
                sub = first_steps(right)
                return (RIGHT, *sub) if sub is not None else None
            sub = first_steps(left)
            return (LEFT, *sub) if sub is not None else None
        case Pow(tau, inner):
            idx = first_index(tau)
            if idx is None or is_empty(inner):
                return None
            sub = first_steps(inner)
            return (At(idx), *sub) if sub is not None else None


@functools.cache
def last_steps(w: WordExpr) -> Steps | None:
    match w:
        case Lit(text):
            return (Offset(len(text) - 1),) if text else None
        case Cat(left, right):
            if is_empty(right):
                sub = last_steps(left)
                return (LEFT, *sub) if sub is not None else None
            sub = last_steps(right)
            return (RIGHT, *sub) if sub is not None else None
        case Pow(tau, inner):
            idx = last_index(tau)
            if idx is None or is_empty(inner):
                return None
            sub = last_steps(inner)
            return (At(idx), *sub) if sub is not None else None


class _Edge:
    """Marker: the position is the last (or first) one of the subword."""


_EDGE: Final = _Edge()


def _neighbour(w: WordExpr, steps: Steps, forward: bool) -> Steps | _Edge | None:
    head, tail = steps[0], steps[1:]
    match w, head:
        case Lit(text), Offset(i):
            j = i + 1 if forward else i - 1
            return (Offset(j),) if 0 <= j < len(text) else _EDGE
        case Cat(left, right), Branch(go_right):
            inside, other = (right, left) if go_right else (left, right)
            got = _neighbour(inside, tail, forward)
            if not isinstance(got, _Edge):
                return (head, *got) if got is not None else None
            crossing = forward != go_right
            if not crossing or is_empty(other):
                return _EDGE
            enter = first_steps(other) if forward else last_steps(other)
            return (Branch(not go_right), *enter) if enter is not None else None
        case Pow(tau, inner), At(idx):
            got = _neighbour(inner, tail, forward)
            if not isinstance(got, _Edge):
                return (head, *got) if got is not None else None
            nxt = index_succ(tau, idx) if forward else index_pred(tau, idx)
            if nxt is None:
                return _EDGE
            enter = first_steps(inner) if forward else last_steps(inner)
            return (At(nxt), *enter) if enter is not None else None
        case _:
            raise InvalidPositionError(f"step {head} does not match the word structure")


def succ(w: WordExpr, p: Position) -> Position | None:
    validate(w, p)
    got = _neighbour(w, p.steps, True)
    return Position(got) if isinstance(got, tuple) else None


def pred(w: WordExpr, p: Position) -> Position | None:
    validate(w, p)
    got = _neighbour(w, p.steps, False)
    return Position(got) if isinstance(got, tuple) else None


def _governing_power(w: WordExpr, p: Position) -> tuple[Tau, Index] | None:
    """Innermost infinite power on the path of ``p`` and the index taken there."""
    found: tuple[Tau, Index] | None = None
    for node, step in walk(w, p.steps):
        if isinstance(node, Pow) and isinstance(step, At) and node.tau.infinite:
            found = (node.tau, step.index)
    return found


def index_in_border(idx: Index, n: int) -> bool:
    return idx.part in (Part.W, Part.W_STAR) and idx.i < n


def in_n_border(w: WordExpr, p: Position, n: int) -> bool:
    governing = _governing_power(w, p)
    return governing is not None and index_in_border(governing[1], n)


# -- finite words -------------------------------------------------------------


def _approx_count(tau: Tau, k: int) -> int:
    match tau.kind:
        case TauKind.FIN:
            return tau.k
        case TauKind.OMEGA | TauKind.OMEGA_STAR:
            return k
        case TauKind.SIGMA | TauKind.RHO | TauKind.ZETA:
            return 3 * k


def finite_approx(w: WordExpr, k: int) -> str:
    """Replace every infinite power by a finite one (3k for two-ended types, k otherwise)."""
    if k < 1:
        raise ValueError("approximation parameter k must be >= 1")
    match w:
        case Lit(text):
            return text
        case Cat(left, right):
            return finite_approx(left, k) + finite_approx(right, k)
        case Pow(tau, inner):
            return finite_approx(inner, k) * _approx_count(tau, k)


def approx_size(w: WordExpr, k: int) -> int:
    match w:
        case Lit(text):
            return len(text)
        case Cat(left, right):
            return approx_size(left, k) + approx_size(right, k)
        case Pow(tau, inner):
            return approx_size(inner, k) * _approx_count(tau, k)


def flatten(w: WordExpr) -> str:
    if not is_finite(w):
        raise NonFiniteWordError(f"{render_word(w)} has infinitely many positions")
    return finite_approx(w, 1)


def positions(w: WordExpr) -> list[Position]:
    """All positions of a finite word, in order."""
    if not is_finite(w):
        raise NonFiniteWordError(f"{render_word(w)} has infinitely many positions")
    return [Position(s) for s in _enumerate(w)]


def _enumerate(w: WordExpr) -> Iterator[Steps]:
    match w:
        case Lit(text):
            for i in range(len(text)):
                yield (Offset(i),)
        case Cat(left, right):
            for s in _enumerate(left):
                yield (LEFT, *s)
            for s in _enumerate(right):
                yield (RIGHT, *s)
        case Pow(tau, inner):
            if is_empty(inner):
                return
            inner_steps = list(_enumerate(inner))
            for t in range(tau.k):
                head = At(Index(Part.FIN, t))
                for s in inner_steps:
                    yield (head, *s)


# -- distances and region classes ---------------------------------------------


def sort_key(steps: Steps) -> tuple[tuple[int | Fraction, ...], ...]:
    """Key agreeing with ``compare_steps`` for paths of one word."""
    out: list[tuple[int | Fraction, ...]] = []
    for s in steps:
        match s:
            case Branch(right):
                out.append((int(right),))
            case At(idx):
                out.append(idx.key())
            case Offset(i):
                out.append((i,))
    return tuple(out)


def _copies_before(idx: Index) -> int | None:
    if idx.part in (Part.FIN, Part.W):
        return idx.i
    return None


def _copies_after(tau: Tau, idx: Index) -> int | None:
    if idx.part is Part.FIN:
        return tau.k - 1 - idx.i
    if idx.part is Part.W_STAR:
        return idx.i
    return None


def _scaled(copies: int | None, inner: WordExpr) -> int | None:
    if copies == 0:
        return 0
    n = size(inner)
    return None if copies is None or n is None else copies * n


def _add(*parts: int | None) -> int | None:
    total = 0
    for p in parts:
        if p is None:
            return None
        total += p
    return total


def count_before(w: WordExpr, steps: Steps) -> int | None:
    """Number of positions before the path; ``None`` when infinitely many."""
    head, tail = steps[0], steps[1:]
    match w, head:
        case Lit(), Offset(i):
            return i
        case Cat(left, right), Branch(go_right):
            if go_right:
                return _add(size(left), count_before(right, tail))
            return count_before(left, tail)
        case Pow(_, inner), At(idx):
            return _add(_scaled(_copies_before(idx), inner), count_before(inner, tail))
        case _:
            raise InvalidPositionError(f"step {head} does not match the word structure")


def count_after(w: WordExpr, steps: Steps) -> int | None:
    """Number of positions after the path; ``None`` when infinitely many."""
    head, tail = steps[0], steps[1:]
    match w, head:
        case Lit(text), Offset(i):
            return len(text) - 1 - i
        case Cat(left, right), Branch(go_right):
            if go_right:
                return count_after(right, tail)
            return _add(count_after(left, tail), size(right))
        case Pow(tau, inner), At(idx):
            return _add(_scaled(_copies_after(tau, idx), inner), count_after(inner, tail))
        case _:
            raise InvalidPositionError(f"step {head} does not match the word structure")


def _copies_between(a: Index, b: Index) -> int | None:
    if a.part is not b.part or a.q != b.q:
        return None
    if a.part is Part.W_STAR:
        return a.i - b.i - 1
    return b.i - a.i - 1


def distance(w: WordExpr, a: Steps, b: Steps) -> int | None:
    """``|b - a|`` counted in positions, ``None`` when infinitely many lie between."""
    if compare_steps(a, b) is Ord.GT:
        a, b = b, a
    node = w
    i = 0
    while i < len(a) and a[i] == b[i]:
        match node, a[i]:
            case Cat(left, right), Branch(go_right):
                node = right if go_right else left
            case Pow(_, inner), At():
                node = inner
            case _:
                return 0
        i += 1
    if i == len(a):
        return 0
    match node, a[i], b[i]:
        case Lit(), Offset(x), Offset(y):
            return y - x
        case Cat(left, right), Branch(), Branch():
            return _add(count_after(left, a[i + 1 :]), count_before(right, b[i + 1 :]), 1)
        case Pow(_, inner), At(ia), At(ib):
            return _add(
                count_after(inner, a[i + 1 :]),
                _scaled(_copies_between(ia, ib), inner),
                count_before(inner, b[i + 1 :]),
                1,
            )
        case _:
            raise InvalidPositionError("paths diverge structurally")


@dataclass(frozen=True, order=True)
class RegionClass:
    """Letter plus whether finitely many positions lie before and after."""

    letter: str
    finite_before: bool
    finite_after: bool

    def __str__(self) -> str:
        before = "fin" if self.finite_before else "inf"
        after = "fin" if self.finite_after else "inf"
        return f"{self.letter}({before},{after})"


# index classes: (copies before, copies after), each "zero", "fin" or "inf"
_TWO_ENDED: Final = (
    ("zero", "inf"),
    ("fin", "inf"),
    ("inf", "inf"),
    ("inf", "fin"),
    ("inf", "zero"),
)
_INDEX_CLASSES: Final = {
    TauKind.OMEGA: (("zero", "inf"), ("fin", "inf")),
    TauKind.OMEGA_STAR: (("inf", "zero"), ("inf", "fin")),
    TauKind.ZETA: (("inf", "inf"),),
    TauKind.SIGMA: _TWO_ENDED,
    TauKind.RHO: _TWO_ENDED,
}


def _fin_index_classes(k: int) -> tuple[tuple[str, str], ...]:
    if k == 0:
        return ()
    if k == 1:
        return (("zero", "zero"),)
    if k == 2:
        return (("zero", "fin"), ("fin", "zero"))
    return (("zero", "fin"), ("fin", "fin"), ("fin", "zero"))


@functools.cache
def region_classes(w: WordExpr) -> frozenset[RegionClass]:
    """All classes realized by positions of ``w``, computed on the tree."""
    match w:
        case Lit(text):
            return frozenset(RegionClass(ch, True, True) for ch in text)
        case Cat(left, right):
            lf, rf = is_finite(left), is_finite(right)
            from_left = {
                RegionClass(c.letter, c.finite_before, c.finite_after and rf)
                for c in region_classes(left)
            }
            from_right = {
                RegionClass(c.letter, c.finite_before and lf, c.finite_after)
                for c in region_classes(right)
            }
            return frozenset(from_left | from_right)
        case Pow(tau, inner):
            if is_empty(inner):
                return frozenset()
            finite_inner = is_finite(inner)
            shapes = (
                _fin_index_classes(tau.k) if tau.kind is TauKind.FIN else _INDEX_CLASSES[tau.kind]
            )
            out: set[RegionClass] = set()
            for before, after in shapes:
                for c in region_classes(inner):
                    out.add(
                        RegionClass(
                            c.letter,
                            c.finite_before and _side_finite(before, finite_inner),
                            c.finite_after and _side_finite(after, finite_inner),
                        )
                    )
            return frozenset(out)


def _side_finite(copies: str, finite_inner: bool) -> bool:
    return copies == "zero" or (copies == "fin" and finite_inner)


# -- region signatures --------------------------------------------------------


@dataclass(frozen=True)
class RegionStep:
    """One power on a path: its part and exact distances (< B) to the part's ends."""

    part: Part
    from_left: int | None
    from_right: int | None

    @property
    def deep(self) -> bool:
        return self.from_left is None and self.from_right is None


RegionSignature = tuple[Branch | RegionStep | Offset, ...]


def _near(d: int, budget: int) -> int | None:
    return d if d < budget else None


def region_signature(w: WordExpr, p: Position, budget: int) -> RegionSignature:
    if budget < 1:
        raise ValueError("budget must be >= 1")
    out: list[Branch | RegionStep | Offset] = []
    for node, step in walk(w, p.steps):
        match node, step:
            case Pow(tau, _), At(idx):
                if idx.part is Part.FIN:
                    sig = RegionStep(
                        idx.part, _near(idx.i, budget), _near(tau.k - 1 - idx.i, budget)
                    )
                elif idx.part is Part.W:
                    sig = RegionStep(idx.part, _near(idx.i, budget), None)
                elif idx.part is Part.W_STAR:
                    sig = RegionStep(idx.part, None, _near(idx.i, budget))
                else:
                    sig = RegionStep(idx.part, None, None)
                out.append(sig)
            case _, Branch() | Offset():
                out.append(step)
            case _:
                raise _bad(w, p.steps, "unexpected step")
    return tuple(out)


# -- pi-terms to words --------------------------------------------------------


def eval_term(t: PiTerm, tau: Tau) -> WordExpr:
    """Structure-preserving translation, pi-power becoming ``Pow(tau)``."""
    if tau.kind not in (TauKind.SIGMA, TauKind.RHO, TauKind.FIN):
        raise ValueError(f"pi-terms evaluate under sigma, rho or a finite power, not ^{tau}")
    if tau.kind is TauKind.FIN and tau.k < 1:
        raise ValueError("evaluating with ^0 would erase the term")
    match t:
        case Letter(symbol):
            return Lit(symbol)
        case Concat(left, right):
            return Cat(eval_term(left, tau), eval_term(right, tau))
        case PiPower(inner):
            return Pow(tau, eval_term(inner, tau))
        case FinPower(inner, k):
            return Pow(Tau.fin(k), eval_term(inner, tau))


# -- word literals ------------------------------------------------------------

_POWER_SUFFIXES: Final = {
    "w": SIGMA,
    "s": SIGMA,
    "r": RHO,
    "z": ZETA,
    "o": OMEGA,
}


class _WordParser(Parser[WordExpr]):
    def letter(self, symbol: str) -> WordExpr:
        return Lit(symbol)

    def concat(self, left: WordExpr, right: WordExpr) -> WordExpr:
        if isinstance(left, Lit) and isinstance(right, Lit):
            return Lit(left.text + right.text)
        return Cat(left, right)

    def power(self, node: WordExpr, offset: int) -> WordExpr:
        ch = self.peek()
        if ch.isdigit():
            return Pow(Tau.fin(self.read_int()), node)
        if ch == "o":
            self.pos += 1
            if self.text.startswith("*", self.pos):
                self.pos += 1
                return Pow(OMEGA_STAR, node)
            return Pow(OMEGA, node)
        if ch in _POWER_SUFFIXES:
            self.pos += 1
            return Pow(_POWER_SUFFIXES[ch], node)
        raise self.error("expected one of w, s, r, z, o, o* or an integer after '^'")


def parse_word(text: str, alphabet: Iterable[str] | None = None) -> WordExpr:
    """Word literal: the pi-term syntax plus ``^s ^r ^z ^o ^o*`` and ``^<int>`` (``^w`` = sigma).

    The empty string denotes the empty word.
    """
    if not text.strip():
        return Lit("")
    return _WordParser(text, alphabet).parse()


def render_word(w: WordExpr) -> str:
    match w:
        case Lit(text):
            return text or "ε"
        case Cat(left, right):
            rhs = render_word(right)
            if isinstance(right, Cat):
                rhs = f"({rhs})"
            return f"{render_word(left)} {rhs}"
        case Pow(tau, inner):
            base = render_word(inner)
            if not (isinstance(inner, Lit) and len(inner.text) == 1):
                base = f"({base})"
            return f"{base}^{tau}"


# -- position text ------------------------------------------------------------

_AT_RE = re.compile(r"^P\[(fin|w\*|w|zn\((-?\d+)/(\d+)\)|z):(-?\d+)\]$")
# "/" inside zn(p/q) is part of the index
_STEP_SPLIT = re.compile(r"/(?![^\[]*\])")


def parse_position(text: str) -> Position:
    """Inverse of ``str(Position)``, e.g. ``"R/P[z:-3]/@0"``."""
    steps: list[Step] = []
    for chunk in _STEP_SPLIT.split(text.strip()):
        chunk = chunk.strip()
        if chunk == "L":
            steps.append(LEFT)
        elif chunk == "R":
            steps.append(RIGHT)
        elif chunk.startswith("@") and chunk[1:].isdigit():
            steps.append(Offset(int(chunk[1:])))
        else:
            m = _AT_RE.match(chunk)
            if not m:
                raise InvalidPositionError(
                    f"cannot read {chunk!r}; steps are L, R, @i or P[part:index] "
                    "with part in fin, w, w*, z, zn(num/den)"
                )
            part_text, num, den, raw = m.groups()
            value = int(raw)
            if part_text == "w*":
                if value > 0:
                    raise InvalidPositionError("w* indices are written 0, -1, -2, ...")
                steps.append(At(Index(Part.W_STAR, -value)))
            elif part_text.startswith("zn"):
                if int(den) == 0:
                    raise InvalidPositionError("zero denominator in zn index")
                steps.append(At(Index(Part.ZN, value, Fraction(int(num), int(den)))))
            else:
                if part_text in ("fin", "w") and value < 0:
                    raise InvalidPositionError(f"{part_text} indices are non-negative")
                steps.append(At(Index(Part(part_text), value)))
    if not steps:
        raise InvalidPositionError("empty position")
    return Position(tuple(steps))
