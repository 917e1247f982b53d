"""Fragment descriptors (FO_n, FO2_n), formulas, valuations and their semantics."""

from __future__ import annotations

import re
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, replace
from enum import Enum
from typing import Final

from .errors import InvalidPositionError, TermSyntaxError, UnboundVariableError
from .genword import (
    Lit,
    Ord,
    Position,
    WordExpr,
    compare,
    flatten,
    label,
    positions,
)


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @property
    def other(self) -> Side:
        return Side.RIGHT if self is Side.LEFT else Side.LEFT


_SYMBOLS: Final = {"exists": "∃", "forall": "∀", "not_exists": "¬∃", "not_forall": "¬∀"}


class Quantifier(str, Enum):
    EXISTS = "exists"
    FORALL = "forall"
    NOT_EXISTS = "not_exists"
    NOT_FORALL = "not_forall"

    @property
    def quest_side(self) -> Side:
        """Side Spoiler picks the quest on; Duplicator answers on the other one."""
        if self in (Quantifier.EXISTS, Quantifier.NOT_FORALL):
            return Side.LEFT
        return Side.RIGHT

    @property
    def swaps(self) -> bool:
        return self in (Quantifier.NOT_EXISTS, Quantifier.NOT_FORALL)

    @property
    def symbol(self) -> str:
        return _SYMBOLS[self.value]


class Family(str, Enum):
    FO = "fo"
    FO2 = "fo2"


_FO_VARIABLE: Final = re.compile(r"^(?:[xyz]|x\d+)$")
_FO2_VARIABLES: Final = ("x", "y")


def variable_pool(family: Family, count: int) -> tuple[str, ...]:
    """First ``count`` variables of the family's pool (FO2 never goes past x, y)."""
    if family is Family.FO2:
        return _FO2_VARIABLES[:count]
    base = ("x", "y", "z")
    extra = tuple(f"x{i}" for i in range(1, max(0, count - len(base)) + 1))
    return (base + extra)[:count]


@dataclass(frozen=True)
class FragmentDesc:
    family: Family
    # None: unbounded quantifier depth
    depth: int | None

    def __post_init__(self) -> None:
        if self.depth is not None and self.depth < 0:
            raise ValueError(f"depth must be >= 0, got {self.depth}")

    @property
    def bounded(self) -> bool:
        return self.depth is not None

    @property
    def negation_closed(self) -> bool:
        return True

    def has_variable(self, x: str) -> bool:
        if self.family is Family.FO2:
            return x in _FO2_VARIABLES
        return bool(_FO_VARIABLE.match(x))

    def reduct(self, q: Quantifier, x: str) -> FragmentDesc | None:
        return reduct(self, q, x)

    def radius(self, remaining: int, budget: int) -> int:
        """Border radius worth exploring with ``remaining`` rounds left, capped by B."""
        if self.family is Family.FO2:
            wanted = 2 * remaining + 1
        else:
            wanted = 2 ** max(remaining - 1, 0) + 1
        return max(1, min(budget, wanted))

    def with_depth(self, depth: int | None) -> FragmentDesc:
        return replace(self, depth=depth)

    def __str__(self) -> str:
        name = "FO2" if self.family is Family.FO2 else "FO"
        return f"{name}_{'inf' if self.depth is None else self.depth}"


def reduct(f: FragmentDesc, q: Quantifier, x: str) -> FragmentDesc | None:
    """Fragment left after one ``Qx`` round; ``None`` when that round is illegal."""
    del q  # every family here is negation-closed, all four quantifiers behave alike
    if not f.has_variable(x):
        return None
    if f.depth is None:
        return f
    if f.depth == 0:
        return None
    return replace(f, depth=f.depth - 1)


# -- formulas -----------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Less:
    x: str
    y: str


@dataclass(frozen=True)
class LessEq:
    x: str
    y: str


@dataclass(frozen=True)
class Label:
    x: str
    letter: str


@dataclass(frozen=True)
class Not:
    inner: Formula


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists:
    var: str
    body: Formula


@dataclass(frozen=True)
class Forall:
    var: str
    body: Formula


Atom = Top | Bottom | Eq | Less | LessEq | Label
Formula = Top | Bottom | Eq | Less | LessEq | Label | Not | And | Or | Exists | Forall

TRUE: Final = Top()
FALSE: Final = Bottom()


def conj(parts: list[Formula]) -> Formula:
    if not parts:
        return TRUE
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts: list[Formula]) -> Formula:
    if not parts:
        return FALSE
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def negate(phi: Formula) -> Formula:
    return phi.inner if isinstance(phi, Not) else Not(phi)


def qd(phi: Formula) -> int:
    match phi:
        case Not(inner):
            return qd(inner)
        case And(left, right) | Or(left, right):
            return max(qd(left), qd(right))
        case Exists(_, body) | Forall(_, body):
            return 1 + qd(body)
        case _:
            return 0


def _atom_vars(phi: Atom) -> frozenset[str]:
    match phi:
        case Eq(x, y) | Less(x, y) | LessEq(x, y):
            return frozenset((x, y))
        case Label(x, _):
            return frozenset((x,))
        case Top() | Bottom():
            return frozenset()


def free_vars(phi: Formula) -> frozenset[str]:
    match phi:
        case Not(inner):
            return free_vars(inner)
        case And(left, right) | Or(left, right):
            return free_vars(left) | free_vars(right)
        case Exists(var, body) | Forall(var, body):
            return free_vars(body) - {var}
        case _:
            return _atom_vars(phi)


def all_vars(phi: Formula) -> frozenset[str]:
    match phi:
        case Not(inner):
            return all_vars(inner)
        case And(left, right) | Or(left, right):
            return all_vars(left) | all_vars(right)
        case Exists(var, body) | Forall(var, body):
            return all_vars(body) | {var}
        case _:
            return _atom_vars(phi)


def in_fragment(f: FragmentDesc, phi: Formula) -> bool:
    if f.depth is not None and qd(phi) > f.depth:
        return False
    return all(f.has_variable(x) for x in all_vars(phi))


def atoms_over(variables: tuple[str, ...], alphabet: frozenset[str]) -> Iterator[Atom]:
    """Every atom mentioning only ``variables``, in a fixed order."""
    for x in variables:
        for a in sorted(alphabet):
            yield Label(x, a)
    for x in variables:
        for y in variables:
            if x < y:
                yield Eq(x, y)
            if x != y:
                yield Less(x, y)


# -- valuations ---------------------------------------------------------------


@dataclass(frozen=True)
class Valuation:
    """Finite map from variables to positions of one word, kept sorted by variable."""

    items: tuple[tuple[str, Position], ...] = ()

    @classmethod
    def of(cls, mapping: Mapping[str, Position]) -> Valuation:
        return cls(tuple(sorted(mapping.items(), key=lambda kv: kv[0])))

    def get(self, x: str) -> Position:
        for var, p in self.items:
            if var == x:
                return p
        raise UnboundVariableError(x)

    def bind(self, x: str, p: Position) -> Valuation:
        rest = {var: q for var, q in self.items if var != x}
        rest[x] = p
        return Valuation.of(rest)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(var for var, _ in self.items)

    def as_dict(self) -> dict[str, Position]:
        return dict(self.items)

    def __contains__(self, x: object) -> bool:
        return any(var == x for var, _ in self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{var}: {p}" for var, p in self.items) + "}"


EMPTY_VALUATION: Final = Valuation()


# -- semantics ----------------------------------------------------------------


def eval_atomic(w: WordExpr, alpha: Valuation, atom: Atom) -> bool:
    """Atom truth on a symbolic word; works for infinite words."""
    match atom:
        case Top():
            return True
        case Bottom():
            return False
        case Eq(x, y):
            return compare(w, alpha.get(x), alpha.get(y)) is Ord.EQ
        case Less(x, y):
            return compare(w, alpha.get(x), alpha.get(y)) is Ord.LT
        case LessEq(x, y):
            return compare(w, alpha.get(x), alpha.get(y)) is not Ord.GT
        case Label(x, letter):
            return label(w, alpha.get(x)) == letter


def _holds(text: str, env: dict[str, int], phi: Formula) -> bool:
    match phi:
        case Top():
            return True
        case Bottom():
            return False
        case Eq(x, y):
            return _lookup(env, x) == _lookup(env, y)
        case Less(x, y):
            return _lookup(env, x) < _lookup(env, y)
        case LessEq(x, y):
            return _lookup(env, x) <= _lookup(env, y)
        case Label(x, letter):
            return text[_lookup(env, x)] == letter
        case Not(inner):
            return not _holds(text, env, inner)
        case And(left, right):
            return _holds(text, env, left) and _holds(text, env, right)
        case Or(left, right):
            return _holds(text, env, left) or _holds(text, env, right)
        case Exists(var, body):
            return any(_holds(text, {**env, var: i}, body) for i in range(len(text)))
        case Forall(var, body):
            return all(_holds(text, {**env, var: i}, body) for i in range(len(text)))


def _lookup(env: dict[str, int], x: str) -> int:
    try:
        return env[x]
    except KeyError:
        raise UnboundVariableError(x) from None


def eval_formula(w: WordExpr | str, alpha: Valuation, phi: Formula) -> bool:
    """Tarskian truth on a finite word; quantifiers range over every position."""
    word = Lit(w) if isinstance(w, str) else w
    text = flatten(word)
    where = {p: i for i, p in enumerate(positions(word))}
    env: dict[str, int] = {}
    for var, p in alpha.items:
        if p not in where:
            raise InvalidPositionError(f"{p} is not a position of {text!r}")
        env[var] = where[p]
    missing = free_vars(phi) - env.keys()
    if missing:
        raise UnboundVariableError(min(missing))
    return _holds(text, env, phi)


def holds_on_string(text: str, phi: Formula) -> bool:
    """Sentence truth on a plain string."""
    return _holds(text, {}, phi)


# -- text syntax --------------------------------------------------------------


def render_formula(phi: Formula) -> str:
    """CLI syntax: ``Ex``, ``Ax``, ``&``, ``|``, ``!``, ``x=y``, ``x<y``, ``x<=y``, ``lab(x)=a``."""
    match phi:
        case Top():
            return "T"
        case Bottom():
            return "F"
        case Eq(x, y):
            return f"{x}={y}"
        case Less(x, y):
            return f"{x}<{y}"
        case LessEq(x, y):
            return f"{x}<={y}"
        case Label(x, letter):
            return f"lab({x})={letter}"
        case Not(inner):
            return f"!{render_formula(inner)}"
        case And(left, right):
            return f"({render_formula(left)} & {render_formula(right)})"
        case Or(left, right):
            return f"({render_formula(left)} | {render_formula(right)})"
        case Exists(var, body):
            return f"E{var} {render_formula(body)}"
        case Forall(var, body):
            return f"A{var} {render_formula(body)}"


_TOKEN: Final = re.compile(
    r"\s*(?:(?P<lab>lab\(\s*(?P<lv>[a-z]\w*)\s*\)\s*=\s*(?P<letter>[a-z]))"
    r"|(?P<quant>[EA])(?P<qv>[a-z]\w*)"
    r"|(?P<var>[a-z]\w*)"
    r"|(?P<op><=|[=<&|!()TF]))"
)


class _FormulaParser:
    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, tuple[str, ...], int]] = []
        pos = 0
        while pos < len(text):
            if text[pos:].strip() == "":
                break
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise TermSyntaxError(f"unexpected {text[pos:].lstrip()[:1]!r}", pos)
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            if m.group("lab"):
                self.tokens.append(("lab", (m.group("lv"), m.group("letter")), start))
            elif m.group("quant"):
                self.tokens.append((m.group("quant"), (m.group("qv"),), start))
            elif m.group("var"):
                self.tokens.append(("var", (m.group("var"),), start))
            else:
                self.tokens.append((m.group("op"), (), start))
            pos = m.end()
        self.i = 0

    def _peek(self) -> str:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else ""

    def _offset(self) -> int:
        return self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)

    def _take(self, kind: str) -> tuple[str, ...]:
        if self._peek() != kind:
            raise TermSyntaxError(f"expected {kind!r}", self._offset())
        args = self.tokens[self.i][1]
        self.i += 1
        return args

    def parse(self) -> Formula:
        phi = self.disjunction()
        if self.i < len(self.tokens):
            raise TermSyntaxError(f"unexpected {self._peek()!r}", self._offset())
        return phi

    def disjunction(self) -> Formula:
        phi = self.conjunction()
        while self._peek() == "|":
            self.i += 1
            phi = Or(phi, self.conjunction())
        return phi

    def conjunction(self) -> Formula:
        phi = self.unary()
        while self._peek() == "&":
            self.i += 1
            phi = And(phi, self.unary())
        return phi

    def unary(self) -> Formula:
        kind = self._peek()
        if kind == "!":
            self.i += 1
            return Not(self.unary())
        if kind in ("E", "A"):
            (var,) = self._take(kind)
            body = self.unary()
            return Exists(var, body) if kind == "E" else Forall(var, body)
        if kind == "(":
            self.i += 1
            phi = self.disjunction()
            self._take(")")
            return phi
        if kind == "T":
            self.i += 1
            return TRUE
        if kind == "F":
            self.i += 1
            return FALSE
        if kind == "lab":
            var, letter = self._take("lab")
            return Label(var, letter)
        if kind == "var":
            (x,) = self._take("var")
            op = self._peek()
            if op not in ("=", "<", "<="):
                raise TermSyntaxError("expected '=', '<' or '<=' after a variable", self._offset())
            self.i += 1
            (y,) = self._take("var")
            return {"=": Eq, "<": Less, "<=": LessEq}[op](x, y)
        if not kind:
            raise TermSyntaxError("unexpected end of input", self._offset())
        raise TermSyntaxError(f"unexpected {kind!r}", self._offset())


def parse_formula(text: str) -> Formula:
    return _FormulaParser(text).parse()
