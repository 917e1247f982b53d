"""Duplicator's answer on a sigma-power ``u = v^s`` from an answer on ``v``.

Positions of ``u`` are pairs ``(s, p)``: an index ``p`` of the power and a
position ``s`` of ``v``. The inner game on ``v`` supplies ``s'``; the index
``r`` follows three cases: copy ``p`` when the other variable sits in the
n-border of the answering side or ``p`` itself is in the (n-1)-border, else
stay next to (or on) the other variable's index in the same direction.
"""

from __future__ import annotations

from ..config import default_budget
from ..errors import InvalidPositionError, PreconditionViolation
from ..fragments import Family, FragmentDesc, Quantifier, Side, Valuation
from ..genword import (
    SIGMA,
    At,
    Index,
    Position,
    Pow,
    WordExpr,
    index_in_border,
    index_pred,
    index_succ,
    is_empty,
    is_sigma_rational,
    validate,
)
from .bounded import Solver
from .game import GameConfig, Valuated


def _split(u: WordExpr, p: Position) -> tuple[Index, Position]:
    try:
        validate(u, p)
    except InvalidPositionError as exc:
        raise PreconditionViolation(str(exc)) from exc
    head = p.steps[0]
    assert isinstance(head, At)
    return head.index, Position(p.steps[1:])


def _inner(u: WordExpr, gamma: Valuation) -> Valuation:
    return Valuation.of({z: _split(u, p)[1] for z, p in gamma.items})


def _order(a: Index, b: Index) -> int:
    ka, kb = a.key(), b.key()
    return (ka > kb) - (ka < kb)


def border_conditions(
    v: WordExpr, alpha: Valuation, beta: Valuation, n: int, solver: Solver | None = None
) -> str | None:
    """Why the three hypotheses fail for ``(alpha, beta, n)``, or ``None`` when they hold."""
    if is_empty(v) or not is_sigma_rational(v):
        return "v must be a non-empty sigma-rational word"
    if alpha.variables != beta.variables:
        return "alpha and beta bind different variables"
    if not set(alpha.variables) <= {"x", "y"}:
        return "only x and y may be bound"
    u = Pow(SIGMA, v)
    idx_a = {z: _split(u, p)[0] for z, p in alpha.items}
    idx_b = {z: _split(u, p)[0] for z, p in beta.items}

    inner = GameConfig(
        FragmentDesc(Family.FO2, n), Valuated(v, _inner(u, alpha)), Valuated(v, _inner(u, beta))
    )
    solver = solver or Solver(default_budget(n))
    if solver.spoiler_wins(inner):
        return f"Spoiler wins the depth-{n} game on v"

    for z in alpha.variables:
        in_border = index_in_border(idx_a[z], n) or index_in_border(idx_b[z], n)
        if in_border and idx_a[z] != idx_b[z]:
            return f"{z} sits in the {n}-border on one side but not at the same index"

    if set(alpha.variables) == {"x", "y"}:
        if _order(idx_a["x"], idx_a["y"]) != _order(idx_b["x"], idx_b["y"]):
            return "x and y are ordered differently by their indices"
    return None


def duplicator_power_response(
    v: WordExpr,
    alpha: Valuation,
    beta: Valuation,
    n: int,
    q: Quantifier,
    x: str,
    quest: Position,
    solver: Solver | None = None,
) -> Position:
    if n < 1:
        raise PreconditionViolation("no round is left at depth 0")
    if x not in ("x", "y"):
        raise PreconditionViolation(f"{x!r} is not one of the two variables")
    solver = solver or Solver(default_budget(n))
    reason = border_conditions(v, alpha, beta, n, solver)
    if reason is not None:
        raise PreconditionViolation(reason)

    u = Pow(SIGMA, v)
    asked, answering = (alpha, beta) if q.quest_side is Side.LEFT else (beta, alpha)
    p, s = _split(u, quest)

    inner = GameConfig(
        FragmentDesc(Family.FO2, n), Valuated(v, _inner(u, alpha)), Valuated(v, _inner(u, beta))
    )
    s_answer = solver.good_response(inner, q, x, s)
    if s_answer is None:
        raise PreconditionViolation(f"no answer to {s} keeps Duplicator winning on v")

    y = "y" if x == "x" else "x"
    if y not in asked:
        r = p
    else:
        py_asked = _split(u, asked.get(y))[0]
        py_answer = _split(u, answering.get(y))[0]
        if index_in_border(py_answer, n) or index_in_border(p, n - 1):
            r = p
        else:
            o = _order(p, py_asked)
            picked = (
                py_answer
                if o == 0
                else index_pred(SIGMA, py_answer) if o < 0 else index_succ(SIGMA, py_answer)
            )
            if picked is None:
                raise PreconditionViolation(f"{py_answer} has no neighbour in that direction")
            r = picked
    return Position((At(r), *s_answer.steps))
