"""Pi-term identities decided by games on sigma-substituted words.

``s = t`` holds for a fragment when Duplicator wins the games on
``(s[sigma], t[sigma])`` and on ``(t[sigma], s[sigma])``. Failures come with
Spoiler's line of play and a distinguishing sentence read off the winning strategy.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum

from .config import (
    DEFAULT_APPROX_K,
    DEFAULT_CLOSURE_BUDGET,
    DEFAULT_CLOSURE_LIMIT,
    DEFAULT_MAX_DEPTH,
    default_budget,
)
from .engine import (
    GameConfig,
    MemoBackend,
    Move,
    RegionCertificate,
    Solver,
    UnboundedStatus,
    UnboundedVerdict,
    Winner,
    decide_bounded,
    decide_unbounded,
    representative_quests,
    spoiler_wins_now,
    step,
)
from .errors import NotSpoilerWinning
from .fragments import (
    Exists,
    Family,
    Forall,
    Formula,
    FragmentDesc,
    Not,
    Quantifier,
    conj,
    disj,
    holds_on_string,
    render_formula,
)
from .genword import SIGMA, Tau, TauKind, WordExpr, eval_term, finite_approx, flatten, is_finite
from .pi_term import PiTerm

logger = logging.getLogger(__name__)


class IdentityStatus(str, Enum):
    HOLDS_CERTIFIED = "holds-certified"
    HOLDS_UP_TO_DEPTH = "holds-up-to-depth"
    FAILS_AT_DEPTH = "fails-at-depth"
    FAILS_CERTIFIED = "fails-certified"


class Direction(str, Enum):
    # game on (s, t) or on (t, s)
    FORWARD = "s,t"
    BACKWARD = "t,s"


@dataclass(frozen=True)
class DepthRow:
    depth: int
    forward: Winner
    backward: Winner


@dataclass(frozen=True)
class SynthesisResult:
    formula: Formula
    # False when the words are infinite and only representatives were explored
    exact: bool


@dataclass(frozen=True)
class IdentityReport:
    left: PiTerm
    right: PiTerm
    family: Family
    tau: Tau
    status: IdentityStatus
    # max depth checked for holds-up-to-depth, the failing depth for fails-at-depth
    depth: int | None = None
    rows: tuple[DepthRow, ...] = ()
    direction: Direction | None = None
    trace: tuple[Move, ...] = ()
    formula: SynthesisResult | None = None
    # None when the formula could not be checked on finite approximations
    formula_verified: bool | None = None
    certificates: tuple[UnboundedVerdict, ...] = field(default_factory=tuple)

    @property
    def holds(self) -> bool:
        return self.status in (IdentityStatus.HOLDS_CERTIFIED, IdentityStatus.HOLDS_UP_TO_DEPTH)


def synthesize_distinguishing_formula(
    u: WordExpr, v: WordExpr, f: FragmentDesc, solver: Solver | None = None
) -> SynthesisResult:
    """A sentence of ``f`` true on ``u`` and false on ``v``, read off Spoiler's strategy."""
    if f.depth is None:
        raise ValueError(f"{f} is unbounded")
    solver = solver or Solver(default_budget(f.depth))
    c = GameConfig.start(f, u, v)
    if not solver.spoiler_wins(c):
        raise NotSpoilerWinning(f"Duplicator wins the {f} game; no sentence separates the words")
    phi = _formula(solver, c)
    return SynthesisResult(phi, is_finite(u) and is_finite(v))


def _formula(solver: Solver, c: GameConfig) -> Formula:
    literal = spoiler_wins_now(c)
    if literal is not None:
        return literal
    m = solver.winning_move(c)
    assert m is not None, "a Spoiler-won configuration has a winning move"
    q, x = m.quantifier, m.variable
    answering = q.quest_side.other
    subs: dict[str, Formula] = {}
    for r in representative_quests(c, answering, solver.radius(c)):
        sub = _formula(solver, step(c, Move(q, x, m.quest, r)))
        subs.setdefault(render_formula(sub), sub)
    parts = [subs[k] for k in sorted(subs)]
    match q:
        case Quantifier.EXISTS:
            return Exists(x, conj(parts))
        case Quantifier.FORALL:
            return Forall(x, disj(parts))
        case Quantifier.NOT_EXISTS:
            return Not(Exists(x, conj(parts)))
        case Quantifier.NOT_FORALL:
            return Not(Forall(x, disj(parts)))


def verify_on_approximations(
    u: WordExpr, v: WordExpr, phi: Formula, k: int = DEFAULT_APPROX_K
) -> bool:
    """``phi`` holds on the k-approximation of ``u`` and fails on that of ``v``."""
    return holds_on_string(finite_approx(u, k), phi) and not holds_on_string(
        finite_approx(v, k), phi
    )


def check_identity(
    s: PiTerm,
    t: PiTerm,
    family: Family,
    tau: Tau = SIGMA,
    max_depth: int = DEFAULT_MAX_DEPTH,
    budget: int | None = None,
    closure_budget: int = DEFAULT_CLOSURE_BUDGET,
    closure_limit: int = DEFAULT_CLOSURE_LIMIT,
    approx_k: int = DEFAULT_APPROX_K,
    backend: MemoBackend | None = None,
    synthesize: bool = True,
    solvers: dict[int, Solver] | None = None,
) -> IdentityReport:
    """Sweep both game directions to ``max_depth``, then certify FO2 sigma identities."""
    if tau.kind not in (TauKind.SIGMA, TauKind.FIN):
        raise ValueError(f"identities are checked under sigma or a finite exponent, not {tau}")
    if max_depth < 0:
        raise ValueError("max_depth must be >= 0")
    if s == t:
        return IdentityReport(s, t, family, tau, IdentityStatus.HOLDS_CERTIFIED)

    u, v = eval_term(s, tau), eval_term(t, tau)
    solvers = {} if solvers is None else solvers
    rows: list[DepthRow] = []
    for n in range(max_depth + 1):
        b = budget or default_budget(n)
        if b not in solvers:
            solvers[b] = Solver(b, backend)
        solver = solvers[b]
        f = FragmentDesc(family, n)
        forward = decide_bounded(GameConfig.start(f, u, v), solver=solver)
        backward = decide_bounded(GameConfig.start(f, v, u), solver=solver)
        rows.append(DepthRow(n, forward.winner, backward.winner))
        logger.debug("depth %d: %s / %s", n, forward.winner.value, backward.winner.value)
        if Winner.SPOILER in (forward.winner, backward.winner):
            forward_lost = forward.winner is Winner.SPOILER
            direction = Direction.FORWARD if forward_lost else Direction.BACKWARD
            lost = forward if direction is Direction.FORWARD else backward
            a, b_word = (u, v) if direction is Direction.FORWARD else (v, u)
            formula: SynthesisResult | None = None
            verified: bool | None = None
            if synthesize:
                formula = synthesize_distinguishing_formula(a, b_word, f, solver)
                verified = _verify(a, b_word, formula, approx_k)
            logger.info("%s fails at depth %d (%s)", f, n, direction.value)
            return IdentityReport(
                s,
                t,
                family,
                tau,
                IdentityStatus.FAILS_AT_DEPTH,
                n,
                tuple(rows),
                direction,
                lost.trace,
                formula,
                verified,
            )

    if tau.kind is TauKind.FIN and flatten(u) == flatten(v):
        return IdentityReport(s, t, family, tau, IdentityStatus.HOLDS_CERTIFIED, rows=tuple(rows))

    certificates: tuple[UnboundedVerdict, ...] = ()
    if family is Family.FO2 and tau.kind is TauKind.SIGMA:
        unbounded = FragmentDesc(Family.FO2, None)
        certificates = tuple(
            decide_unbounded(
                GameConfig.start(unbounded, a, b_word),
                max_depth,
                budget,
                closure_budget,
                closure_limit,
                backend,
                solvers,
            )
            for a, b_word in ((u, v), (v, u))
        )
        statuses = [cert.status for cert in certificates]
        if all(st is UnboundedStatus.DUPLICATOR_CERTIFIED for st in statuses):
            logger.info("identity holds in %s, certified by %s", unbounded, certificates[0].rule)
            return IdentityReport(
                s,
                t,
                family,
                tau,
                IdentityStatus.HOLDS_CERTIFIED,
                rows=tuple(rows),
                certificates=certificates,
            )
        for direction, cert in zip(Direction, certificates, strict=True):
            if isinstance(cert.certificate, RegionCertificate):
                logger.info("identity fails beyond depth %d (%s)", max_depth, cert.rule)
                return IdentityReport(
                    s,
                    t,
                    family,
                    tau,
                    IdentityStatus.FAILS_CERTIFIED,
                    rows=tuple(rows),
                    direction=direction,
                    certificates=certificates,
                )

    return IdentityReport(
        s,
        t,
        family,
        tau,
        IdentityStatus.HOLDS_UP_TO_DEPTH,
        max_depth,
        tuple(rows),
        certificates=certificates,
    )


def _verify(u: WordExpr, v: WordExpr, result: SynthesisResult, k: int) -> bool:
    if result.exact:
        return holds_on_string(flatten(u), result.formula) and not holds_on_string(
            flatten(v), result.formula
        )
    return verify_on_approximations(u, v, result.formula, k)
