"""Command-line front end.

    efpi game "a^s" "a^s a^s" --family fo2 --depth 3
    efpi check-identity "x^w = x^w x^w" --family fo2
    efpi play aa aaa --family fo --depth 2 --as spoiler
    efpi oracle sentences --family fo2 --depth 1 --maxlen 3

Exit codes: 0 Duplicator / identity holds (certified), 1 Spoiler / identity
fails, 2 Duplicator only up to the checked depth (or a play session left early),
64 usage or configuration errors, 65 malformed input, 66 oracle budget exceeded.
"""

from __future__ import annotations

import functools
import logging
import sys
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Concatenate, ParamSpec

import click

from . import __version__
from .config import Settings
from .engine import (
    GameConfig,
    Move,
    Solver,
    UnboundedStatus,
    Winner,
    decide_bounded,
    decide_unbounded,
    legal_rounds,
    representative_quests,
    spoiler_wins_now,
    step,
)
from .errors import (
    BudgetExceededError,
    ConfigError,
    EfpiError,
    InvalidPositionError,
    NonFiniteWordError,
    TermSyntaxError,
)
from .fragments import Family, FragmentDesc, Quantifier, Side, render_formula
from .genword import SIGMA, Position, Tau, is_position, parse_position, parse_word
from .identity import IdentityStatus, check_identity
from .oracle import (
    BUILTIN_PAIRS,
    GridReport,
    crosscheck_grid,
    exact_grid,
    preorder_grid,
    sentence_grid,
)
from .pi_term import parse_identity
from .records import (
    RunRecord,
    TraceEntry,
    grid_payload,
    identity_inputs,
    identity_payload,
    trace_entries,
    unbounded_payload,
    verdict_payload,
    words_input,
)
from .store import MemoStore

logger = logging.getLogger(__name__)

EXIT_DUPLICATOR = 0
EXIT_SPOILER = 1
EXIT_UP_TO_DEPTH = 2
EXIT_USAGE = 64
EXIT_INPUT = 65
EXIT_BUDGET = 66

P = ParamSpec("P")


@dataclass
class Run:
    """Per-invocation state: settings, output format, memo cache and shared solvers."""

    settings: Settings
    fmt: str
    store: MemoStore | None = None
    solvers: dict[int, Solver] = field(default_factory=dict)
    started: float = field(default_factory=time.perf_counter)

    def solver(self, budget: int) -> Solver:
        if budget not in self.solvers:
            self.solvers[budget] = Solver(budget, self.store)
        return self.solvers[budget]

    def finish(self, record: RunRecord, text: Callable[[], None]) -> None:
        record.timing_ms = round((time.perf_counter() - self.started) * 1000, 3)
        if self.store is not None:
            written = sum(self.store.put_many(s.fresh) for s in self.solvers.values())
            logger.debug("memo cache: %d new records", written)
            self.store.close()
        if self.fmt == "json":
            click.echo(record.to_json())
        else:
            text()


def _exit_code(exc: EfpiError) -> int:
    if isinstance(exc, BudgetExceededError):
        return EXIT_BUDGET
    if isinstance(exc, ConfigError):
        return EXIT_USAGE
    return EXIT_INPUT


def command_options(
    fn: Callable[Concatenate[Run, P], int],
) -> Callable[..., None]:
    """Adds ``--format`` and ``--cache``, builds the ``Run`` and maps errors to exit codes."""

    @click.option(
        "--format",
        "fmt",
        type=click.Choice(["text", "json"]),
        default="text",
        show_default=True,
        help="Output format.",
    )
    @click.option(
        "--cache",
        type=click.Path(dir_okay=False, path_type=Path),
        default=None,
        help="Memo cache file (default: $EFPI_CACHE, none when unset).",
    )
    @click.pass_context
    @functools.wraps(fn)
    def wrapper(
        ctx: click.Context, fmt: str, cache: Path | None, *args: P.args, **kwargs: P.kwargs
    ) -> None:
        try:
            settings = ctx.find_object(Settings) or Settings.from_env()
            path = cache or settings.cache_path
            run = Run(settings, fmt, MemoStore(path) if path else None)
            code = fn(run, *args, **kwargs)
        except EfpiError as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(_exit_code(exc))
        ctx.exit(code)

    return wrapper


def _fragment(family: str, depth: str) -> FragmentDesc:
    if depth in ("inf", "unbounded"):
        return FragmentDesc(Family(family), None)
    try:
        n = int(depth)
    except ValueError:
        raise click.BadParameter(f"expected an integer or 'inf', got {depth!r}") from None
    if n < 0:
        raise click.BadParameter("depth must be >= 0")
    return FragmentDesc(Family(family), n)


def _tau(text: str) -> Tau:
    if text in ("s", "sigma", "w"):
        return SIGMA
    if text.isdigit() and int(text) >= 1:
        return Tau.fin(int(text))
    raise click.BadParameter(f"tau is 's' or a positive integer, got {text!r}")


_family_option = click.option(
    "--family", type=click.Choice(["fo", "fo2"]), default="fo2", show_default=True
)
_NATURAL = click.IntRange(min=0)
_POSITIVE = click.IntRange(min=1)


def _echo_trace(entries: list[TraceEntry]) -> None:
    for e in entries:
        response = e.response if e.response is not None else "(none)"
        click.echo(
            f"  {e.round}. {Quantifier(e.quantifier).symbol}{e.variable}  "
            f"quest {e.quest}  response {response}"
        )


@click.group()
@click.version_option(version=__version__, prog_name="efpi")
def cli() -> None:
    """Ehrenfeucht-Fraisse games over generalized words and pi-term identities."""


# -- game -------------------------------------------------------------------------
@cli.command()
@click.argument("u")
@click.argument("v")
@_family_option
@click.option("--depth", default=None, help="Quantifier depth or 'inf'.  [default: 2]")
@click.option("--budget", type=_POSITIVE, default=None, help="Representative budget B.")
@click.option("--unbounded", is_flag=True, help="Same as --depth inf.")
@click.option("--max-depth", type=_NATURAL, default=None, help="Sweep depth for unbounded games.")
@command_options
def game(
    run: Run,
    u: str,
    v: str,
    family: str,
    depth: str | None,
    budget: int | None,
    unbounded: bool,
    max_depth: int | None,
) -> int:
    """Decide the game on two word literals, e.g. "a^z" "a^z a^z"."""
    if unbounded and depth is not None:
        raise click.UsageError("--depth and --unbounded are mutually exclusive")
    f = _fragment(family, "inf" if unbounded else depth or "2")
    left, right = parse_word(u), parse_word(v)
    c = GameConfig.start(f, left, right)
    budget = budget or run.settings.budget
    record = RunRecord(command="game", inputs={**words_input(u, v, left, right), "family": family})

    if f.depth is not None:
        b = budget or run.settings.budget_for(f.depth)
        verdict = decide_bounded(c, solver=run.solver(b))
        record.params = {"depth": f.depth, "budget": b}
        record.verdict = verdict_payload(verdict)
        record.trace = trace_entries(verdict.trace)

        def text() -> None:
            click.echo(f"{f}: {verdict.winner.value} ({verdict.certification.value}, B={b})")
            _echo_trace(record.trace)
            if verdict.witness is not None:
                click.echo(f"  witness: {render_formula(verdict.witness)}")

        run.finish(record, text)
        return EXIT_SPOILER if verdict.winner is Winner.SPOILER else EXIT_DUPLICATOR

    n = max_depth if max_depth is not None else run.settings.max_depth
    uv = decide_unbounded(
        c,
        n,
        budget,
        run.settings.closure_budget,
        run.settings.closure_limit,
        run.store,
        run.solvers,
    )
    record.params = {"max_depth": n, "budget": budget}
    record.verdict = unbounded_payload(uv)
    if uv.bounded is not None:
        record.trace = trace_entries(uv.bounded.trace)

    def text_unbounded() -> None:
        click.echo(f"{f}: {uv.status.value} (rule {uv.rule})")
        if uv.depth is not None:
            click.echo(f"  depth: {uv.depth}")
        _echo_trace(record.trace)

    run.finish(record, text_unbounded)
    if uv.status is UnboundedStatus.SPOILER_CERTIFIED:
        return EXIT_SPOILER
    if uv.status is UnboundedStatus.DUPLICATOR_UP_TO_DEPTH:
        return EXIT_UP_TO_DEPTH
    return EXIT_DUPLICATOR


# -- check-identity ---------------------------------------------------------------
@cli.command("check-identity")
@click.argument("identity")
@_family_option
@click.option("--tau", default="s", show_default=True, help="'s' for sigma or a finite k.")
@click.option("--max-depth", type=_NATURAL, default=None, help="Deepest bounded game to play.")
@click.option("--budget", type=_POSITIVE, default=None, help="Representative budget B.")
@click.option("--no-formula", is_flag=True, help="Skip distinguishing-formula synthesis.")
@command_options
def check_identity_cmd(
    run: Run,
    identity: str,
    family: str,
    tau: str,
    max_depth: int | None,
    budget: int | None,
    no_formula: bool,
) -> int:
    """Check a pi-term identity such as "x^w = x^w x^w"."""
    s, t = parse_identity(identity)
    n = max_depth if max_depth is not None else run.settings.max_depth
    budget = budget or run.settings.budget
    report = check_identity(
        s,
        t,
        Family(family),
        _tau(tau),
        n,
        budget,
        run.settings.closure_budget,
        run.settings.closure_limit,
        run.settings.approx_k,
        run.store,
        synthesize=not no_formula,
        solvers=run.solvers,
    )
    record = RunRecord(
        command="check-identity",
        inputs={"identity": identity, **identity_inputs(report)},
        params={"max_depth": n, "budget": budget},
        verdict=identity_payload(report),
        trace=trace_entries(report.trace),
    )

    def text() -> None:
        line = f"{identity}: {report.status.value}"
        if report.depth is not None:
            line += f" (depth {report.depth})"
        if report.direction is not None:
            line += f" [{report.direction.value}]"
        click.echo(line)
        for row in report.rows:
            click.echo(f"  depth {row.depth}: {row.forward.value} / {row.backward.value}")
        _echo_trace(record.trace)
        if report.formula is not None:
            flag = "" if report.formula.exact else " (verify externally)"
            click.echo(f"  formula: {render_formula(report.formula.formula)}{flag}")
        for cert in report.certificates:
            click.echo(f"  unbounded: {cert.status.value} (rule {cert.rule})")

    run.finish(record, text)
    if report.status is IdentityStatus.HOLDS_CERTIFIED:
        return EXIT_DUPLICATOR
    if report.status is IdentityStatus.HOLDS_UP_TO_DEPTH:
        return EXIT_UP_TO_DEPTH
    return EXIT_SPOILER


# -- play ---------------------------------------------------------------------------
_QUANTIFIERS = {
    "E": Quantifier.EXISTS,
    "A": Quantifier.FORALL,
    "!E": Quantifier.NOT_EXISTS,
    "!A": Quantifier.NOT_FORALL,
    **{q.value: q for q in Quantifier},
}

_POSITION_HELP = (
    "  position:   steps joined by '/': L, R, @i, P[fin:i], P[w:i], P[w*:-i], "
    "P[z:i], P[zn(p/q):i]\n"
    "  also: show, hint, quit"
)

PLAY_HELP = (
    "move: <quantifier> <variable> <position>\n"
    "  quantifier: E A !E !A (or exists forall not_exists not_forall)\n" + _POSITION_HELP
)

DUPLICATOR_HELP = "answer: <position> on the word Spoiler did not pick\n" + _POSITION_HELP


def _read_move(line: str) -> tuple[Quantifier, str, str]:
    parts = line.split()
    if len(parts) != 3 or parts[0] not in _QUANTIFIERS:
        raise ValueError(f"cannot read move {line!r}")
    return _QUANTIFIERS[parts[0]], parts[1], parts[2]


@dataclass
class _Session:
    """One interactive game against the engine; ``c`` advances with every move."""

    c: GameConfig
    solver: Solver
    chat: bool
    moves: list[Move] = field(default_factory=list)

    def say(self, message: str) -> None:
        click.echo(message, err=not self.chat)

    def ask(self, label: str) -> str | None:
        """Next input line, or None once the player quits."""
        try:
            line = click.prompt(label, prompt_suffix="> ", err=not self.chat)
        except click.Abort:
            return None
        line = line.strip()
        return None if line in ("quit", "q") else line

    def over(self) -> Winner | None:
        literal = spoiler_wins_now(self.c)
        if literal is not None:
            self.say(f"Spoiler wins: {render_formula(literal)} holds on the left only")
            return Winner.SPOILER
        if self.c.fragment.depth == 0:
            self.say("No rounds left: Duplicator survives")
            return Winner.DUPLICATOR
        return None

    def show(self) -> None:
        c = self.c
        radius = self.solver.radius(c)
        self.say(f"{c.fragment} on {c.left} | {c.right}")
        self.say("  rounds: " + " ".join(f"{q.symbol}{x}" for q, x in legal_rounds(c)))
        for side in (Side.LEFT, Side.RIGHT):
            quests = " ".join(str(p) for p in representative_quests(c, side, radius))
            self.say(f"  {side.value}: {quests or '(no positions)'}")

    def advance(self, m: Move) -> None:
        self.moves.append(m)
        self.c = step(self.c, m)

    def as_spoiler(self) -> Winner | None:
        listed = -1
        while (winner := self.over()) is None:
            c = self.c
            if listed != len(self.moves):
                listed = len(self.moves)
                self.show()
            line = self.ask(f"round {len(self.moves) + 1}")
            if line is None:
                return None
            if line == "show":
                self.show()
                continue
            if line == "hint":
                m = self.solver.winning_move(c)
                if m is None:
                    self.say("no winning move")
                else:
                    self.say(f"try {m.quantifier.value} {m.variable} {m.quest}")
                continue
            try:
                q, x, where = _read_move(line)
                quest = parse_position(where)
            except (ValueError, InvalidPositionError) as exc:
                self.say(f"{exc}\n{PLAY_HELP}")
                continue
            if c.fragment.reduct(q, x) is None:
                self.say(f"{x!r} is not a variable of {c.fragment}")
                continue
            if not is_position(c.side(q.quest_side).word, quest):
                self.say(f"{quest} is not a position of the {q.quest_side.value} word")
                continue
            response = self.solver.good_response(c, q, x, quest)
            if response is None:
                tries = self.solver.responses(c, q, x, quest) or representative_quests(
                    c, q.quest_side.other, self.solver.radius(c)
                )
                if not tries:
                    self.moves.append(Move(q, x, quest, None))
                    self.say("Duplicator has no position to answer with: Spoiler wins")
                    return Winner.SPOILER
                response = tries[0]
            self.say(f"Duplicator answers {response}")
            self.advance(Move(q, x, quest, response))
        return winner

    def _first_move(self) -> Move | None:
        radius = self.solver.radius(self.c)
        for q, x in self.solver.spoiler_rounds(self.c):
            quests = representative_quests(self.c, q.quest_side, radius)
            if quests:
                return Move(q, x, quests[0], None)
        return None

    def as_duplicator(self) -> Winner | None:
        while (winner := self.over()) is None:
            c = self.c
            # a losing engine still has to move
            m = self.solver.winning_move(c) or self._first_move()
            if m is None:
                self.say("Spoiler has no position to pick: Duplicator survives")
                return Winner.DUPLICATOR
            q, x, quest = m.quantifier, m.variable, m.quest
            answering = q.quest_side.other
            self.say(f"Spoiler plays {q.symbol}{x} at {quest} on the {q.quest_side.value} word")
            if not representative_quests(c, answering, self.solver.radius(c)):
                self.moves.append(Move(q, x, quest, None))
                self.say(f"The {answering.value} word has no position to answer with: Spoiler wins")
                return Winner.SPOILER
            response: Position | None = None
            while response is None:
                line = self.ask(f"answer {x}")
                if line is None:
                    return None
                if line == "show":
                    self.show()
                    continue
                if line == "hint":
                    good = self.solver.good_response(c, q, x, quest)
                    self.say("no surviving answer" if good is None else f"try {good}")
                    continue
                try:
                    response = parse_position(line)
                except InvalidPositionError as exc:
                    self.say(f"{exc}\n{DUPLICATOR_HELP}")
                    continue
                if not is_position(c.side(answering).word, response):
                    self.say(f"{response} is not a position of the {answering.value} word")
                    response = None
            self.say(f"Duplicator answers {response}")
            self.advance(Move(q, x, quest, response))
        return winner


@cli.command()
@click.argument("u")
@click.argument("v")
@_family_option
@click.option("--depth", type=_NATURAL, default=2, show_default=True)
@click.option("--budget", type=_POSITIVE, default=None, help="Representative budget B.")
@click.option(
    "--as",
    "role",
    type=click.Choice(["spoiler", "duplicator"]),
    default="spoiler",
    show_default=True,
    help="Side you play; the engine takes the other one.",
)
@command_options
def play(
    run: Run, u: str, v: str, family: str, depth: int, budget: int | None, role: str
) -> int:
    """Play one side of the game against the engine."""
    left, right = parse_word(u), parse_word(v)
    c = GameConfig.start(FragmentDesc(Family(family), depth), left, right)
    session = _Session(c, run.solver(budget or run.settings.budget_for(depth)), run.fmt == "text")
    if role == "spoiler":
        session.say(PLAY_HELP)
        winner = session.as_spoiler()
    else:
        session.show()
        session.say(DUPLICATOR_HELP)
        winner = session.as_duplicator()

    record = RunRecord(
        command="play",
        inputs={**words_input(u, v, left, right), "family": family, "role": role},
        params={"depth": depth, "budget": session.solver.budget},
        verdict={"winner": None if winner is None else winner.value},
        trace=trace_entries(tuple(session.moves)),
    )
    run.finish(record, lambda: None)
    if winner is Winner.SPOILER:
        return EXIT_SPOILER
    if winner is Winner.DUPLICATOR:
        return EXIT_DUPLICATOR
    return EXIT_UP_TO_DEPTH


# -- oracle -------------------------------------------------------------------------
@cli.group()
def oracle() -> None:
    """Brute-force checks on finite words."""


def _grid_result(run: Run, command: str, params: dict[str, Any], reports: list[GridReport]) -> int:
    record = RunRecord(
        command=f"oracle {command}",
        params=params,
        verdict={"ok": all(r.ok for r in reports), "grids": [grid_payload(r) for r in reports]},
    )

    def text() -> None:
        for r in reports:
            mark = "ok  " if r.ok else "FAIL"
            click.echo(f"{mark} {r.name}: {r.checked} checked, {len(r.mismatches)} mismatches")
            for u, v, detail in r.mismatches[:10]:
                click.echo(f"       {u!r} vs {v!r}: {detail}")

    run.finish(record, text)
    return EXIT_DUPLICATOR if all(r.ok for r in reports) else EXIT_SPOILER


_maxlen_option = click.option("--maxlen", type=_NATURAL, default=3, show_default=True)
_alphabet_option = click.option("--alphabet", default="ab", show_default=True)


@oracle.command()
@_family_option
@click.option("--depth", type=_NATURAL, default=1, show_default=True)
@_maxlen_option
@_alphabet_option
@command_options
def sentences(run: Run, family: str, depth: int, maxlen: int, alphabet: str) -> int:
    """Game verdict against sentence implication on every pair of short words."""
    report = sentence_grid(FragmentDesc(Family(family), depth), maxlen, alphabet)
    params = {"family": family, "depth": depth, "maxlen": maxlen, "alphabet": alphabet}
    return _grid_result(run, "sentences", params, [report])


@oracle.command()
@_family_option
@click.option("--depth", type=_NATURAL, default=2, show_default=True)
@_maxlen_option
@_alphabet_option
@click.option("--sample", type=_POSITIVE, default=None, help="Random pairs instead of all.")
@click.option("--seed", type=int, default=0, show_default=True)
@command_options
def exact(
    run: Run, family: str, depth: int, maxlen: int, alphabet: str, sample: int | None, seed: int
) -> int:
    """Engine against exhaustive minimax on every pair of short words."""
    report = exact_grid(FragmentDesc(Family(family), depth), maxlen, alphabet, sample, seed)
    params = {"family": family, "depth": depth, "maxlen": maxlen, "sample": sample, "seed": seed}
    return _grid_result(run, "exact", params, [report])


@oracle.command()
@click.option("--pairs", type=click.Choice(["builtin"]), default="builtin", show_default=True)
@_family_option
@click.option("--depth", type=_NATURAL, default=2, show_default=True)
@click.option("--k", "k", type=_POSITIVE, default=None, help="Approximation parameter.")
@command_options
def crosscheck(run: Run, pairs: str, family: str, depth: int, k: int | None) -> int:
    """Sigma words against their finite approximations."""
    del pairs  # only the builtin list exists
    k = k or run.settings.approx_k
    words = tuple((parse_word(a), parse_word(b)) for a, b in BUILTIN_PAIRS)
    report = crosscheck_grid(words, FragmentDesc(Family(family), depth), k)
    params = {"family": family, "depth": depth, "k": k, "pairs": "builtin"}
    return _grid_result(run, "crosscheck", params, [report])


@oracle.command()
@_family_option
@click.option("--depth", type=_NATURAL, default=2, show_default=True)
@_maxlen_option
@_alphabet_option
@click.option("--samples", type=_NATURAL, default=200, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@command_options
def preorder(
    run: Run, family: str, depth: int, maxlen: int, alphabet: str, samples: int, seed: int
) -> int:
    """Reflexivity and sampled transitivity of the game preorder."""
    report = preorder_grid(FragmentDesc(Family(family), depth), maxlen, alphabet, samples, seed)
    params = {"family": family, "depth": depth, "maxlen": maxlen, "samples": samples}
    return _grid_result(run, "preorder", params, [report])


oracle.add_command(sentences, name="theorem2")


def main(argv: list[str] | None = None) -> None:
    try:
        settings = Settings.from_env()
    except ConfigError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_USAGE)
    logging.basicConfig(
        level=settings.log_level,
        format="%(asctime)s %(levelname)-7s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        code = cli.main(args=argv, prog_name="efpi", standalone_mode=False, obj=settings)
    except click.ClickException as exc:
        exc.show()
        code = EXIT_USAGE
    except click.Abort:
        click.echo("aborted", err=True)
        code = EXIT_USAGE
    except (TermSyntaxError, InvalidPositionError, NonFiniteWordError) as exc:
        click.echo(f"error: {exc}", err=True)
        code = EXIT_INPUT
    except ValueError as exc:
        # exit 1 is reserved for Spoiler verdicts
        logger.debug("rejected arguments", exc_info=True)
        click.echo(f"error: {exc}", err=True)
        code = EXIT_USAGE
    sys.exit(code if isinstance(code, int) else 0)
