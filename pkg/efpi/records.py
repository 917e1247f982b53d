"""Wire schema for CLI output: run records, trace entries and verdict payloads."""

from __future__ import annotations

import json
from typing import Any

from pydantic import BaseModel, Field

from . import __version__
from .engine import Move, UnboundedVerdict, Verdict
from .engine.unbounded import ClosedSetCertificate, RegionCertificate
from .fragments import Quantifier, render_formula
from .genword import WordExpr, render_word
from .identity import IdentityReport
from .oracle import GridReport
from .pi_term import render_term


class TraceEntry(BaseModel):
    round: int
    quantifier: Quantifier
    variable: str
    quest: str
    # None when the answering side had no position to offer
    response: str | None = None

    @classmethod
    def from_move(cls, index: int, m: Move) -> TraceEntry:
        return cls(
            round=index,
            quantifier=m.quantifier,
            variable=m.variable,
            quest=str(m.quest),
            response=None if m.response is None else str(m.response),
        )

    def to_wire(self) -> dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)


class RunRecord(BaseModel):
    command: str
    inputs: dict[str, Any] = Field(default_factory=dict)
    params: dict[str, Any] = Field(default_factory=dict)
    verdict: dict[str, Any] = Field(default_factory=dict)
    trace: list[TraceEntry] = Field(default_factory=list)
    timing_ms: float = 0.0
    version: str = __version__

    def to_wire(self) -> dict[str, Any]:
        # every top-level key stays, so records diff cleanly; nulls included
        return self.model_dump(mode="json")

    def to_json(self) -> str:
        return json.dumps(self.to_wire(), sort_keys=True, indent=2, ensure_ascii=False)


def trace_entries(moves: tuple[Move, ...]) -> list[TraceEntry]:
    return [TraceEntry.from_move(i, m) for i, m in enumerate(moves, start=1)]


def verdict_payload(v: Verdict) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "winner": v.winner.value,
        "certification": v.certification.value,
        "budget": v.budget,
        "explored": v.explored,
    }
    if v.witness is not None:
        payload["witness"] = render_formula(v.witness)
    return payload


def unbounded_payload(uv: UnboundedVerdict) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "winner": uv.winner.value,
        "status": uv.status.value,
        "rule": uv.rule,
        "depth": uv.depth,
    }
    cert = uv.certificate
    if isinstance(cert, RegionCertificate):
        payload["region_class"] = str(cert.region_class)
        payload["side"] = cert.side.value
        payload["left_classes"] = sorted(str(k) for k in cert.left_classes)
        payload["right_classes"] = sorted(str(k) for k in cert.right_classes)
    elif isinstance(cert, ClosedSetCertificate):
        payload["states"] = cert.states
        payload["closure_budget"] = cert.closure_budget
        payload["width"] = cert.width
    return payload


def identity_payload(report: IdentityReport) -> dict[str, Any]:
    payload: dict[str, Any] = {
        "status": report.status.value,
        "holds": report.holds,
        "depth": report.depth,
        "rows": [
            {"depth": r.depth, "forward": r.forward.value, "backward": r.backward.value}
            for r in report.rows
        ],
    }
    if report.direction is not None:
        payload["direction"] = report.direction.value
    if report.formula is not None:
        payload["formula"] = render_formula(report.formula.formula)
        payload["formula_exact"] = report.formula.exact
        payload["formula_verified"] = report.formula_verified
    if report.certificates:
        payload["unbounded"] = [unbounded_payload(c) for c in report.certificates]
    return payload


def identity_inputs(report: IdentityReport) -> dict[str, Any]:
    return {
        "s": render_term(report.left),
        "t": render_term(report.right),
        "family": report.family.value,
        "tau": str(report.tau),
    }


def grid_payload(report: GridReport) -> dict[str, Any]:
    return {
        "name": report.name,
        "ok": report.ok,
        "checked": report.checked,
        "mismatches": [{"u": u, "v": v, "detail": d} for u, v, d in report.mismatches],
    }


def words_input(u_text: str, v_text: str, u: WordExpr, v: WordExpr) -> dict[str, Any]:
    return {"u": u_text, "v": v_text, "u_parsed": render_word(u), "v_parsed": render_word(v)}
