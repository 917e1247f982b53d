"""Game engine: configurations, bounded minimax, unbounded certification, border answers."""

from .border import border_conditions, duplicator_power_response
from .bounded import (
    Certification,
    MemoBackend,
    Solver,
    Verdict,
    decide_bounded,
    is_reflexive_instance,
    stable_key,
    transitivity_instance,
)
from .game import (
    GameConfig,
    Move,
    Valuated,
    Winner,
    candidate_variables,
    legal_rounds,
    spoiler_wins_now,
    step,
)
from .quests import (
    abstract_config,
    memo_key,
    ordered_responses,
    representative_quests,
)
from .unbounded import (
    Certificate,
    ClosedSetCertificate,
    IdentityCertificate,
    RegionCertificate,
    UnboundedStatus,
    UnboundedVerdict,
    closed_set_certificate,
    decide_unbounded,
    spoiler_region_certificate,
)

__all__ = [
    "Certificate",
    "Certification",
    "ClosedSetCertificate",
    "GameConfig",
    "IdentityCertificate",
    "MemoBackend",
    "Move",
    "RegionCertificate",
    "Solver",
    "UnboundedStatus",
    "UnboundedVerdict",
    "Valuated",
    "Verdict",
    "Winner",
    "abstract_config",
    "border_conditions",
    "candidate_variables",
    "closed_set_certificate",
    "decide_bounded",
    "decide_unbounded",
    "duplicator_power_response",
    "is_reflexive_instance",
    "legal_rounds",
    "memo_key",
    "ordered_responses",
    "representative_quests",
    "spoiler_region_certificate",
    "spoiler_wins_now",
    "stable_key",
    "step",
    "transitivity_instance",
]
