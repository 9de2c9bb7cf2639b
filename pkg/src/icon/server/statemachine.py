"""Project lifecycle: linear pipeline states plus the rework loop."""

from __future__ import annotations

from ..errors import IconError

STATES = (
    "NEW",
    "CORPUS_READY",
    "INDEXED",
    "ANALYZED",
    "DRAFT_ONTOLOGY",
    "UNDER_VERIFICATION",
    "VERIFIED",
    "REJECTED",
)

# Every legal (from, to) pair. REJECTED -> ANALYZED is the rework loop: a
# rejected draft goes back through analysis rather than restarting the corpus.
TRANSITIONS = frozenset(
    {
        ("NEW", "CORPUS_READY"),
        ("CORPUS_READY", "INDEXED"),
        ("INDEXED", "ANALYZED"),
        ("ANALYZED", "DRAFT_ONTOLOGY"),
        ("DRAFT_ONTOLOGY", "UNDER_VERIFICATION"),
        ("UNDER_VERIFICATION", "VERIFIED"),
        ("UNDER_VERIFICATION", "REJECTED"),
        ("REJECTED", "ANALYZED"),
    }
)

# stage name -> (states it may start from, state it lands in)
STAGES: dict[str, tuple[tuple[str, ...], str]] = {
    "corpus": (("NEW",), "CORPUS_READY"),
    "index": (("CORPUS_READY",), "INDEXED"),
    "analyze": (("INDEXED", "REJECTED"), "ANALYZED"),
    "build": (("ANALYZED",), "DRAFT_ONTOLOGY"),
    "submit_verification": (("DRAFT_ONTOLOGY",), "UNDER_VERIFICATION"),
}

VERDICT_STATES = {"approve": "VERIFIED", "reject": "REJECTED"}


def check_stage(state: str, stage: str) -> str:
    """Admission check; returns the state the stage will advance to."""
    if stage not in STAGES:
        raise IconError(
            "USAGE_ERROR",
            f"unknown stage {stage!r}",
            {"allowed": sorted(STAGES)},
        )
    allowed, target = STAGES[stage]
    if state not in allowed:
        raise IconError(
            "INVALID_STATE",
            f"stage {stage} requires state {' or '.join(allowed)}, project is {state}",
            {"expected": list(allowed), "actual": state},
        )
    return target


def legal_stages(state: str) -> list[str]:
    """Stages that may run from the given state, in pipeline order."""
    return [stage for stage, (allowed, _) in STAGES.items() if state in allowed]
