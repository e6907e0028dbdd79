"""Submission lifecycle: submitters, phases, evaluation, war, persistence."""

from maestro.arena.core import Arena
from maestro.arena.entities import (
    ErrorRecord,
    EvaluationRecord,
    Submission,
    Submitter,
    WarMatchupRecord,
)
from maestro.arena.store import EventStore

__all__ = [
    "Arena",
    "ErrorRecord",
    "EvaluationRecord",
    "EventStore",
    "Submission",
    "Submitter",
    "WarMatchupRecord",
]
