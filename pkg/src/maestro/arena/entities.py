"""Arena entities and their event-log serializations."""

from __future__ import annotations

from dataclasses import dataclass, field

from maestro.errors import InputError

ERROR_MESSAGE_LIMIT = 4096  # bytes of captured failure text kept per record

ERROR_CATEGORIES = ("crash", "timeout", "protocol", "budget")


@dataclass(frozen=True)
class Submitter:
    id: str
    display_name: str
    kind: str = "individual"  # "individual" | "team"
    members: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.id:
            raise InputError("submitter id must be non-empty")
        if self.kind not in ("individual", "team"):
            raise InputError(f"submitter kind must be individual or team, got '{self.kind}'")
        if self.kind == "team" and not self.members:
            raise InputError("a team needs at least one member")

    def to_dict(self) -> dict:
        return {
            "record_type": "submitter",
            "id": self.id,
            "display_name": self.display_name,
            "kind": self.kind,
            "members": list(self.members),
        }

    @staticmethod
    def from_dict(doc: dict) -> "Submitter":
        return Submitter(
            id=doc["id"],
            display_name=doc.get("display_name", doc["id"]),
            kind=doc.get("kind", "individual"),
            members=tuple(doc.get("members", [])),
        )


@dataclass(frozen=True)
class Submission:
    id: int
    submitter_id: str
    phase: str
    payload: dict
    submitted_at: float

    def to_dict(self) -> dict:
        return {
            "record_type": "submission",
            "id": self.id,
            "submitter_id": self.submitter_id,
            "phase": self.phase,
            "payload": self.payload,
            "submitted_at": self.submitted_at,
        }

    @staticmethod
    def from_dict(doc: dict) -> "Submission":
        return Submission(
            id=doc["id"],
            submitter_id=doc["submitter_id"],
            phase=doc["phase"],
            payload=doc["payload"],
            submitted_at=doc["submitted_at"],
        )


@dataclass(frozen=True)
class EvaluationRecord:
    submission_id: int
    submitter_id: str
    phase: str
    metrics: dict[str, float]
    eval_timestamp: float
    artifacts: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "record_type": "evaluation",
            "submission_id": self.submission_id,
            "submitter_id": self.submitter_id,
            "phase": self.phase,
            "metrics": self.metrics,
            "eval_timestamp": self.eval_timestamp,
            "artifacts": self.artifacts,
        }

    @staticmethod
    def from_dict(doc: dict) -> "EvaluationRecord":
        return EvaluationRecord(
            submission_id=doc["submission_id"],
            submitter_id=doc["submitter_id"],
            phase=doc["phase"],
            metrics=dict(doc["metrics"]),
            eval_timestamp=doc["eval_timestamp"],
            artifacts=dict(doc.get("artifacts", {})),
        )


@dataclass(frozen=True)
class ErrorRecord:
    submission_id: int
    submitter_id: str
    phase: str
    category: str
    message: str
    eval_timestamp: float

    def __post_init__(self):
        if self.category not in ERROR_CATEGORIES:
            raise InputError(f"unknown error category '{self.category}'")
        object.__setattr__(self, "message", self.message[:ERROR_MESSAGE_LIMIT])

    def to_dict(self) -> dict:
        return {
            "record_type": "error",
            "submission_id": self.submission_id,
            "submitter_id": self.submitter_id,
            "phase": self.phase,
            "category": self.category,
            "message": self.message,
            "eval_timestamp": self.eval_timestamp,
        }

    @staticmethod
    def from_dict(doc: dict) -> "ErrorRecord":
        return ErrorRecord(
            submission_id=doc["submission_id"],
            submitter_id=doc["submitter_id"],
            phase=doc["phase"],
            category=doc["category"],
            message=doc["message"],
            eval_timestamp=doc["eval_timestamp"],
        )


@dataclass(frozen=True)
class WarMatchupRecord:
    attack_submission_id: int
    defense_submission_id: int
    attack_submitter: str
    defense_submitter: str
    phase: str
    metrics: dict[str, float]
    eval_timestamp: float

    def to_dict(self) -> dict:
        return {
            "record_type": "war_matchup",
            "attack_submission_id": self.attack_submission_id,
            "defense_submission_id": self.defense_submission_id,
            "attack_submitter": self.attack_submitter,
            "defense_submitter": self.defense_submitter,
            "phase": self.phase,
            "metrics": self.metrics,
            "eval_timestamp": self.eval_timestamp,
        }

    @staticmethod
    def from_dict(doc: dict) -> "WarMatchupRecord":
        return WarMatchupRecord(
            attack_submission_id=doc["attack_submission_id"],
            defense_submission_id=doc["defense_submission_id"],
            attack_submitter=doc["attack_submitter"],
            defense_submitter=doc["defense_submitter"],
            phase=doc["phase"],
            metrics=dict(doc["metrics"]),
            eval_timestamp=doc["eval_timestamp"],
        )
