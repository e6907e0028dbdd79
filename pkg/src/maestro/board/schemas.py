"""Pydantic request/response models for the board API."""

from __future__ import annotations

from pydantic import BaseModel, Field


class ColorModel(BaseModel):
    band: str
    intensity: float
    valid: bool = True


class BoardRowModel(BaseModel):
    submitter_id: str
    display_name: str
    submission_id: int
    eval_timestamp: float
    metrics: dict[str, float | None]
    colors: dict[str, ColorModel]


class ColumnModel(BaseModel):
    name: str
    display_name: str
    min: float
    max: float
    threshold: float
    higher_is_better: bool
    visible_by_default: bool


class BoardResponse(BaseModel):
    phase: str
    columns: list[ColumnModel]
    rows: list[BoardRowModel]


class ErrorRowModel(BaseModel):
    submitter_id: str
    display_name: str
    submission_id: int
    eval_timestamp: float
    category: str
    message: str


class ErrorBoardResponse(BaseModel):
    phase: str
    rows: list[ErrorRowModel]


class PhaseModel(BaseModel):
    name: str
    kind: str
    deadline: float
    submissions: int
    evaluations: int
    errors: int


class PhaseListResponse(BaseModel):
    phases: list[PhaseModel]


class SubmissionRequest(BaseModel):
    submitter_id: str
    phase: str
    payload: dict = Field(
        description="reference: {'kind':'reference','method':'fgsm'|'pgd'|'ga'|'adv_train'}; "
        "external: {'kind':'external','command':[...], 'capability':...}"
    )


class SubmissionResponse(BaseModel):
    submission_id: int
    phase: str
    submitted_at: float
    status: str  # "queued" | "evaluated" | "error"
    error_category: str | None = None


class ConfigResponse(BaseModel):
    config_version: int
    phases: list[PhaseModel]
    boards: dict[str, list[ColumnModel]]
    attack_weights: dict[str, float]
    defense_weights: dict[str, float]
    war_weights: dict[str, float]
    budgets: dict[str, float | None]
