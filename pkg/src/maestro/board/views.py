"""Board row assembly: latest-per-submitter views, history, sorting, search,
and the threshold color bands the UI renders verbatim."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from maestro.arena.entities import Submitter
from maestro.board.config import BoardConfig, MetricConfig
from maestro.errors import InputError

BASE_SORT_KEYS = ("eval_timestamp", "submission_id", "submitter_id")


@dataclass(frozen=True)
class BoardQuery:
    sort_key: str | None = None  # None -> eval_timestamp
    sort_dir: str | None = None  # None -> desc (board) / asc (history)
    search: str = ""
    submitter: str | None = None  # switches to that submitter's full history
    metrics: tuple[str, ...] | None = None  # None -> visible_by_default columns
    limit: int | None = None
    offset: int = 0

    def __post_init__(self):
        if self.limit is not None and self.limit < 0:
            raise InputError(f"limit must be >= 0, got {self.limit}")
        if self.offset < 0:
            raise InputError(f"offset must be >= 0, got {self.offset}")

    def page(self, rows: list) -> list:
        end = None if self.limit is None else self.offset + self.limit
        return rows[self.offset : end]


@dataclass(frozen=True)
class ColorCell:
    band: str  # "green" | "red" | "neutral"
    intensity: float  # 0 at threshold, 1 at the relevant bound
    valid: bool = True


@dataclass
class BoardRow:
    submitter_id: str
    display_name: str
    submission_id: int
    eval_timestamp: float
    metrics: dict[str, float | None] = field(default_factory=dict)
    colors: dict[str, ColorCell] = field(default_factory=dict)


@dataclass
class ErrorRow:
    submitter_id: str
    display_name: str
    submission_id: int
    eval_timestamp: float
    category: str
    message: str


def color_for(value: float, metric: MetricConfig) -> ColorCell:
    """Green above / red below the threshold (flipped when lower is better),
    intensity scaling linearly from 0 at the threshold to 1 at the bound."""
    if not math.isfinite(value):
        return ColorCell("neutral", 0.0, valid=False)
    if value == metric.threshold:
        return ColorCell("neutral", 0.0)
    above = value > metric.threshold
    if above:
        span = metric.max - metric.threshold
        intensity = (value - metric.threshold) / span if span > 0 else 1.0
    else:
        span = metric.threshold - metric.min
        intensity = (metric.threshold - value) / span if span > 0 else 1.0
    intensity = min(1.0, max(0.0, intensity))
    band = "green" if above == metric.higher_is_better else "red"
    return ColorCell(band, intensity)


def _matches_search(search: str, submitter: Submitter) -> bool:
    needle = search.lower()
    return needle in submitter.display_name.lower() or needle in submitter.id.lower()


def _sort_records(records: list[dict], key: str, descending: bool, valid_keys: list[str]):
    if key not in valid_keys:
        raise InputError(f"unknown sort key '{key}'; valid keys: {', '.join(valid_keys)}")

    def sort_value(rec: dict):
        if key in ("eval_timestamp", "submission_id", "submitter_id"):
            primary = rec[key]
        else:
            value = rec["metrics"].get(key)
            # missing metrics sort last regardless of direction
            primary = (-math.inf if descending else math.inf) if value is None else value
        return primary

    return sorted(
        records,
        key=lambda r: (
            sort_value(r),
            r["eval_timestamp"],
            r["submission_id"],
        ),
        reverse=descending,
    )


def _rows_from(records, submitters: dict[str, Submitter], config: BoardConfig, columns: list[str]):
    rows = []
    for rec in records:
        submitter = submitters.get(rec["submitter_id"])
        display = submitter.display_name if submitter else rec["submitter_id"]
        metrics: dict[str, float | None] = {}
        colors: dict[str, ColorCell] = {}
        for name in columns:
            value = rec["metrics"].get(name)
            metrics[name] = value
            mc = config.metric(name)
            if value is not None and mc is not None:
                colors[name] = color_for(value, mc)
        rows.append(
            BoardRow(
                submitter_id=rec["submitter_id"],
                display_name=display,
                submission_id=rec["submission_id"],
                eval_timestamp=rec["eval_timestamp"],
                metrics=metrics,
                colors=colors,
            )
        )
    return rows


def _select_columns(config: BoardConfig, query: BoardQuery) -> list[str]:
    if query.metrics is None:
        return config.visible_names()
    known = set(config.names())
    return [name for name in query.metrics if name in known]


def board_view(
    records: list[dict],
    submitters: dict[str, Submitter],
    config: BoardConfig,
    query: BoardQuery,
) -> list[BoardRow]:
    """Default: one row per submitter (its latest record), newest first.

    A submitter filter switches to that submitter's full history in
    chronological order. Search is a case-insensitive substring match on
    display name and id. Sorting accepts any configured metric plus the
    base keys, with (eval_timestamp, submission_id) tie-breaking.
    """
    evals = [r for r in records if r.get("record_type") == "evaluation"]
    history_mode = query.submitter is not None
    if history_mode:
        evals = [r for r in evals if r["submitter_id"] == query.submitter]
    else:
        latest: dict[str, dict] = {}
        for rec in evals:
            cur = latest.get(rec["submitter_id"])
            if cur is None or (rec["eval_timestamp"], rec["submission_id"]) > (
                cur["eval_timestamp"],
                cur["submission_id"],
            ):
                latest[rec["submitter_id"]] = rec
        evals = list(latest.values())
    if query.search:
        evals = [
            r
            for r in evals
            if r["submitter_id"] in submitters and _matches_search(query.search, submitters[r["submitter_id"]])
        ]
    sort_key = query.sort_key or "eval_timestamp"
    if query.sort_dir is None:
        descending = not history_mode  # boards newest-first, history chronological
    else:
        if query.sort_dir not in ("asc", "desc"):
            raise InputError(f"sort dir must be asc or desc, got '{query.sort_dir}'")
        descending = query.sort_dir == "desc"
    valid = list(BASE_SORT_KEYS) + config.names()
    ordered = query.page(_sort_records(evals, sort_key, descending, valid))
    return _rows_from(ordered, submitters, config, _select_columns(config, query))


def error_view(
    records: list[dict],
    submitters: dict[str, Submitter],
    query: BoardQuery,
) -> list[ErrorRow]:
    """Same filtering/sorting surface over the phase's error records."""
    errors = [r for r in records if r.get("record_type") == "error"]
    if query.submitter is not None:
        errors = [r for r in errors if r["submitter_id"] == query.submitter]
    if query.search:
        errors = [
            r
            for r in errors
            if r["submitter_id"] in submitters and _matches_search(query.search, submitters[r["submitter_id"]])
        ]
    sort_key = query.sort_key or "eval_timestamp"
    descending = (query.sort_dir or "desc") == "desc"
    valid = list(BASE_SORT_KEYS) + ["category"]
    if sort_key == "category":
        ordered = sorted(
            errors,
            key=lambda r: (r["category"], r["eval_timestamp"], r["submission_id"]),
            reverse=descending,
        )
    else:
        ordered = _sort_records(errors, sort_key, descending, valid)
    out = []
    for rec in query.page(ordered):
        submitter = submitters.get(rec["submitter_id"])
        out.append(
            ErrorRow(
                submitter_id=rec["submitter_id"],
                display_name=submitter.display_name if submitter else rec["submitter_id"],
                submission_id=rec["submission_id"],
                eval_timestamp=rec["eval_timestamp"],
                category=rec["category"],
                message=rec["message"],
            )
        )
    return out
