"""FastAPI service wrapping one Arena: boards, errors, history, CSV, submit."""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Query, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from maestro.arena.core import Arena
from maestro.arena.entities import ErrorRecord
from maestro.board.config import board_config_for
from maestro.board.schemas import (
    BoardResponse,
    BoardRowModel,
    ColorModel,
    ColumnModel,
    ConfigResponse,
    ErrorBoardResponse,
    ErrorRowModel,
    PhaseListResponse,
    PhaseModel,
    SubmissionRequest,
    SubmissionResponse,
)
from maestro.board.views import BoardQuery, board_view, error_view
from maestro.errors import DeadlineError, InputError, NotFoundError


def _column_models(config) -> list[ColumnModel]:
    return [
        ColumnModel(
            name=m.name,
            display_name=m.display_name,
            min=m.min,
            max=m.max,
            threshold=m.threshold,
            higher_is_better=m.higher_is_better,
            visible_by_default=m.visible_by_default,
        )
        for m in config.metrics
    ]


def _parse_query(
    sort: str | None,
    direction: str | None,
    search: str,
    submitter: str | None,
    metrics: str | None,
    limit: int | None = None,
    offset: int = 0,
) -> BoardQuery:
    selected = tuple(m for m in metrics.split(",") if m) if metrics is not None else None
    return BoardQuery(
        sort_key=sort,
        sort_dir=direction,
        search=search,
        submitter=submitter,
        metrics=selected,
        limit=limit,
        offset=offset,
    )


def create_app(arena: Arena, frontend_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="maestro", version="0.1.0")

    @app.exception_handler(NotFoundError)
    async def not_found(request: Request, exc: NotFoundError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(InputError)
    async def bad_input(request: Request, exc: InputError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.exception_handler(DeadlineError)
    async def past_deadline(request: Request, exc: DeadlineError):
        return JSONResponse(
            status_code=422, content={"detail": str(exc), "deadline": exc.deadline}
        )

    def phase_model(name: str) -> PhaseModel:
        phase = arena.phase(name)
        records = arena.store.records(name)
        return PhaseModel(
            name=phase.name,
            kind=phase.kind,
            deadline=phase.deadline,
            submissions=sum(1 for r in records if r.get("record_type") == "submission"),
            evaluations=sum(1 for r in records if r.get("record_type") == "evaluation"),
            errors=sum(1 for r in records if r.get("record_type") == "error"),
        )

    @app.get("/api/phases", response_model=PhaseListResponse)
    def phases():
        return PhaseListResponse(phases=[phase_model(name) for name in arena.config.phases])

    @app.get("/api/boards/{phase}", response_model=BoardResponse)
    def board(
        phase: str,
        sort: str | None = None,
        dir: str | None = Query(default=None),
        search: str = "",
        submitter: str | None = None,
        metrics: str | None = None,
        limit: int | None = None,
        offset: int = 0,
    ):
        cfg = board_config_for(arena.phase(phase).kind, arena.config)
        query = _parse_query(sort, dir, search, submitter, metrics, limit, offset)
        rows = board_view(list(arena.store.records(phase)), arena.store.submitters(), cfg, query)
        return BoardResponse(
            phase=phase,
            columns=_column_models(cfg),
            rows=[
                BoardRowModel(
                    submitter_id=r.submitter_id,
                    display_name=r.display_name,
                    submission_id=r.submission_id,
                    eval_timestamp=r.eval_timestamp,
                    metrics=r.metrics,
                    colors={
                        k: ColorModel(band=c.band, intensity=c.intensity, valid=c.valid)
                        for k, c in r.colors.items()
                    },
                )
                for r in rows
            ],
        )

    @app.get("/api/boards/{phase}/errors", response_model=ErrorBoardResponse)
    def errors(
        phase: str,
        sort: str | None = None,
        dir: str | None = Query(default=None),
        search: str = "",
        submitter: str | None = None,
        limit: int | None = None,
        offset: int = 0,
    ):
        arena.phase(phase)
        query = _parse_query(sort, dir, search, submitter, None, limit, offset)
        rows = error_view(list(arena.store.records(phase)), arena.store.submitters(), query)
        return ErrorBoardResponse(
            phase=phase,
            rows=[
                ErrorRowModel(
                    submitter_id=r.submitter_id,
                    display_name=r.display_name,
                    submission_id=r.submission_id,
                    eval_timestamp=r.eval_timestamp,
                    category=r.category,
                    message=r.message,
                )
                for r in rows
            ],
        )

    @app.get("/api/boards/{phase}/history/{submitter_id}", response_model=BoardResponse)
    def history(
        phase: str,
        submitter_id: str,
        sort: str | None = None,
        dir: str | None = Query(default=None),
        metrics: str | None = None,
    ):
        arena.store.get_submitter(submitter_id)
        cfg = board_config_for(arena.phase(phase).kind, arena.config)
        query = _parse_query(sort, dir, "", submitter_id, metrics)
        rows = board_view(list(arena.store.records(phase)), arena.store.submitters(), cfg, query)
        return BoardResponse(phase=phase, columns=_column_models(cfg), rows=[
            BoardRowModel(
                submitter_id=r.submitter_id,
                display_name=r.display_name,
                submission_id=r.submission_id,
                eval_timestamp=r.eval_timestamp,
                metrics=r.metrics,
                colors={
                    k: ColorModel(band=c.band, intensity=c.intensity, valid=c.valid)
                    for k, c in r.colors.items()
                },
            )
            for r in rows
        ])

    @app.get("/api/boards/{phase}/csv")
    def csv_download(phase: str):
        text = arena.export_csv(phase)
        return PlainTextResponse(
            text,
            media_type="text/csv",
            headers={"Content-Disposition": f'attachment; filename="{phase}.csv"'},
        )

    @app.post("/api/submissions", response_model=SubmissionResponse, status_code=201)
    def submit(request: SubmissionRequest):
        submission = arena.submit(request.submitter_id, request.phase, request.payload)
        status = "queued"
        error_category = None
        if arena.config.auto_evaluate:
            record = arena.evaluate(submission.id)
            if isinstance(record, ErrorRecord):
                status = "error"
                error_category = record.category
            else:
                status = "evaluated"
        return SubmissionResponse(
            submission_id=submission.id,
            phase=submission.phase,
            submitted_at=submission.submitted_at,
            status=status,
            error_category=error_category,
        )

    @app.get("/api/config", response_model=ConfigResponse)
    def config():
        boards = {}
        for kind in ("attack", "defense", "war"):
            boards[kind] = _column_models(board_config_for(kind, arena.config))
        return ConfigResponse(
            config_version=1,
            phases=[phase_model(name) for name in arena.config.phases],
            boards=boards,
            attack_weights=arena.config.attack_weights,
            defense_weights=arena.config.defense_weights,
            war_weights={
                "attack_weight": arena.config.war_weights.attack_weight,
                "defense_weight": arena.config.war_weights.defense_weight,
            },
            budgets=arena.config.budgets,
        )

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
