"""Operator command line: data prep, hidden-model training, serving,
reference submissions, evaluation, war runs, and CSV exports.

Every command is non-interactive and exits 0 on success; failures print a
single machine-parseable JSON line to stderr and exit 1 (argparse handles
usage errors with exit 2). The config path comes from --config or the
MAESTRO_CONFIG environment variable, flag winning.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from maestro.arena.core import Arena
from maestro.arena.entities import ErrorRecord, Submitter
from maestro.config import ENV_CONFIG, load_config, resolve_config_path
from maestro.errors import ConfigError, MaestroError

REF_SUBMITTER = Submitter(id="ref", display_name="Reference")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="maestro",
        description="Competition judge for robust-AI exercises",
    )
    parser.add_argument(
        "--config", help=f"path to the judge config JSON (fallback: ${ENV_CONFIG})"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    commands.add_parser("gen-data", help="materialize the train/eval dataset files")

    train = commands.add_parser("train-hidden", help="train and store the hidden models")
    train.add_argument("--force", action="store_true", help="retrain even if weight files exist")

    serve = commands.add_parser("serve", help="run the board/submission HTTP service")
    serve.add_argument("--host", default=os.environ.get("MAESTRO_HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int, default=int(os.environ.get("MAESTRO_PORT", "8000")))
    serve.add_argument("--frontend", default=None, help="directory with the built UI to serve at /")

    submit = commands.add_parser("submit-ref", help="submit a built-in reference method")
    submit.add_argument("kind", choices=["attack", "defense"])
    submit.add_argument("method", choices=["fgsm", "pgd", "ga", "adv_train"])
    submit.add_argument("--submitter", default="ref")
    submit.add_argument("--phase", default=None, help="defaults to the first phase of that kind")

    evaluate = commands.add_parser("evaluate", help="evaluate one stored submission")
    evaluate.add_argument("submission_id", type=int)

    war = commands.add_parser("war", help="run the war-phase cross evaluation")
    war.add_argument("phase")
    war.add_argument("--force", action="store_true", help="run even if source phases are open")

    export = commands.add_parser("export", help="write a phase's results as CSV")
    export.add_argument("phase")
    export.add_argument("path")
    return parser


def _first_phase_of_kind(arena: Arena, kind: str) -> str:
    for name, phase in arena.config.phases.items():
        if phase.kind == kind:
            return name
    raise ConfigError(f"config has no {kind} phase", "/phases")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(resolve_config_path(args.config))
        arena = Arena(config)
        if args.command == "gen-data":
            paths = arena.evaluator.gen_data(force=True)
            print(json.dumps({name: str(p) for name, p in paths.items()}))
        elif args.command == "train-hidden":
            out = arena.evaluator.train_hidden(force=args.force)
            print(json.dumps({phase: [str(p) for p in paths] for phase, paths in out.items()}))
        elif args.command == "serve":
            import uvicorn

            from maestro.board.service import create_app

            app = create_app(arena, frontend_dir=args.frontend)
            uvicorn.run(app, host=args.host, port=args.port, log_level="info")
        elif args.command == "submit-ref":
            if args.kind == "attack" and args.method == "adv_train":
                raise MaestroError("adv_train is a defense method")
            if args.kind == "defense" and args.method != "adv_train":
                raise MaestroError(f"{args.method} is an attack method")
            arena.register_submitter(REF_SUBMITTER)
            phase = args.phase or _first_phase_of_kind(arena, args.kind)
            submission = arena.submit(
                args.submitter, phase, {"kind": "reference", "method": args.method}
            )
            print(submission.id)
        elif args.command == "evaluate":
            record = arena.evaluate(args.submission_id)
            if isinstance(record, ErrorRecord):
                print(json.dumps({"status": "error", "category": record.category, "message": record.message}))
            else:
                print(json.dumps({"status": "evaluated", "overall_score": record.metrics["overall_score"]}))
        elif args.command == "war":
            summary = arena.run_war(args.phase, force=args.force)
            print(json.dumps(summary))
        elif args.command == "export":
            text = arena.export_csv(args.phase)
            with open(args.path, "w", newline="") as fh:
                fh.write(text)
            print(args.path)
    except ConfigError as exc:
        print(json.dumps({"error": str(exc), "pointer": exc.pointer}), file=sys.stderr)
        return 1
    except MaestroError as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
