"""Append-only newline-JSON event log, one file per phase.

Single writer, many readers: appends hold a lock and swap an immutable
snapshot tuple; readers grab whatever snapshot is current and never see a
partial record. Nothing is ever rewritten, so the log doubles as an audit
trail and re-evaluations simply append newer records.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path

from maestro.arena.entities import Submitter
from maestro.errors import NotFoundError


class EventStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.events_dir = self.root / "events"
        self.events_dir.mkdir(parents=True, exist_ok=True)
        (self.root / "models").mkdir(exist_ok=True)
        (self.root / "data").mkdir(exist_ok=True)
        (self.root / "scratch").mkdir(exist_ok=True)
        self._lock = threading.Lock()
        self._snapshots: dict[str, tuple[dict, ...]] = {}
        self._submitters: dict[str, Submitter] = {}
        self._next_id = 1
        self._load()

    def _load(self) -> None:
        sub_path = self.root / "submitters.jsonl"
        if sub_path.exists():
            for line in sub_path.read_text().splitlines():
                if line.strip():
                    s = Submitter.from_dict(json.loads(line))
                    self._submitters[s.id] = s
        for path in sorted(self.events_dir.glob("*.jsonl")):
            phase = path.stem
            records = tuple(json.loads(line) for line in path.read_text().splitlines() if line.strip())
            self._snapshots[phase] = records
            for rec in records:
                if rec.get("record_type") == "submission":
                    self._next_id = max(self._next_id, rec["id"] + 1)

    # -- submitters ---------------------------------------------------------

    def add_submitter(self, submitter: Submitter) -> None:
        with self._lock:
            if submitter.id in self._submitters:
                return
            self._submitters[submitter.id] = submitter
            with open(self.root / "submitters.jsonl", "a") as fh:
                fh.write(json.dumps(submitter.to_dict()) + "\n")

    def submitters(self) -> dict[str, Submitter]:
        return dict(self._submitters)

    def get_submitter(self, submitter_id: str) -> Submitter:
        try:
            return self._submitters[submitter_id]
        except KeyError:
            raise NotFoundError(f"unknown submitter '{submitter_id}'") from None

    # -- event log ----------------------------------------------------------

    def next_submission_id(self) -> int:
        with self._lock:
            sid = self._next_id
            self._next_id += 1
            return sid

    def append(self, phase: str, record: dict) -> None:
        line = json.dumps(record, sort_keys=False)
        with self._lock:
            with open(self.events_dir / f"{phase}.jsonl", "a") as fh:
                fh.write(line + "\n")
                fh.flush()
            self._snapshots[phase] = self._snapshots.get(phase, ()) + (record,)

    def records(self, phase: str) -> tuple[dict, ...]:
        """Immutable snapshot of every record appended to a phase so far."""
        return self._snapshots.get(phase, ())

    def of_type(self, phase: str, record_type: str) -> list[dict]:
        return [r for r in self.records(phase) if r.get("record_type") == record_type]

    def models_dir(self, phase: str) -> Path:
        path = self.root / "models" / phase
        path.mkdir(parents=True, exist_ok=True)
        return path

    def data_dir(self) -> Path:
        return self.root / "data"

    def scratch_dir(self, submission_id: int) -> Path:
        path = self.root / "scratch" / str(submission_id)
        path.mkdir(parents=True, exist_ok=True)
        return path
