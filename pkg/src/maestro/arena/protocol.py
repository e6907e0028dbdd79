"""Newline-delimited JSON protocol between the judge and external submissions.

The judge spawns the submission as a child process and speaks one JSON
object per line over its standard streams. Attack conversations:

    judge  -> {"type": "attack_task", "images": [[...]], "labels": [...],
               "epsilon": e, "step_size": a, "iterations": t,
               "query_budget": q, "time_budget": s, "capability": "white_box"}
    client -> {"type": "predict", "images": [[...]]}
    judge  -> {"type": "prediction", "probs": [[...]]}
    client -> {"type": "gradient", "images": [[...]], "labels": [...]}
    judge  -> {"type": "gradients", "loss": l, "grads": [[...]]}   (white-box only)
    client -> {"type": "result", "perturbed": [[...]]}

Defense conversations send dataset file paths and expect a weight-file path:

    judge  -> {"type": "defense_task", "train_images": p, "train_labels": p,
               "num_classes": c, "dims": [h, w, ch], "model": {...},
               "epsilon": e, "output_dir": p, "time_budget": s}
    client -> {"type": "result", "weights_path": p}

Clients may emit {"type": "log", "message": ...} lines, which are ignored.
Any other traffic, a dead pipe, or a missed deadline ends the evaluation
with the matching error category.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
import time
from pathlib import Path

import numpy as np

from maestro.attacks.oracle import WHITE_BOX, ModelOracle
from maestro.errors import QueryBudgetError

STDERR_LIMIT = 4096


class SubmissionFailure(Exception):
    """A failure attributable to the submission, not the judge."""

    def __init__(self, category: str, message: str):
        super().__init__(message)
        self.category = category


class ExternalProcess:
    """One child process plus a line reader enforcing a real-time deadline."""

    def __init__(self, command: list[str], cwd: Path, time_budget: float):
        self.deadline = time.monotonic() + time_budget
        try:
            self.proc = subprocess.Popen(
                command,
                cwd=str(cwd),
                stdin=subprocess.PIPE,
                stdout=subprocess.PIPE,
                stderr=subprocess.PIPE,
                text=True,
                bufsize=1,
            )
        except OSError as exc:
            raise SubmissionFailure("crash", f"could not start submission: {exc}") from exc
        self._lines: queue.Queue[str | None] = queue.Queue()
        self._stderr: list[str] = []
        threading.Thread(target=self._pump_stdout, daemon=True).start()
        threading.Thread(target=self._pump_stderr, daemon=True).start()

    def _pump_stdout(self) -> None:
        try:
            for line in self.proc.stdout:
                self._lines.put(line)
        finally:
            self._lines.put(None)

    def _pump_stderr(self) -> None:
        for line in self.proc.stderr:
            if sum(len(s) for s in self._stderr) < STDERR_LIMIT:
                self._stderr.append(line)

    def stderr_tail(self) -> str:
        return "".join(self._stderr)[:STDERR_LIMIT]

    def send(self, doc: dict) -> None:
        try:
            self.proc.stdin.write(json.dumps(doc) + "\n")
            self.proc.stdin.flush()
        except (BrokenPipeError, OSError):
            self._raise_exit("pipe closed while sending")

    def recv(self) -> dict:
        remaining = self.deadline - time.monotonic()
        if remaining <= 0:
            self.kill()
            raise SubmissionFailure("timeout", "submission exceeded its time budget")
        try:
            line = self._lines.get(timeout=remaining)
        except queue.Empty:
            self.kill()
            raise SubmissionFailure("timeout", "submission exceeded its time budget") from None
        if line is None:
            self._raise_exit("stream ended before a result message")
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            self.kill()
            raise SubmissionFailure("protocol", f"invalid JSON from submission: {exc}") from exc
        if not isinstance(doc, dict) or "type" not in doc:
            self.kill()
            raise SubmissionFailure("protocol", "messages must be JSON objects with a 'type'")
        return doc

    def _raise_exit(self, context: str) -> None:
        rc = self.proc.wait(timeout=5)
        tail = self.stderr_tail()
        detail = f"; stderr: {tail}" if tail else ""
        raise SubmissionFailure("crash", f"{context}; exited with status {rc}{detail}")

    def kill(self) -> None:
        if self.proc.poll() is None:
            self.proc.kill()
            self.proc.wait(timeout=5)

    def close(self) -> None:
        try:
            if self.proc.stdin and not self.proc.stdin.closed:
                self.proc.stdin.close()
        except OSError:
            pass
        self.kill()


def _parse_batch(doc: dict, key: str, width: int) -> np.ndarray:
    rows = doc.get(key)
    if not isinstance(rows, list) or not rows:
        raise SubmissionFailure("protocol", f"message field '{key}' must be a non-empty list")
    arr = np.asarray(rows, dtype=np.float32)
    if arr.ndim != 2 or arr.shape[1] != width:
        raise SubmissionFailure(
            "protocol", f"'{key}' must be rows of width {width}, got shape {arr.shape}"
        )
    return arr


def run_external_attack(
    command: list[str],
    cwd: Path,
    oracle: ModelOracle,
    images: np.ndarray,
    labels: np.ndarray,
    task: dict,
) -> np.ndarray:
    """Drive one attack conversation; returns the perturbed batch."""
    width = images.shape[1]
    proc = ExternalProcess(command, cwd, float(task["time_budget"]))
    try:
        proc.send(
            {
                "type": "attack_task",
                "images": images.tolist(),
                "labels": [int(v) for v in labels],
                **{k: v for k, v in task.items() if k != "type"},
            }
        )
        while True:
            msg = proc.recv()
            kind = msg["type"]
            if kind == "log":
                continue
            if kind == "predict":
                batch = _parse_batch(msg, "images", width)
                try:
                    probs = oracle.predict(batch)
                except QueryBudgetError as exc:
                    proc.send({"type": "error", "error": str(exc)})
                    raise SubmissionFailure("budget", str(exc)) from exc
                proc.send({"type": "prediction", "probs": probs.tolist()})
            elif kind == "gradient":
                if oracle.capability != WHITE_BOX:
                    proc.send({"type": "error", "error": "gradient access is white-box only"})
                    raise SubmissionFailure("protocol", "gradient request on a black-box task")
                batch = _parse_batch(msg, "images", width)
                req_labels = np.asarray(msg.get("labels", []), dtype=np.int64)
                if req_labels.shape != (len(batch),):
                    raise SubmissionFailure("protocol", "gradient labels must match the batch")
                loss, grad = oracle.gradient(batch, req_labels)
                proc.send({"type": "gradients", "loss": loss, "grads": grad.tolist()})
            elif kind == "result":
                perturbed = _parse_batch(msg, "perturbed", width)
                if perturbed.shape != images.shape:
                    raise SubmissionFailure(
                        "protocol", f"result shape {perturbed.shape} != task shape {images.shape}"
                    )
                return perturbed
            else:
                raise SubmissionFailure("protocol", f"unexpected message type '{kind}'")
    finally:
        proc.close()


def run_external_defense(command: list[str], cwd: Path, task: dict) -> Path:
    """Drive one defense conversation; returns the hardened weight-file path."""
    proc = ExternalProcess(command, cwd, float(task["time_budget"]))
    try:
        proc.send({"type": "defense_task", **{k: v for k, v in task.items() if k != "type"}})
        while True:
            msg = proc.recv()
            kind = msg["type"]
            if kind == "log":
                continue
            if kind == "result":
                raw = msg.get("weights_path")
                if not isinstance(raw, str) or not raw:
                    raise SubmissionFailure("protocol", "result must carry a 'weights_path'")
                path = Path(raw)
                if not path.is_absolute():
                    path = cwd / path
                if not path.exists():
                    raise SubmissionFailure("protocol", f"weights file does not exist: {path}")
                return path
            raise SubmissionFailure("protocol", f"unexpected message type '{kind}'")
    finally:
        proc.close()
