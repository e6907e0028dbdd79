"""CSV snapshots of a phase's evaluation records (RFC 4180, UTF-8)."""

from __future__ import annotations

import csv
import io

FIXED_COLUMNS = ("submitter_id", "submission_id", "phase", "eval_timestamp")


def format_real(value: float) -> str:
    return f"{value:.6f}"


def export_csv(records: list[dict], metric_columns: list[str], phase: str) -> str:
    """One row per evaluation record, sorted by (eval_timestamp, submission_id).

    Header: submitter_id, submission_id, phase, eval_timestamp, the board's
    metric columns in configured order, then overall_score. Reals carry six
    decimals; metrics a record lacks stay empty.
    """
    columns = [c for c in metric_columns if c not in ("overall_score", "eval_timestamp")]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow([*FIXED_COLUMNS, *columns, "overall_score"])
    ordered = sorted(records, key=lambda r: (r["eval_timestamp"], r["submission_id"]))
    for rec in ordered:
        metrics = rec["metrics"]
        row = [
            rec["submitter_id"],
            str(rec["submission_id"]),
            phase,
            format_real(rec["eval_timestamp"]),
        ]
        for col in columns:
            value = metrics.get(col)
            row.append("" if value is None else format_real(value))
        row.append(format_real(metrics["overall_score"]))
        writer.writerow(row)
    return buf.getvalue()


def parse_csv(text: str) -> tuple[list[str], list[dict]]:
    """Inverse of export_csv, good enough for round-trip checks and tooling."""
    reader = csv.reader(io.StringIO(text))
    rows = list(reader)
    if not rows:
        return [], []
    header = rows[0]
    out = []
    for raw in rows[1:]:
        entry: dict = {}
        metrics: dict[str, float] = {}
        for key, value in zip(header, raw):
            if key == "submitter_id" or key == "phase":
                entry[key] = value
            elif key == "submission_id":
                entry[key] = int(value)
            elif key == "eval_timestamp":
                entry[key] = float(value)
            elif value != "":
                metrics[key] = float(value)
        entry["metrics"] = metrics
        out.append(entry)
    return header, out


def reexport_csv(text: str, phase: str) -> str:
    """Parse and re-serialize; used to verify the export format is a fixpoint."""
    header, rows = parse_csv(text)
    metric_columns = [c for c in header if c not in FIXED_COLUMNS and c != "overall_score"]
    records = [
        {
            "submitter_id": r["submitter_id"],
            "submission_id": r["submission_id"],
            "eval_timestamp": r["eval_timestamp"],
            "metrics": r["metrics"],
        }
        for r in rows
    ]
    return export_csv(records, metric_columns, phase)
