"""Adapter equivalence: in-process reference attacks and the same algorithm
driven over the wire protocol must produce identical metric maps."""

import sys

import pytest

from maestro.arena.entities import EvaluationRecord


def run_one(arena, payload) -> dict:
    sub = arena.submit("alice", "attack", payload)
    record = arena.evaluate(sub.id)
    assert isinstance(record, EvaluationRecord), getattr(record, "message", None)
    return record.metrics


@pytest.mark.parametrize("method", ["fgsm", "pgd"])
def test_external_client_matches_in_process(arena_factory, method):
    internal = run_one(arena_factory(), {"kind": "reference", "method": method})
    external = run_one(
        arena_factory(),
        {
            "kind": "external",
            "command": [sys.executable, "-m", "maestro.refclients.attack_client", "--method", method],
        },
    )
    assert internal == external


def test_equivalence_includes_meters_and_perturbation_stats(arena_factory):
    internal = run_one(arena_factory(), {"kind": "reference", "method": "fgsm"})
    external = run_one(
        arena_factory(),
        {
            "kind": "external",
            "command": [sys.executable, "-m", "maestro.refclients.attack_client", "--method", "fgsm"],
        },
    )
    for key in ("queries", "gradient_queries", "mean_l2", "adv_acc", "clean_acc"):
        assert internal[key] == external[key], key
