"""Board semantics: latest-per-submitter, history, sorting, search, colors."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maestro.arena.entities import Submitter
from maestro.board.config import BoardConfig, MetricConfig
from maestro.board.views import BoardQuery, board_view, color_for, error_view
from maestro.errors import InputError

SUBMITTERS = {
    "alice": Submitter("alice", "Alice"),
    "bob": Submitter("bob", "Bob"),
    "ali-team": Submitter("ali-team", "ALI-team", kind="team", members=("x",)),
}

CONFIG = BoardConfig(
    (
        MetricConfig("overall_score", "Overall"),
        MetricConfig("clean_acc", "Clean", visible_by_default=False),
    )
)


def eval_record(submitter, sub_id, ts, overall=0.5, clean=1.0):
    return {
        "record_type": "evaluation",
        "submission_id": sub_id,
        "submitter_id": submitter,
        "phase": "attack",
        "metrics": {"overall_score": overall, "clean_acc": clean},
        "eval_timestamp": ts,
    }


def error_record(submitter, sub_id, ts, category="crash", message="boom"):
    return {
        "record_type": "error",
        "submission_id": sub_id,
        "submitter_id": submitter,
        "phase": "attack",
        "category": category,
        "message": message,
        "eval_timestamp": ts,
    }


class TestDefaultView:
    records = [
        eval_record("alice", 1, 100.0, overall=0.2),
        eval_record("alice", 2, 200.0, overall=0.9),
        eval_record("alice", 3, 300.0, overall=0.5),
        eval_record("bob", 4, 250.0, overall=0.7),
    ]

    def test_one_row_per_submitter_latest_wins(self):
        rows = board_view(self.records, SUBMITTERS, CONFIG, BoardQuery())
        assert len(rows) == 2
        by_id = {r.submitter_id: r for r in rows}
        assert by_id["alice"].submission_id == 3  # max timestamp
        assert by_id["bob"].submission_id == 4

    def test_default_sort_newest_first(self):
        rows = board_view(self.records, SUBMITTERS, CONFIG, BoardQuery())
        assert [r.submitter_id for r in rows] == ["alice", "bob"]
        assert rows[0].eval_timestamp >= rows[1].eval_timestamp

    def test_timestamp_tie_breaks_by_submission_id(self):
        records = [eval_record("alice", 1, 100.0), eval_record("alice", 7, 100.0)]
        rows = board_view(records, SUBMITTERS, CONFIG, BoardQuery())
        assert rows[0].submission_id == 7

    def test_history_filter_chronological(self):
        rows = board_view(self.records, SUBMITTERS, CONFIG, BoardQuery(submitter="alice"))
        assert [r.submission_id for r in rows] == [1, 2, 3]
        assert len(rows) == 3

    def test_sort_by_metric(self):
        rows = board_view(
            self.records, SUBMITTERS, CONFIG, BoardQuery(sort_key="overall_score", sort_dir="desc")
        )
        values = [r.metrics["overall_score"] for r in rows]
        assert values == sorted(values, reverse=True)
        assert values[0] == 0.7  # bob's latest beats alice's latest (0.5)

    def test_unknown_sort_key_lists_valid(self):
        with pytest.raises(InputError, match="eval_timestamp"):
            board_view(self.records, SUBMITTERS, CONFIG, BoardQuery(sort_key="bogus"))

    def test_bad_sort_direction_rejected(self):
        with pytest.raises(InputError, match="asc or desc"):
            board_view(self.records, SUBMITTERS, CONFIG, BoardQuery(sort_dir="sideways"))

    def test_search_case_insensitive_substring(self):
        records = self.records + [eval_record("ali-team", 9, 400.0)]
        rows = board_view(records, SUBMITTERS, CONFIG, BoardQuery(search="ali"))
        assert {r.submitter_id for r in rows} == {"alice", "ali-team"}
        rows = board_view(records, SUBMITTERS, CONFIG, BoardQuery(search="ALI"))
        assert {r.submitter_id for r in rows} == {"alice", "ali-team"}

    def test_metric_selection_overrides_visibility(self):
        rows = board_view(self.records, SUBMITTERS, CONFIG, BoardQuery())
        assert list(rows[0].metrics) == ["overall_score"]  # clean_acc hidden by default
        rows = board_view(
            self.records, SUBMITTERS, CONFIG, BoardQuery(metrics=("clean_acc", "overall_score"))
        )
        assert list(rows[0].metrics) == ["clean_acc", "overall_score"]

    def test_reads_are_pure(self):
        q = BoardQuery(sort_key="overall_score", sort_dir="asc")
        a = board_view(self.records, SUBMITTERS, CONFIG, q)
        b = board_view(self.records, SUBMITTERS, CONFIG, q)
        assert a == b

    def test_limit_offset_pagination(self):
        rows = board_view(
            self.records, SUBMITTERS, CONFIG, BoardQuery(submitter="alice", limit=2, offset=1)
        )
        assert [r.submission_id for r in rows] == [2, 3]
        with pytest.raises(InputError):
            BoardQuery(limit=-1)
        with pytest.raises(InputError):
            BoardQuery(offset=-2)


class TestErrorView:
    def test_errors_do_not_reach_results_board(self):
        records = [eval_record("alice", 1, 100.0), error_record("bob", 2, 200.0)]
        board_rows = board_view(records, SUBMITTERS, CONFIG, BoardQuery())
        error_rows = error_view(records, SUBMITTERS, BoardQuery())
        assert {r.submitter_id for r in board_rows} == {"alice"}
        assert {r.submitter_id for r in error_rows} == {"bob"}
        assert error_rows[0].category == "crash"
        assert error_rows[0].message == "boom"

    def test_empty_phase_empty_list(self):
        assert error_view([], SUBMITTERS, BoardQuery()) == []

    def test_history_shows_all_errors(self):
        records = [error_record("bob", 1, 100.0), error_record("bob", 2, 200.0, "timeout")]
        rows = error_view(records, SUBMITTERS, BoardQuery(submitter="bob"))
        assert len(rows) == 2


class TestColorFor:
    METRIC = MetricConfig("m", "M", min=0.0, max=1.0, threshold=0.5, higher_is_better=True)

    def test_at_threshold_neutral(self):
        cell = color_for(0.5, self.METRIC)
        assert cell.band == "neutral" and cell.intensity == 0.0

    def test_at_max_full_green(self):
        cell = color_for(1.0, self.METRIC)
        assert cell.band == "green" and cell.intensity == 1.0

    def test_below_threshold_oracle(self):
        # frozen arithmetic oracle: (0.5 - 0.3) / (0.5 - 0.0) = 0.4
        cell = color_for(0.3, self.METRIC)
        assert cell.band == "red"
        assert cell.intensity == pytest.approx(0.4, abs=1e-12)

    def test_direction_flips_when_lower_is_better(self):
        metric = MetricConfig("m", "M", threshold=0.5, higher_is_better=False)
        assert color_for(0.3, metric).band == "green"
        assert color_for(0.8, metric).band == "red"

    def test_non_finite_flagged_invalid(self):
        cell = color_for(math.nan, self.METRIC)
        assert cell.band == "neutral" and not cell.valid

    def test_intensity_clamped(self):
        metric = MetricConfig("m", "M", min=0.0, max=1.0, threshold=0.5)
        assert color_for(250.0, metric).intensity == 1.0

    @given(st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    @settings(max_examples=100, deadline=None)
    def test_monotone_on_each_side(self, a, b):
        lo, hi = min(a, b), max(a, b)
        ca, cb = color_for(lo, self.METRIC), color_for(hi, self.METRIC)
        if lo > 0.5 and hi > 0.5:
            assert cb.intensity >= ca.intensity  # deeper green as value grows
        if lo < 0.5 and hi < 0.5:
            assert ca.intensity >= cb.intensity  # deeper red as value falls
