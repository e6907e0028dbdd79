"""Leaderboard semantics and the HTTP API the UI consumes."""

from maestro.board.config import BoardConfig, MetricConfig, board_config_for
from maestro.board.views import BoardQuery, ColorCell, board_view, color_for, error_view

__all__ = [
    "BoardConfig",
    "BoardQuery",
    "ColorCell",
    "MetricConfig",
    "board_config_for",
    "board_view",
    "color_for",
    "error_view",
]
