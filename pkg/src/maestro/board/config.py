"""Per-metric display configuration: bounds, thresholds, visibility, order."""

from __future__ import annotations

from dataclasses import dataclass, replace

from maestro.errors import ConfigError


@dataclass(frozen=True)
class MetricConfig:
    name: str
    display_name: str
    min: float = 0.0
    max: float = 1.0
    threshold: float = 0.5
    higher_is_better: bool = True
    visible_by_default: bool = True

    def __post_init__(self):
        if not self.min < self.max:
            raise ConfigError(f"metric '{self.name}': min must be < max", f"/board/{self.name}")
        if not self.min <= self.threshold <= self.max:
            raise ConfigError(
                f"metric '{self.name}': threshold must lie in [min, max]", f"/board/{self.name}"
            )


@dataclass(frozen=True)
class BoardConfig:
    metrics: tuple[MetricConfig, ...]  # column order

    def metric(self, name: str) -> MetricConfig | None:
        for m in self.metrics:
            if m.name == name:
                return m
        return None

    def visible_names(self) -> list[str]:
        return [m.name for m in self.metrics if m.visible_by_default]

    def names(self) -> list[str]:
        return [m.name for m in self.metrics]


def _attack_metrics(query_budget: float, time_budget: float, l2_max: float) -> list[MetricConfig]:
    return [
        MetricConfig("clean_acc", "Clean Acc", threshold=0.8),
        MetricConfig("adv_acc", "Adv Acc", higher_is_better=False),
        MetricConfig("effectiveness", "Effectiveness"),
        MetricConfig("stealth", "Stealth"),
        MetricConfig("query_eff", "Query Eff", visible_by_default=False),
        MetricConfig("time_eff", "Time Eff", visible_by_default=False),
        MetricConfig("mean_l2", "Mean L2", max=l2_max, threshold=l2_max / 2, higher_is_better=False),
        MetricConfig(
            "queries", "Queries", max=query_budget, threshold=query_budget / 2,
            higher_is_better=False, visible_by_default=False,
        ),
        MetricConfig(
            "gradient_queries", "Grad Queries", max=query_budget, threshold=query_budget / 2,
            higher_is_better=False, visible_by_default=False,
        ),
        MetricConfig(
            "runtime_s", "Runtime (s)", max=time_budget, threshold=time_budget / 2,
            higher_is_better=False, visible_by_default=False,
        ),
        MetricConfig("overall_score", "Overall"),
    ]


def _defense_metrics(overhead_budget: float) -> list[MetricConfig]:
    return [
        MetricConfig("clean_acc", "Clean Acc", threshold=0.8),
        MetricConfig("base_clean_acc", "Baseline Acc", threshold=0.8, visible_by_default=False),
        MetricConfig("robust_acc_fgsm", "Robust (FGSM)"),
        MetricConfig("robust_acc_pgd", "Robust (PGD)"),
        MetricConfig("robust_acc_ga", "Robust (GA)"),
        MetricConfig("robustness", "Robustness"),
        MetricConfig("clean_retention", "Clean Retention", visible_by_default=False),
        MetricConfig("time_eff", "Time Eff", visible_by_default=False),
        MetricConfig(
            "overhead_s", "Overhead (s)", max=overhead_budget, threshold=overhead_budget / 2,
            higher_is_better=False, visible_by_default=False,
        ),
        MetricConfig("overall_score", "Overall"),
    ]


def _war_metrics() -> list[MetricConfig]:
    return [
        MetricConfig("attack_side", "Attack Side"),
        MetricConfig("defense_side", "Defense Side"),
        MetricConfig("matchups", "Matchups", max=1000.0, threshold=0.5, visible_by_default=False),
        MetricConfig("overall_score", "War Score"),
    ]


def board_config_for(kind: str, judge_config) -> BoardConfig:
    """Defaults per phase kind, merged with any config-file overrides."""
    budgets = judge_config.budgets
    l2_max = budgets.get("l2_max") or 0.3 * judge_config.model.input_width ** 0.5
    if kind == "attack":
        metrics = _attack_metrics(budgets.get("query_budget", 5000.0), budgets.get("time_budget", 60.0), l2_max)
    elif kind == "defense":
        metrics = _defense_metrics(budgets.get("overhead_budget", 300.0))
    elif kind == "war":
        metrics = _war_metrics()
    else:
        raise ConfigError(f"no board defaults for phase kind '{kind}'", "/board")
    overrides = {o.name: o.fields for o in judge_config.board_overrides.get(kind, [])}
    merged = []
    for metric in metrics:
        if metric.name in overrides:
            metric = replace(metric, **overrides[metric.name])
        merged.append(metric)
    return BoardConfig(tuple(merged))
