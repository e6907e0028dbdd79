"""Reference defense (adversarial training) and the robustness harness."""

from maestro.defense.adversarial import DefenseConfig, HardenedModel, adversarial_train
from maestro.defense.measure import DefenseResult, measure_defense

__all__ = [
    "DefenseConfig",
    "DefenseResult",
    "HardenedModel",
    "adversarial_train",
    "measure_defense",
]
