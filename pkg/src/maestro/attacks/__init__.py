"""Reference attacks (FGSM, PGD, black-box GA) and the query-metered oracle."""

from maestro.attacks.genetic import GaConfig, ga_attack
from maestro.attacks.gradient import fgsm, pgd
from maestro.attacks.measure import l2_distances, measure_attack
from maestro.attacks.oracle import ModelOracle
from maestro.attacks.types import AttackBudget, AttackResult

__all__ = [
    "AttackBudget",
    "AttackResult",
    "GaConfig",
    "ModelOracle",
    "fgsm",
    "ga_attack",
    "l2_distances",
    "measure_attack",
    "pgd",
]
