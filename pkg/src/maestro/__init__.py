"""Maestro: a competition judge for robust-AI exercises.

Evaluates attack and defense submissions against hidden neural models,
meters efficiency and effectiveness, aggregates weighted-sum scores across
Attack, Defense, and War phases, and serves the results on interactive
leaderboards with error boards.
"""

__version__ = "0.1.0"
