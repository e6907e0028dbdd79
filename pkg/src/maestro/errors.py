"""Exception taxonomy shared across the judge."""

from __future__ import annotations


class MaestroError(Exception):
    """Base class for all judge-raised errors."""


class InputError(MaestroError):
    """Caller provided an invalid value (empty dataset, unknown id, ...)."""


class NotFoundError(InputError):
    """Lookup of a phase, submitter, or submission failed."""


class DimensionError(MaestroError):
    """Shape mismatch; message names the offending layer."""


class NumericError(MaestroError):
    """Non-finite value where a finite one is required."""


class FormatError(MaestroError):
    """Malformed file; carries the byte offset where parsing failed."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (at byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class CapabilityError(MaestroError):
    """Operation not allowed for the oracle's capability (e.g. black-box gradient)."""


class QueryBudgetError(MaestroError):
    """A predict request would push the metered query count past its budget."""


class AttackTimeout(MaestroError):
    """Attack exceeded its wall-clock budget; carries the best partial result."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class DegenerateModelError(MaestroError):
    """Hidden model is unusable for scoring (zero clean accuracy)."""


class ConfigError(MaestroError):
    """Bad configuration; carries a JSON pointer to the offending field."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{message} [{pointer}]" if pointer else message)
        self.pointer = pointer


class IncompleteMatchupError(MaestroError):
    """War aggregation found missing matchups; lists the absent pairs."""

    def __init__(self, missing_pairs):
        pairs = ", ".join(f"{a}x{d}" for a, d in missing_pairs)
        super().__init__(f"war matchup matrix incomplete; missing: {pairs}")
        self.missing_pairs = list(missing_pairs)


class ProtocolError(MaestroError):
    """External submission violated the wire protocol."""


class DeadlineError(MaestroError):
    """Submission arrived after the phase deadline; names the deadline."""

    def __init__(self, phase: str, deadline: float):
        super().__init__(f"phase '{phase}' closed at deadline {deadline}")
        self.deadline = deadline
