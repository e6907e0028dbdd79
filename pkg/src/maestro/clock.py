"""Injectable time sources.

The judge separates three uses of time: record timestamps and runtime
metering go through a Clock (swappable for a fixed counter so whole
pipelines reproduce byte-for-byte), while enforcement deadlines (process
kills, PGD time budget) always use the real monotonic clock.
"""

from __future__ import annotations

import threading
import time

from maestro.errors import ConfigError


class WallClock:
    """Real time: timestamps from time.time, metering from perf_counter."""

    def now(self) -> float:
        return time.time()

    def perf(self) -> float:
        return time.perf_counter()


class FixedClock:
    """Deterministic counter clock: every sample advances by a fixed step."""

    def __init__(self, start: float = 0.0, step: float = 0.001):
        self._value = float(start)
        self._step = float(step)
        self._lock = threading.Lock()

    def _tick(self) -> float:
        with self._lock:
            self._value += self._step
            return self._value

    def now(self) -> float:
        return self._tick()

    def perf(self) -> float:
        return self._tick()

    def advance(self, seconds: float) -> None:
        with self._lock:
            self._value += float(seconds)


Clock = WallClock | FixedClock


def make_clock(doc: dict | None) -> Clock:
    doc = doc or {"mode": "wall"}
    mode = doc.get("mode", "wall")
    if mode == "wall":
        return WallClock()
    if mode == "fixed":
        return FixedClock(start=float(doc.get("start", 0.0)), step=float(doc.get("step", 0.001)))
    raise ConfigError(f"unknown clock mode '{mode}'", "/clock/mode")
