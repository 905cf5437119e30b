"""Deterministic discrete-event core: millisecond clock, event queue, seeded RNG."""

from __future__ import annotations

import heapq
import random
from typing import Callable

# Simulation timestamps are real-valued milliseconds.
SimTime = float


class EventHandle:
    """Cancellable reference to a scheduled event."""

    __slots__ = ("fire_at", "seq", "action", "cancelled")

    def __init__(self, fire_at: SimTime, seq: int, action: Callable[[], None]):
        self.fire_at = fire_at
        self.seq = seq
        self.action: Callable[[], None] | None = action
        self.cancelled = False

    def cancel(self) -> None:
        self.cancelled = True
        self.action = None


class Simulator:
    """Single-threaded event loop.

    Events fire in (fire_at, insertion seq) order, so equal timestamps run
    FIFO. All randomness is drawn from one MT19937 stream (`random.Random`)
    owned by the instance; a seed therefore fully determines a run, on any
    platform.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self.rng = random.Random(seed)
        self._now: SimTime = 0.0
        self._seq = 0
        self._queue: list[tuple[SimTime, int, EventHandle]] = []

    def now(self) -> SimTime:
        return self._now

    def schedule(self, delay_ms: float, action: Callable[[], None]) -> EventHandle:
        """Schedule `action` to run `delay_ms` after the current time."""
        if delay_ms < 0:
            raise ValueError(f"cannot schedule into the past (delay {delay_ms})")
        handle = EventHandle(self._now + delay_ms, self._seq, action)
        self._seq += 1
        heapq.heappush(self._queue, (handle.fire_at, handle.seq, handle))
        return handle

    def run(self, until: SimTime | None = None) -> SimTime:
        """Run until quiescence, or until the clock reaches `until`.

        Every event with fire_at <= until executes (including ones scheduled
        while running). Returns the clock: the last event time under
        quiescence, or `until` when given and later.
        """
        while self._queue:
            fire_at, _seq, handle = self._queue[0]
            if until is not None and fire_at > until:
                break
            heapq.heappop(self._queue)
            if handle.cancelled:
                continue
            self._now = fire_at
            action = handle.action
            handle.action = None
            action()  # type: ignore[misc]
        if until is not None and until > self._now:
            self._now = until
        return self._now

    def pending(self) -> int:
        """Events still queued (cancelled ones included until popped)."""
        return len(self._queue)
