"""Epoch-based deferred reclamation for unlinked nodes.

Threads pin the global epoch for the duration of a structure operation;
objects retired under epoch e are reclaimed only once every pinned thread has
moved past e (three-epoch rule). Reclaiming poisons the object's link words,
so a helper that kept a stale reference and touches it afterwards raises
UseAfterReclaimError instead of silently reading recycled state.

The runtime frees the memory itself; what this module adds is the safety
discipline (and its observability for tests).
"""

from __future__ import annotations

import threading
from typing import Any, List, Tuple


class Guard:
    """Per-thread, non-shareable pin on the current epoch. Reentrant."""

    __slots__ = ("_reclaimer",)

    def __init__(self, reclaimer: "EpochReclaimer"):
        self._reclaimer = reclaimer

    def __enter__(self) -> "Guard":
        return self

    def __exit__(self, *exc) -> None:
        self._reclaimer.unpin()


class _ThreadState(threading.local):
    def __init__(self):
        self.depth = 0
        self.retired: List[Tuple[Any, int]] = []
        self.ops = 0
        self.registered = False


class EpochReclaimer:
    def __init__(self, advance_every: int = 64):
        self._epoch = 0
        self._lock = threading.Lock()
        self._reservations: dict = {}  # thread id -> pinned epoch or None
        self._local = _ThreadState()
        self._advance_every = advance_every
        self.reclaimed_count = 0

    @property
    def epoch(self) -> int:
        return self._epoch

    def pin(self) -> Guard:
        state = self._local
        if state.depth == 0:
            tid = threading.get_ident()
            if not state.registered:
                with self._lock:
                    self._reservations.setdefault(tid, None)
                state.registered = True
            self._reservations[tid] = self._epoch
        state.depth += 1
        return Guard(self)

    def unpin(self) -> None:
        state = self._local
        state.depth -= 1
        if state.depth == 0:
            self._reservations[threading.get_ident()] = None
            state.ops += 1
            if state.ops >= self._advance_every:
                state.ops = 0
                self.advance()
                self._drain(state)

    def retire(self, obj: Any) -> None:
        state = self._local
        state.retired.append((obj, self._epoch))

    def advance(self) -> None:
        """Bump the global epoch if no thread is pinned behind it."""
        with self._lock:
            current = self._epoch
            for pinned in self._reservations.values():
                if pinned is not None and pinned < current:
                    return
            self._epoch = current + 1

    def _drain(self, state: _ThreadState) -> None:
        if not state.retired:
            return
        with self._lock:
            floor = self._epoch
            for pinned in self._reservations.values():
                if pinned is not None and pinned < floor:
                    floor = pinned
        keep: List[Tuple[Any, int]] = []
        for obj, retire_epoch in state.retired:
            # safe once every thread has observed at least retire_epoch + 2
            if retire_epoch + 2 <= floor:
                self._reclaim(obj)
            else:
                keep.append((obj, retire_epoch))
        state.retired = keep

    def _reclaim(self, obj: Any) -> None:
        poison = getattr(obj, "poison", None)
        if poison is not None:
            poison()
        self.reclaimed_count += 1

    def flush(self, rounds: int = 4) -> None:
        """Quiescent-time helper: advance repeatedly and drain this thread's
        retire list. Only meaningful when no other thread is pinned."""
        state = self._local
        for _ in range(rounds):
            self.advance()
            self._drain(state)

    def pending(self) -> int:
        return len(self._local.retired)
