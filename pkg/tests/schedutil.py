"""Deterministic interleaving control for concurrency tests.

The structures call the installed step hook before every CAS attempt and
status transition. StepScheduler blocks participating threads at those points
and releases them one at a time following a seeded schedule, making thread
interleavings reproducible. StallController instead suspends one chosen thread
indefinitely after a given number of steps (the stall-injection probe).
"""

from __future__ import annotations

import random
import threading
from typing import Dict, Optional

from txadjlist.atomics import set_step_hook


class StepScheduler:
    """Round-robin-with-jitter scheduler over registered worker threads.

    Threads not registered (e.g. the controlling test thread) pass through
    unscheduled. After `budget` scheduled steps the scheduler opens up and
    lets everyone free-run (so runs always terminate).
    """

    def __init__(self, seed: int, budget: int = 10_000):
        self._rng = random.Random(seed)
        self._budget = budget
        self._cond = threading.Condition()
        self._registered: Dict[int, bool] = {}  # ident -> waiting?
        self._turn: Optional[int] = None
        self._steps = 0
        self._open = False

    def register(self) -> None:
        ident = threading.get_ident()
        with self._cond:
            self._registered[ident] = False

    def unregister(self) -> None:
        ident = threading.get_ident()
        with self._cond:
            self._registered.pop(ident, None)
            if self._turn == ident:
                self._turn = None
            self._cond.notify_all()

    def _pick_next(self) -> None:
        waiting = [i for i, w in self._registered.items() if w]
        if waiting:
            self._turn = self._rng.choice(waiting)
        else:
            self._turn = None

    def step(self) -> None:
        ident = threading.get_ident()
        with self._cond:
            if self._open or ident not in self._registered:
                return
            self._steps += 1
            if self._steps >= self._budget:
                self._open = True
                self._cond.notify_all()
                return
            self._registered[ident] = True
            if self._turn is None:
                self._pick_next()
            while not self._open and self._turn not in (None, ident):
                self._cond.wait(timeout=0.5)
                if self._turn is None:
                    self._pick_next()
            self._registered[ident] = False
            self._turn = None
            self._pick_next()
            self._cond.notify_all()

    def __enter__(self):
        set_step_hook(self.step)
        return self

    def __exit__(self, *exc):
        with self._cond:
            self._open = True
            self._cond.notify_all()
        set_step_hook(None)


class StallController:
    """Suspends one designated thread indefinitely after `after_steps` of its
    own steps; every other thread passes through untouched."""

    def __init__(self, after_steps: int):
        self._after = after_steps
        self._victim: Optional[int] = None
        self._count = 0
        self._gate = threading.Event()
        self.stalled = threading.Event()

    def arm_current_thread(self) -> None:
        self._victim = threading.get_ident()

    def step(self) -> None:
        if threading.get_ident() != self._victim:
            return
        self._count += 1
        if self._count >= self._after:
            self.stalled.set()
            self._gate.wait()  # suspended until release()

    def release(self) -> None:
        self._gate.set()

    def __enter__(self):
        set_step_hook(self.step)
        return self

    def __exit__(self, *exc):
        self.release()
        set_step_hook(None)
