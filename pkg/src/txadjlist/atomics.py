"""Single-word atomic cells used by every shared link in the structures.

A cell holds one (ref, tag) pair stored in a single slot, so a read is one
CPython attribute load (atomic under the GIL) and needs no lock; only the
compare-and-swap path takes the per-cell mutex. On a free-threaded build the
read path would need the same mutex; get() is the only read entry point.

Tags double as mark bits: the enum values cover the structural states, and a
link may instead carry a transaction descriptor as its tag, meaning "marked
for deletion by that transaction" (the provenance lets stale marks from
terminal transactions be distinguished from live ones).
"""

from __future__ import annotations

import threading
import time
from enum import Enum
from typing import Any, Callable, Optional, Tuple


class LinkTag(Enum):
    CLEAN = "clean"
    UNSET = "unset"    # adoption target, not yet filled
    FROZEN = "frozen"  # donor slot whose content moved to the adopting node
    DEAD = "dead"      # retired word; physical removal/recycling pending


_POISON = object()  # installed by the reclaimer; any later access raises


class UseAfterReclaimError(RuntimeError):
    """A link of a reclaimed node was read or written."""


# Test instrumentation: called before every CAS attempt when installed.
_step_hook: Optional[Callable[[], None]] = None


def set_step_hook(hook: Optional[Callable[[], None]]) -> None:
    global _step_hook
    _step_hook = hook


class Link:
    """Atomic (ref, tag) word. References compare by identity."""

    __slots__ = ("_word", "_lock")

    def __init__(self, ref: Any = None, tag: Any = LinkTag.CLEAN):
        self._word: Tuple[Any, Any] = (ref, tag)
        self._lock = threading.Lock()

    def get(self) -> Tuple[Any, Any]:
        word = self._word
        if word[1] is _POISON:
            raise UseAfterReclaimError("link read after reclamation")
        return word

    def cas(self, exp_ref: Any, exp_tag: Any, new_ref: Any, new_tag: Any) -> bool:
        hook = _step_hook
        if hook is not None:
            hook()
        with self._lock:
            ref, tag = self._word
            if tag is _POISON:
                raise UseAfterReclaimError("link CAS after reclamation")
            if ref is exp_ref and tag is exp_tag:
                self._word = (new_ref, new_tag)
                return True
            return False

    def cas_stamped(self, exp_ref: Any, exp_tag: Any, new_ref: Any, new_tag: Any):
        """CAS returning the swap instant (monotonic ns) instead of True, None
        on failure. The clock is read inside the critical section, so stamps
        of successive swaps of one word can never be inverted."""
        hook = _step_hook
        if hook is not None:
            hook()
        with self._lock:
            ref, tag = self._word
            if tag is _POISON:
                raise UseAfterReclaimError("link CAS after reclamation")
            if ref is exp_ref and tag is exp_tag:
                self._word = (new_ref, new_tag)
                return time.monotonic_ns()
            return None

    def poison(self) -> None:
        with self._lock:
            self._word = (None, _POISON)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        ref, tag = self._word
        return f"Link({ref!r}, {tag!r})"


class AtomicCounter:
    """Lock-backed monotone counter (itertools.count atomicity is an
    implementation detail we do not rely on)."""

    __slots__ = ("_value", "_lock")

    def __init__(self, start: int = 0):
        self._value = start
        self._lock = threading.Lock()

    def next(self) -> int:
        with self._lock:
            value = self._value
            self._value = value + 1
            return value

    def peek(self) -> int:
        return self._value
