"""Transaction descriptors, operations, and per-node annotations.

A TransactionDescriptor is the shared record any thread can use to finish a
transaction: the immutable operation array plus two mutable words (status,
current operation index). Both words change only through CAS-style methods.

Status transitions additionally pass through one module-level arbiter lock
that hands out strictly increasing terminal timestamps; the checker reads
commit order from those stamps, so ties cannot occur.
"""

from __future__ import annotations

import threading
import time
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Tuple

from . import atomics
from .atomics import AtomicCounter


class TxStatus(Enum):
    ACTIVE = "active"
    COMMITTED = "committed"
    ABORTED = "aborted"


class OpType(Enum):
    INSERT_VERTEX = "InsertVertex"
    DELETE_VERTEX = "DeleteVertex"
    INSERT_EDGE = "InsertEdge"
    DELETE_EDGE = "DeleteEdge"
    FIND = "Find"


_EDGE_OPS = (OpType.INSERT_EDGE, OpType.DELETE_EDGE)


@dataclass(frozen=True)
class Operation:
    """One step of a transaction. key2 is the edge key and is present exactly
    for edge-addressed operations (Find may address either)."""

    type: OpType
    key: int
    key2: Optional[int] = None

    def __post_init__(self):
        if self.type in _EDGE_OPS and self.key2 is None:
            raise ValueError(f"{self.type.value} requires an edge key")
        if self.type not in _EDGE_OPS and self.type is not OpType.FIND and self.key2 is not None:
            raise ValueError(f"{self.type.value} takes a single key")


_ticket_counter = AtomicCounter(1)

# Arbiter for terminal status transitions; also keeps stamps strictly increasing.
_status_arbiter = threading.Lock()
_last_stamp = 0


class TransactionDescriptor:
    __slots__ = (
        "ops",
        "size",
        "ticket",
        "structure",
        "_status",
        "_current_op",
        "_cop_lock",
        "install_lock",
        "terminal_ts",
        "touched",
        "_mark_done",
        "immortal",
    )

    def __init__(self, ops: Sequence[Operation], structure=None):
        self.ops: Tuple[Operation, ...] = tuple(ops)
        if not self.ops:
            raise ValueError("a transaction needs at least one operation")
        self.size = len(self.ops)
        self.ticket = _ticket_counter.next()
        self.structure = structure
        self._status = TxStatus.ACTIVE
        self._current_op = 0
        self._cop_lock = threading.Lock()
        # Serializes this transaction's installs against its terminal
        # transition (a double-compare single-swap: an acquisition or splice
        # must never land after the status flip, or a lagging duplicate
        # execution could resurrect state the committed transaction already
        # settled).
        self.install_lock = threading.Lock()
        self.terminal_ts: Optional[int] = None
        self.touched: list = []
        self._mark_done = False
        # immortal annotations (sentinels, recycled-slot ground, plain-mode
        # membership) never transition, so installs under them need no gate
        self.immortal = False

    @property
    def status(self) -> TxStatus:
        return self._status

    @property
    def current_op(self) -> int:
        return self._current_op

    def advance_current_op(self, opid: int) -> None:
        """CAS-maximum: currentOp only ever moves forward."""
        if self._current_op >= opid:
            return
        with self._cop_lock:
            if self._current_op < opid:
                self._current_op = opid

    def try_transition(self, status: TxStatus) -> bool:
        """Single permitted transition Active -> terminal, stamped under the
        global arbiter. Returns True exactly once per descriptor."""
        global _last_stamp
        hook = atomics._step_hook
        if hook is not None:
            hook()
        if status is TxStatus.ACTIVE:
            raise ValueError("cannot transition back to Active")
        with self.install_lock:
            with _status_arbiter:
                if self._status is not TxStatus.ACTIVE:
                    return False
                stamp = time.monotonic_ns()
                if stamp <= _last_stamp:
                    stamp = _last_stamp + 1
                _last_stamp = stamp
                self.terminal_ts = stamp
                self._status = status
                return True

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        ops = ",".join(f"{o.type.value}({o.key}{',' + str(o.key2) if o.key2 is not None else ''})" for o in self.ops)
        return f"<Tx#{self.ticket} {self._status.value} [{ops}]>"


class NodeInfo:
    """Per-node annotation: which transaction/operation last acquired the node,
    plus the node's logical presence before that transaction first touched it
    (the rollback baseline)."""

    __slots__ = ("desc", "opid", "present_before")

    def __init__(self, desc: TransactionDescriptor, opid: int, present_before: bool):
        self.desc = desc
        self.opid = opid
        self.present_before = present_before

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"NodeInfo(tx#{self.desc.ticket}, op{self.opid}, before={self.present_before})"


def _terminal_descriptor(op: Operation, status: TxStatus) -> TransactionDescriptor:
    desc = TransactionDescriptor([op])
    desc.try_transition(status)
    desc.immortal = True
    return desc


# Immortal annotations shared by all structures:
#  - sentinel heads always read as present and are never deletion targets,
#  - recycled slots read as absent forever until a transaction acquires them,
#  - plain (non-transactional) membership for the boosting baseline's base.
SENTINEL_INFO = NodeInfo(
    _terminal_descriptor(Operation(OpType.FIND, 0), TxStatus.COMMITTED), 0, True
)
GROUND_ABSENT_INFO = NodeInfo(
    _terminal_descriptor(Operation(OpType.INSERT_VERTEX, 0), TxStatus.ABORTED), 0, False
)
PLAIN_PRESENT_INFO = NodeInfo(
    _terminal_descriptor(Operation(OpType.INSERT_EDGE, 0, 0), TxStatus.COMMITTED), 0, False
)


def next_ticket_value() -> int:
    """Peek at the publication counter (diagnostics only)."""
    return _ticket_counter.peek()
