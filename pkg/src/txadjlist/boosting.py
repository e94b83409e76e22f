"""Lock-based comparison system: abstract per-key locks over the plain
(transaction-free) variant of the same adjacency-list structure, with an undo
log replayed in reverse on abort.

Locking protocol: a transaction's footprint is merged up front (vertex keys,
edge pairs; strongest mode wins) and acquired in global key order, vertex key
before its edge pairs, which rules out deadlock for the static part. A vertex
deletion discovers its edge keys only after it holds the vertex exclusively;
at that point no other transaction can hold any lock under that vertex, so the
late acquisitions are uncontended and the ordering argument still holds.
"""

from __future__ import annotations

import threading
from typing import Dict, List, Optional, Set, Tuple

from .base_adjacency import PlainAdjacencyList
from .descriptors import Operation, OpType, TransactionDescriptor, TxStatus

_EXCLUSIVE_VERTEX = (OpType.INSERT_VERTEX, OpType.DELETE_VERTEX)


class _RWLock:
    """Writer-preferring reader-writer lock."""

    __slots__ = ("_cond", "_readers", "_writer", "_writers_waiting")

    def __init__(self):
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False
        self._writers_waiting = 0

    def acquire_shared(self) -> None:
        with self._cond:
            while self._writer or self._writers_waiting:
                self._cond.wait()
            self._readers += 1

    def release_shared(self) -> None:
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_exclusive(self) -> None:
        with self._cond:
            self._writers_waiting += 1
            while self._writer or self._readers:
                self._cond.wait()
            self._writers_waiting -= 1
            self._writer = True

    def release_exclusive(self) -> None:
        with self._cond:
            self._writer = False
            self._cond.notify_all()


class AbstractLockTable:
    """Lazily populated map from lock key (vertex or vertex:edge tuple) to lock."""

    def __init__(self):
        self._locks: Dict[Tuple[int, ...], _RWLock] = {}
        self._guard = threading.Lock()
        self.acquisitions = 0  # lifetime count, for inspection

    def _lock_for(self, key: Tuple[int, ...]) -> _RWLock:
        lock = self._locks.get(key)
        if lock is None:
            with self._guard:
                lock = self._locks.setdefault(key, _RWLock())
        return lock

    def acquire(self, key: Tuple[int, ...], exclusive: bool) -> None:
        lock = self._lock_for(key)
        if exclusive:
            lock.acquire_exclusive()
        else:
            lock.acquire_shared()
        with self._guard:
            self.acquisitions += 1

    def release(self, key: Tuple[int, ...], exclusive: bool) -> None:
        lock = self._locks[key]
        if exclusive:
            lock.release_exclusive()
        else:
            lock.release_shared()


def _footprint(ops) -> Dict[Tuple[int, ...], bool]:
    """Lock key -> exclusive? for the statically known part of the footprint."""
    modes: Dict[Tuple[int, ...], bool] = {}

    def need(key: Tuple[int, ...], exclusive: bool) -> None:
        modes[key] = modes.get(key, False) or exclusive

    for op in ops:
        if op.type in _EXCLUSIVE_VERTEX:
            need((op.key,), True)
        elif op.type is OpType.FIND and op.key2 is None:
            need((op.key,), False)
        else:  # edge-addressed: InsertEdge / DeleteEdge / Find-edge
            need((op.key,), False)
            need((op.key, op.key2), op.type is not OpType.FIND)
    return modes


class BoostedAdjacencyList:
    """Same transactional API as AdjacencyList, implemented by boosting."""

    def __init__(self, key_range: int = 500, recorder=None):
        if key_range < 2:
            raise ValueError("key_range must be at least 2")
        self.key_range = key_range
        self.recorder = recorder
        self.locks = AbstractLockTable()
        self.base = PlainAdjacencyList(key_range=key_range)
        self.last_txn_locks = 0  # lock count of the most recent transaction

    # -- transactional execution --------------------------------------------

    def execute(self, ops) -> Tuple[TxStatus, Optional[List[bool]]]:
        for op in ops:
            self._validate(op)
        desc = TransactionDescriptor(ops)  # status/ticket machinery shared
        recorder = self.recorder
        modes = _footprint(ops)
        held: List[Tuple[Tuple[int, ...], bool]] = []
        undo: List[Tuple] = []
        lock_count = 0
        try:
            for key in sorted(modes):
                self.locks.acquire(key, modes[key])
                held.append((key, modes[key]))
                lock_count += 1
            committed = True
            for opid, op in enumerate(ops):
                if recorder is not None:
                    recorder.emit("invoke", desc.ticket, opid, op.type, op.key, op.key2)
                ok, extra_locks = self._apply(op, undo, held)
                lock_count += extra_locks
                if recorder is not None:
                    recorder.emit("respond", desc.ticket, opid, op.type, op.key, op.key2, ok)
                if not ok:
                    committed = False
                    break
            if committed:
                desc.try_transition(TxStatus.COMMITTED)
            else:
                for entry in reversed(undo):
                    self._undo(entry)
                desc.try_transition(TxStatus.ABORTED)
            if recorder is not None:
                recorder.emit(
                    "status", desc.ticket, result=committed, ts=desc.terminal_ts
                )
        finally:
            for key, exclusive in reversed(held):
                self.locks.release(key, exclusive)
            self.last_txn_locks = lock_count
        if committed:
            return TxStatus.COMMITTED, [True] * len(ops)
        return TxStatus.ABORTED, None

    def _validate(self, op: Operation) -> None:
        if not 1 <= op.key < self.key_range:
            raise ValueError(f"vertex key {op.key} outside [1, {self.key_range})")
        if op.key2 is not None and not 1 <= op.key2 < self.key_range:
            raise ValueError(f"edge key {op.key2} outside [1, {self.key_range})")

    def _apply(self, op: Operation, undo: List[Tuple], held: List) -> Tuple[bool, int]:
        kind = op.type
        if kind is OpType.INSERT_VERTEX:
            ok = self.base.insert_vertex(op.key)
            if ok:
                undo.append(("vertex-", op.key))
            return ok, 0
        if kind is OpType.DELETE_VERTEX:
            # one abstract lock per edge in the sublist, discovered while the
            # vertex is held exclusively (so these never contend); keys this
            # transaction already holds are skipped, not re-acquired
            owned = {key for key, _ in held}
            taken = 0
            for edge in sorted(self.base.edge_keys(op.key)):
                if (op.key, edge) in owned:
                    continue
                self.locks.acquire((op.key, edge), True)
                held.append(((op.key, edge), True))
                taken += 1
            removed = self.base.delete_vertex(op.key)
            if removed is None:
                return False, taken
            undo.append(("vertex+", op.key, removed))
            return True, taken
        if kind is OpType.INSERT_EDGE:
            ok = self.base.insert_edge(op.key, op.key2)
            if ok:
                undo.append(("edge-", op.key, op.key2))
            return ok, 0
        if kind is OpType.DELETE_EDGE:
            ok = self.base.delete_edge(op.key, op.key2)
            if ok:
                undo.append(("edge+", op.key, op.key2))
            return ok, 0
        return self.base.find(op.key, op.key2), 0

    def _undo(self, entry: Tuple) -> None:
        tag = entry[0]
        if tag == "vertex-":
            self.base.delete_vertex(entry[1])
        elif tag == "vertex+":
            self.base.insert_vertex(entry[1])
            for edge in entry[2]:
                self.base.insert_edge(entry[1], edge)
        elif tag == "edge-":
            self.base.delete_edge(entry[1], entry[2])
        elif tag == "edge+":
            self.base.insert_edge(entry[1], entry[2])

    # -- inspection -----------------------------------------------------------

    def logical_state(self) -> Dict[int, Set[int]]:
        return self.base.logical_state()
