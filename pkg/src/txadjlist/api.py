"""Public transaction interface shared by both systems (descriptor-based and
lock-based): build an operation list, execute it atomically, read the result."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .descriptors import Operation, OpType, TxStatus


@dataclass(frozen=True)
class TransactionRequest:
    ops: Sequence[Operation]

    def __post_init__(self):
        if len(self.ops) < 1:
            raise ValueError("a transaction needs at least one operation")


@dataclass(frozen=True)
class TransactionResult:
    status: TxStatus
    results: Optional[List[bool]]  # defined only when committed

    @property
    def committed(self) -> bool:
        return self.status is TxStatus.COMMITTED


def execute_transaction(structure, request: TransactionRequest) -> TransactionResult:
    """Run the whole request as one atomic transaction on the structure
    (AdjacencyList or BoostedAdjacencyList: both expose .execute)."""
    status, results = structure.execute(list(request.ops))
    return TransactionResult(status, results)


def _single(structure, op: Operation) -> bool:
    status, _ = structure.execute([op])
    return status is TxStatus.COMMITTED


def insert_vertex(structure, key: int) -> bool:
    return _single(structure, Operation(OpType.INSERT_VERTEX, key))


def delete_vertex(structure, key: int) -> bool:
    return _single(structure, Operation(OpType.DELETE_VERTEX, key))


def insert_edge(structure, vertex: int, edge: int) -> bool:
    return _single(structure, Operation(OpType.INSERT_EDGE, vertex, edge))


def delete_edge(structure, vertex: int, edge: int) -> bool:
    return _single(structure, Operation(OpType.DELETE_EDGE, vertex, edge))


def find(structure, vertex: int, edge: Optional[int] = None) -> bool:
    return _single(structure, Operation(OpType.FIND, vertex, edge))
