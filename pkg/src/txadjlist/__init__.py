"""txadjlist: a concurrent adjacency list whose operations execute as atomic
transactions via shared descriptors and thread helping, together with a
sequential oracle, a strict-serializability checker, a lock-based boosting
baseline, and a workload benchmark."""

from .adjacency import AdjacencyList, VertexNode
from .api import (
    TransactionRequest,
    TransactionResult,
    delete_edge,
    delete_vertex,
    execute_transaction,
    find,
    insert_edge,
    insert_vertex,
)
from .boosting import AbstractLockTable, BoostedAdjacencyList
from .checker import (
    Verdict,
    brute_force_serializable,
    check_commutativity_isolation,
    check_strict_serializability,
    ops_commute,
)
from .core import UpdateResult, execute_ops, is_key_present, mark_delete, update_info
from .descriptors import (
    NodeInfo,
    Operation,
    OpType,
    TransactionDescriptor,
    TxStatus,
)
from .history import HistoryEvent, Recorder, dump_history, load_history
from .mdlist import MDList, MDNode, coord_to_key, key_to_coord
from .oracle import SeqGraph, seq_apply, seq_apply_transaction
from .reclamation import EpochReclaimer, Guard
from .bench import BenchReport, WorkloadSpec, emit_report, run_bench

__version__ = "0.1.0"

__all__ = [
    "AdjacencyList",
    "VertexNode",
    "TransactionRequest",
    "TransactionResult",
    "execute_transaction",
    "insert_vertex",
    "delete_vertex",
    "insert_edge",
    "delete_edge",
    "find",
    "BoostedAdjacencyList",
    "AbstractLockTable",
    "Verdict",
    "check_strict_serializability",
    "check_commutativity_isolation",
    "brute_force_serializable",
    "ops_commute",
    "UpdateResult",
    "execute_ops",
    "is_key_present",
    "mark_delete",
    "update_info",
    "NodeInfo",
    "Operation",
    "OpType",
    "TransactionDescriptor",
    "TxStatus",
    "HistoryEvent",
    "Recorder",
    "dump_history",
    "load_history",
    "MDList",
    "MDNode",
    "key_to_coord",
    "coord_to_key",
    "SeqGraph",
    "seq_apply",
    "seq_apply_transaction",
    "EpochReclaimer",
    "Guard",
    "BenchReport",
    "WorkloadSpec",
    "run_bench",
    "emit_report",
]
