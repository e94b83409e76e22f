"""History verdicts: strict serializability and commutativity isolation.

The recorder's merged event stream is the only input. Committed transactions
are replayed on the sequential oracle in the order of their terminal stamps;
the run passes when every recorded per-operation result matches the replay and
the final oracle state equals the structure's quiescent logical state. For
small histories the commit-order witness is additionally confirmed by brute
force over all sequential orders of the committed transactions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Dict, Iterable, List, Optional, Set, Tuple

from .descriptors import Operation, OpType
from .history import HistoryEvent
from .oracle import SeqGraph, seq_apply

_VERTEX_OPS = (OpType.INSERT_VERTEX, OpType.DELETE_VERTEX)
_OPTYPE_BY_NAME = {member.value: member for member in OpType}
_VERTEX_OP_NAMES = frozenset(("InsertVertex", "DeleteVertex"))


@dataclass
class Verdict:
    ok: bool
    code: str  # PASS | FAIL | MALFORMED
    reason: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


@dataclass
class _Txn:
    ticket: int
    ops: Dict[int, Operation] = field(default_factory=dict)
    results: Dict[int, bool] = field(default_factory=dict)
    committed: Optional[bool] = None
    terminal_ts: Optional[int] = None

    def op_list(self) -> List[Operation]:
        return [self.ops[i] for i in sorted(self.ops)]

    def result_list(self) -> List[bool]:
        return [self.results[i] for i in sorted(self.ops)]


def _collect(events: Iterable[HistoryEvent]) -> Tuple[Dict[int, _Txn], Optional[str]]:
    txns: Dict[int, _Txn] = {}
    for e in events:
        txn = txns.setdefault(e.ticket, _Txn(e.ticket))
        if e.kind == "invoke":
            known = txn.ops.get(e.opid)
            if known is None:
                txn.ops[e.opid] = Operation(_OPTYPE_BY_NAME[e.op], e.key, e.key2)
            elif known.type.value != e.op or known.key != e.key or known.key2 != e.key2:
                return txns, f"transaction {e.ticket} op {e.opid} invoked with different operations"
        elif e.kind == "respond":
            # helpers may re-report, and a lagging duplicate execution can
            # report a stale failure after the transaction settled; any
            # successful execution of the operation dominates
            txn.results[e.opid] = txn.results.get(e.opid, False) or e.result
        elif e.kind == "status":
            if txn.committed is not None:
                return txns, f"transaction {e.ticket} has two terminal transitions"
            txn.committed = e.result
            txn.terminal_ts = e.ts
    return txns, None


def _replay(order: List[_Txn], initial: Optional[Dict[int, Set[int]]] = None):
    graph = SeqGraph(initial)
    for txn in order:
        for opid in sorted(txn.ops):
            expected = seq_apply(graph, txn.ops[opid])
            recorded = txn.results.get(opid)
            if recorded is not None and recorded != expected:
                return None, (txn.ticket, opid, recorded, expected)
            if not expected:
                return None, (txn.ticket, opid, recorded, expected)
    return graph, None


def check_strict_serializability(
    events: Iterable[HistoryEvent],
    final_state: Dict[int, Set[int]],
    initial_state: Optional[Dict[int, Set[int]]] = None,
    brute_force_limit: Tuple[int, int, int] = (3, 3, 6),
) -> Verdict:
    """PASS iff replaying the committed transactions in commit order
    reproduces every recorded result and ends in final_state."""
    events = list(events)
    txns, malformed = _collect(events)
    if malformed:
        return Verdict(False, "MALFORMED", malformed)
    for txn in txns.values():
        if txn.committed is None:
            return Verdict(False, "MALFORMED", f"transaction {txn.ticket} never reached a terminal status")
        if set(txn.ops) != set(txn.results) and txn.committed:
            return Verdict(
                False, "MALFORMED", f"committed transaction {txn.ticket} has unreported operations"
            )
    committed = sorted(
        (t for t in txns.values() if t.committed), key=lambda t: t.terminal_ts
    )
    graph, mismatch = _replay(committed, initial_state)
    if mismatch:
        ticket, opid, recorded, expected = mismatch
        return Verdict(
            False,
            "FAIL",
            f"transaction {ticket} op {opid}: recorded {recorded}, replay expects {expected}",
        )
    if graph.state() != {k: set(v) for k, v in final_state.items()}:
        return Verdict(
            False,
            "FAIL",
            "final logical state differs from commit-order replay",
            {"replayed": graph.state(), "observed": final_state},
        )
    details = {}
    max_txns, max_ops, max_keys = brute_force_limit
    keys = {op.key for t in committed for op in t.ops.values()}
    keys |= {op.key2 for t in committed for op in t.ops.values() if op.key2 is not None}
    if (
        len(committed) <= max_txns
        and all(len(t.ops) <= max_ops for t in committed)
        and len(keys) <= max_keys
    ):
        witness = brute_force_serializable(events, final_state, initial_state)
        details["brute_force_witness"] = witness
        if not witness:
            return Verdict(False, "FAIL", "no sequential order is a legal witness", details)
    return Verdict(True, "PASS", details=details)


def brute_force_serializable(
    events: Iterable[HistoryEvent],
    final_state: Dict[int, Set[int]],
    initial_state: Optional[Dict[int, Set[int]]] = None,
) -> bool:
    """True iff some sequential order of the committed transactions reproduces
    all recorded results and the final state."""
    txns, malformed = _collect(events)
    if malformed:
        return False
    committed = [t for t in txns.values() if t.committed]
    target = {k: set(v) for k, v in final_state.items()}
    for order in permutations(committed):
        graph, mismatch = _replay(list(order), initial_state)
        if mismatch is None and graph.state() == target:
            return True
    return False


def _commutes_raw(op_a, key_a, key2_a, op_b, key_b, key2_b) -> bool:
    if op_a == "Find" and op_b == "Find":
        return True
    if key_a != key_b:
        return True  # different vertexes never interact
    a_vertex = op_a in _VERTEX_OP_NAMES or (op_a == "Find" and key2_a is None)
    b_vertex = op_b in _VERTEX_OP_NAMES or (op_b == "Find" and key2_b is None)
    if a_vertex or b_vertex:
        return False  # vertex-level op against anything at the same vertex
    return key2_a != key2_b  # edge ops at one vertex commute on distinct edges


def ops_commute(a: Operation, b: Operation) -> bool:
    """Commutativity of two adjacency-list operations (committed outcomes)."""
    return _commutes_raw(a.type.value, a.key, a.key2, b.type.value, b.key, b.key2)


def check_commutativity_isolation(events: Iterable[HistoryEvent]) -> Verdict:
    """PASS iff no two non-commutative acquisitions of one node by different
    transactions happen without the earlier transaction reaching a terminal
    status in between."""
    events = list(events)
    txns, malformed = _collect(events)
    if malformed:
        return Verdict(False, "MALFORMED", malformed)
    acquires: Dict[int, List[HistoryEvent]] = {}
    for e in events:
        if e.kind == "acquire" and e.uid is not None:
            acquires.setdefault(e.uid, []).append(e)
    for uid, node_events in acquires.items():
        node_events.sort(key=lambda e: e.ts)
        for first, second in zip(node_events, node_events[1:]):
            if first.ticket == second.ticket:
                continue
            if _commutes_raw(first.op, first.key, first.key2, second.op, second.key, second.key2):
                continue
            earlier = txns.get(first.ticket)
            if earlier is None or earlier.terminal_ts is None:
                return Verdict(
                    False, "MALFORMED", f"transaction {first.ticket} acquired node {uid} but never terminated"
                )
            if earlier.terminal_ts > second.ts:
                return Verdict(
                    False,
                    "FAIL",
                    f"non-commutative acquisitions interleaved on node {uid}: "
                    f"tx {first.ticket} ({first.op}) not terminal before tx {second.ticket} ({second.op})",
                )
    return Verdict(True, "PASS")
