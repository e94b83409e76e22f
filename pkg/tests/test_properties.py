"""Executable forms of the documented invariants that are not covered by the
operation-level tests: helper idempotence, the commutativity table as observed
behavior, and structural confinement."""

import random
import threading

import pytest

from txadjlist import (
    AdjacencyList,
    Operation,
    OpType,
    Recorder,
    SeqGraph,
    TransactionDescriptor,
    TxStatus,
    check_commutativity_isolation,
    execute_ops,
    seq_apply,
)
from txadjlist import api


def iv(k):
    return Operation(OpType.INSERT_VERTEX, k)


def dv(k):
    return Operation(OpType.DELETE_VERTEX, k)


def ie(v, e):
    return Operation(OpType.INSERT_EDGE, v, e)


def de(v, e):
    return Operation(OpType.DELETE_EDGE, v, e)


def fi(v, e=None):
    return Operation(OpType.FIND, v, e)


def test_concurrent_helpers_apply_exactly_once():
    """k threads running execute_ops on one descriptor produce the same
    terminal status and abstract state as a single execution would."""
    for k in (2, 4, 8):
        for seed in range(6):
            rng = random.Random(f"{k}:{seed}")
            ops = []
            for _ in range(4):
                kind = rng.choice([OpType.INSERT_VERTEX, OpType.INSERT_EDGE, OpType.FIND])
                key = rng.randrange(1, 8)
                if kind is OpType.INSERT_EDGE:
                    ops.append(Operation(kind, key, rng.randrange(1, 8)))
                else:
                    ops.append(Operation(kind, key))
            # reference outcome on a fresh structure
            ref = AdjacencyList(key_range=8)
            ref_desc = TransactionDescriptor(ops, structure=ref)
            ref_committed = execute_ops(ref_desc)

            s = AdjacencyList(key_range=8)
            desc = TransactionDescriptor(ops, structure=s)
            barrier = threading.Barrier(k)
            outcomes = []

            def helper():
                barrier.wait()
                outcomes.append(execute_ops(desc, 0))

            threads = [threading.Thread(target=helper) for _ in range(k)]
            for t in threads:
                t.start()
            for t in threads:
                t.join()
            assert len(set(outcomes)) == 1
            assert outcomes[0] == ref_committed
            assert desc.status is ref_desc.status
            assert s.logical_state() == ref.logical_state()


COMMUTING_PAIRS = [
    # (setup ops, first txn, second txn) per the documented commuting cases
    ([], [iv(1)], [iv(2)]),
    ([iv(1), iv(2)], [dv(1)], [dv(2)]),
    ([iv(2)], [iv(1)], [dv(2)]),
    ([iv(1)], [ie(1, 5)], [ie(1, 6)]),
    ([iv(1), iv(2)], [ie(1, 5)], [ie(2, 5)]),
    ([iv(1), ie(1, 5), ie(1, 6)], [de(1, 5)], [de(1, 6)]),
    ([iv(1), iv(2), ie(1, 5), ie(2, 5)], [de(1, 5)], [de(2, 5)]),
    ([iv(1), ie(1, 6)], [ie(1, 5)], [de(1, 6)]),
    ([iv(1), iv(2), ie(2, 5)], [ie(1, 5)], [de(2, 5)]),
    ([iv(1)], [fi(1)], [fi(1)]),
]


@pytest.mark.parametrize("case", range(len(COMMUTING_PAIRS)))
def test_commuting_pairs_never_suffer_helped_aborts(case):
    """Both singleton transactions of a commuting pair commit under
    concurrent execution (repeated to cover interleavings)."""
    setup, left, right = COMMUTING_PAIRS[case]
    for _ in range(30):
        s = AdjacencyList(key_range=16)
        for op in setup:
            status, _ = s.execute([op])
            assert status is TxStatus.COMMITTED
        barrier = threading.Barrier(2)
        results = {}

        def run(tag, ops):
            barrier.wait()
            status, _ = s.execute(list(ops))
            results[tag] = status

        a = threading.Thread(target=run, args=("left", left))
        b = threading.Thread(target=run, args=("right", right))
        a.start(), b.start()
        a.join(), b.join()
        assert results["left"] is TxStatus.COMMITTED, (case, results)
        assert results["right"] is TxStatus.COMMITTED, (case, results)


NON_COMMUTING_PAIRS = [
    ([], [iv(1)], [iv(1)]),
    ([iv(1), ie(1, 5)], [dv(1)], [dv(1)]),
    ([iv(1)], [ie(1, 5)], [ie(1, 5)]),
    ([iv(1), ie(1, 5)], [de(1, 5)], [de(1, 5)]),
]


@pytest.mark.parametrize("case", range(len(NON_COMMUTING_PAIRS)))
def test_non_commuting_same_target_at_most_one_commits(case):
    setup, left, right = NON_COMMUTING_PAIRS[case]
    for _ in range(30):
        rec = Recorder()
        s = AdjacencyList(key_range=16, recorder=rec)
        for op in setup:
            status, _ = s.execute([op])
            assert status is TxStatus.COMMITTED
        barrier = threading.Barrier(2)
        results = []

        def run(ops):
            barrier.wait()
            status, _ = s.execute(list(ops))
            results.append(status)

        a = threading.Thread(target=run, args=(left,))
        b = threading.Thread(target=run, args=(right,))
        a.start(), b.start()
        a.join(), b.join()
        assert results.count(TxStatus.COMMITTED) <= 1, (case, results)
        assert check_commutativity_isolation(rec.events()).ok


def test_sublist_confinement():
    """Every edge node is reachable from exactly one vertex's sublist."""
    rng = random.Random(5)
    s = AdjacencyList(key_range=32)
    for _ in range(400):
        kind = rng.choice([OpType.INSERT_VERTEX, OpType.INSERT_EDGE, OpType.DELETE_EDGE])
        if kind is OpType.INSERT_VERTEX:
            api.insert_vertex(s, rng.randrange(1, 32))
        elif kind is OpType.INSERT_EDGE:
            api.insert_edge(s, rng.randrange(1, 32), rng.randrange(1, 32))
        else:
            api.delete_edge(s, rng.randrange(1, 32), rng.randrange(1, 32))
    seen = {}
    node, _ = s.head.next_link.get()
    while node is not None:
        for edge_node in node.sublist.nodes():
            assert edge_node.uid not in seen, (
                f"edge node {edge_node.key} reachable from vertexes "
                f"{seen[edge_node.uid]} and {node.key}"
            )
            seen[edge_node.uid] = node.key
        node, _ = node.next_link.get()


def test_quiescent_extraction_matches_oracle_single_threaded():
    """logical_state itself is validated against the oracle on a
    single-threaded run (the checker leans on this extraction)."""
    rng = random.Random(9)
    s = AdjacencyList(key_range=24)
    g = SeqGraph()
    for _ in range(2000):
        kind = rng.choice(list(OpType))
        key = rng.randrange(1, 24)
        if kind in (OpType.INSERT_EDGE, OpType.DELETE_EDGE):
            op = Operation(kind, key, rng.randrange(1, 24))
        else:
            op = Operation(kind, key)
        status, _ = s.execute([op])
        assert (status is TxStatus.COMMITTED) == seq_apply(g, op)
    assert s.logical_state() == g.state()
