import random
import threading

from txadjlist import (
    BoostedAdjacencyList,
    Operation,
    OpType,
    Recorder,
    SeqGraph,
    TransactionRequest,
    check_strict_serializability,
    execute_transaction,
    seq_apply_transaction,
)
from txadjlist import api


def iv(k):
    return Operation(OpType.INSERT_VERTEX, k)


def ie(v, e):
    return Operation(OpType.INSERT_EDGE, v, e)


def test_singleton_matches_lftt_semantics():
    b = BoostedAdjacencyList(key_range=64)
    assert api.insert_vertex(b, 5) is True
    assert api.insert_vertex(b, 5) is False
    assert api.insert_edge(b, 5, 7) is True
    assert api.find(b, 5, 7) is True
    assert api.delete_vertex(b, 5) is True
    assert api.find(b, 5) is False


def test_abort_physically_undoes_completed_ops():
    b = BoostedAdjacencyList(key_range=64)
    api.insert_vertex(b, 1)
    result = execute_transaction(
        b, TransactionRequest([ie(1, 2), ie(9, 9)])  # second op fails
    )
    assert not result.committed
    assert b.logical_state() == {1: set()}  # edge (1,2) removed by the undo log


def test_delete_vertex_acquires_one_lock_per_edge_plus_vertex():
    b = BoostedAdjacencyList(key_range=512)
    api.insert_vertex(b, 5)
    for e in range(1, 101):
        api.insert_edge(b, 5, e)
    result = execute_transaction(b, TransactionRequest([Operation(OpType.DELETE_VERTEX, 5)]))
    assert result.committed
    assert b.last_txn_locks == 101  # the vertex plus its 100 edges


def test_undo_restores_vertex_and_edges_on_aborted_delete():
    b = BoostedAdjacencyList(key_range=64)
    api.insert_vertex(b, 5)
    api.insert_edge(b, 5, 7)
    api.insert_edge(b, 5, 9)
    result = execute_transaction(
        b, TransactionRequest([Operation(OpType.DELETE_VERTEX, 5), iv(5), iv(5)])
    )
    assert not result.committed
    assert b.logical_state() == {5: {7, 9}}


def test_oracle_equivalence_sequential():
    rng = random.Random(3)
    b = BoostedAdjacencyList(key_range=16)
    g = SeqGraph()
    for _ in range(400):
        size = rng.randrange(1, 4)
        ops = []
        for _ in range(size):
            kind = rng.choice(list(OpType))
            k = rng.randrange(1, 16)
            if kind in (OpType.INSERT_EDGE, OpType.DELETE_EDGE):
                ops.append(Operation(kind, k, rng.randrange(1, 16)))
            else:
                ops.append(Operation(kind, k))
        result = execute_transaction(b, TransactionRequest(ops))
        committed, _ = seq_apply_transaction(g, ops)
        assert result.committed == committed
    assert b.logical_state() == g.state()


def test_concurrent_boosted_history_is_strictly_serializable():
    rec = Recorder()
    b = BoostedAdjacencyList(key_range=12, recorder=rec)
    barrier = threading.Barrier(4)

    def worker(seed):
        rng = random.Random(seed)
        barrier.wait()
        for _ in range(60):
            ops = []
            for _ in range(3):
                kind = rng.choice(list(OpType))
                k = rng.randrange(1, 12)
                if kind in (OpType.INSERT_EDGE, OpType.DELETE_EDGE):
                    ops.append(Operation(kind, k, rng.randrange(1, 12)))
                else:
                    ops.append(Operation(kind, k))
            execute_transaction(b, TransactionRequest(ops))

    threads = [threading.Thread(target=worker, args=(s,)) for s in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    verdict = check_strict_serializability(rec.events(), b.logical_state())
    assert verdict.ok, verdict.reason


def test_no_deadlock_under_vertex_edge_contention():
    b = BoostedAdjacencyList(key_range=8)
    api.insert_vertex(b, 1)
    barrier = threading.Barrier(6)
    done = []

    def vertex_worker():
        barrier.wait()
        for _ in range(50):
            execute_transaction(b, TransactionRequest([Operation(OpType.DELETE_VERTEX, 1)]))
            execute_transaction(b, TransactionRequest([iv(1)]))
        done.append(True)

    def edge_worker(seed):
        rng = random.Random(seed)
        barrier.wait()
        for _ in range(50):
            e = rng.randrange(1, 8)
            execute_transaction(b, TransactionRequest([ie(1, e)]))
            execute_transaction(b, TransactionRequest([Operation(OpType.DELETE_EDGE, 1, e)]))
        done.append(True)

    threads = [threading.Thread(target=vertex_worker) for _ in range(2)]
    threads += [threading.Thread(target=edge_worker, args=(s,)) for s in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join(timeout=30)
        assert not t.is_alive(), "worker did not finish: possible deadlock"
    assert len(done) == 6
