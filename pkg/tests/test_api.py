import pytest

from txadjlist import (
    AdjacencyList,
    Operation,
    OpType,
    SeqGraph,
    TransactionRequest,
    TxStatus,
    execute_transaction,
    seq_apply_transaction,
)
from txadjlist import api


def test_multi_op_commit_reports_per_op_results():
    s = AdjacencyList(key_range=64)
    result = execute_transaction(
        s,
        TransactionRequest(
            [
                Operation(OpType.INSERT_VERTEX, 1),
                Operation(OpType.INSERT_VERTEX, 2),
                Operation(OpType.INSERT_EDGE, 1, 2),
            ]
        ),
    )
    assert result.committed
    assert result.status is TxStatus.COMMITTED
    assert result.results == [True, True, True]
    assert s.logical_state() == {1: {2}, 2: set()}


def test_find_on_empty_aborts():
    s = AdjacencyList(key_range=64)
    result = execute_transaction(s, TransactionRequest([Operation(OpType.FIND, 1)]))
    assert result.status is TxStatus.ABORTED
    assert result.results is None


def test_delete_vertex_subsumes_sublist_emptiness():
    s = AdjacencyList(key_range=64)
    api.insert_vertex(s, 5)
    api.insert_edge(s, 5, 7)
    result = execute_transaction(
        s, TransactionRequest([Operation(OpType.DELETE_VERTEX, 5)])
    )
    assert result.committed
    assert s.logical_state() == {}
    assert api.find(s, 5) is False
    # deleting a vertex that never existed aborts
    result = execute_transaction(
        s, TransactionRequest([Operation(OpType.DELETE_VERTEX, 5)])
    )
    assert not result.committed


def test_empty_request_rejected():
    with pytest.raises(ValueError):
        TransactionRequest([])


def test_out_of_range_keys_rejected():
    s = AdjacencyList(key_range=64)
    with pytest.raises(ValueError):
        execute_transaction(s, TransactionRequest([Operation(OpType.INSERT_VERTEX, 0)]))
    with pytest.raises(ValueError):
        execute_transaction(s, TransactionRequest([Operation(OpType.INSERT_VERTEX, 64)]))
    with pytest.raises(ValueError):
        execute_transaction(s, TransactionRequest([Operation(OpType.INSERT_EDGE, 1, 99)]))


def test_single_op_helpers():
    s = AdjacencyList(key_range=64)
    assert api.insert_vertex(s, 5) is True
    assert api.insert_vertex(s, 5) is False
    assert api.delete_edge(s, 5, 7) is False
    assert api.insert_edge(s, 5, 7) is True
    assert api.find(s, 5, 7) is True
    assert api.delete_edge(s, 5, 7) is True
    assert api.delete_vertex(s, 5) is True
    assert api.find(s, 5) is False


def test_exactly_once_against_oracle():
    import random

    rng = random.Random(11)
    s = AdjacencyList(key_range=16)
    g = SeqGraph()
    for _ in range(300):
        size = rng.randrange(1, 5)
        ops = []
        for _ in range(size):
            kind = rng.choice(list(OpType))
            k = rng.randrange(1, 16)
            if kind in (OpType.INSERT_EDGE, OpType.DELETE_EDGE):
                ops.append(Operation(kind, k, rng.randrange(1, 16)))
            else:
                ops.append(Operation(kind, k))
        result = execute_transaction(s, TransactionRequest(ops))
        committed, _ = seq_apply_transaction(g, ops)
        assert result.committed == committed
    assert s.logical_state() == g.state()
