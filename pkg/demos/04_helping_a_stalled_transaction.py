"""
Helping: nobody waits for a stalled thread
==========================================

A transaction's descriptor carries everything needed to finish it, so any
thread that bumps into it simply executes the remaining operations itself.
Here the owner of a vertex deletion is suspended indefinitely right after
acquiring the vertex; a reader that needs that vertex completes the whole
transaction and then proceeds.
"""

import threading

from txadjlist import (
    AdjacencyList,
    NodeInfo,
    Operation,
    OpType,
    TransactionDescriptor,
    TxStatus,
)
from txadjlist import api

graph = AdjacencyList(key_range=32)
api.insert_vertex(graph, 7)
api.insert_edge(graph, 7, 3)

# The "owner" publishes a two-op transaction and performs only its first
# acquisition before stalling forever (we just never run the rest).
stalled = TransactionDescriptor(
    [Operation(OpType.DELETE_VERTEX, 7), Operation(OpType.INSERT_VERTEX, 9)],
    structure=graph,
)
assert graph.delete_vertex(7, NodeInfo(stalled, 0, True))
print("owner stalled mid-transaction; status:", stalled.status.name)

# A completely unrelated thread now touches vertex 7. Its traversal finds the
# pending descriptor and finishes the whole transaction before answering.
result = {}


def reader():
    result["find"] = api.find(graph, 7)


t = threading.Thread(target=reader)
t.start()
t.join()

print("reader's answer for vertex 7:", result["find"])
print("stalled transaction now:", stalled.status.name)
print("its second operation also ran: vertex 9 present:", api.find(graph, 9))
print("final state:", graph.logical_state())
assert stalled.status is TxStatus.COMMITTED
