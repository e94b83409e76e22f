"""
Transactions on the adjacency list
==================================

Every operation, or any sequence of operations, runs as one atomic
transaction: either all of it becomes visible at a single instant, or none
of it does.
"""

from txadjlist import (
    AdjacencyList,
    Operation,
    OpType,
    TransactionRequest,
    execute_transaction,
    insert_edge,
    insert_vertex,
    delete_vertex,
    find,
)

graph = AdjacencyList(key_range=64)

# Single operations are one-op transactions.
print("insert vertex 5:", insert_vertex(graph, 5))
print("insert vertex 5 again:", insert_vertex(graph, 5))  # already present
print("insert edge 5->7:", insert_edge(graph, 5, 7))
print("find edge 5->7:", find(graph, 5, 7))
print("state:", graph.logical_state())

# A multi-operation transaction commits or aborts as a unit.
request = TransactionRequest(
    [
        Operation(OpType.INSERT_VERTEX, 1),
        Operation(OpType.INSERT_VERTEX, 2),
        Operation(OpType.INSERT_EDGE, 1, 2),
    ]
)
result = execute_transaction(graph, request)
print("\nbatch:", result.status.name, result.results)
print("state:", graph.logical_state())

# If any operation fails, the whole transaction rolls back logically; no
# physical undo happens, the nodes simply read as their pre-transaction state.
doomed = TransactionRequest(
    [
        Operation(OpType.INSERT_VERTEX, 9),
        Operation(OpType.INSERT_EDGE, 9, 3),
        Operation(OpType.INSERT_VERTEX, 9),  # duplicate: fails, aborts everything
    ]
)
result = execute_transaction(graph, doomed)
print("\ndoomed batch:", result.status.name)
print("state unchanged:", graph.logical_state())

# Deleting a vertex atomically removes its whole edge set: the composed
# "check the sublist is empty, then delete" pattern is unnecessary.
print("\ndelete vertex 5:", delete_vertex(graph, 5))
print("edge 5->7 afterwards:", find(graph, 5, 7))
print("final state:", graph.logical_state())
