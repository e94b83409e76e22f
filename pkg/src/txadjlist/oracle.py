"""Sequential reference adjacency list: the ground truth every check replays
against. Deterministic, total, single-threaded."""

from __future__ import annotations

from typing import Dict, Iterable, List, Set, Tuple

from .descriptors import Operation, OpType


class SeqGraph:
    """Vertex -> edge-set map; edge sets exist only for present vertexes."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Dict[int, Set[int]] = None):
        self.vertices: Dict[int, Set[int]] = {k: set(v) for k, v in (vertices or {}).items()}

    def copy(self) -> "SeqGraph":
        return SeqGraph(self.vertices)

    def state(self) -> Dict[int, Set[int]]:
        return {k: set(v) for k, v in self.vertices.items()}

    def __eq__(self, other) -> bool:
        if isinstance(other, SeqGraph):
            return self.vertices == other.vertices
        if isinstance(other, dict):
            return self.vertices == other
        return NotImplemented

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        return f"SeqGraph({self.vertices!r})"


def seq_apply(graph: SeqGraph, op: Operation) -> bool:
    """Apply one operation, returning its semantic result."""
    vertices = graph.vertices
    kind = op.type
    if kind is OpType.INSERT_VERTEX:
        if op.key in vertices:
            return False
        vertices[op.key] = set()
        return True
    if kind is OpType.DELETE_VERTEX:
        if op.key not in vertices:
            return False
        del vertices[op.key]
        return True
    if kind is OpType.INSERT_EDGE:
        edges = vertices.get(op.key)
        if edges is None or op.key2 in edges:
            return False
        edges.add(op.key2)
        return True
    if kind is OpType.DELETE_EDGE:
        edges = vertices.get(op.key)
        if edges is None or op.key2 not in edges:
            return False
        edges.remove(op.key2)
        return True
    # Find
    if op.key2 is None:
        return op.key in vertices
    edges = vertices.get(op.key)
    return edges is not None and op.key2 in edges


def seq_apply_transaction(graph: SeqGraph, ops: Iterable[Operation]) -> Tuple[bool, List[bool]]:
    """All-or-nothing transaction semantics: any failing operation aborts and
    leaves the graph as it was. Returns (committed, per-op results)."""
    saved = graph.state()
    results: List[bool] = []
    for op in ops:
        ok = seq_apply(graph, op)
        results.append(ok)
        if not ok:
            graph.vertices = {k: set(v) for k, v in saved.items()}
            return False, results
    return True, results
