"""Transactional adjacency list: an ordered vertex list whose nodes each own a
multi-dimensional edge list, with every operation mediated by descriptor
acquisition (see core).

All five operations share the same skeleton: physically locate the target,
help whatever transaction currently holds it, then decide the operation on the
target's logical state and acquire it. A vertex deletion additionally sweeps
the whole edge sublist (finish_delete), so edge operations and vertex
deletions on the same vertex can never interleave without one transaction
reaching a terminal status in between.
"""

from __future__ import annotations

import itertools
from typing import Dict, Optional, Set

from .atomics import Link, LinkTag
from .core import (
    UpdateResult,
    execute_ops,
    guarded_install,
    is_key_present,
    update_info,
)
from .descriptors import (
    NodeInfo,
    Operation,
    OpType,
    SENTINEL_INFO,
    TransactionDescriptor,
    TxStatus,
)
from .mdlist import MDList, MDNode, key_to_coord
from .reclamation import EpochReclaimer

_vertex_uid = itertools.count(1)


class VertexNode:
    __slots__ = ("key", "info_word", "next_link", "sublist", "is_sentinel", "uid")

    def __init__(self, key: int, info: NodeInfo, sublist: Optional[MDList], sentinel: bool = False):
        self.key = key
        self.info_word = Link(info, LinkTag.CLEAN)
        self.next_link = Link(None, LinkTag.CLEAN)
        self.sublist = sublist
        self.is_sentinel = sentinel
        self.uid = -next(_vertex_uid)  # negative: disjoint from edge-node uids

    def freeze_next(self):
        """Dead-mark the successor link so no insert can land behind this node
        and traversals can unlink it in one step. Returns the successor."""
        while True:
            succ, tag = self.next_link.get()
            if tag is LinkTag.DEAD:
                return succ
            if self.next_link.cas(succ, LinkTag.CLEAN, succ, LinkTag.DEAD):
                return succ

    def on_retire(self) -> None:
        self.freeze_next()

    def physical_delete(self) -> None:
        # make the retirement unlinkable; the actual unlink happens during
        # vertex-list traversal
        self.freeze_next()

    def poison(self) -> None:
        self.info_word.poison()
        self.next_link.poison()


def _smallest_base(key_range: int, dim: int) -> int:
    base = 2
    while base**dim < key_range:
        base += 1
    return base


class AdjacencyList:
    """Shareable across threads; every method is safe for concurrent use."""

    def __init__(self, key_range: int = 500, dim: int = 3, recorder=None):
        if key_range < 2:
            raise ValueError("key_range must be at least 2")
        if dim < 1:
            raise ValueError("dim must be at least 1")
        self.key_range = key_range
        self.dim = dim
        self.base = _smallest_base(key_range, dim)
        self.head = VertexNode(0, SENTINEL_INFO, None, sentinel=True)
        self.recorder = recorder
        self.reclamation = EpochReclaimer()

    # -- request execution ---------------------------------------------------

    def execute(self, ops) -> "tuple[TxStatus, Optional[list]]":
        """Publish a descriptor for ops and run it to a terminal status."""
        for op in ops:
            self._validate(op)
        desc = TransactionDescriptor(ops, structure=self)
        with self.reclamation.pin():
            committed = execute_ops(desc, 0)
        if committed:
            return TxStatus.COMMITTED, [True] * desc.size
        return TxStatus.ABORTED, None

    def _validate(self, op: Operation) -> None:
        if not 1 <= op.key < self.key_range:
            raise ValueError(f"vertex key {op.key} outside [1, {self.key_range})")
        if op.key2 is not None and not 1 <= op.key2 < self.key_range:
            raise ValueError(f"edge key {op.key2} outside [1, {self.key_range})")

    def _execute_op(self, desc: TransactionDescriptor, opid: int) -> bool:
        op = desc.ops[opid]
        kind = op.type
        if kind is OpType.INSERT_VERTEX:
            return self.insert_vertex(op.key, NodeInfo(desc, opid, False))
        if kind is OpType.DELETE_VERTEX:
            return self.delete_vertex(op.key, NodeInfo(desc, opid, True))
        if kind is OpType.INSERT_EDGE:
            return self.insert_edge(op.key, op.key2, NodeInfo(desc, opid, False), opid)
        if kind is OpType.DELETE_EDGE:
            return self.delete_edge(op.key, op.key2, NodeInfo(desc, opid, True), opid)
        return self.find(op.key, op.key2, NodeInfo(desc, opid, True), opid)

    # -- vertex list traversal ------------------------------------------------

    def locate_pred_vertex(self, key: int):
        """(pred, curr): curr is the first vertex with key >= target (or None).
        Dead vertexes met on the way are unlinked (one link read per hop; a
        retired node's successor link carries the dead tag)."""
        while True:
            pred = self.head
            curr, _ = pred.next_link.get()
            restart = False
            while curr is not None:
                if curr.key >= key:
                    # candidate stop: a retired match must be removed first
                    _, itag = curr.info_word.get()
                    if itag is not LinkTag.DEAD:
                        break
                    succ = curr.freeze_next()
                    if pred.next_link.cas(curr, LinkTag.CLEAN, succ, LinkTag.CLEAN):
                        self.reclamation.retire(curr)
                        curr = succ
                        continue
                    restart = True
                    break
                succ, tag = curr.next_link.get()
                if tag is LinkTag.DEAD:
                    # dying node in transit: its successor link is frozen
                    if pred.next_link.cas(curr, LinkTag.CLEAN, succ, LinkTag.CLEAN):
                        self.reclamation.retire(curr)
                        curr = succ
                        continue
                    restart = True
                    break
                pred = curr
                curr = succ
            if not restart:
                return pred, curr

    # -- operations ------------------------------------------------------------

    def insert_vertex(self, key: int, info: NodeInfo) -> bool:
        while True:
            if info.desc.status is not TxStatus.ACTIVE:
                return False
            pred, curr = self.locate_pred_vertex(key)
            if curr is not None and curr.key == key:
                old, tag = curr.info_word.get()
                if tag is LinkTag.DEAD:
                    continue
                resident = old.desc.ops[old.opid]
                if (
                    resident.type is OpType.DELETE_VERTEX
                    and old.desc.status is TxStatus.COMMITTED
                ):
                    # committed deletion: the sublist is permanently swept, so
                    # retire the husk and splice a fresh vertex instead
                    if curr.info_word.cas(old, LinkTag.CLEAN, old, LinkTag.DEAD):
                        curr.freeze_next()
                    continue
                result = update_info(curr, info, False)
                if result is UpdateResult.SUCCESS:
                    return True
                if result is UpdateResult.FAIL:
                    return False
                continue
            node = VertexNode(key, info, MDList(self.dim, self.base))
            node.next_link = Link(curr, LinkTag.CLEAN)
            stamp = guarded_install(pred.next_link, curr, LinkTag.CLEAN, node, LinkTag.CLEAN, info.desc)
            if stamp is not None:
                self._note_fresh(info, node, stamp)
                return True

    def delete_vertex(self, key: int, info: NodeInfo) -> bool:
        while True:
            pred, curr = self.locate_pred_vertex(key)
            if curr is None or curr.key != key:
                return False
            result = update_info(curr, info, True)
            if result is UpdateResult.FAIL:
                return False
            if result is UpdateResult.RETRY:
                continue
            done = curr.sublist.finish_delete(curr.sublist.head, 0, info)
            if done and self.recorder is not None:
                self.recorder.emit("finish", info.desc.ticket, info.opid, OpType.DELETE_VERTEX, key)
            return done

    def find_vertex(self, key: int, info: NodeInfo, opid: int) -> Optional[VertexNode]:
        while True:
            pred, curr = self.locate_pred_vertex(key)
            if curr is None or curr.key != key:
                return None
            resident, tag = curr.info_word.get()
            if tag is LinkTag.DEAD:
                continue
            if resident.desc is not info.desc:
                op = resident.desc.ops[resident.opid]
                if op.type is OpType.DELETE_VERTEX and resident.desc.current_op == resident.opid:
                    execute_ops(resident.desc, resident.opid)
                else:
                    execute_ops(resident.desc, resident.opid + 1)
            if is_key_present(resident, info.desc):
                if info.desc.status is not TxStatus.ACTIVE:
                    return None
                return curr
            return None

    def insert_edge(self, vertex: int, edge: int, info: NodeInfo, opid: int) -> bool:
        coord = key_to_coord(edge, self.dim, self.base)
        node: Optional[MDNode] = None
        while True:
            if info.desc.status is not TxStatus.ACTIVE:
                return False
            curr_vertex = self.find_vertex(vertex, info, opid)
            if curr_vertex is None:
                return False
            sublist = curr_vertex.sublist
            if node is None:
                node = MDNode(edge, coord, info, self.dim)
            outcome, existing, stamp = sublist.try_insert(node)
            if outcome == "inserted":
                self._note_fresh(info, node, stamp)
                return True
            if outcome == "exists":
                result = update_info(existing, info, False)
                if result is UpdateResult.SUCCESS:
                    return True
                if result is UpdateResult.FAIL:
                    return False
            # blocked or contended: re-traverse (helping the blocker via find_vertex)

    def delete_edge(self, vertex: int, edge: int, info: NodeInfo, opid: int) -> bool:
        coord = key_to_coord(edge, self.dim, self.base)
        while True:
            curr_vertex = self.find_vertex(vertex, info, opid)
            if curr_vertex is None:
                return False
            target = curr_vertex.sublist.find_node(coord)
            if target is None:
                return False
            result = update_info(target, info, True)
            if result is UpdateResult.SUCCESS:
                return True
            if result is UpdateResult.FAIL:
                return False

    def find(self, vertex: int, edge: Optional[int], info: NodeInfo, opid: int) -> bool:
        while True:
            curr_vertex = self.find_vertex(vertex, info, opid)
            if curr_vertex is None:
                return False
            if edge is None:
                result = update_info(curr_vertex, info, True)
            else:
                target = curr_vertex.sublist.find_node(key_to_coord(edge, self.dim, self.base))
                if target is None:
                    return False
                result = update_info(target, info, True)
            if result is UpdateResult.SUCCESS:
                return True
            if result is UpdateResult.FAIL:
                return False

    def _note_fresh(self, info: NodeInfo, node, stamp: int) -> None:
        """Bookkeeping for a freshly spliced node (splice is the acquisition)."""
        desc = info.desc
        desc.touched.append(node)
        if self.recorder is not None:
            op = desc.ops[info.opid]
            self.recorder.emit(
                "acquire", desc.ticket, info.opid, op.type, op.key, op.key2, None, node.uid, ts=stamp
            )

    # -- quiescent inspection ---------------------------------------------------

    def logical_state(self) -> Dict[int, Set[int]]:
        """Vertex -> edge-set map of the logical contents. Quiescence assumed."""
        state: Dict[int, Set[int]] = {}
        node, _ = self.head.next_link.get()
        while node is not None:
            info, tag = node.info_word.get()
            if tag is not LinkTag.DEAD and is_key_present(info):
                state[node.key] = node.sublist.present_keys()
            node, _ = node.next_link.get()
        return state

    def vertex_keys(self) -> Set[int]:
        return set(self.logical_state())
