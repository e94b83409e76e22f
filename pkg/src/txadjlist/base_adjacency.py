"""Plain concurrent adjacency list: the transaction-free base structure the
boosting baseline wraps.

Same vertex list and per-vertex multi-dimensional list as the transactional
structure, but membership is a single bit: a node is present while its info
word is clean and dead once tagged. Individual operations are linearizable
(deletion linearizes at the dead-tag CAS; insertion at the splice or
resurrection CAS); transaction-level isolation is the caller's business.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Set

from .adjacency import VertexNode, _smallest_base
from .atomics import Link, LinkTag
from .descriptors import PLAIN_PRESENT_INFO
from .mdlist import MDList, MDNode, key_to_coord
from .reclamation import EpochReclaimer


class PlainAdjacencyList:
    def __init__(self, key_range: int = 500, dim: int = 3):
        self.key_range = key_range
        self.dim = dim
        self.base = _smallest_base(key_range, dim)
        self.head = VertexNode(0, PLAIN_PRESENT_INFO, None, sentinel=True)
        self.reclamation = EpochReclaimer()

    # -- vertex list -----------------------------------------------------------

    def _locate(self, key: int):
        while True:
            pred = self.head
            curr, _ = pred.next_link.get()
            restart = False
            while curr is not None:
                if curr.key >= key:
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

    def insert_vertex(self, key: int) -> bool:
        while True:
            pred, curr = self._locate(key)
            if curr is not None and curr.key == key:
                return False
            node = VertexNode(key, PLAIN_PRESENT_INFO, MDList(self.dim, self.base))
            node.next_link = Link(curr, LinkTag.CLEAN)
            if pred.next_link.cas(curr, LinkTag.CLEAN, node, LinkTag.CLEAN):
                return True

    def delete_vertex(self, key: int) -> Optional[List[int]]:
        """Returns the vertex's edge keys when deleted, None when absent."""
        while True:
            pred, curr = self._locate(key)
            if curr is None or curr.key != key:
                return None
            old, tag = curr.info_word.get()
            if tag is LinkTag.DEAD:
                continue
            edges = self._edge_keys(curr.sublist)
            if curr.info_word.cas(old, LinkTag.CLEAN, old, LinkTag.DEAD):
                curr.freeze_next()
                return edges

    def find_vertex_node(self, key: int) -> Optional[VertexNode]:
        _, curr = self._locate(key)
        if curr is not None and curr.key == key:
            _, tag = curr.info_word.get()
            if tag is not LinkTag.DEAD:
                return curr
        return None

    # -- edges -------------------------------------------------------------------

    @staticmethod
    def _edge_alive(node: MDNode) -> bool:
        # dead slots may get recycled to the ground annotation by traversals;
        # only the plain-present annotation with a clean tag counts as a member
        info, tag = node.info_word.get()
        return tag is LinkTag.CLEAN and info is PLAIN_PRESENT_INFO

    def insert_edge(self, vertex: int, edge: int) -> bool:
        coord = key_to_coord(edge, self.dim, self.base)
        node: Optional[MDNode] = None
        while True:
            vnode = self.find_vertex_node(vertex)
            if vnode is None:
                return False
            if node is None:
                node = MDNode(edge, coord, PLAIN_PRESENT_INFO, self.dim)
            outcome, existing, _ = vnode.sublist.try_insert(node)
            if outcome == "inserted":
                return True
            if outcome == "exists":
                old, tag = existing.info_word.get()
                if tag is LinkTag.CLEAN and old is PLAIN_PRESENT_INFO:
                    return False
                # resurrect the dead or recycled slot
                if existing.info_word.cas(old, tag, PLAIN_PRESENT_INFO, LinkTag.CLEAN):
                    return True
            # blocked/contended: retry

    def delete_edge(self, vertex: int, edge: int) -> bool:
        coord = key_to_coord(edge, self.dim, self.base)
        while True:
            vnode = self.find_vertex_node(vertex)
            if vnode is None:
                return False
            target = vnode.sublist.find_node(coord)
            if target is None:
                return False
            if not self._edge_alive(target):
                return False
            if target.info_word.cas(PLAIN_PRESENT_INFO, LinkTag.CLEAN, PLAIN_PRESENT_INFO, LinkTag.DEAD):
                return True

    def find(self, vertex: int, edge: Optional[int] = None) -> bool:
        vnode = self.find_vertex_node(vertex)
        if vnode is None:
            return False
        if edge is None:
            return True
        target = vnode.sublist.find_node(key_to_coord(edge, self.dim, self.base))
        if target is None:
            return False
        return self._edge_alive(target)

    def edge_keys(self, vertex: int) -> List[int]:
        vnode = self.find_vertex_node(vertex)
        if vnode is None:
            return []
        return self._edge_keys(vnode.sublist)

    @staticmethod
    def _edge_keys(sublist: MDList) -> List[int]:
        return [node.key for node in sublist.nodes() if PlainAdjacencyList._edge_alive(node)]

    # -- inspection ----------------------------------------------------------------

    def logical_state(self) -> Dict[int, Set[int]]:
        state: Dict[int, Set[int]] = {}
        node, _ = self.head.next_link.get()
        while node is not None:
            _, tag = node.info_word.get()
            if tag is not LinkTag.DEAD:
                state[node.key] = set(self._edge_keys(node.sublist))
            node, _ = node.next_link.get()
        return state
