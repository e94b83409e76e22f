"""Multi-dimensional list: the per-vertex ordered edge container.

Keys map to fixed-length base-b digit vectors; the list is a rooted tree in
which a node's dimension-d child shares its first d digits and has a larger
d-th digit. Search walks one chain per dimension (at most b nodes each), so a
lookup never follows more than D*b links.

Concurrency notes:
  * Every child slot is an atomic (ref, tag) word. An insert splices with one
    CAS of the predecessor's slot; displaced-child adoption runs after the
    splice and is helper-completable (the new node carries an adoption record,
    its pending slots read UNSET, donor slots are frozen as they are copied).
  * A vertex-deletion sweep marks slots by CAS-ing the owning transaction's
    descriptor into the tag. Splices over a marked slot fail and re-traverse;
    marks whose descriptor is terminal are stale and get cleaned by splicers.
  * Physical deletion is recycling in place: a node whose info word was marked
    dead has it reset to the immortal ground "absent" annotation.
"""

from __future__ import annotations

import itertools
from typing import Optional, Tuple

from .atomics import Link, LinkTag
from .core import (
    UpdateResult,
    guarded_install,
    is_key_present,
    update_info,
)
from .descriptors import (
    GROUND_ABSENT_INFO,
    NodeInfo,
    SENTINEL_INFO,
    TransactionDescriptor,
    TxStatus,
)

Coordinate = Tuple[int, ...]

_node_uid = itertools.count(1)


def key_to_coord(key: int, dim: int, base: int) -> Coordinate:
    """The D base-b digits of key, most-significant first."""
    if key < 0 or key >= base**dim:
        raise ValueError(f"key {key} outside [0, {base**dim})")
    digits = [0] * dim
    for i in range(dim - 1, -1, -1):
        digits[i] = key % base
        key //= base
    return tuple(digits)


def coord_to_key(coord: Coordinate, base: int) -> int:
    key = 0
    for digit in coord:
        key = key * base + digit
    return key


class AdoptRecord:
    """Pending child adoption: copy source.children[dim_from:dim_to] into the
    adopting node. Any thread may complete it."""

    __slots__ = ("source", "dim_from", "dim_to")

    def __init__(self, source: "MDNode", dim_from: int, dim_to: int):
        self.source = source
        self.dim_from = dim_from
        self.dim_to = dim_to


class MDNode:
    __slots__ = ("key", "coord", "children", "info_word", "adopt", "is_sentinel", "uid")

    def __init__(self, key: int, coord: Coordinate, info: NodeInfo, dim: int, sentinel: bool = False):
        self.key = key
        self.coord = coord
        self.children = [Link(None, LinkTag.CLEAN) for _ in range(dim)]
        self.info_word = Link(info, LinkTag.CLEAN)
        self.adopt: Optional[AdoptRecord] = None
        self.is_sentinel = sentinel
        self.uid = next(_node_uid)

    def physical_delete(self) -> None:
        """Recycle a dead slot: reset the marked info word to ground-absent."""
        old, tag = self.info_word.get()
        if tag is LinkTag.DEAD:
            self.info_word.cas(old, LinkTag.DEAD, GROUND_ABSENT_INFO, LinkTag.CLEAN)

    def poison(self) -> None:
        for link in self.children:
            link.poison()
        self.info_word.poison()


class MDList:
    """Handle for one vertex's edge set."""

    __slots__ = ("dim", "base", "head", "last_search_steps")

    def __init__(self, dim: int, base: int):
        if dim < 1 or base < 2:
            raise ValueError("need dim >= 1 and base >= 2")
        self.dim = dim
        self.base = base
        self.head = MDNode(0, (0,) * dim, SENTINEL_INFO, dim, sentinel=True)
        self.last_search_steps = 0

    # -- traversal ---------------------------------------------------------

    def _read_child(self, node: MDNode, d: int):
        while True:
            ref, tag = node.children[d].get()
            if tag is LinkTag.UNSET:
                self.finish_adopt(node)
                continue
            return ref, tag

    def locate_pred(self, coord: Coordinate):
        """Find the insertion point for coord.

        Returns (pred, curr, pred_dim, curr_dim); curr_dim == dim means curr
        is the node with exactly this coordinate. Dead slots passed on the way
        are recycled opportunistically.
        """
        pred: Optional[MDNode] = None
        pred_dim = 0
        curr: Optional[MDNode] = self.head
        curr_dim = 0
        steps = 0
        dim = self.dim
        while curr_dim < dim:
            target = coord[curr_dim]
            while curr is not None and target > curr.coord[curr_dim]:
                pred = curr
                pred_dim = curr_dim
                curr, _ = self._read_child(curr, curr_dim)
                steps += 1
                if curr is not None:
                    _, itag = curr.info_word.get()
                    if itag is LinkTag.DEAD:
                        curr.physical_delete()
            if curr is None or target < curr.coord[curr_dim]:
                break
            curr_dim += 1
        self.last_search_steps = steps
        return pred, curr, pred_dim, curr_dim

    def find_node(self, coord: Coordinate) -> Optional[MDNode]:
        _, curr, _, curr_dim = self.locate_pred(coord)
        return curr if curr_dim == self.dim else None

    # -- adoption ----------------------------------------------------------

    def finish_adopt(self, node: MDNode) -> None:
        record = node.adopt
        if record is None:
            return
        source = record.source
        for d in range(record.dim_from, record.dim_to):
            while True:
                _, tag = node.children[d].get()
                if tag is not LinkTag.UNSET:
                    break
                sref, stag = source.children[d].get()
                if stag is LinkTag.UNSET:
                    self.finish_adopt(source)
                    continue
                if stag is LinkTag.FROZEN:
                    node.children[d].cas(None, LinkTag.UNSET, sref, LinkTag.CLEAN)
                    continue
                # freeze the donor slot so no splice can land there after copy
                source.children[d].cas(sref, stag, sref, LinkTag.FROZEN)
        node.adopt = None

    # -- insertion ---------------------------------------------------------

    def do_insert(self, node: MDNode) -> bool:
        """Splice node at its coordinate position with one CAS of the
        predecessor's child slot. False (and no mutation) when the slot is
        marked, changed, or the key is physically present; callers re-traverse.
        node.info_word must already carry the inserting transaction's info.
        """
        outcome, _, _ = self.try_insert(node)
        return outcome == "inserted"

    def try_insert(self, node: MDNode):
        """("inserted", node, splice_stamp) | ("exists", curr, None) |
        ("blocked", None, None)."""
        pred, curr, pred_dim, curr_dim = self.locate_pred(node.coord)
        if curr_dim == self.dim:
            return "exists", curr, None
        node.adopt = None
        for d in range(self.dim):
            node.children[d] = Link(None, LinkTag.CLEAN)
        if curr is not None and pred_dim < curr_dim:
            node.adopt = AdoptRecord(curr, pred_dim, curr_dim)
            for d in range(pred_dim, curr_dim):
                node.children[d] = Link(None, LinkTag.UNSET)
        if curr_dim < self.dim:
            node.children[curr_dim] = Link(curr, LinkTag.CLEAN)
        desc = node.info_word.get()[0].desc
        stamp = guarded_install(pred.children[pred_dim], curr, LinkTag.CLEAN, node, LinkTag.CLEAN, desc)
        if stamp is not None:
            self.finish_adopt(node)
            return "inserted", node, stamp
        ref, tag = pred.children[pred_dim].get()
        if tag is LinkTag.UNSET:
            self.finish_adopt(pred)
        elif isinstance(tag, TransactionDescriptor):
            own = node.info_word.get()[0].desc
            if tag.status is not TxStatus.ACTIVE or tag is own:
                # stale mark: the marking transaction is terminal, or it is this
                # transaction's own completed vertex-deletion step (a later
                # operation of the same transaction may splice here again)
                pred.children[pred_dim].cas(ref, tag, ref, LinkTag.CLEAN)
        return "blocked", None, None

    # -- vertex-deletion sweep ----------------------------------------------

    def finish_delete(self, node: MDNode, dc: int, info: NodeInfo) -> bool:
        """Acquire node and every descendant in dimensions [dc, dim) for the
        pending vertex deletion, marking each child slot with the deleting
        transaction's descriptor. True once the whole reachable sublist is
        acquired and marked; False when the transaction is no longer Active.
        """
        desc = info.desc
        while True:
            result = update_info(node, info, None)
            if result is UpdateResult.SUCCESS:
                break
            if result is UpdateResult.FAIL:
                return False
            # RETRY: recycled slot or contention; try again
        for d in range(dc, self.dim):
            while True:
                ref, tag = node.children[d].get()
                if tag is LinkTag.UNSET:
                    self.finish_adopt(node)
                    continue
                if tag is desc:
                    child = ref
                    break
                # CLEAN or a stale mark from an older (terminal) deletion
                node.children[d].cas(ref, tag, ref, desc)
            if child is not None:
                if not self.finish_delete(child, d, info):
                    return False
        return True

    # -- inspection (quiescent) ---------------------------------------------

    def nodes(self):
        """All physically linked non-sentinel nodes (quiescent walk)."""
        stack = [(self.head, 0)]
        while stack:
            node, dc = stack.pop()
            if not node.is_sentinel:
                yield node
            for d in range(dc, self.dim):
                ref, tag = node.children[d].get()
                if tag is LinkTag.UNSET:
                    self.finish_adopt(node)
                    ref, tag = node.children[d].get()
                if ref is not None:
                    stack.append((ref, d))

    def present_keys(self) -> set:
        """Logical key set at quiescence."""
        keys = set()
        for node in self.nodes():
            info, tag = node.info_word.get()
            if tag is LinkTag.DEAD:
                continue
            if is_key_present(info):
                keys.add(node.key)
        return keys

    def check_structure(self) -> None:
        """Assert the dimension/prefix invariants for every physical node."""
        stack = [(self.head, 0)]
        while stack:
            node, node_dim = stack.pop()
            child_count = 0
            for d in range(self.dim):
                ref, tag = node.children[d].get()
                if tag is LinkTag.UNSET:
                    self.finish_adopt(node)
                    ref, tag = node.children[d].get()
                if tag is LinkTag.FROZEN or ref is None:
                    continue
                assert d >= node_dim, f"child at dimension {d} below node dimension {node_dim}"
                assert ref.coord[:d] == node.coord[:d], "coordinate prefix mismatch"
                assert ref.coord[d] > node.coord[d], "child digit must exceed parent digit"
                child_count += 1
                stack.append((ref, d))
            assert child_count <= self.dim - node_dim, "too many children for dimension"
