"""Descriptor machinery: info-word acquisition, logical status, helping.

update_info is the single conflict-detection point. Every mutation of the
structures acquires a node by CAS-ing its info word to the acquiring
transaction's NodeInfo; whoever finds a foreign in-flight transaction helps it
run to completion first. A transaction's visibility flips for all its nodes in
the one terminal status transition; aborting therefore needs no physical undo,
nodes of an aborted transaction simply read as their pre-transaction state.
"""

from __future__ import annotations

import threading
from enum import Enum
from typing import Optional

from .atomics import LinkTag
from .descriptors import NodeInfo, OpType, TransactionDescriptor, TxStatus


class UpdateResult(Enum):
    SUCCESS = "success"
    FAIL = "fail"
    RETRY = "retry"


_FORWARD_PRESENT = (OpType.INSERT_VERTEX, OpType.INSERT_EDGE, OpType.FIND)


def _forward_presence(info: NodeInfo) -> bool:
    return info.desc.ops[info.opid].type in _FORWARD_PRESENT


def is_key_present(info: NodeInfo, reader: Optional[TransactionDescriptor] = None) -> bool:
    """Logical presence of a node from its annotation.

    Committed transactions read forward (inserts/Find present, deletes
    absent); aborted ones read as the state before the transaction first
    touched the node; a pending transaction is visible forward only to
    itself, outsiders keep seeing the pre-transaction state.
    """
    status = info.desc.status
    if status is TxStatus.COMMITTED:
        return _forward_presence(info)
    if status is TxStatus.ABORTED:
        return info.present_before
    if reader is not None and reader is info.desc:
        return _forward_presence(info)
    return info.present_before


def terminal_presence(info: NodeInfo) -> bool:
    """Presence under a terminal status (callers guarantee terminality)."""
    if info.desc.status is TxStatus.COMMITTED:
        return _forward_presence(info)
    return info.present_before


def guarded_install(link, exp_ref, exp_tag, new_ref, new_tag, desc: TransactionDescriptor):
    """CAS that is atomic with a status re-check: the install lands only while
    desc is still Active (the transition takes the same lock), so no
    acquisition or splice can take effect after the transaction settled.
    Immortal annotations never transition, so they install unconditionally.
    Returns the swap instant (monotonic ns) on success, None otherwise."""
    if desc.immortal:
        return link.cas_stamped(exp_ref, exp_tag, new_ref, new_tag)
    with desc.install_lock:
        if desc.status is not TxStatus.ACTIVE:
            return None
        return link.cas_stamped(exp_ref, exp_tag, new_ref, new_tag)


_help_ctx = threading.local()


def _help_stack() -> list:
    stack = getattr(_help_ctx, "stack", None)
    if stack is None:
        stack = []
        _help_ctx.stack = stack
    return stack


def update_info(node, info: NodeInfo, wantkey: Optional[bool]) -> UpdateResult:
    """One acquisition attempt of node's info word for (info.desc, info.opid).

    wantkey=True/False gates on the node's logical presence; None skips the
    gate (vertex-deletion sublist sweeps acquire dead slots as well). FAIL is
    terminal for the operation (presence mismatch, or the acquiring
    transaction already left Active); RETRY means re-traverse and try again.
    """
    old, tag = node.info_word.get()
    if tag is LinkTag.DEAD:
        node.physical_delete()
        return UpdateResult.RETRY
    if old.desc is not info.desc:
        resident = old.desc.ops[old.opid]
        if resident.type is OpType.DELETE_VERTEX and old.desc.current_op == old.opid:
            # vertex deletion still pending: re-run it from its own index
            execute_ops(old.desc, old.opid)
        else:
            execute_ops(old.desc, old.opid + 1)
    elif old.opid >= info.opid:
        return UpdateResult.SUCCESS  # already applied by a helper
    if node.is_sentinel:
        haskey = True
    else:
        haskey = is_key_present(old, info.desc)
    if wantkey is not None and haskey is not wantkey:
        return UpdateResult.FAIL
    if info.desc.status is not TxStatus.ACTIVE:
        return UpdateResult.FAIL
    if old.desc is info.desc:
        baseline = old.present_before  # carry the first-touch baseline forward
    else:
        baseline = haskey
    install = info if info.present_before is baseline else NodeInfo(info.desc, info.opid, baseline)
    stamp = guarded_install(node.info_word, old, tag, install, LinkTag.CLEAN, info.desc)
    if stamp is not None:
        desc = info.desc
        desc.touched.append(node)
        structure = desc.structure
        if structure is not None and structure.recorder is not None:
            op = desc.ops[info.opid]
            structure.recorder.emit(
                "acquire", desc.ticket, info.opid, op.type, op.key, op.key2, None, node.uid, ts=stamp
            )
        return UpdateResult.SUCCESS
    return UpdateResult.RETRY


def execute_ops(desc: TransactionDescriptor, opid: int = 0) -> bool:
    """Run desc.ops[opid..) against the descriptor's structure, helping-safe.

    Any thread may call this for any descriptor; all side effects go through
    update_info, so duplicate execution is harmless. A helping cycle (this
    thread is already executing desc further up its call stack) is broken by
    aborting the younger of the two descriptors.
    """
    if desc.status is not TxStatus.ACTIVE:
        return desc.status is TxStatus.COMMITTED

    stack = _help_stack()
    for entry in stack:
        if entry is desc:
            top = stack[-1]
            victim = desc if desc.ticket > top.ticket else top
            if victim.try_transition(TxStatus.ABORTED):
                _record_status(victim)
            return desc.status is TxStatus.COMMITTED

    structure = desc.structure
    recorder = structure.recorder if structure is not None else None
    stack.append(desc)
    try:
        start = desc.current_op
        if opid > start:
            start = opid
        i = start
        while i < desc.size:
            if desc.status is not TxStatus.ACTIVE:
                break
            desc.advance_current_op(i)
            op = desc.ops[i]
            if recorder is not None:
                recorder.emit("invoke", desc.ticket, i, op.type, op.key, op.key2)
            ok = structure._execute_op(desc, i)
            if recorder is not None:
                recorder.emit("respond", desc.ticket, i, op.type, op.key, op.key2, ok)
            if not ok:
                if desc.current_op > i:
                    # stale verdict: another executor already carried the
                    # transaction past this operation; fall back in line
                    i = desc.current_op
                    continue
                if desc.try_transition(TxStatus.ABORTED):
                    _record_status(desc)
                break
            i += 1
        else:
            if desc.try_transition(TxStatus.COMMITTED):
                _record_status(desc)
    finally:
        stack.pop()
    _after_terminal(desc)
    return desc.status is TxStatus.COMMITTED


def _record_status(desc: TransactionDescriptor) -> None:
    structure = desc.structure
    if structure is not None and structure.recorder is not None:
        structure.recorder.emit(
            "status",
            desc.ticket,
            result=desc.status is TxStatus.COMMITTED,
            ts=desc.terminal_ts,
        )


def _after_terminal(desc: TransactionDescriptor) -> None:
    if desc.status is TxStatus.ACTIVE or desc._mark_done:
        return
    mark_delete(desc.touched, desc)


def mark_delete(touched, desc: TransactionDescriptor) -> None:
    """Mark the info word of every touched node whose terminal logical state
    is absent, enabling later physical unlink/recycling by traversals."""
    for node in touched:
        if node.is_sentinel:
            continue
        old, tag = node.info_word.get()
        if tag is not LinkTag.CLEAN:
            continue
        if old.desc is not desc:
            continue  # re-acquired since; not ours to mark
        if terminal_presence(old):
            continue
        if node.info_word.cas(old, LinkTag.CLEAN, old, LinkTag.DEAD):
            retire_hook = getattr(node, "on_retire", None)
            if retire_hook is not None:
                retire_hook()
    desc._mark_done = True
