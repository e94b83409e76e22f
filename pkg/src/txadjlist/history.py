"""Concurrent history recording and its line-delimited wire format.

Each thread appends to its own buffer (no cross-thread synchronization on the
hot path); buffers are merged and timestamp-sorted at quiescence. Event kinds:

  invoke   an operation execution starts (helpers may duplicate these)
  respond  an operation execution returned a result
  acquire  a node's info word was taken by (ticket, opid)
  status   the transaction's single terminal transition (result: True=commit)
  finish   a DeleteVertex finished acquiring+marking the whole edge sublist

Dump format is one record per line, tab-separated:
  ticket  thread  kind  op  keys  result  timestamp
where op is "opid:OpName" (empty for status), keys is "key[:key2][#uid]" with
uid the acquired node's id, and result is ""/0/1.
"""

from __future__ import annotations

import threading
import time
from typing import IO, Iterable, List, NamedTuple, Optional, Union

from .descriptors import OpType


class HistoryEvent(NamedTuple):
    ts: int
    ticket: int
    thread: int
    kind: str
    opid: Optional[int]
    op: Optional[str]
    key: Optional[int]
    key2: Optional[int]
    result: Optional[bool]
    uid: Optional[int]


class Recorder:
    def __init__(self):
        self._buffers: List[list] = []
        self._lock = threading.Lock()
        self._local = threading.local()

    def _buffer(self) -> list:
        buf = getattr(self._local, "buf", None)
        if buf is None:
            buf = []
            self._local.buf = buf
            with self._lock:
                self._buffers.append(buf)
        return buf

    def emit(
        self,
        kind: str,
        ticket: int,
        opid: Optional[int] = None,
        op: Optional[OpType] = None,
        key: Optional[int] = None,
        key2: Optional[int] = None,
        result: Optional[bool] = None,
        uid: Optional[int] = None,
        ts: Optional[int] = None,
    ) -> None:
        self._buffer().append(
            HistoryEvent(
                ts if ts is not None else time.monotonic_ns(),
                ticket,
                threading.get_ident(),
                kind,
                opid,
                op.value if op is not None else None,
                key,
                key2,
                result,
                uid,
            )
        )

    def events(self) -> List[HistoryEvent]:
        """Merge per-thread buffers. Call at quiescence only."""
        with self._lock:
            buffers = list(self._buffers)
        merged: List[HistoryEvent] = []
        for buf in buffers:
            merged.extend(buf)
        merged.sort(key=lambda e: e.ts)
        return merged

    def clear(self) -> None:
        with self._lock:
            for buf in self._buffers:
                buf.clear()


def dump_history(events: Iterable[HistoryEvent], out: Union[str, IO[str]]) -> None:
    close = False
    if isinstance(out, str):
        out = open(out, "w")
        close = True
    try:
        for e in events:
            op = f"{e.opid}:{e.op}" if e.op is not None else ""
            keys = ""
            if e.key is not None:
                keys = str(e.key)
                if e.key2 is not None:
                    keys += f":{e.key2}"
            if e.uid is not None:
                keys += f"#{e.uid}"
            result = "" if e.result is None else ("1" if e.result else "0")
            out.write(f"{e.ticket}\t{e.thread}\t{e.kind}\t{op}\t{keys}\t{result}\t{e.ts}\n")
    finally:
        if close:
            out.close()


def load_history(src: Union[str, IO[str]]) -> List[HistoryEvent]:
    close = False
    if isinstance(src, str):
        src = open(src)
        close = True
    events: List[HistoryEvent] = []
    try:
        for line in src:
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 7:
                raise ValueError(f"malformed history line: {line!r}")
            ticket, thread, kind, op, keys, result, ts = parts
            opid = None
            opname = None
            if op:
                opid_s, opname = op.split(":", 1)
                opid = int(opid_s)
            key = key2 = uid = None
            if keys:
                if "#" in keys:
                    keys, uid_s = keys.split("#", 1)
                    uid = int(uid_s)
                if keys:
                    if ":" in keys:
                        k1, k2 = keys.split(":", 1)
                        key, key2 = int(k1), int(k2)
                    else:
                        key = int(keys)
            events.append(
                HistoryEvent(
                    int(ts),
                    int(ticket),
                    int(thread),
                    kind,
                    opid,
                    opname,
                    key,
                    key2,
                    None if result == "" else result == "1",
                    uid,
                )
            )
    finally:
        if close:
            src.close()
    return events
