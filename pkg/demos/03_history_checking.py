"""
Recording and checking concurrent histories
===========================================

With a recorder attached, every invoke/respond/acquire/status event is
captured per thread and merged at quiescence. The checker replays committed
transactions in commit order on the sequential oracle and verifies both the
recorded results and the final state; a second check verifies that
non-commutative acquisitions of one node never interleave without a terminal
status in between.
"""

import io
import random
import threading

from txadjlist import (
    AdjacencyList,
    Operation,
    OpType,
    Recorder,
    check_commutativity_isolation,
    check_strict_serializability,
    dump_history,
    load_history,
)

recorder = Recorder()
graph = AdjacencyList(key_range=16, recorder=recorder)

KINDS = list(OpType)


def worker(seed):
    rng = random.Random(seed)
    for _ in range(200):
        ops = []
        for _ in range(3):
            kind = rng.choice(KINDS)
            key = rng.randrange(1, 16)
            if kind in (OpType.INSERT_EDGE, OpType.DELETE_EDGE):
                ops.append(Operation(kind, key, rng.randrange(1, 16)))
            else:
                ops.append(Operation(kind, key))
        graph.execute(ops)


threads = [threading.Thread(target=worker, args=(seed,)) for seed in range(4)]
for t in threads:
    t.start()
for t in threads:
    t.join()

events = recorder.events()
state = graph.logical_state()
print(f"recorded {len(events)} events, final state has {len(state)} vertexes")

verdict = check_strict_serializability(events, state)
print("strict serializability:", verdict.code, verdict.reason or "")
verdict = check_commutativity_isolation(events)
print("commutativity isolation:", verdict.code, verdict.reason or "")

# Histories round-trip through a line-delimited dump for offline re-checking.
buffer = io.StringIO()
dump_history(events, buffer)
buffer.seek(0)
reloaded = load_history(buffer)
print("dump/load round-trip:", reloaded == events)
print("offline verdict:", check_strict_serializability(reloaded, state).code)
print("\nfirst three records:")
buffer.seek(0)
for line, _ in zip(buffer, range(3)):
    print(" ", line.rstrip())
