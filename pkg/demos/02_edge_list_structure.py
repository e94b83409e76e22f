"""
Inside a vertex's edge list
===========================

Each vertex owns a multi-dimensional list: keys map to fixed-length base-b
digit vectors and nodes hang off each other by shared coordinate prefixes.
A search walks at most one chain per dimension, so it never follows more
than D*b links regardless of how many keys are stored.
"""

import random

from txadjlist import (
    MDList,
    MDNode,
    NodeInfo,
    Operation,
    OpType,
    TransactionDescriptor,
    TxStatus,
    coord_to_key,
    key_to_coord,
)

DIM, BASE = 3, 4

# Key 30 in base 4 is digits (1, 3, 2): 1*16 + 3*4 + 2.
print("coord of 30:", key_to_coord(30, DIM, BASE))
print("back to key:", coord_to_key(key_to_coord(30, DIM, BASE), BASE))

mdl = MDList(DIM, BASE)


def insert(key):
    desc = TransactionDescriptor([Operation(OpType.INSERT_EDGE, 1, key)])
    node = MDNode(key, key_to_coord(key, DIM, BASE), NodeInfo(desc, 0, False), DIM)
    assert mdl.do_insert(node)
    desc.try_transition(TxStatus.COMMITTED)
    return node


# Inserting 30 first, then 16=(1,0,0): 16 takes 30's place under the head and
# adopts 30 as its dimension-1 child (they share the digit prefix "1").
n30 = insert(30)
n16 = insert(16)
child, _ = n16.children[1].get()
print("\n16 adopted 30 as its dimension-1 child:", child is n30)

# Fill the list and watch the search bound hold.
rng = random.Random(1)
for key in rng.sample(range(1, 64), 40):
    if key not in (16, 30):
        insert(key)
mdl.check_structure()  # prefix/dimension invariants hold for every node

worst = 0
for _ in range(5000):
    mdl.locate_pred(key_to_coord(rng.randrange(1, 64), DIM, BASE))
    worst = max(worst, mdl.last_search_steps)
print(f"present keys: {len(mdl.present_keys())}")
print(f"worst search: {worst} link steps (bound {DIM * BASE})")
