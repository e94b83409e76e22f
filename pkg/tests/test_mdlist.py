import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from txadjlist import MDList, MDNode, NodeInfo, coord_to_key, key_to_coord
from txadjlist.atomics import LinkTag
from txadjlist.descriptors import (
    Operation,
    OpType,
    TransactionDescriptor,
    TxStatus,
)


def make_node(key, mdl):
    """Node owned by its own fresh Active transaction (committed on insert)."""
    desc = TransactionDescriptor([Operation(OpType.INSERT_EDGE, 1, key)])
    return MDNode(key, key_to_coord(key, mdl.dim, mdl.base), NodeInfo(desc, 0, False), mdl.dim)


def insert(mdl, node):
    """do_insert then settle the owning transaction, so the node reads present."""
    ok = mdl.do_insert(node)
    if ok:
        node.info_word.get()[0].desc.try_transition(TxStatus.COMMITTED)
    return ok


# -- coordinate mapping -------------------------------------------------------


def test_key_to_coord_trivial():
    assert key_to_coord(30, 3, 4) == (1, 3, 2)
    assert key_to_coord(0, 3, 4) == (0, 0, 0)


def test_key_to_coord_derived():
    # positional arithmetic oracle: 7*64 + 6*8 + 3 == 499
    coord = key_to_coord(499, 3, 8)
    assert coord == (7, 6, 3)
    assert 7 * 64 + 6 * 8 + 3 == 499
    assert coord_to_key(coord, 8) == 499


def test_key_to_coord_range_error():
    with pytest.raises(ValueError):
        key_to_coord(64, 3, 4)
    with pytest.raises(ValueError):
        key_to_coord(-1, 3, 4)


@given(st.integers(min_value=0, max_value=511), st.integers(min_value=1, max_value=4))
@settings(max_examples=200)
def test_coord_round_trip_is_identity(key, dim):
    base = 2
    while base**dim < 512:
        base += 1
    if key < base**dim:
        assert coord_to_key(key_to_coord(key, dim, base), base) == key


# -- locate_pred ---------------------------------------------------------------


def test_locate_pred_empty_list():
    mdl = MDList(3, 4)
    # first digit nonzero: predecessor is the head at dimension 0
    pred, curr, pd, cd = mdl.locate_pred(key_to_coord(30, 3, 4))
    assert pred is mdl.head and curr is None and (pd, cd) == (0, 0)
    # zero-prefixed coordinate: the scan stays on the head until the first
    # nonzero digit
    pred, curr, pd, cd = mdl.locate_pred(key_to_coord(2, 3, 4))
    assert pred is mdl.head and curr is None and pd == cd == 2


def test_locate_pred_single_node():
    mdl = MDList(3, 4)
    node = make_node(30, mdl)
    assert insert(mdl, node)
    pred, curr, pd, cd = mdl.locate_pred((1, 3, 2))
    assert curr is node and cd == 3


def test_locate_pred_two_nodes_miss():
    # derived trace: 5=(0,1,1), 9=(0,2,1); 9 hangs as 5's dimension-1 child,
    # so the scan for 7=(0,1,3) descends into 5 and ends with no successor
    mdl = MDList(3, 4)
    n5, n9 = make_node(5, mdl), make_node(9, mdl)
    assert insert(mdl, n5)
    assert insert(mdl, n9)
    pred, curr, pd, cd = mdl.locate_pred(key_to_coord(7, 3, 4))
    assert pred is n5
    assert curr is None
    assert (pd, cd) == (2, 2)


def test_search_steps_never_exceed_dim_times_base():
    import random

    rng = random.Random(7)
    mdl = MDList(3, 8)
    keys = rng.sample(range(1, 500), 250)
    for k in keys:
        assert insert(mdl, make_node(k, mdl))
    bound = 3 * 8
    for _ in range(2000):
        mdl.locate_pred(key_to_coord(rng.randrange(1, 500), 3, 8))
        assert mdl.last_search_steps <= bound


# -- do_insert ------------------------------------------------------------------


def test_insert_into_empty_links_at_head():
    mdl = MDList(3, 4)
    node = make_node(30, mdl)
    assert insert(mdl, node)
    ref, tag = mdl.head.children[0].get()
    assert ref is node and tag is LinkTag.CLEAN


def test_insert_adopts_displaced_child():
    # 16=(1,0,0) displaces 30=(1,3,2), which becomes its dimension-1 child
    mdl = MDList(3, 4)
    n30 = make_node(30, mdl)
    n16 = make_node(16, mdl)
    assert insert(mdl, n30)
    assert insert(mdl, n16)
    ref, _ = mdl.head.children[0].get()
    assert ref is n16
    child, tag = n16.children[1].get()
    assert child is n30 and tag is LinkTag.CLEAN
    mdl.check_structure()


def test_insert_blocked_by_marked_link():
    mdl = MDList(3, 4)
    blocker = TransactionDescriptor([Operation(OpType.DELETE_VERTEX, 1)])
    ref, _ = mdl.head.children[0].get()
    assert mdl.head.children[0].cas(ref, LinkTag.CLEAN, ref, blocker)
    node = make_node(30, mdl)
    assert mdl.do_insert(node) is False
    # no mutation: link still marked with the same reference
    ref2, tag2 = mdl.head.children[0].get()
    assert ref2 is ref and tag2 is blocker


def test_insert_duplicate_key_reports_exists():
    mdl = MDList(3, 4)
    first = make_node(30, mdl)
    assert insert(mdl, first)
    outcome, existing, _ = mdl.try_insert(make_node(30, mdl))
    assert outcome == "exists" and existing is first


def test_stale_mark_from_terminal_transaction_is_cleaned():
    mdl = MDList(3, 4)
    dead = TransactionDescriptor([Operation(OpType.DELETE_VERTEX, 1)])
    dead.try_transition(TxStatus.ABORTED)
    ref, _ = mdl.head.children[0].get()
    assert mdl.head.children[0].cas(ref, LinkTag.CLEAN, ref, dead)
    node = make_node(30, mdl)
    assert mdl.do_insert(node) is False  # blocked once, cleans the stale mark
    assert insert(mdl, node) is True  # and then goes through
    mdl.check_structure()


def test_sequential_equivalence_with_sorted_set():
    import random

    rng = random.Random(21)
    mdl = MDList(3, 8)
    reference = set()
    for _ in range(600):
        key = rng.randrange(1, 500)
        node = make_node(key, mdl)
        outcome, _, _ = mdl.try_insert(node)
        if key in reference:
            assert outcome == "exists"
        else:
            assert outcome == "inserted"
            node.info_word.get()[0].desc.try_transition(TxStatus.COMMITTED)
            reference.add(key)
    assert {n.key for n in mdl.nodes()} == reference
    assert mdl.present_keys() == reference
    mdl.check_structure()


def test_structure_invariants_random_orders():
    import random

    for seed in range(5):
        rng = random.Random(seed)
        mdl = MDList(3, 4)
        keys = list(range(1, 64))
        rng.shuffle(keys)
        for k in keys:
            assert insert(mdl, make_node(k, mdl))
        mdl.check_structure()
        assert {n.key for n in mdl.nodes()} == set(range(1, 64))


# -- finish_delete ----------------------------------------------------------------


def active_delete_info():
    desc = TransactionDescriptor([Operation(OpType.DELETE_VERTEX, 1)])
    return NodeInfo(desc, 0, True)


def test_finish_delete_empty_sublist_marks_head_links():
    mdl = MDList(3, 4)
    info = active_delete_info()
    assert mdl.finish_delete(mdl.head, 0, info) is True
    for d in range(3):
        _, tag = mdl.head.children[d].get()
        assert tag is info.desc


def test_finish_delete_acquires_every_node_and_marks_every_link():
    mdl = MDList(3, 4)
    n30, n16 = make_node(30, mdl), make_node(16, mdl)
    assert insert(mdl, n30) and insert(mdl, n16)
    info = active_delete_info()
    assert mdl.finish_delete(mdl.head, 0, info) is True
    for node in (mdl.head, n16, n30):
        resident, tag = node.info_word.get()
        assert resident.desc is info.desc and tag is LinkTag.CLEAN
    # every child link reachable from the head carries the mark
    for node, start in ((mdl.head, 0), (n16, 0), (n30, 1)):
        for d in range(start, 3):
            _, tag = node.children[d].get()
            assert tag is info.desc, (node.key, d, tag)


def test_finish_delete_stops_when_transaction_left_active():
    mdl = MDList(3, 4)
    assert insert(mdl, make_node(30, mdl))
    info = active_delete_info()
    info.desc.try_transition(TxStatus.ABORTED)
    assert mdl.finish_delete(mdl.head, 0, info) is False


def test_finish_delete_blocks_concurrent_splice():
    mdl = MDList(3, 4)
    info = active_delete_info()
    assert mdl.finish_delete(mdl.head, 0, info) is True
    assert mdl.do_insert(make_node(30, mdl)) is False  # marked link blocks it
