import itertools

import networkx as nx
import pytest

from dualpower.contraction import (
    ContractedSet, Snapshot, StructureClass, Want, classify, find_contracted_set, induced_structure,
    is_contracted_set, leaves,
)
from dualpower.errors import ContractError, InputError
from dualpower.instance import Instance, PowerAssignment, induce_graph

from helpers import mixed_instance, nx_digraph

# four two-node components; each representative reaches only the next one
RING4 = Instance(((6, 6), (6, 7), (6, 9), (7, 9), (8, 5), (9, 5), (9, 7), (9, 8)), 1, 5)
RING4_SET = ContractedSet((0, 1, 2, 3), (0, 2, 5, 7))

ONE_LEAF = Instance(((0, 0), (0, 3), (3, 0), (3, 4), (3, 6)), 1, 13)
COMBINED = Instance(((0, 6), (1, 3), (3, 1), (3, 5), (6, 3)), 2, 13)
TWO_LEAVES = Instance(((0, 2), (0, 4), (1, 6), (4, 5)), 1, 13)


def d2(p, q):
    return (p.x - q.x) ** 2 + (p.y - q.y) ** 2


def merged_oracle(inst, high, comps_nodes, reps):
    g = nx_digraph(inst.n, induce_graph(inst, PowerAssignment(set(high) | set(reps))).arcs())
    want = set().union(*comps_nodes)
    return any(want <= c for c in nx.strongly_connected_components(g))


def leaves_oracle(inst, high, comps, reps):
    snap = Snapshot(inst, high)
    members = snap.part.components
    cg = nx.Graph()
    cg.add_nodes_from(range(len(members)))
    for i, j in itertools.combinations(range(len(members)), 2):
        if any(d2(inst.points[u], inst.points[v]) <= inst.rh_sq for u in members[i] for v in members[j]):
            cg.add_edge(i, j)
    found = set()
    cset = set(comps)
    for t, c in enumerate(comps):
        rest = [x for x in comps if x != c]
        rest_r = [r for x, r in zip(comps, reps) if x != c]
        if len(rest) > 1 and not merged_oracle(inst, high, [members[x] for x in rest], rest_r):
            continue
        detour = False
        for target in rest:
            h = cg.subgraph(set(range(len(members))) - (cset - {c, target})).copy()
            if h.has_edge(c, target):
                h.remove_edge(c, target)
            if nx.has_path(h, c, target):
                detour = True
        if detour:
            continue
        ok = True
        for u in members[c]:
            hit = {snap.part.comp_of[v] for v in range(inst.n)
                   if v != u and d2(inst.points[u], inst.points[v]) <= inst.rh_sq} - {c}
            if hit & (cset - {c}) and hit - cset:
                ok = False
        if ok:
            found.add(c)
    return found


def test_close_pair_is_contracted():
    inst = Instance(((0, 0), (0, 2)), 1, 4)
    assert is_contracted_set(inst, PowerAssignment(), (0, 1), (0, 1))


def test_far_pair_is_not_contracted():
    inst = Instance(((0, 0), (0, 2), (0, 4)), 1, 4)
    assert not is_contracted_set(inst, PowerAssignment(), (0, 2), (0, 2))


def test_rep_outside_component_rejected():
    with pytest.raises(InputError):
        is_contracted_set(RING4, PowerAssignment(), (0, 1), (0, 1))


def test_ring_structure_is_directed_four_cycle():
    st = induced_structure(RING4, PowerAssignment(), RING4_SET)
    assert st.arcs == {(0, 2), (2, 3), (3, 1), (1, 0)}
    assert leaves(RING4, PowerAssignment(), st) == frozenset()
    assert classify(st, 0) is StructureClass.SIMPLE_CYCLE


def test_pair_structure_antiparallel():
    inst = Instance(((0, 0), (0, 2)), 1, 4)
    st = induced_structure(inst, PowerAssignment(), ContractedSet((0, 1), (0, 1)))
    assert st.arcs == {(0, 1), (1, 0)}


def test_structure_of_non_set_raises():
    inst = Instance(((0, 0), (0, 2), (0, 4)), 1, 4)
    with pytest.raises(ContractError):
        induced_structure(inst, PowerAssignment(), ContractedSet((0, 2), (0, 2)))


def test_one_leaf_shape():
    st = induced_structure(ONE_LEAF, PowerAssignment(), ContractedSet((0, 1, 2, 3), (0, 1, 2, 3)))
    lv = leaves(ONE_LEAF, PowerAssignment(), st)
    assert lv == {2}
    assert classify(st, len(lv)) is StructureClass.ONE_LEAF


def test_combined_cycles_shape():
    st = induced_structure(COMBINED, PowerAssignment(), ContractedSet((0, 1, 2, 4), (0, 1, 2, 4)))
    assert leaves(COMBINED, PowerAssignment(), st) == frozenset()
    assert classify(st, 0) is StructureClass.COMBINED_CYCLES


def test_two_leaves_shape():
    st = induced_structure(TWO_LEAVES, PowerAssignment(), ContractedSet((0, 1, 2, 3), (0, 1, 2, 3)))
    lv = leaves(TWO_LEAVES, PowerAssignment(), st)
    assert lv == {0, 3}
    assert classify(st, len(lv)) is StructureClass.TWO_PLUS_LEAVES


def test_ring_with_extra_component_has_no_leaves():
    # dropping any ring member leaves a path, which is not a contracted set
    inst = Instance(RING4.points + ((20, 20),), 1, 5)
    snap = Snapshot(inst)
    assert snap.n_components == 5
    st = snap.structure(RING4_SET)
    assert snap.leaves(st) == frozenset()


def test_classify_is_total_and_exclusive():
    st = induced_structure(RING4, PowerAssignment(), RING4_SET)
    assert [classify(st, n) for n in range(4)] == [
        StructureClass.SIMPLE_CYCLE, StructureClass.ONE_LEAF,
        StructureClass.TWO_PLUS_LEAVES, StructureClass.TWO_PLUS_LEAVES,
    ]


def test_single_component_has_no_sets():
    inst = Instance(((0, 0), (0, 1)), 1, 4)
    for want in (Want((2,)), Want.at_least(2, 1), Want((4,), frozenset(StructureClass))):
        assert find_contracted_set(inst, PowerAssignment(), want) is None


def test_ring_found_as_simple_cycle():
    hit = find_contracted_set(RING4, PowerAssignment(), Want((4,), frozenset({StructureClass.SIMPLE_CYCLE}), True))
    assert hit is not None and hit[0] == RING4_SET


@pytest.mark.parametrize("seed", range(30))
def test_contracted_sets_agree_with_recomputation(seed):
    inst = mixed_instance(seed, 4, 8)
    high = set(range(0, inst.n, 4))
    snap = Snapshot(inst, high)
    members = [sorted(c) for c in snap.part.components]
    for size in range(2, min(4, len(members)) + 1):
        expected = []
        for comps in itertools.combinations(range(len(members)), size):
            for reps in itertools.product(*(members[c] for c in comps)):
                if merged_oracle(inst, high, [members[c] for c in comps], reps):
                    expected.append(ContractedSet(comps, reps))
        assert list(snap.iter_sets(size)) == expected
        hit = find_contracted_set(inst, PowerAssignment(high), Want((size,)))
        assert (hit[0] if hit else None) == (expected[0] if expected else None)
        for cset in expected:
            after = Snapshot(inst, high | set(cset.reps)).n_components
            assert after <= len(members) - (size - 1)


@pytest.mark.parametrize("seed", range(40))
def test_structures_and_leaves_agree_with_direct_evaluation(seed):
    inst = mixed_instance(seed, 4, 8)
    snap = Snapshot(inst)
    members = snap.part.components
    for size in range(2, min(6, len(members)) + 1):
        for cset in itertools.islice(snap.iter_sets(size), 6):
            st = snap.structure(cset)
            arcs = {(c, d) for c, r in zip(cset.comps, cset.reps) for d in cset.comps
                    if d != c and any(d2(inst.points[r], inst.points[v]) <= inst.rh_sq for v in members[d])}
            assert st.arcs == arcs
            assert snap.leaves(st) == leaves_oracle(inst, set(), cset.comps, cset.reps)


def test_search_is_deterministic():
    inst = mixed_instance(3, 8, 9)
    want = Want.at_least(2, 9)
    assert find_contracted_set(inst, PowerAssignment(), want) == find_contracted_set(inst, PowerAssignment(), want)
