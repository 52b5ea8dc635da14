import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from dualpower.contraction import Snapshot
from dualpower.digraph import is_strongly_connected
from dualpower.dpa import (
    RunTrace, audit_trace, dpa_approx, phase3_optimal, ratio_bound, stage_opts, two_set_cover_solve,
)
from dualpower.errors import AuditError, ContractError, InputError
from dualpower.instance import Instance, PowerAssignment, induce_graph
from dualpower.oracles import dpa_opt

from helpers import mixed_instance

BRIDGED = Instance(((0, 0), (1, 0), (0, 1), (3, 0), (4, 0), (4, 1)), 2, 4)
# three two-node components; each representative reaches only the next one
RING3 = Instance(((1, 5), (2, 4), (3, 7), (5, 2), (5, 4), (5, 7)), 4, 16)
RING4 = Instance(((6, 6), (6, 7), (6, 9), (7, 9), (8, 5), (9, 5), (9, 7), (9, 8)), 1, 5)


def test_connected_low_graph_needs_nothing():
    inst = Instance(((0, 0), (0, 1), (1, 1)), 1, 4)
    res = dpa_approx(inst)
    assert res.assignment.high == frozenset()
    assert audit_trace(res.trace).ok


def test_bridge_costs_one_node_per_side():
    res = dpa_approx(BRIDGED)
    assert res.assignment.high == {1, 3}
    assert len(dpa_opt(BRIDGED)) == 2


def test_rejects_small_k_and_infeasible():
    with pytest.raises(InputError):
        dpa_approx(BRIDGED, k=4)
    with pytest.raises(InputError):
        dpa_approx(Instance(((0, 0), (0, 9)), 1, 4))


def test_ratio_bound_values():
    assert ratio_bound(8) == Fraction(11, 7)
    assert ratio_bound(24) == Fraction(35, 23)
    assert ratio_bound(2) == 2
    with pytest.raises(ValueError):
        ratio_bound(1)


def test_phase3_connected_returns_empty():
    inst = Instance(((0, 0), (0, 1)), 1, 4)
    assert phase3_optimal(inst, PowerAssignment()).high == frozenset()


def test_phase3_three_ring_takes_its_reps():
    snap = Snapshot(RING3)
    assert snap.n_components == 3
    got = phase3_optimal(RING3, PowerAssignment()).high
    assert sorted(snap.part.comp_of[u] for u in got) == [0, 1, 2]
    assert len(dpa_opt(RING3)) == 3


def test_phase3_mutual_triangle():
    inst = Instance(((0, 0), (0, 2), (2, 0)), 1, 8)
    assert phase3_optimal(inst, PowerAssignment()).high == {0, 1, 2}


def test_phase3_rejects_oversized_set():
    with pytest.raises(ContractError, match="size 4"):
        phase3_optimal(RING4, PowerAssignment())


@pytest.mark.parametrize("seed", range(25))
def test_phase3_matches_brute_force_after_phase2(seed):
    inst = mixed_instance(seed)
    r3 = PowerAssignment(frozenset(dpa_approx(inst).trace.r3))
    extra = phase3_optimal(inst, r3)
    assert is_strongly_connected(induce_graph(inst, r3.union(extra.high)))
    assert len(extra) == len(dpa_opt(inst, base=r3))


def test_two_set_cover_examples():
    assert len(two_set_cover_solve(["a", "b"], [{"a", "b"}])) == 1
    chosen = two_set_cover_solve(["a", "b", "c"], [{"a"}, {"b"}, {"c"}, {"a", "b"}])
    assert sorted(chosen) == [2, 3]


def test_two_set_cover_errors():
    with pytest.raises(InputError):
        two_set_cover_solve([1, 2], [{1}])
    with pytest.raises(InputError):
        two_set_cover_solve([1, 2, 3], [{1, 2, 3}])


@st.composite
def cover_instances(draw):
    n = draw(st.integers(1, 12))
    elems = list(range(n))
    sets = draw(st.lists(st.sets(st.sampled_from(elems), min_size=1, max_size=2), max_size=16))
    sets += [{e} for e in elems if not any(e in s for s in sets)]
    return elems, sets


@settings(max_examples=200, deadline=None)
@given(cover_instances())
def test_two_set_cover_is_minimum(inst):
    elems, sets = inst
    chosen = two_set_cover_solve(elems, sets)
    assert set().union(*(sets[t] for t in chosen)) == set(elems)
    best = next(size for size in range(len(sets) + 1)
                if any(set().union(*(sets[t] for t in c)) == set(elems)
                       for c in itertools.combinations(range(len(sets)), size)))
    assert len(chosen) == best


@pytest.mark.parametrize("seed", range(40))
def test_run_invariants(seed):
    inst = mixed_instance(seed)
    res = dpa_approx(inst)
    assert is_strongly_connected(induce_graph(inst, res.assignment))
    assert audit_trace(res.trace).ok
    for rec in res.trace.iterations:
        for c in rec.contractions:
            assert c["merged"] >= 2
    assert [r.i for r in res.trace.iterations] == [7, 6, 5, 4]


def test_trace_json_round_trip():
    res = dpa_approx(mixed_instance(4))
    doc = json.loads(json.dumps(res.trace.to_dict()))
    assert RunTrace.from_dict(doc) == res.trace
    assert set(doc["iterations"][0]) >= {"i", "n_i", "b_i", "b_ij", "leaves", "contractions"}


def test_audit_rejects_malformed_trace():
    res = dpa_approx(mixed_instance(4))
    bad = RunTrace.from_dict(res.trace.to_dict())
    bad.iterations.pop()
    with pytest.raises(AuditError):
        audit_trace(bad)
    bad = RunTrace.from_dict(res.trace.to_dict())
    bad.iterations[0].b_i += 1
    with pytest.raises(AuditError):
        audit_trace(bad)


def test_audit_flags_broken_recurrence():
    res = dpa_approx(mixed_instance(4))
    bad = RunTrace.from_dict(res.trace.to_dict())
    bad.iterations[1].n_i += 1
    assert not audit_trace(bad).ok


def test_audit_flags_impossible_stage_opt():
    res = dpa_approx(mixed_instance(7, 8, 11))
    opts = stage_opts(mixed_instance(7, 8, 11), res.trace)
    assert audit_trace(res.trace, opts).ok
    n3 = res.trace.n3
    if n3 > 1:
        opts[3] = 2 * (n3 - 1) + 1
        assert not audit_trace(res.trace, opts).ok


@pytest.mark.parametrize("seed", range(8))
def test_stage_bounds_hold_on_small_runs(seed):
    inst = mixed_instance(seed, 6, 10)
    res = dpa_approx(inst)
    rep = audit_trace(res.trace, stage_opts(inst, res.trace))
    assert rep.ok, rep.lines()


def test_larger_k_runs():
    inst = mixed_instance(2)
    res = dpa_approx(inst, k=10)
    assert res.trace.k == 10 and is_strongly_connected(induce_graph(inst, res.assignment))
    assert audit_trace(res.trace).ok
