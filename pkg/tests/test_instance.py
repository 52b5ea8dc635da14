import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from dualpower.digraph import is_strongly_connected, scc
from dualpower.errors import GenerationError, InputError, ParseError
from dualpower.instance import (
    Instance, Point, PowerAssignment, generate_instance, induce_graph, read_assignment,
    read_instance, write_assignment, write_instance,
)

from helpers import direct_arcs, mixed_instance


def test_two_close_points_low_range_both_ways():
    inst = Instance(((0, 0), (0, 1)), 1, 4)
    assert set(induce_graph(inst, PowerAssignment()).arcs()) == {(0, 1), (1, 0)}


def test_only_high_node_reaches_far():
    inst = Instance(((0, 0), (0, 2)), 1, 4)
    assert set(induce_graph(inst, PowerAssignment({0})).arcs()) == {(0, 1)}


def test_boundary_distance_is_inside():
    inst = Instance(((0, 0), (3, 4)), 25, 25)
    assert induce_graph(inst, PowerAssignment()).has_arc(0, 1)


def test_induce_rejects_out_of_range_id():
    inst = Instance(((0, 0), (0, 1)), 1, 4)
    with pytest.raises(InputError):
        induce_graph(inst, PowerAssignment({5}))


@pytest.mark.parametrize("seed", range(20))
def test_arcs_match_double_loop(seed):
    inst = generate_instance(8, 10, 4, 25, seed)
    rng = random.Random(seed)
    for _ in range(5):
        high = {u for u in range(inst.n) if rng.random() < 0.4}
        assert set(induce_graph(inst, PowerAssignment(high)).arcs()) == direct_arcs(inst, high)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.data())
def test_monotone_and_low_symmetric(seed, data):
    inst = mixed_instance(seed, 2, 9)
    small = data.draw(st.sets(st.integers(0, inst.n - 1)))
    big = small | data.draw(st.sets(st.integers(0, inst.n - 1)))
    a_small = set(induce_graph(inst, PowerAssignment(small)).arcs())
    a_big = set(induce_graph(inst, PowerAssignment(big)).arcs())
    assert a_small <= a_big
    for u, v in a_small:
        if u not in small and v not in small:
            assert (v, u) in a_small


def test_generate_single_point():
    inst = generate_instance(1, 3, 1, 2, seed=0)
    assert inst.n == 1 and inst.is_feasible()


def test_generate_is_deterministic():
    assert generate_instance(9, 12, 4, 25, 3) == generate_instance(9, 12, 4, 25, 3)


def test_generate_n10_seed7_feasible():
    inst = generate_instance(10, 20, 4, 64, seed=7)
    assert is_strongly_connected(induce_graph(inst, PowerAssignment(range(10))))
    assert len(set(inst.points)) == 10
    assert all(0 <= p.x <= 20 and 0 <= p.y <= 20 for p in inst.points)


def test_generate_gives_up_with_budget_in_message():
    with pytest.raises(GenerationError, match="5"):
        generate_instance(4, 100, 1, 1, seed=0, max_tries=5)


def test_generate_rejects_bad_params():
    with pytest.raises(InputError):
        generate_instance(0, 5, 1, 2, 0)
    with pytest.raises(InputError):
        generate_instance(10, 1, 1, 2, 0)


def test_read_minimal_document():
    inst = read_instance('{"points": [[0,0],[1,0]], "rl_sq": 1, "rh_sq": 1}\n')
    assert inst.n == 2 and inst.points[1] == Point(1, 0)


@pytest.mark.parametrize("doc, path", [
    ({"points": [[0, 0], [1, 0]], "rl_sq": 5, "rh_sq": 4}, "$.rl_sq"),
    ({"points": [[0, 0], [0, 0]], "rl_sq": 1, "rh_sq": 4}, "$.points[1]"),
    ({"points": [[0, 0], [1, "a"]], "rl_sq": 1, "rh_sq": 4}, "$.points[1][1]"),
    ({"points": [[0, 0], [1]], "rl_sq": 1, "rh_sq": 4}, "$.points[1]"),
    ({"points": [[0, 0]], "rh_sq": 4}, "$.rl_sq"),
    ({"points": [[0, 0], [9, 9]], "rl_sq": 1, "rh_sq": 4}, "$"),
    ({"points": [], "rl_sq": 1, "rh_sq": 4}, "$.points"),
    ({"points": [[0, 0]], "rl_sq": 0, "rh_sq": 4}, "$.rl_sq"),
])
def test_read_rejects_with_field_path(doc, path):
    with pytest.raises(ParseError) as info:
        read_instance(json.dumps(doc))
    assert info.value.path == path


def test_read_rejects_bad_json():
    with pytest.raises(ParseError):
        read_instance("{nope")


@pytest.mark.parametrize("seed", range(50))
def test_write_read_round_trip(seed):
    inst = mixed_instance(seed)
    text = write_instance(inst)
    assert text.endswith("\n")
    assert read_instance(text) == inst


def test_assignment_round_trip_and_range_check():
    inst = Instance(((0, 0), (0, 1), (0, 2)), 1, 4)
    a = PowerAssignment({2, 0})
    assert read_assignment(write_assignment(a), inst) == a
    with pytest.raises(InputError):
        read_assignment('{"high": [7]}', inst)
    with pytest.raises(ParseError):
        read_assignment('{"high": [true]}')


def test_all_high_single_component():
    inst = generate_instance(7, 8, 2, 25, seed=11)
    assert len(scc(induce_graph(inst, PowerAssignment(range(7))))) == 1
