import itertools
import random

import pytest

from dualpower.errors import InputError, OracleTimeout, ParseError, WitnessError
from dualpower.oracles import OracleBudget, enumerate_gamma_ham_cycles
from dualpower.secondham.structure import (
    CycleWitness, StructureGraph, cycle_edges, edge, find_sec_ham, is_valid_witness, read_structure,
    shared_neighbour_witness, validate_witness, write_structure,
)


def random_structure(rng, max_total=12):
    n = rng.randint(3, 8)
    m = rng.randint(0, max_total - n)
    h = {edge(i, (i + 1) % n) for i in range(n)}
    pairs = [p for p in itertools.combinations(range(n + m), 2) if p not in h]
    e = [p for p in pairs if rng.random() < rng.choice([0.1, 0.2, 0.35])]
    return StructureGraph.on_cycle(n, e, m)


def oracle_witnesses(g, required=()):
    adj = {x: set() for x in g.nodes}
    for a, b in g.h_edges | g.e_edges:
        adj[a].add(b)
        adj[b].add(a)
    out = []
    for c in enumerate_gamma_ham_cycles(adj, g.v_nodes):
        es = cycle_edges(c)
        if es != g.h_edges and all(edge(*r) in es for r in required):
            out.append(c)
    return out


def test_triangle_alone_has_no_second_cycle():
    g = StructureGraph.on_cycle(3, [])
    assert find_sec_ham(g) is None


def test_shared_neighbour_gives_detour():
    g = StructureGraph.on_cycle(5, [(0, 5), (1, 5)])
    w = shared_neighbour_witness(g)
    assert w.node_sequence == (0, 5, 1, 2, 3, 4)
    validate_witness(g, w)
    assert find_sec_ham(g) is not None


def test_no_shared_neighbour_returns_none():
    g = StructureGraph.on_cycle(6, [(0, 6), (2, 6), (3, 7), (5, 7)])
    assert shared_neighbour_witness(g) is None


@pytest.mark.parametrize("seed", range(120))
def test_search_matches_enumeration(seed):
    rng = random.Random(seed)
    g = random_structure(rng)
    expected = oracle_witnesses(g)
    w = find_sec_ham(g)
    if not expected:
        assert w is None
        return
    validate_witness(g, w)
    assert w.node_sequence == expected[0]


@pytest.mark.parametrize("seed", range(40))
def test_required_edge_matches_enumeration(seed):
    rng = random.Random(1000 + seed)
    g = random_structure(rng, 11)
    req = rng.choice(sorted(g.h_edges | g.e_edges))
    expected = oracle_witnesses(g, [req])
    w = find_sec_ham(g, require_edges=[req])
    assert (w.node_sequence if w else None) == (expected[0] if expected else None)


def test_search_budget():
    g = StructureGraph.on_cycle(10, [], 0)
    with pytest.raises(OracleTimeout):
        find_sec_ham(g, OracleBudget(max_nodes=9))


@pytest.mark.parametrize("bad, msg", [
    ((0, 1, 2, 3, 4), "H itself"),
    ((0, 1, 2, 3), "misses"),
    ((0, 1, 1, 2, 3, 4), "repeats"),
    ((0, 2, 1, 3, 4), "not in H or E"),
    ((0, 1), "at least 3"),
])
def test_witness_validation_errors(bad, msg):
    g = StructureGraph.on_cycle(5, [(0, 5), (1, 5), (0, 3)])
    with pytest.raises(WitnessError, match=msg):
        validate_witness(g, bad)
    assert not is_valid_witness(g, bad)


def test_witness_extra_must_match():
    g = StructureGraph.on_cycle(5, [(0, 5), (1, 5)])
    with pytest.raises(WitnessError):
        validate_witness(g, CycleWitness((0, 5, 1, 2, 3, 4), frozenset()))


@pytest.mark.parametrize("args", [
    ({0, 1, 2}, {2}, [(0, 1), (1, 2), (2, 0)], []),
    ({0, 1}, set(), [(0, 1)], []),
    ({0, 1, 2, 3}, set(), [(0, 1), (1, 2), (2, 0), (2, 3)], []),
    ({0, 1, 2}, set(), [(0, 1), (1, 2), (2, 0)], [(0, 7)]),
    ({0, 1, 2}, set(), [(0, 1), (1, 2), (2, 0)], [(0, 1)]),
    ({0, 1, 2, 3, 4, 5}, set(), [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)], []),
])
def test_structure_validation(args):
    with pytest.raises(InputError):
        StructureGraph(*args)


def test_properties_of_reduced_tree():
    g = StructureGraph.on_cycle(6, [(0, 6), (2, 6), (4, 6), (1, 7), (3, 7), (5, 7), (0, 8), (3, 8), (2, 8)])
    assert g.is_bipartite() and not g.is_e_tree()
    t = StructureGraph.on_cycle(6, [(0, 6), (2, 6), (4, 6), (1, 7), (3, 7), (5, 7), (0, 8), (5, 8)])
    assert t.is_e_tree() and t.conjecture_problems() == ["H-consecutive 0,5 share a U neighbour"]
    assert t.max_u_degree() == 3
    assert t.h_cycle == (0, 1, 2, 3, 4, 5)


def test_json_round_trip_relabels():
    g = StructureGraph({10, 11, 12}, {20}, [(10, 11), (11, 12), (12, 10)], [(10, 20), (12, 20)])
    doc = g.to_dict()
    assert doc == {"v": 3, "u": 1, "h": [[0, 1], [0, 2], [1, 2]], "e": [[0, 3], [2, 3]]}
    back = read_structure(write_structure(g))
    assert back == g.relabelled()[0]


@pytest.mark.parametrize("text, path", [
    ('{"v": 3, "u": 0, "h": [[0, 1], [1, 2], [2, 0]], "e": [[0, 9]]}', "$.e[0]"),
    ('{"v": -1, "u": 0, "h": [], "e": []}', "$.v"),
    ('{"v": 3, "u": 0, "h": [[0, 1], [1, 2]], "e": []}', "$"),
    ('{"v": 3, "u": 0, "e": []}', "$.h"),
])
def test_json_errors(text, path):
    with pytest.raises(ParseError) as info:
        read_structure(text)
    assert info.value.path == path
