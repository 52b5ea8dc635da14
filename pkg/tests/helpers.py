"""Generators and independent reference checks shared by the tests."""
import itertools
import random

import networkx as nx

from dualpower.errors import GenerationError
from dualpower.instance import generate_instance
from dualpower.secondham.structure import StructureGraph, edge
from dualpower.secondham.sweep import random_tree_instance

RADII_LOW = (1, 2, 4, 5, 8)
RADII_HIGH = (13, 18, 25, 32, 40, 50)


def mixed_instance(seed, n_lo=4, n_hi=11):
    """Seeded instance with mixed size, extent and radii."""
    rng = random.Random(seed)
    while True:
        n = rng.randint(n_lo, n_hi)
        extent = rng.randint(6, 14)
        rl, rh = rng.choice(RADII_LOW), rng.choice(RADII_HIGH)
        try:
            return generate_instance(n, extent, rl, rh, rng.randrange(1 << 30), max_tries=200)
        except GenerationError:
            continue


def nx_digraph(n, arcs):
    g = nx.DiGraph()
    g.add_nodes_from(range(n))
    g.add_edges_from(arcs)
    return g


def direct_arcs(instance, high):
    """Arc set of G_R by a plain double loop over points."""
    pts = instance.points
    out = set()
    for u, p in enumerate(pts):
        r = instance.rh_sq if u in high else instance.rl_sq
        for v, q in enumerate(pts):
            if u != v and (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 <= r:
                out.add((u, v))
    return out


def strongly_connected_arcs(n, arcs):
    return nx.is_strongly_connected(nx_digraph(n, arcs))


def random_sb_instance(rng):
    """Bipartite tree instance with a few extra U nodes and U-U edges."""
    g = random_tree_instance(rng.randint(3, 7), rng, allow_shared=True)
    u = sorted(g.u_nodes)
    e = set(g.e_edges)
    top = max(g.nodes) + 1
    for _ in range(rng.randint(1, 4)):
        if rng.random() < 0.5 or len(u) < 2:
            x, top = top, top + 1
            e.add(edge(x, rng.choice(u)))
            u.append(x)
            for v in rng.sample(sorted(g.v_nodes), rng.randint(0, 2)):
                e.add(edge(v, x))
        else:
            x, y = rng.sample(u, 2)
            e.add(edge(x, y))
    return StructureGraph(g.v_nodes, frozenset(u), g.h_edges, e)


def split_candidate(rng):
    """(graph, vi, vj) with at least one U node of degree >= 4, all of them
    touching vi or vj; None when the draw does not qualify."""
    g = random_tree_instance(rng.randint(5, 9), rng, allow_shared=rng.random() < 0.3)
    big = [u for u in g.u_nodes if len(g.e_adjacency[u]) >= 4]
    pairs = [(a, b) for a, b in sorted(g.h_edges)
             if all(a in g.e_adjacency[u] or b in g.e_adjacency[u] for u in big)]
    if not big or not pairs:
        return None
    a, b = rng.choice(pairs)
    return g, a, b


def e_leaves(g):
    return sorted(v for v in g.v_nodes if len(g.e_adjacency[v]) == 1)


def all_subsets_below(items, size):
    return itertools.combinations(items, size)
