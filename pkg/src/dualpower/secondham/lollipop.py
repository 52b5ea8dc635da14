"""Second Hamiltonian cycle in a graph whose degrees are all odd, by walking
Hamiltonian paths with a fixed first edge.

Paths start x, y.  From a path ending at z, every neighbour w of z other than
its predecessor and x gives a rotation: reverse the part after w, so the new
path ends at w's old successor.  Rotations pair up paths symmetrically, and a
path has odd degree in this "path graph" exactly when its end is adjacent to
x.  Starting from H minus one edge at x, a trail that never reuses a rotation
must stop at another odd path, which closes into a second cycle through xy.
"""
import itertools

import networkx as nx

from ..errors import InputError
from ..oracles import as_adjacency, canonical_cycle
from .structure import cycle_edges, edge


def _check_cycle(adj, h):
    h = tuple(h)
    if len(h) != len(adj) or set(h) != set(adj):
        raise InputError("h must visit every node exactly once")
    if len(h) < 3:
        raise InputError("h needs at least 3 nodes")
    for a, b in cycle_edges(h):
        if b not in adj[a]:
            raise InputError(f"h uses non-edge ({a},{b})")
    return h


def lollipop_walk(g, h, root=None):
    """(second Hamiltonian cycle, number of rotations, revisited paths).

    ``root`` is the edge (x, y) of ``h`` the result must contain; by default
    x = min(h) and y is its smaller neighbour on ``h``.
    """
    adj = as_adjacency(g)
    h = _check_cycle(adj, h)
    for v, nb in adj.items():
        if len(nb) % 2 == 0:
            raise InputError(f"node {v} has even degree {len(nb)}")
    if root is None:
        x = min(h)
        t = h.index(x)
        y = min(h[t - 1], h[(t + 1) % len(h)])
    else:
        x, y = root
        if edge(x, y) not in cycle_edges(h):
            raise InputError(f"root {root} is not an edge of h")
    t = h.index(x)
    h = h[t:] + h[:t]
    if h[1] != y:
        h = (h[0],) + h[:0:-1]
    p0 = h  # x, y, ..., z0 : H minus the edge (z0, x)
    nbrs = {v: sorted(nb) for v, nb in adj.items()}

    def rotations(p):
        end = p[-1]
        pos = {v: i for i, v in enumerate(p)}
        for w in nbrs[end]:
            if w == x or w == p[-2]:
                continue
            i = pos[w]
            yield w, p[:i + 1] + p[:i:-1]

    used = set()
    cur = p0
    steps = 0
    visited = {p0}
    revisits = 0
    while True:
        moved = False
        for w, nxt in rotations(cur):
            key = frozenset((cur, nxt))
            if key in used:
                continue
            used.add(key)
            cur = nxt
            steps += 1
            moved = True
            break
        if not moved:
            raise AssertionError("trail stuck at an even path: parity argument violated")
        if cur in visited:
            revisits += 1
        visited.add(cur)
        if cur != p0 and x in adj[cur[-1]]:
            return canonical_cycle(cur), steps, revisits


def lollipop_second_cycle(g, h, root=None):
    """A Hamiltonian cycle of ``g`` that differs from ``h`` and contains the
    root edge (see ``lollipop_walk``)."""
    return lollipop_walk(g, h, root)[0]


def is_hamiltonian_cycle(g, seq):
    adj = as_adjacency(g)
    seq = tuple(seq)
    if len(seq) < 3 or len(set(seq)) != len(seq) or set(seq) != set(adj):
        return False
    return all(b in adj[a] for a, b in cycle_edges(seq))


def same_cycle(a, b):
    return cycle_edges(tuple(a)) == cycle_edges(tuple(b))


def hamiltonian_cubic_graphs(n):
    """One representative per isomorphism class of connected cubic graphs on
    n nodes that have a Hamiltonian cycle.

    Each such graph is the cycle 0..n-1 plus a perfect matching of chords, so
    matchings are enumerated and then reduced up to isomorphism.
    """
    if n < 4 or n % 2:
        raise InputError("cubic graphs need an even number of nodes >= 4")
    ring = {edge(i, (i + 1) % n) for i in range(n)}

    def matchings(rest):
        if not rest:
            yield []
            return
        a = rest[0]
        for b in rest[1:]:
            if edge(a, b) in ring:
                continue
            remaining = [c for c in rest if c not in (a, b)]
            for m in matchings(remaining):
                yield [(a, b)] + m

    classes = {}
    for m in matchings(list(range(n))):
        gr = nx.Graph()
        gr.add_edges_from(ring)
        gr.add_edges_from(m)
        key = nx.weisfeiler_lehman_graph_hash(gr, iterations=4)
        bucket = classes.setdefault(key, [])
        if not any(nx.is_isomorphic(gr, other) for other in bucket):
            bucket.append(gr)
    reps = list(itertools.chain.from_iterable(classes.values()))
    reps.sort(key=lambda gr: sorted(edge(a, b) for a, b in gr.edges()))
    return reps
