"""Structure graphs G = (V u U, H u E) and the search for a second cycle.

H is a Hamiltonian cycle on V.  A witness is a simple cycle over edges of
H u E that visits all of V (and possibly some of U) and whose edge set is
not H.
"""
import json
import time
from dataclasses import dataclass
from functools import cached_property

from ..errors import InputError, OracleTimeout, ParseError, WitnessError
from ..oracles import OracleBudget

SEARCH_BUDGET = OracleBudget(max_nodes=64, max_millis=60_000)


def edge(a, b):
    return (a, b) if a < b else (b, a)


def cycle_edges(seq):
    return frozenset(edge(seq[t], seq[(t + 1) % len(seq)]) for t in range(len(seq)))


def _norm_edges(edges, what):
    out = set()
    for e in edges:
        a, b = e
        if a == b:
            raise InputError(f"{what}: self-loop at {a}")
        out.add(edge(a, b))
    return frozenset(out)


@dataclass(frozen=True)
class StructureGraph:
    v_nodes: frozenset
    u_nodes: frozenset
    h_edges: frozenset
    e_edges: frozenset

    def __post_init__(self):
        v, u = frozenset(self.v_nodes), frozenset(self.u_nodes)
        object.__setattr__(self, "v_nodes", v)
        object.__setattr__(self, "u_nodes", u)
        object.__setattr__(self, "h_edges", _norm_edges(self.h_edges, "H"))
        object.__setattr__(self, "e_edges", _norm_edges(self.e_edges, "E"))
        if v & u:
            raise InputError(f"V and U overlap: {sorted(v & u)}")
        if len(v) < 3:
            raise InputError("H needs at least 3 nodes")
        for a, b in self.h_edges:
            if a not in v or b not in v:
                raise InputError(f"H edge ({a},{b}) leaves V")
        if len(self.h_edges) != len(v) or not self._h_is_one_cycle():
            raise InputError("H is not a single cycle through all of V")
        allowed = v | u
        for a, b in self.e_edges:
            if a not in allowed or b not in allowed:
                raise InputError(f"E edge ({a},{b}) has an unknown endpoint")
        both = self.h_edges & self.e_edges
        if both:
            raise InputError(f"edges in both H and E: {sorted(both)}")

    def _h_is_one_cycle(self):
        nb = {x: [] for x in self.v_nodes}
        for a, b in self.h_edges:
            nb[a].append(b)
            nb[b].append(a)
        if any(len(x) != 2 for x in nb.values()):
            return False
        return len(self._walk(nb)) == len(self.v_nodes)

    def _walk(self, nb):
        start = min(self.v_nodes)
        seq = [start]
        prev, cur = start, min(nb[start])
        while cur != start:
            seq.append(cur)
            prev, cur = cur, (nb[cur][0] if nb[cur][1] == prev else nb[cur][1])
        return seq

    @cached_property
    def h_cycle(self):
        """H as a node sequence from min(V) toward its smaller H-neighbour."""
        nb = {x: [] for x in self.v_nodes}
        for a, b in self.h_edges:
            nb[a].append(b)
            nb[b].append(a)
        return tuple(self._walk(nb))

    @cached_property
    def adjacency(self):
        adj = {x: set() for x in self.v_nodes | self.u_nodes}
        for a, b in self.h_edges | self.e_edges:
            adj[a].add(b)
            adj[b].add(a)
        return {x: tuple(sorted(s)) for x, s in adj.items()}

    @cached_property
    def e_adjacency(self):
        adj = {x: set() for x in self.v_nodes | self.u_nodes}
        for a, b in self.e_edges:
            adj[a].add(b)
            adj[b].add(a)
        return {x: frozenset(s) for x, s in adj.items()}

    def u_neighbours(self, v):
        return self.e_adjacency[v] & self.u_nodes

    def h_neighbours(self, v):
        return frozenset(b if a == v else a for a, b in self.h_edges if v in (a, b))

    @property
    def nodes(self):
        return self.v_nodes | self.u_nodes

    def is_bipartite(self):
        """Every E-edge joins V to U."""
        return all((a in self.v_nodes) != (b in self.v_nodes) for a, b in self.e_edges)

    def e_connected(self):
        """Is (V u U, E) connected?"""
        nodes = self.nodes
        start = min(nodes)
        seen = {start}
        todo = [start]
        while todo:
            x = todo.pop()
            for y in self.e_adjacency[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return seen == nodes

    def is_e_tree(self):
        return self.e_connected() and len(self.e_edges) == len(self.nodes) - 1

    def max_u_degree(self):
        return max((len(self.e_adjacency[x]) for x in self.u_nodes), default=0)

    def conjecture_problems(self):
        """Reasons this is not a reduced conjecture instance (empty if it is)."""
        probs = []
        if not self.is_bipartite():
            probs.append("E is not bipartite between V and U")
        if not self.is_e_tree():
            probs.append("(V u U, E) is not a tree")
        for x in sorted(self.u_nodes):
            if len(self.e_adjacency[x]) < 2:
                probs.append(f"U node {x} has degree < 2")
        for a, b in sorted(self.h_edges):
            if self.u_neighbours(a) & self.u_neighbours(b):
                probs.append(f"H-consecutive {a},{b} share a U neighbour")
        return probs

    def relabelled(self):
        """Copy with V -> 0..n-1 and U -> n..n+m-1 (each in sorted order),
        plus the old -> new map."""
        order = sorted(self.v_nodes) + sorted(self.u_nodes)
        ren = {x: i for i, x in enumerate(order)}
        n = len(self.v_nodes)
        return StructureGraph(
            frozenset(range(n)), frozenset(range(n, len(order))),
            frozenset(edge(ren[a], ren[b]) for a, b in self.h_edges),
            frozenset(edge(ren[a], ren[b]) for a, b in self.e_edges),
        ), ren

    def to_dict(self):
        g, _ = self.relabelled()
        return {
            "v": len(g.v_nodes), "u": len(g.u_nodes),
            "h": [list(e) for e in sorted(g.h_edges)],
            "e": [list(e) for e in sorted(g.e_edges)],
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise ParseError("$", "expected an object")
        for key in ("v", "u"):
            if not isinstance(d.get(key), int) or isinstance(d.get(key), bool) or d[key] < 0:
                raise ParseError(f"$.{key}", "expected a non-negative integer")
        n, m = d["v"], d["u"]
        edges = {}
        for key in ("h", "e"):
            lst = d.get(key)
            if not isinstance(lst, list):
                raise ParseError(f"$.{key}", "expected a list of [a, b] pairs")
            for i, p in enumerate(lst):
                if (not isinstance(p, list) or len(p) != 2
                        or not all(isinstance(x, int) and not isinstance(x, bool) and 0 <= x < n + m for x in p)):
                    raise ParseError(f"$.{key}[{i}]", f"expected two node ids in 0..{n + m - 1}")
            edges[key] = [tuple(p) for p in lst]
        try:
            return cls(frozenset(range(n)), frozenset(range(n, n + m)), edges["h"], edges["e"])
        except InputError as exc:
            raise ParseError("$", str(exc)) from exc

    @classmethod
    def on_cycle(cls, n, e_edges, u_count=None):
        """H = 0-1-...-(n-1)-0, V = 0..n-1, U = n..n+u_count-1 (inferred
        from the edges when not given)."""
        e_edges = list(e_edges)
        if u_count is None:
            top = max((max(a, b) for a, b in e_edges), default=n - 1)
            u_count = max(0, top - n + 1)
        h = [(i, (i + 1) % n) for i in range(n)]
        return cls(frozenset(range(n)), frozenset(range(n, n + u_count)), h, e_edges)


def read_structure(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from exc
    return StructureGraph.from_dict(d)


def write_structure(g):
    return json.dumps(g.to_dict()) + "\n"


@dataclass(frozen=True)
class CycleWitness:
    node_sequence: tuple
    uses_extra: frozenset

    @classmethod
    def of(cls, g, seq):
        seq = tuple(seq)
        return cls(seq, frozenset(seq) - g.v_nodes)

    @property
    def edges(self):
        return cycle_edges(self.node_sequence)

    def to_dict(self):
        return {"cycle": list(self.node_sequence), "extra": sorted(self.uses_extra)}


def validate_witness(g, w):
    """Raise WitnessError unless ``w`` is a second V-cycle of ``g``."""
    if not isinstance(w, CycleWitness):
        w = CycleWitness.of(g, w)
    seq = w.node_sequence
    if len(seq) < 3:
        raise WitnessError("a cycle needs at least 3 nodes")
    if len(set(seq)) != len(seq):
        raise WitnessError("cycle repeats a node")
    allowed = g.h_edges | g.e_edges
    for e in w.edges:
        if e not in allowed:
            raise WitnessError(f"edge {e} is not in H or E")
    nodes = frozenset(seq)
    if not g.v_nodes <= nodes:
        raise WitnessError(f"cycle misses V nodes {sorted(g.v_nodes - nodes)}")
    if nodes - g.v_nodes != w.uses_extra or not w.uses_extra <= g.u_nodes:
        raise WitnessError("extra nodes must be exactly the U nodes on the cycle")
    if w.edges == g.h_edges:
        raise WitnessError("cycle is H itself")
    return w


def is_valid_witness(g, w):
    try:
        validate_witness(g, w)
    except WitnessError:
        return False
    return True


def shared_neighbour_witness(g):
    """If two H-consecutive V nodes share a U neighbour u, the detour through
    u is a witness; return the first such one (or None)."""
    h = g.h_cycle
    n = len(h)
    for t in range(n):
        a, b = h[t], h[(t + 1) % n]
        common = g.u_neighbours(a) & g.u_neighbours(b)
        if common:
            u = min(common)
            return CycleWitness.of(g, h[:t + 1] + (u,) + h[t + 1:])
    return None


def find_sec_ham(g, budget=SEARCH_BUDGET, require_edges=()):
    """Smallest witness (as a sequence from min(V), sorted-neighbour DFS
    order) whose edges include ``require_edges``; None if there is none.

    Exhaustive backtracking.  A branch is cut when some unvisited V node has
    fewer than two usable neighbours left, or when the unvisited V nodes and
    the start are no longer all reachable from the path end.
    """
    nodes = sorted(g.v_nodes) + sorted(g.u_nodes)
    if len(nodes) > budget.max_nodes:
        raise OracleTimeout(f"find_sec_ham: {len(nodes)} nodes exceeds budget of {budget.max_nodes}")
    idx = {x: i for i, x in enumerate(nodes)}
    adj = [0] * len(nodes)
    for a, b in g.h_edges | g.e_edges:
        adj[idx[a]] |= 1 << idx[b]
        adj[idx[b]] |= 1 << idx[a]
    nb_sorted = [[idx[y] for y in g.adjacency[x]] for x in nodes]
    vmask = (1 << len(g.v_nodes)) - 1
    h_set = {(idx[a], idx[b]) for a, b in g.h_edges} | {(idx[b], idx[a]) for a, b in g.h_edges}
    required = set()
    for a, b in require_edges:
        if a not in idx or b not in idx or edge(a, b) not in g.h_edges | g.e_edges:
            raise InputError(f"required edge ({a},{b}) is not an edge of the graph")
        required.add(edge(idx[a], idx[b]))
    s = idx[min(g.v_nodes)]
    deadline = time.monotonic() + budget.max_millis / 1000.0
    ticks = [0]

    def reach_from(src, free):
        seen = frontier = 1 << src
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                nxt |= adj[low.bit_length() - 1]
                f ^= low
            frontier = nxt & free & ~seen
            seen |= frontier
        return seen

    path = [s]

    def dfs(on, off_h, req_hit):
        ticks[0] += 1
        if ticks[0] & 1023 == 0 and time.monotonic() > deadline:
            raise OracleTimeout(f"find_sec_ham: exceeded {budget.max_millis} ms")
        end = path[-1]
        missing_v = vmask & ~on
        if not missing_v and len(path) >= 3 and adj[end] >> s & 1:
            closing_off = 0 if (end, s) in h_set else 1
            hit = req_hit | ({edge(end, s)} & required)
            if off_h + closing_off > 0 and hit == required and path[1] < path[-1]:
                return list(path)
        free = ~on
        if missing_v:
            # every missing V node still needs two usable neighbours
            usable = free | (1 << end) | (1 << s)
            m = missing_v
            while m:
                low = m & -m
                x = low.bit_length() - 1
                nbm = adj[x] & usable & ~(1 << x)
                if not nbm or not (nbm & (nbm - 1)):
                    return None
                m ^= low
            r = reach_from(end, free | (1 << s))
            if missing_v & ~r or not r >> s & 1:
                return None
        for w in nb_sorted[end]:
            if on >> w & 1:
                continue
            path.append(w)
            e = edge(end, w)
            found = dfs(on | (1 << w), off_h + (0 if (end, w) in h_set else 1),
                        req_hit | ({e} & required))
            path.pop()
            if found is not None:
                return found
        return None

    found = dfs(1 << s, 0, frozenset())
    if found is None:
        return None
    return CycleWitness.of(g, [nodes[i] for i in found])
