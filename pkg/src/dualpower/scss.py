"""Cycle-contraction approximation for the minimum strongly connected
spanning subgraph (SCSS) of a symmetric digraph.

While the current quotient graph has a directed cycle of length >= k take
one, otherwise take a longest cycle; keep its arcs, contract its nodes and
repeat.  Once no cycle is longer than 3 the residue is solved exactly.  The
quotient is a multigraph: for every pair of super-nodes we remember the
smallest original arc between them, which is how cycles map back.
"""
import json
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .digraph import DiGraph, masks_strongly_connected, reach
from .errors import ContractError, InputError, ParseError
from .oracles import DEFAULT_BUDGET, OracleBudget, scss_opt

# residues up to this many nodes are re-solved exhaustively as a cross-check
CROSS_CHECK_NODES = 9


@dataclass(frozen=True)
class SymDigraph:
    """A symmetric, strongly connected digraph.  Symmetry is checked."""
    graph: DiGraph

    def __post_init__(self):
        if self.graph.n < 1:
            raise InputError("digraph needs at least one node")
        if not self.graph.is_symmetric():
            for u, v in self.graph.arcs():
                if not self.graph.has_arc(v, u):
                    raise InputError(f"not symmetric: arc ({u},{v}) has no reverse")
        if not masks_strongly_connected(self.graph.out_masks):
            raise InputError("digraph is not strongly connected")

    @classmethod
    def from_edges(cls, n, edges):
        arcs = set()
        for u, v in edges:
            arcs.add((u, v))
            arcs.add((v, u))
        return cls(DiGraph.from_arcs(n, arcs))

    @property
    def n(self):
        return self.graph.n


@dataclass
class ScssResult:
    kept_arcs: frozenset
    trace: list = field(default_factory=list)

    def __len__(self):
        return len(self.kept_arcs)

    def to_dict(self):
        return {"kept_arcs": sorted(map(list, self.kept_arcs)), "trace": self.trace}

    @classmethod
    def from_dict(cls, d):
        return cls(frozenset(tuple(a) for a in d["kept_arcs"]), list(d.get("trace", [])))


def scss_bounded_ratio(k):
    if k < 2:
        raise ValueError("scss_bounded_ratio needs k >= 2")
    return Fraction(3 * k - 2, 2 * k)


# ---------------------------------------------------------------- cycles

def _dfs_cycles(g, want_len=None, cap=None):
    """Shared cycle search.  Each cycle is listed once, starting from its
    smallest node.  With ``want_len`` return the first cycle of at least that
    length; otherwise return a longest cycle (capped at ``cap``), ties going
    to the lexicographically smallest sequence."""
    n = g.n
    adj = g.adj
    out = g.out_masks
    best = None
    for s in range(n):
        allowed = ((1 << n) - 1) & ~((1 << s) - 1)
        # nodes that can both be reached from s and return to s
        fwd = reach([m & allowed for m in out], 1 << s)
        back = reach([m & allowed for m in g.in_masks], 1 << s)
        pool = fwd & back
        if bin(pool).count("1") < 2:
            continue
        if want_len is None and best is not None and bin(pool).count("1") <= len(best):
            continue
        path = [s]
        on = 1 << s
        stack = [iter(adj[s])]
        while stack:
            advanced = False
            for w in stack[-1]:
                if w == s:
                    if len(path) >= 2:
                        if want_len is not None and len(path) >= want_len:
                            return list(path)
                        if want_len is None and (best is None or len(path) > len(best)):
                            best = list(path)
                            if cap is not None and len(best) >= cap:
                                return best
                    continue
                if not pool >> w & 1 or on >> w & 1:
                    continue
                if want_len is None and best is not None:
                    # even taking every remaining pool node cannot beat best
                    if len(path) + 1 + bin(pool & ~on & ~(1 << w)).count("1") <= len(best):
                        continue
                path.append(w)
                on |= 1 << w
                stack.append(iter(adj[w]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                on &= ~(1 << path.pop())
    return best


def longest_cycle(g, cap=None):
    """A longest directed simple cycle of ``g`` (at most ``cap`` long when
    given) as a node sequence starting at its smallest node; None if ``g`` is
    acyclic."""
    if cap is not None and cap < 2:
        raise InputError("cap must be at least 2")
    return _dfs_cycles(g, cap=cap)


def cycle_at_least(g, length):
    """First cycle (DFS order) with at least ``length`` nodes, or None."""
    return _dfs_cycles(g, want_len=length)


# ------------------------------------------------------------ base case

def _blocks(n, edges):
    """Biconnected blocks of an undirected simple graph as edge lists."""
    ug = nx.Graph()
    ug.add_nodes_from(range(n))
    ug.add_edges_from(edges)
    return [sorted(tuple(sorted(e)) for e in comp) for comp in nx.biconnected_component_edges(ug)]


def _block_solution(g):
    """Minimum SCSS of a symmetric digraph whose longest cycle is <= 3.

    Such a graph is a union of blocks that are single edges or triangles; an
    edge block needs both arcs and a triangle needs one directed 3-cycle.
    """
    edges = sorted({(min(u, v), max(u, v)) for u, v in g.arcs()})
    kept = set()
    for block in _blocks(g.n, edges):
        if len(block) == 1:
            (a, b), = block
            kept |= {(a, b), (b, a)}
        elif len(block) == 3:
            a, b, c = sorted({x for e in block for x in e})
            kept |= {(a, b), (b, c), (c, a)}
        else:
            raise ContractError(f"block with {len(block)} edges in a residue with no cycle longer than 3")
    return frozenset(kept)


def base_case_solve(g, budget=DEFAULT_BUDGET):
    """Minimum SCSS of a strongly connected digraph with no cycle longer than 3."""
    if not masks_strongly_connected(g.out_masks):
        raise InputError("base_case_solve needs a strongly connected digraph")
    long = cycle_at_least(g, 4)
    if long is not None:
        raise ContractError(f"residue has a cycle of length {len(long)}: {long}")
    if g.is_symmetric():
        kept = _block_solution(g)
        if g.n <= CROSS_CHECK_NODES:
            exact = scss_opt(g, OracleBudget(max(budget.max_nodes, g.n), budget.max_millis))
            if len(exact) != len(kept):
                raise AssertionError(f"block solution {len(kept)} arcs, exhaustive {len(exact)}")
        return kept
    return scss_opt(g, budget)


# ------------------------------------------------------------ main loop

def _quotient(n, arcs, group_of):
    """Quotient digraph over groups plus, per quotient arc, the smallest
    original arc realising it."""
    prov = {}
    for u, v in arcs:
        a, b = group_of[u], group_of[v]
        if a != b and ((a, b) not in prov or (u, v) < prov[(a, b)]):
            prov[(a, b)] = (u, v)
    m = max(group_of) + 1 if n else 0
    return DiGraph.from_arcs(m, prov), prov


def scss_approx(g, k=8, budget=DEFAULT_BUDGET):
    if not isinstance(g, SymDigraph):
        g = SymDigraph(g)
    if k < 4:
        raise InputError("scss_approx needs k >= 4")
    n = g.n
    arcs = g.graph.arcs()
    group_of = list(range(n))
    kept = set()
    trace = []
    while True:
        q, prov = _quotient(n, arcs, group_of)
        if not masks_strongly_connected(q.out_masks):
            raise AssertionError("contracted graph lost strong connectivity")
        if q.n == 1:
            break
        cyc = cycle_at_least(q, k)
        how = "long"
        if cyc is None:
            cyc = longest_cycle(q)
            how = "longest"
        if len(cyc) <= 3:
            base = base_case_solve(q, budget)
            mapped = sorted(prov[a] for a in base)
            kept.update(mapped)
            trace.append({"base": True, "arcs": [list(a) for a in mapped]})
            break
        mapped = [prov[(cyc[t], cyc[(t + 1) % len(cyc)])] for t in range(len(cyc))]
        kept.update(mapped)
        trace.append({"length": len(cyc), "kind": how, "arcs": [list(a) for a in mapped]})
        # merge the cycle's groups and renumber densely by smallest member
        merged = set(cyc)
        target = min(cyc)
        raw = [target if x in merged else x for x in group_of]
        order = {}
        for x in raw:
            order.setdefault(x, len(order))
        group_of = [order[x] for x in raw]
    result = ScssResult(frozenset(kept), trace)
    check_scss(g.graph, result.kept_arcs)
    return result


def check_scss(g, kept):
    """Raise AssertionError unless ``kept`` is a strongly connected spanning
    arc subset of ``g``."""
    for u, v in kept:
        if not g.has_arc(u, v):
            raise AssertionError(f"kept arc ({u},{v}) is not in the graph")
    sub = DiGraph.from_arcs(g.n, kept)
    if not masks_strongly_connected(sub.out_masks):
        raise AssertionError("kept arcs do not strongly connect the graph")


def scss_exact(g, budget=DEFAULT_BUDGET):
    graph = g.graph if isinstance(g, SymDigraph) else g
    return ScssResult(scss_opt(graph, budget), [{"exact": True}])


# ------------------------------------------------------------------ JSON

def digraph_from_dict(d):
    if not isinstance(d, dict):
        raise ParseError("$", "expected an object")
    n = d.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError("$.n", "expected a positive integer")
    arcs = d.get("arcs")
    if not isinstance(arcs, list):
        raise ParseError("$.arcs", "expected a list")
    out = []
    for i, a in enumerate(arcs):
        if (not isinstance(a, list) or len(a) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in a)):
            raise ParseError(f"$.arcs[{i}]", "expected [u, v] integers")
        if not all(0 <= x < n for x in a) or a[0] == a[1]:
            raise ParseError(f"$.arcs[{i}]", "node out of range or self-loop")
        out.append(tuple(a))
    return DiGraph.from_arcs(n, out)


def digraph_to_dict(g):
    return {"n": g.n, "arcs": [list(a) for a in g.arcs()]}


def read_digraph(text):
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError("$", f"invalid JSON: {exc}") from exc
    return digraph_from_dict(d)


def write_digraph(g):
    return json.dumps(digraph_to_dict(g)) + "\n"


def random_symmetric(n, p, rng):
    """Random connected simple graph on n nodes, returned bidirected.  Edges
    appear with probability p; a random spanning tree is added to connect."""
    edges = set()
    order = list(range(n))
    rng.shuffle(order)
    for t in range(1, n):
        a, b = order[t], order[rng.randrange(t)]
        edges.add((min(a, b), max(a, b)))
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < p:
                edges.add((a, b))
    return SymDigraph.from_edges(n, edges)


__all__ = [
    "SymDigraph", "ScssResult", "scss_approx", "scss_exact", "base_case_solve",
    "longest_cycle", "cycle_at_least", "scss_bounded_ratio", "check_scss",
    "digraph_from_dict", "digraph_to_dict", "read_digraph", "write_digraph",
    "random_symmetric",
]
