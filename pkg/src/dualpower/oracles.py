"""Brute-force exact solvers used as ground truth.

Every search walks candidates in increasing size, so the first feasible answer
is a minimum.  Running out of budget raises ``OracleTimeout``; an oracle never
returns a best-effort answer.
"""
import itertools
import time
from dataclasses import dataclass

from .digraph import DiGraph, bits, masks_strongly_connected, reach, scc, transpose_masks
from .errors import InputError, OracleTimeout
from .instance import PowerAssignment


@dataclass(frozen=True)
class OracleBudget:
    max_nodes: int = 12
    max_millis: int = 60_000

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_millis <= 0:
            raise ValueError("budget limits must be positive")

    def deadline(self):
        return time.monotonic() + self.max_millis / 1000.0


DEFAULT_BUDGET = OracleBudget()


class _Clock:
    def __init__(self, budget, what):
        self.deadline = budget.deadline()
        self.budget = budget
        self.what = what
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.ticks & 1023 == 0 and time.monotonic() > self.deadline:
            raise OracleTimeout(f"{self.what}: exceeded {self.budget.max_millis} ms")


def _check_size(n, budget, what):
    if n > budget.max_nodes:
        raise OracleTimeout(f"{what}: {n} nodes exceeds budget of {budget.max_nodes}")


def dpa_opt(instance, budget=DEFAULT_BUDGET, base=None, component_level=False):
    """Minimum set X of extra high nodes with G_{base + X} strongly connected.

    With ``base`` empty this is the exact dual power assignment optimum.
    With ``component_level`` the arcs of G_base that join two different SCCs
    are dropped first, so X must reconnect the SCCs on its own (and may
    include base nodes, paying for them again).  That is the optimum of the
    problem posed on the components graph CG_base.

    Subsets failing to touch every sink SCC are skipped: such a sink keeps no
    way out, so the subset is infeasible.
    """
    _check_size(instance.n, budget, "dpa_opt")
    base = base or PowerAssignment()
    if not isinstance(base, PowerAssignment):
        base = PowerAssignment(frozenset(base))
    base.check(instance)
    clock = _Clock(budget, "dpa_opt")
    out0 = instance.out_masks(base.mask)
    if masks_strongly_connected(out0):
        return PowerAssignment()
    part = scc(DiGraph.from_masks(out0))
    if component_level:
        out0 = tuple(m & part.masks[part.comp_of[u]] for u, m in enumerate(out0))
        bmask = 0
    else:
        bmask = base.mask
    comp_of = part.comp_of
    leaves_comp = [0] * len(part)
    for u, m in enumerate(out0):
        for v in bits(m):
            if comp_of[v] != comp_of[u]:
                leaves_comp[comp_of[u]] = 1
    sinks = [part.masks[c] for c in range(len(part)) if not leaves_comp[c]]
    free = [u for u in range(instance.n) if not bmask >> u & 1]
    hi = instance.high_masks
    for size in range(len(sinks), len(free) + 1):
        for combo in itertools.combinations(free, size):
            clock.tick()
            cmask = 0
            for u in combo:
                cmask |= 1 << u
            if any(not s & cmask for s in sinks):
                continue
            out = [hi[u] if cmask >> u & 1 else out0[u] for u in range(instance.n)]
            if masks_strongly_connected(out):
                return PowerAssignment(frozenset(combo))
    raise InputError("instance is infeasible: even all-high is not strongly connected")


def scss_opt(g, budget=DEFAULT_BUDGET):
    """Minimum-cardinality arc subset keeping ``g`` strongly connected.

    Iterative deepening on the answer size starting at n, with
    include/exclude branching over arcs in sorted order.  A branch is cut when
    the still-available arcs cannot be strongly connected or when the nodes
    still missing an out- or in-arc cannot all be served within the size cap.
    """
    _check_size(g.n, budget, "scss_opt")
    if not masks_strongly_connected(g.out_masks):
        raise InputError("scss_opt needs a strongly connected digraph")
    n = g.n
    if n == 1:
        return frozenset()
    arcs = g.arcs()
    clock = _Clock(budget, "scss_opt")
    full = (1 << n) - 1

    def lacking(masks):
        return sum(1 for m in masks if not m)

    def search(idx, cap, chosen, inc_out, inc_in, av_out, av_in):
        clock.tick()
        if len(chosen) + max(lacking(inc_out), lacking(inc_in)) > cap:
            return None
        if reach(av_out, 1) != full or reach(av_in, 1) != full:
            return None
        if reach(inc_out, 1) == full and reach(inc_in, 1) == full:
            return list(chosen)
        if idx == len(arcs):
            return None
        u, v = arcs[idx]
        if len(chosen) < cap:
            inc_out[u] |= 1 << v
            inc_in[v] |= 1 << u
            chosen.append((u, v))
            found = search(idx + 1, cap, chosen, inc_out, inc_in, av_out, av_in)
            chosen.pop()
            inc_out[u] &= ~(1 << v)
            inc_in[v] &= ~(1 << u)
            if found is not None:
                return found
        av_out[u] &= ~(1 << v)
        av_in[v] &= ~(1 << u)
        found = search(idx + 1, cap, chosen, inc_out, inc_in, av_out, av_in)
        av_out[u] |= 1 << v
        av_in[v] |= 1 << u
        return found

    for cap in range(n, len(arcs) + 1):
        found = search(0, cap, [], [0] * n, [0] * n, list(g.out_masks), list(transpose_masks(g.out_masks)))
        if found is not None:
            return frozenset(found)
    raise AssertionError("unreachable: the full arc set is strongly connected")


def as_adjacency(g):
    """Normalise an undirected graph (networkx graph, dict of neighbours, or
    edge list) to ``{node: frozenset(neighbours)}``."""
    if hasattr(g, "adjacency"):
        return {u: frozenset(nb) for u, nb in g.adjacency()}
    if isinstance(g, dict):
        adj = {u: set(nb) for u, nb in g.items()}
    else:
        adj = {}
        for a, b in g:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
    for u, nb in list(adj.items()):
        for v in nb:
            adj.setdefault(v, set()).add(u)
    return {u: frozenset(nb - {u}) for u, nb in adj.items()}


def canonical_cycle(seq):
    """Rotate to start at the smallest node, then pick the direction whose
    second node is smaller."""
    seq = list(seq)
    i = seq.index(min(seq))
    seq = seq[i:] + seq[:i]
    if len(seq) > 2 and seq[-1] < seq[1]:
        seq = [seq[0]] + seq[:0:-1]
    return tuple(seq)


def enumerate_gamma_ham_cycles(g, gamma, budget=DEFAULT_BUDGET):
    """All simple cycles (length >= 3) whose node set contains ``gamma``, in
    canonical form, sorted."""
    adj = as_adjacency(g)
    gamma = frozenset(gamma)
    if not gamma:
        raise InputError("gamma must be non-empty")
    if not gamma <= adj.keys():
        raise InputError("gamma contains nodes outside the graph")
    _check_size(len(adj), budget, "enumerate_gamma_ham_cycles")
    clock = _Clock(budget, "enumerate_gamma_ham_cycles")
    start = min(gamma)
    nbrs = {u: sorted(nb) for u, nb in adj.items()}
    found = set()
    path = [start]
    on_path = {start}

    def extend():
        clock.tick()
        end = path[-1]
        for w in nbrs[end]:
            if w == start:
                if len(path) >= 3 and gamma <= on_path and path[1] < path[-1]:
                    found.add(tuple(path))
                continue
            if w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            extend()
            path.pop()
            on_path.discard(w)

    extend()
    return sorted(canonical_cycle(c) for c in found)


def hamiltonian_cycles(g, budget=DEFAULT_BUDGET):
    adj = as_adjacency(g)
    return enumerate_gamma_ham_cycles(adj, adj.keys(), budget)
