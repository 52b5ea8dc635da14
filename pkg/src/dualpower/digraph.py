"""Directed graphs over integer node ids, strong connectivity and SCCs.

Nodes are ``0..n-1``.  Besides the list-based API the module exposes a few
bitmask helpers (``reach``, ``masks_strongly_connected``) that the exact
oracles use in their inner loops.
"""
from dataclasses import dataclass
from functools import cached_property


@dataclass(frozen=True)
class DiGraph:
    n: int
    adj: tuple  # adj[u] = sorted tuple of out-neighbours

    def __post_init__(self):
        adj = tuple(tuple(sorted(set(nbrs))) for nbrs in self.adj)
        if len(adj) != self.n:
            raise ValueError(f"adjacency has {len(adj)} rows for n={self.n}")
        for u, nbrs in enumerate(adj):
            for v in nbrs:
                if v == u:
                    raise ValueError(f"self-loop at {u}")
                if not 0 <= v < self.n:
                    raise ValueError(f"arc ({u},{v}) leaves node range")
        object.__setattr__(self, "adj", adj)

    @classmethod
    def from_arcs(cls, n, arcs):
        adj = [[] for _ in range(n)]
        for u, v in arcs:
            adj[u].append(v)
        return cls(n, tuple(adj))

    @classmethod
    def from_masks(cls, masks):
        return cls(len(masks), tuple(tuple(bits(m)) for m in masks))

    def arcs(self):
        return [(u, v) for u in range(self.n) for v in self.adj[u]]

    def has_arc(self, u, v):
        return bool(self.out_masks[u] >> v & 1)

    @cached_property
    def out_masks(self):
        return tuple(sum(1 << v for v in nbrs) for nbrs in self.adj)

    @cached_property
    def in_masks(self):
        return transpose_masks(self.out_masks)

    def is_symmetric(self):
        out = self.out_masks
        return all(out[v] >> u & 1 for u in range(self.n) for v in self.adj[u])

    def to_dot(self, name="G"):
        lines = [f"digraph {name} {{"]
        lines += [f"  {u};" for u in range(self.n)]
        lines += [f"  {u} -> {v};" for u, v in self.arcs()]
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SccPartition:
    comp_of: tuple
    components: tuple  # tuple of frozensets, numbered by smallest member

    def __len__(self):
        return len(self.components)

    @cached_property
    def masks(self):
        return tuple(sum(1 << v for v in c) for c in self.components)


def bits(mask):
    """Yield the set bit positions of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def transpose_masks(out):
    inn = [0] * len(out)
    for u, m in enumerate(out):
        for v in bits(m):
            inn[v] |= 1 << u
    return tuple(inn)


def reach(masks, src_mask):
    """Bitmask of nodes reachable from any node in ``src_mask``."""
    seen = frontier = src_mask
    while frontier:
        nxt = 0
        for v in bits(frontier):
            nxt |= masks[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def masks_strongly_connected(out, inn=None):
    n = len(out)
    if n <= 1:
        return True
    full = (1 << n) - 1
    if reach(out, 1) != full:
        return False
    if inn is None:
        inn = transpose_masks(out)
    return reach(inn, 1) == full


def scc(g):
    """Tarjan's algorithm, iterative.  Components are renumbered by their
    smallest node so the numbering does not depend on traversal order."""
    n = g.n
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack = []
    found = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            nbrs = g.adj[v]
            if i < len(nbrs):
                work[-1] = (v, i + 1)
                w = nbrs[i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                found.append(frozenset(comp))
    found.sort(key=min)
    comp_of = [0] * n
    for cid, comp in enumerate(found):
        for v in comp:
            comp_of[v] = cid
    return SccPartition(tuple(comp_of), tuple(found))


def is_strongly_connected(g):
    if g.n < 1:
        raise ValueError("empty graph")
    return masks_strongly_connected(g.out_masks, g.in_masks)


def condensation(g, partition=None):
    """Quotient DiGraph over the SCCs of ``g`` (acyclic)."""
    partition = partition or scc(g)
    arcs = {
        (partition.comp_of[u], partition.comp_of[v])
        for u, v in g.arcs()
        if partition.comp_of[u] != partition.comp_of[v]
    }
    return DiGraph.from_arcs(len(partition), arcs)
