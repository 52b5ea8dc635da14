"""Odd-degree sub-forests of trees.

A tree on an even number of nodes has exactly one spanning sub-forest in
which every node has odd degree: keep the edge from a node to its parent
exactly when the node's subtree has an odd number of nodes.
"""
from ..errors import InputError
from .structure import edge


def _adjacency(nodes, edges):
    adj = {x: set() for x in nodes}
    for a, b in edges:
        if a not in adj or b not in adj:
            raise InputError(f"edge ({a},{b}) has an endpoint outside the node set")
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _components(nodes, adj):
    seen = set()
    comps = []
    for start in sorted(nodes):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        todo = [start]
        while todo:
            x = todo.pop()
            for y in sorted(adj[x]):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    todo.append(y)
        comps.append(comp)
    return comps


def _odd_parity_edges(root, adj, weight):
    """Edges (child, parent) of the tree at ``root`` whose child-side total
    weight is odd."""
    parent = {root: None}
    order = [root]
    for x in order:
        for y in sorted(adj[x]):
            if y not in parent:
                parent[y] = x
                order.append(y)
    total = {x: weight(x) for x in order}
    keep = set()
    for x in reversed(order):
        p = parent[x]
        if p is None:
            continue
        if total[x] % 2:
            keep.add(edge(x, p))
        total[p] += total[x]
    return keep


def odd_forest_decompose(nodes, tree_edges):
    """Sub-forest of the tree ``(nodes, tree_edges)`` with every degree odd."""
    nodes = frozenset(nodes)
    tree_edges = {edge(a, b) for a, b in tree_edges}
    if len(nodes) % 2:
        raise InputError(f"parity: a tree on {len(nodes)} nodes has no odd-degree sub-forest")
    adj = _adjacency(nodes, tree_edges)
    if len(tree_edges) != len(nodes) - 1 or len(_components(nodes, adj)) != 1:
        raise InputError("input is not a tree")
    return frozenset(_odd_parity_edges(min(nodes), adj, lambda x: 1))


def forest_decompose_deg23(v_nodes, u_nodes, edges):
    """Sub-forest of a bipartite forest (V, U, E_T) with every V-degree odd
    and every U-degree 0 or 2.

    Each tree must hold an even number of V nodes and every U node must have
    degree 2 or 3.  Edges between two V nodes are allowed and behave like a
    degree-2 U node.  A degree-3 U node first loses its edge toward a side
    with an even V count; then each degree-2 U node is read as a V-V edge and
    the resulting trees are reduced to their odd-degree sub-forests.
    """
    v_nodes, u_nodes = frozenset(v_nodes), frozenset(u_nodes)
    edges = {edge(a, b) for a, b in edges}
    nodes = v_nodes | u_nodes
    adj = _adjacency(nodes, edges)
    comps = _components(nodes, adj)
    if len(edges) != len(nodes) - len(comps):
        raise InputError("input is not a forest")
    for a, b in edges:
        if a in u_nodes and b in u_nodes:
            raise InputError(f"U-U edge ({a},{b})")
    for u in sorted(u_nodes):
        if len(adj[u]) not in (2, 3):
            raise InputError(f"U node {u} has degree {len(adj[u])}, expected 2 or 3")
    for comp in comps:
        if sum(1 for x in comp if x in v_nodes) % 2:
            raise InputError(f"parity: tree containing {comp[0]} has an odd number of V nodes")

    def v_count(start, blocked):
        seen = {start, blocked}
        todo = [start]
        cnt = 0
        while todo:
            x = todo.pop()
            cnt += x in v_nodes
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    todo.append(y)
        return cnt

    for u in sorted(u_nodes):
        if len(adj[u]) == 3:
            cut = next(v for v in sorted(adj[u]) if v_count(v, u) % 2 == 0)
            adj[u].discard(cut)
            adj[cut].discard(u)

    # V-only multigraph-free forest: U relays become V-V edges
    via = {}
    vadj = {v: set() for v in v_nodes}
    for x in v_nodes:
        for y in adj[x]:
            if y in v_nodes:
                vadj[x].add(y)
    for u in u_nodes:
        a, b = sorted(adj[u])
        via[edge(a, b)] = u
        vadj[a].add(b)
        vadj[b].add(a)
    keep = set()
    for comp in _components(v_nodes, vadj):
        for a, b in _odd_parity_edges(comp[0], vadj, lambda x: 1):
            u = via.get((a, b))
            if u is None:
                keep.add((a, b))
            else:
                keep.add(edge(a, u))
                keep.add(edge(u, b))
    return frozenset(keep)
