"""Graph rewrites that reduce one second-cycle question to another.

Every transform returns a ``Transformed``: the new structure graph, the
edges a witness of it must contain for the reduction to apply, and a
``back_map`` turning such a witness into a witness of the input graph.
``constructive_sec_ham`` chains them with the odd-forest decomposition and
the lollipop walk for instances whose U nodes have degree at most 3.
"""
from dataclasses import dataclass
from typing import Callable

from ..errors import InputError, WitnessError
from .forest import forest_decompose_deg23
from .lollipop import lollipop_walk
from .structure import CycleWitness, StructureGraph, edge, find_sec_ham, validate_witness


@dataclass(frozen=True)
class Transformed:
    graph: StructureGraph
    required_edges: tuple
    back_map: Callable


def cycle_from_edges(edges, start):
    """Node sequence of the single cycle formed by ``edges``."""
    nb = {}
    for a, b in edges:
        nb.setdefault(a, []).append(b)
        nb.setdefault(b, []).append(a)
    if start not in nb or any(len(x) != 2 for x in nb.values()):
        raise WitnessError("edge set is not a union of cycles through the start")
    seq = [start]
    prev, cur = start, min(nb[start])
    while cur != start:
        seq.append(cur)
        a, b = nb[cur]
        prev, cur = cur, (a if b == prev else b)
        if len(seq) > len(nb):
            raise WitnessError("edge set does not close into one cycle")
    if len(seq) != len(nb):
        raise WitnessError("edge set splits into several cycles")
    return seq


def _fresh(g, count):
    top = max(g.nodes) + 1
    return list(range(top, top + count))


def _h_pair(g, vi, vj):
    if vi is None:
        vi = min(g.v_nodes)
        vj = min(g.h_neighbours(vi))
    if edge(vi, vj) not in g.h_edges:
        raise InputError(f"{vi} and {vj} are not consecutive on H")
    return vi, vj


def _ensure_witness(g, w):
    if not isinstance(w, CycleWitness):
        w = CycleWitness.of(g, w)
    return validate_witness(g, w)


# ------------------------------------------------------------- duplicate

def duplicate_transform(g, vi=None, vj=None):
    """Two copies of ``g`` glued so that the V count doubles.

    The H edge vi-vj and its copy are removed; vi-vi' and vj-vj' join the
    copies on the new H and vj-vi' joins them in E.  A witness through both
    vi-vi' and vj-vj' splits into one path per copy, and closing either path
    with vi-vj gives a V-cycle of ``g``; at least one of them is not H.
    """
    if len(g.v_nodes) % 2 == 0:
        raise InputError("parity: duplicate_transform needs an odd number of V nodes")
    vi, vj = _h_pair(g, vi, vj)
    off = max(g.nodes) + 1

    def prime(x):
        return x + off

    ei, ej = edge(vi, prime(vi)), edge(vj, prime(vj))
    h = {e for e in g.h_edges if e != edge(vi, vj)}
    h |= {edge(prime(a), prime(b)) for a, b in h}
    h |= {ei, ej}
    e = set(g.e_edges) | {edge(prime(a), prime(b)) for a, b in g.e_edges} | {edge(vj, prime(vi))}
    gd = StructureGraph(
        g.v_nodes | {prime(x) for x in g.v_nodes},
        g.u_nodes | {prime(x) for x in g.u_nodes},
        h, e,
    )

    def back_map(w):
        w = _ensure_witness(gd, w)
        es = set(w.edges)
        if ei not in es or ej not in es:
            raise WitnessError("witness of the doubled graph must use both bridge edges")
        es -= {ei, ej}
        left = {x for x in es if x[0] < off and x[1] < off}
        right = {(a - off, b - off) for a, b in es - left}
        for side in (left, right):
            side.add(edge(vi, vj))
            if side != set(g.h_edges):
                return _ensure_witness(g, cycle_from_edges(side, min(g.v_nodes)))
        raise WitnessError("both halves reproduce H, so the witness was H itself")

    return Transformed(gd, (ei, ej), back_map)


# ------------------------------------------------------ split high degree

def split_high_degree(g, vi, vj):
    """Replace every U node of degree >= 4 by degree-2 relays.

    Each such node u' must touch vi or vj (call it the owner; vi wins ties).
    For every other neighbour v of u' a relay joins owner and v; u' goes.
    A witness through the H edge vi-vj uses at most one relay per owner, and
    swapping that relay back for u' gives a witness of ``g``.
    """
    if edge(vi, vj) not in g.h_edges:
        raise InputError(f"{vi} and {vj} are not consecutive on H")
    big = sorted(u for u in g.u_nodes if len(g.e_adjacency[u]) >= 4)
    owner = {}
    for u in big:
        if vi in g.e_adjacency[u]:
            owner[u] = vi
        elif vj in g.e_adjacency[u]:
            owner[u] = vj
        else:
            raise InputError(f"U node {u} of degree >= 4 touches neither {vi} nor {vj}")
    need = sum(len(g.e_adjacency[u]) - 1 for u in big)
    fresh = iter(_fresh(g, need))
    relay = {}  # relay -> (original U node)
    e = set(g.e_edges)
    for u in big:
        o = owner[u]
        for v in sorted(g.e_adjacency[u] - {o}):
            r = next(fresh)
            relay[r] = u
            e.discard(edge(u, v))
            e |= {edge(o, r), edge(r, v)}
        e.discard(edge(o, u))
    g2 = StructureGraph(g.v_nodes, (g.u_nodes - set(big)) | set(relay), g.h_edges, e)
    pin = edge(vi, vj)

    def back_map(w):
        w = _ensure_witness(g2, w)
        if pin not in w.edges:
            raise WitnessError(f"witness must contain the H edge {pin}")
        return _ensure_witness(g, [relay.get(x, x) for x in w.node_sequence])

    return Transformed(g2, (pin,), back_map)


# ------------------------------------------------------------------ leaf

def leaf_transform(g, vi):
    """Grow H around a V node vi whose only E-neighbour is the U node u.

    New V nodes vl, vr sit between vi and its H neighbours a (= smaller) and
    b; a new U node u' joins vl and vr; u is replaced by relays vi-u_j-v_j,
    one per other neighbour v_j of u.
    """
    if vi not in g.v_nodes:
        raise InputError(f"{vi} is not a V node")
    nb = g.e_adjacency[vi]
    if len(nb) != 1 or not nb <= g.u_nodes:
        raise InputError(f"{vi} must have exactly one E-neighbour and it must be in U")
    (u,) = nb
    if not g.e_adjacency[u] <= g.v_nodes:
        raise InputError(f"U node {u} has neighbours outside V")
    a, b = sorted(g.h_neighbours(vi))
    others = sorted(g.e_adjacency[u] - {vi})
    vl, vr, up, *relays = _fresh(g, 3 + len(others))
    relay_of = dict(zip(relays, others))
    e = {x for x in g.e_edges if u not in x}
    e |= {edge(vl, up), edge(vr, up)}
    for r, vj in relay_of.items():
        e |= {edge(vi, r), edge(r, vj)}
    h = set(g.h_edges) - {edge(a, vi), edge(vi, b)}
    h |= {edge(a, vl), edge(vl, vi), edge(vi, vr), edge(vr, b)}
    g2 = StructureGraph(g.v_nodes | {vl, vr}, (g.u_nodes - {u}) | {up} | set(relays), h, e)
    new_nodes = {vl, vr, up, *relays}

    def back_map(w):
        w = _ensure_witness(g2, w)
        es = set(w.edges)
        used = [r for r in relays if r in w.uses_extra]
        keep = {x for x in es if not (set(x) & new_nodes)}
        if edge(a, vl) in es:
            keep.add(edge(a, vi))
        if edge(vr, b) in es:
            keep.add(edge(vi, b))
        for r in used:
            keep.add(edge(u, relay_of[r]))
        if len(used) == 1:
            keep.add(edge(vi, u))
        return _ensure_witness(g, cycle_from_edges(keep, min(g.v_nodes)))

    return Transformed(g2, (), back_map)


# ------------------------------------------------------------- bipartize

def bipartize(g_sb):
    """Remove U-U edges by folding: for a U-U edge u_i-u_j where u_i has a V
    neighbour, every other neighbour w of u_i is joined to u_j and u_i is
    deleted.  ``g_sb.e_edges`` may contain U-U edges but no V-V edges.
    """
    for x, y in g_sb.e_edges:
        if x in g_sb.v_nodes and y in g_sb.v_nodes:
            raise InputError(f"V is not independent: E edge ({x},{y})")
    if not g_sb.e_connected():
        raise InputError("the graph (V u U, E) must be connected")
    u_nodes = set(g_sb.u_nodes)
    adj = {x: set(g_sb.e_adjacency[x]) for x in g_sb.nodes}
    steps = []
    while True:
        pick = None
        for ui in sorted(u_nodes):
            uu = adj[ui] & u_nodes
            if uu and adj[ui] - u_nodes:
                pick = ui, min(uu)
                break
        if pick is None:
            break
        ui, uj = pick
        new = set()
        for w in adj[ui] - {uj}:
            if w not in adj[uj]:
                new.add(w)
                adj[uj].add(w)
                adj[w].add(uj)
        for w in adj.pop(ui):
            adj[w].discard(ui)
        u_nodes.discard(ui)
        steps.append((ui, uj, frozenset(new)))
    if any(adj[x] & u_nodes for x in u_nodes):
        raise AssertionError("U-U edges left after folding")
    e = {edge(x, y) for x in adj for y in adj[x]}
    gb = StructureGraph(g_sb.v_nodes, frozenset(u_nodes), g_sb.h_edges, e)

    def back_map(w):
        seq = list(_ensure_witness(gb, w).node_sequence)
        for ui, uj, new in reversed(steps):
            if uj not in seq:
                continue
            k = seq.index(uj)
            seq = seq[k:] + seq[:k]
            nxt_new, prev_new = seq[1] in new, seq[-1] in new
            if nxt_new and prev_new:
                seq[0] = ui
            elif nxt_new:
                seq.insert(1, ui)
            elif prev_new:
                seq.append(ui)
        return _ensure_witness(g_sb, seq)

    return Transformed(gb, (), back_map)


# ------------------------------------------------------ constructive path

def constructive_sec_ham(g, pin=None):
    """Second V-cycle for a bipartite instance whose U nodes have degree at
    most 3, without search.

    (V u U, E) must be a tree, or a forest in which every tree holds an even
    number of V nodes.  With ``pin`` (an H edge) the witness contains it.
    Returns (witness, route) where route names the steps taken.
    """
    if not g.is_bipartite():
        raise InputError("E must join V to U only")
    if g.max_u_degree() > 3:
        raise InputError("U nodes of degree above 3 need split_high_degree first")
    if pin is not None:
        pin = edge(*pin)
        if pin not in g.h_edges:
            raise InputError(f"pin {pin} is not an H edge")
    h = g.h_cycle
    shared = [t for t in range(len(h)) if g.u_neighbours(h[t]) & g.u_neighbours(h[(t + 1) % len(h)])]
    for t in shared:
        a, b = h[t], h[(t + 1) % len(h)]
        if pin != edge(a, b):
            u = min(g.u_neighbours(a) & g.u_neighbours(b))
            return CycleWitness.of(g, h[:t + 1] + (u,) + h[t + 1:]), ("shared-neighbour",)
    if shared:
        # only the pinned edge has a shared neighbour; its relay would
        # double an H edge in the lollipop graph, so search instead
        w = find_sec_ham(g, require_edges=[pin])
        if w is None:
            raise AssertionError(f"no witness through {pin}")
        return w, ("search",)
    # U nodes of degree <= 1 never help a cycle
    lean_u = {x for x in g.u_nodes if len(g.e_adjacency[x]) >= 2}
    lean = StructureGraph(g.v_nodes, lean_u, g.h_edges, {x for x in g.e_edges if not set(x) - g.v_nodes - lean_u})
    route = []
    work, back, root = lean, None, None
    tree = lean.is_e_tree()
    if tree and len(lean.v_nodes) % 2:
        vi, vj = pin if pin is not None else (None, None)
        t = duplicate_transform(lean, vi, vj)
        work, back, root = t.graph, t.back_map, t.required_edges[0]
        route.append("duplicate")
    elif pin is not None:
        root = pin
    forest = forest_decompose_deg23(work.v_nodes, work.u_nodes, work.e_edges)
    route.append("forest")
    vgraph = {x: set() for x in work.v_nodes}
    via = {}
    for a, b in work.h_edges:
        vgraph[a].add(b)
        vgraph[b].add(a)
    fadj = {}
    for a, b in forest:
        fadj.setdefault(a, set()).add(b)
        fadj.setdefault(b, set()).add(a)
    for a, b in forest:
        if a in work.v_nodes and b in work.v_nodes:
            pair = (a, b)
        else:
            continue
        if b in vgraph[a]:
            raise AssertionError(f"forest edge {pair} duplicates an H edge")
        vgraph[a].add(b)
        vgraph[b].add(a)
    for x in work.u_nodes:
        if len(fadj.get(x, ())) == 2:
            a, b = sorted(fadj[x])
            if b in vgraph[a]:
                raise AssertionError(f"relay {x} duplicates the edge ({a},{b})")
            via[(a, b)] = x
            vgraph[a].add(b)
            vgraph[b].add(a)
    if root is not None and root[0] > root[1]:
        root = (root[1], root[0])
    cyc, steps, _ = lollipop_walk(vgraph, work.h_cycle, root)
    route.append(f"lollipop:{steps}")
    seq = []
    for t, x in enumerate(cyc):
        seq.append(x)
        y = cyc[(t + 1) % len(cyc)]
        r = via.get(edge(x, y))
        if r is not None:
            seq.append(r)
    w = _ensure_witness(work, seq)
    if back is not None:
        w = back(w)
    if pin is not None and pin not in w.edges:
        raise AssertionError(f"constructed witness lost the pinned edge {pin}")
    return _ensure_witness(g, w.node_sequence), tuple(route)
