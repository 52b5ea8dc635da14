"""Exhaustive check of the second-cycle conjecture on small instances.

H is the cycle 0..n-1.  A U node is identified with its neighbourhood, a
subset of V with at least two members, no two of them consecutive on H (a
shared neighbour of consecutive nodes makes the answer trivial).  Trees are
exactly the hyperedge sets that join all of V without closing a cycle.
Instances are reduced modulo the 2n symmetries of H; U is unordered already.
"""
import json
import time
from dataclasses import dataclass, field

from ..errors import GenerationError, InputError, OracleTimeout, SweepTimeout
from ..oracles import OracleBudget
from .structure import StructureGraph, find_sec_ham
from .transforms import constructive_sec_ham

SWEEP_BUDGET = OracleBudget(max_nodes=32, max_millis=30 * 60 * 1000)

FAMILIES = ("tree", "forest-even", "forest-one-odd")


def candidate_sets(n, max_size=None):
    """Subsets of 0..n-1 with >= 2 members, pairwise non-consecutive on the
    n-cycle, ordered by (size, members)."""
    top = n if max_size is None else min(n, max_size)
    out = []

    def grow(cur, nxt):
        if len(cur) >= 2:
            out.append(tuple(cur))
        if len(cur) == top:
            return
        for x in range(nxt, n):
            if cur and x == cur[-1] + 1:
                continue
            if cur and cur[0] == 0 and x == n - 1:
                continue
            grow(cur + [x], x + 1)

    grow([], 0)
    out.sort(key=lambda s: (len(s), s))
    return out


def canonical_key(n, sets):
    best = None
    for r in range(n):
        for flip in (False, True):
            img = tuple(sorted(tuple(sorted(((r - x) if flip else (x + r)) % n for x in s)) for s in sets))
            if best is None or img < best:
                best = img
    return best


def _find(parent, x):
    while parent[x] != x:
        x = parent[x]
    return x


def hyperforests(n, max_u, max_size=None, family="tree"):
    """Canonical keys of all hyperedge sets on n nodes for ``family``:

    - tree: connected and acyclic;
    - forest-even: acyclic, every component with an even node count;
    - forest-one-odd: acyclic, exactly one component with an odd count.
    """
    if family not in FAMILIES:
        raise InputError(f"unknown family {family!r}")
    cands = candidate_sets(n, max_size)
    seen = set()

    def accept(parent):
        sizes = {}
        for x in range(n):
            r = _find(parent, x)
            sizes[r] = sizes.get(r, 0) + 1
        if family == "tree":
            return len(sizes) == 1
        odd = sum(1 for s in sizes.values() if s % 2)
        return odd == (0 if family == "forest-even" else 1)

    def rec(start, chosen, parent, comps):
        if chosen and accept(parent):
            seen.add(canonical_key(n, chosen))
        if len(chosen) == max_u or comps == 1:
            return
        for i in range(start, len(cands)):
            s = cands[i]
            roots = {_find(parent, x) for x in s}
            if len(roots) != len(s):
                continue
            p2 = list(parent)
            first = min(roots)
            for r in roots:
                p2[r] = first
            rec(i + 1, chosen + [s], p2, comps - len(s) + 1)

    rec(0, [], list(range(n)), n)
    return sorted(seen)


def instance_from_key(n, key):
    e = []
    for j, s in enumerate(key):
        e.extend((x, n + j) for x in s)
    return StructureGraph.on_cycle(n, e, len(key))


@dataclass
class SweepReport:
    records: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def counterexamples(self):
        return [r for r in self.records if r["witness"] is None]

    def to_jsonl(self):
        lines = [json.dumps(r, sort_keys=True) for r in self.records]
        lines.append(json.dumps({"kind": "summary", **self.summary}, sort_keys=True))
        return "\n".join(lines) + "\n"


def verify_conjecture_sweep(max_v, max_u, budget=SWEEP_BUDGET, families=("tree",), min_v=3,
                            pinned=True, constructive=True):
    """Run ``find_sec_ham`` on every canonical instance up to the bounds.

    For instances whose U degrees are all <= 3 it also checks that every H
    edge lies on some witness (``pinned``) and that the lollipop-based
    construction succeeds (``constructive``, trees and even forests only).
    """
    if max_v < 3 or max_u < 0:
        raise InputError("need max_v >= 3 and max_u >= 0")
    deadline = time.monotonic() + budget.max_millis / 1000.0
    report = SweepReport()
    counts = {}
    bad_pin = bad_cons = 0

    def left():
        ms = int((deadline - time.monotonic()) * 1000)
        if ms <= 0:
            raise OracleTimeout("sweep deadline passed")
        return OracleBudget(budget.max_nodes, ms)

    def finish(complete):
        report.summary = {
            "max_v": max_v, "max_u": max_u, "families": list(families),
            "instances": len(report.records),
            "by_family_v": {f"{f}:{n}": c for (f, n), c in sorted(counts.items())},
            "counterexamples": len(report.counterexamples()),
            "pinned_failures": bad_pin, "constructive_failures": bad_cons,
            "complete": complete,
        }
        return report

    try:
        for family in families:
            for n in range(min_v, max_v + 1):
                for key in hyperforests(n, max_u, family=family):
                    g = instance_from_key(n, key)
                    w = find_sec_ham(g, left())
                    deg = g.max_u_degree()
                    rec = {"kind": "instance", "family": family, **g.to_dict(), "max_u_degree": deg,
                           "witness": list(w.node_sequence) if w else None, "pinned": None, "constructive": None}
                    if deg <= 3 and w is not None:
                        if pinned and family == "tree":
                            ok = all(find_sec_ham(g, left(), require_edges=[e]) is not None
                                     for e in sorted(g.h_edges))
                            rec["pinned"] = ok
                            bad_pin += not ok
                        if constructive and family != "forest-one-odd":
                            try:
                                constructive_sec_ham(g)
                                rec["constructive"] = True
                            except (AssertionError, InputError):
                                rec["constructive"] = False
                                bad_cons += 1
                    report.records.append(rec)
                    counts[(family, n)] = counts.get((family, n), 0) + 1
    except OracleTimeout as exc:
        raise SweepTimeout(str(exc), finish(False)) from exc
    return finish(True)


def random_tree_instance(n_v, rng, max_degree=None, allow_shared=False, min_degree=2, tries=200):
    """Random bipartite tree on V = 0..n_v-1 (H = the n_v-cycle) and fresh U
    nodes, each U node with between ``min_degree`` and ``max_degree`` V
    neighbours taken from different current components."""
    if n_v < 3:
        raise InputError("need at least 3 V nodes")
    for _ in range(tries):
        sets = _try_tree(n_v, rng, max_degree, allow_shared, min_degree)
        if sets is not None:
            return instance_from_key(n_v, sets)
    raise GenerationError(f"no tree instance on {n_v} V nodes after {tries} attempts")


def _try_tree(n_v, rng, max_degree, allow_shared, min_degree):
    comp = list(range(n_v))
    sets = []
    misses = 0
    while len(set(comp)) > 1:
        roots = sorted(set(comp))
        hi = len(roots) if max_degree is None else min(len(roots), max_degree)
        lo = min(max(2, min_degree), hi)
        k = rng.randint(lo, hi)
        members = sorted(rng.choice([x for x in range(n_v) if comp[x] == r]) for r in rng.sample(roots, k))
        if not allow_shared and any((b - a) % n_v in (1, n_v - 1) for i, a in enumerate(members) for b in members[i + 1:]):
            misses += 1
            if misses > 50:
                return None
            continue
        sets.append(tuple(members))
        olds = {comp[x] for x in members}
        first = min(olds)
        comp = [first if c in olds else c for c in comp]
    return sets
