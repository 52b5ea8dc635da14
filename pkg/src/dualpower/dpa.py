"""The three-phase dual power assignment approximation with run tracing.

Phase 1 contracts sets of size >= k, Phase 2 walks i = k-1 .. 4 taking
structures by priority (two or more leaves, one leaf, simple cycle, combined
cycles) and Phase 3 finishes optimally.  ``audit_trace`` re-checks the
counting identities and, given exact per-stage optima, the stage bounds.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .contraction import Snapshot, StructureClass, Want, has_hamiltonian_cycle, search
from .digraph import bits, masks_strongly_connected
from .errors import AuditError, ContractError, InputError
from .instance import PowerAssignment
from .oracles import DEFAULT_BUDGET, dpa_opt


@dataclass
class IterationRecord:
    i: int
    n_i: int
    r_start: tuple
    b_i: int = 0
    b_ij: dict = field(default_factory=dict)
    leaves: int = 0
    contractions: list = field(default_factory=list)

    def to_dict(self):
        return {
            "i": self.i,
            "n_i": self.n_i,
            "b_i": self.b_i,
            "b_ij": {str(j): c for j, c in sorted(self.b_ij.items())},
            "leaves": self.leaves,
            "contractions": self.contractions,
            "r_start": list(self.r_start),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            i=d["i"], n_i=d["n_i"], r_start=tuple(d.get("r_start", ())), b_i=d["b_i"],
            b_ij={int(j): c for j, c in d["b_ij"].items()}, leaves=d["leaves"],
            contractions=list(d.get("contractions", [])),
        )


@dataclass
class RunTrace:
    k: int
    n0: int = 0
    phase1: list = field(default_factory=list)
    iterations: list = field(default_factory=list)  # i = k-1 down to 4
    n3: int = 0
    r3: tuple = ()
    phase3: list = field(default_factory=list)

    def record(self, i):
        for rec in self.iterations:
            if rec.i == i:
                return rec
        raise AuditError(f"trace has no record for iteration {i}")

    def stage_sets(self):
        """{i: R_i} for 3 <= i < k."""
        out = {rec.i: frozenset(rec.r_start) for rec in self.iterations}
        out[3] = frozenset(self.r3)
        return out

    def to_dict(self):
        return {
            "k": self.k, "n0": self.n0, "phase1": self.phase1,
            "iterations": [r.to_dict() for r in self.iterations],
            "n3": self.n3, "r3": list(self.r3), "phase3": self.phase3,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            k=d["k"], n0=d["n0"], phase1=d["phase1"],
            iterations=[IterationRecord.from_dict(r) for r in d["iterations"]],
            n3=d["n3"], r3=tuple(d["r3"]), phase3=d["phase3"],
        )


@dataclass
class DpaResult:
    assignment: PowerAssignment
    trace: RunTrace


def ratio_bound(k):
    if k < 2:
        raise ValueError("ratio_bound needs k >= 2")
    return Fraction(3 * k - 2, 2 * (k - 1))


def _log_entry(cset, st, lv, cls, before, after):
    return {
        "comps": list(cset.comps), "reps": list(cset.reps), "size": len(cset),
        "class": cls.value if cls else None, "leaves": len(lv),
        "arcs": sorted(map(list, st.arcs)), "merged": before - after + 1,
    }


def _pick(cands, i, k):
    """Phase-2 priority selection; larger sets first, then lexicographic."""
    half = math.ceil(k / 2)

    def best(pred):
        hits = [c for c in cands if pred(c)]
        if not hits:
            return None
        return min(hits, key=lambda c: (-len(c[0]), c[0].comps, c[0].reps))

    def one_leaf_size_ok(j):
        return j >= half if i > half else j == i

    return (
        best(lambda c: c[3] is StructureClass.TWO_PLUS_LEAVES)
        or best(lambda c: c[3] is StructureClass.ONE_LEAF and one_leaf_size_ok(len(c[0])))
        or best(lambda c: c[3] is StructureClass.SIMPLE_CYCLE and len(c[0]) == i)
        or best(lambda c: c[3] is StructureClass.COMBINED_CYCLES and len(c[0]) == i)
    )


def dpa_approx(instance, k=8):
    if k < 5:
        raise InputError("dpa_approx needs k >= 5")
    if not instance.is_feasible():
        raise InputError("instance is infeasible: all-high graph is not strongly connected")
    trace = RunTrace(k=k)
    high = set()
    snap = Snapshot(instance, high)
    trace.n0 = snap.n_components

    while True:
        hit = search(snap, Want.at_least(k, snap.n_components))
        if hit is None:
            break
        cset, st = hit
        high.update(cset.reps)
        before = snap.n_components
        snap = Snapshot(instance, high)
        trace.phase1.append(_log_entry(cset, st, (), None, before, snap.n_components))

    for i in range(k - 1, 3, -1):
        rec = IterationRecord(i=i, n_i=snap.n_components, r_start=tuple(sorted(high)))
        trace.iterations.append(rec)
        while True:
            cands = snap.classified(range(4, i + 1), tight=True)
            if not any(len(c[0]) == i for c in cands):
                break
            cset, st, lv, cls = _pick(cands, i, k)
            high.update(cset.reps)
            before = snap.n_components
            snap = Snapshot(instance, high)
            rec.contractions.append(_log_entry(cset, st, lv, cls, before, snap.n_components))
            if len(cset) == i:
                rec.b_i += 1
            else:
                rec.b_ij[len(cset)] = rec.b_ij.get(len(cset), 0) + 1
            rec.leaves += len(lv)

    trace.n3 = snap.n_components
    trace.r3 = tuple(sorted(high))
    extra = phase3_optimal(instance, PowerAssignment(frozenset(high)), trace=trace)
    high |= extra.high
    result = PowerAssignment(frozenset(high))
    if not masks_strongly_connected(instance.out_masks(result.mask)):
        raise AssertionError("final communication graph is not strongly connected")
    return DpaResult(result, trace)


def _oversized_set(snap):
    for size in range(4, snap.n_components + 1):
        for cset in snap.iter_sets(size, tight=True):
            return cset
    return None


def phase3_optimal(instance, r3, trace=None, check=True):
    """Minimum extra high set making G_{r3} strongly connected, assuming no
    contracted set of size > 3 exists in G_{r3}."""
    if not isinstance(r3, PowerAssignment):
        r3 = PowerAssignment(frozenset(r3))
    high = set(r3.high)
    snap = Snapshot(instance, high)
    if check:
        big = _oversized_set(snap)
        if big is not None:
            raise ContractError(f"contracted set of size {len(big)} present: comps={big.comps} reps={big.reps}")
    added = set()
    # contract 3-sets whose structure contains a directed triangle
    # (cheapest first: representatives that are already high cost nothing)
    while True:
        hit = None
        for cset in snap.iter_sets(3, tight=True):
            cost = sum(1 for r in cset.reps if r not in high)
            if (hit is None or cost < hit[0]) and has_hamiltonian_cycle(snap.structure(cset)):
                hit = cost, cset
        if hit is None:
            break
        hit = hit[1]
        added.update(r for r in hit.reps if r not in high)
        high.update(hit.reps)
        snap = Snapshot(instance, high)
        if trace is not None:
            trace.phase3.append({"cycle3": {"comps": list(hit.comps), "reps": list(hit.reps)}})
    # the rest separates into one 2-set-cover instance per component
    for c, comp in enumerate(snap.part.components):
        # neighbours already entered by a current arc (high or low range)
        covered = 0
        for u in comp:
            for v in bits(snap.out[u]):
                covered |= 1 << snap.part.comp_of[v]
        elements = snap.cg_masks[c] & ~covered
        if not elements:
            continue
        cand_nodes = []
        cand_sets = []
        for u in sorted(comp):
            if snap.high >> u & 1:
                continue
            s = snap.comp_reach[u] & elements
            if s:
                cand_nodes.append(u)
                cand_sets.append(list(bits(s)))
        if any(len(s) > 2 for s in cand_sets):
            raise ContractError(f"a node of component {c} reaches more than two components")
        chosen = two_set_cover_solve(list(bits(elements)), cand_sets)
        picked = [cand_nodes[t] for t in chosen]
        added.update(picked)
        if trace is not None:
            trace.phase3.append({"cover": {"comp": c, "nodes": picked}})
    return PowerAssignment(frozenset(added))


def two_set_cover_solve(elements, sets):
    """Indices of a minimum subfamily of ``sets`` (each of size <= 2) covering
    ``elements``.  Size = |elements| - maximum matching on the pair sets."""
    elements = list(dict.fromkeys(elements))
    universe = set(elements)
    pair_index = {}
    first_with = {}
    for t, s in enumerate(sets):
        s = frozenset(s)
        if len(s) > 2:
            raise InputError(f"set {t} has more than two elements")
        if not s <= universe:
            raise InputError(f"set {t} has elements outside the universe")
        for e in s:
            first_with.setdefault(e, t)
        if len(s) == 2:
            pair_index.setdefault(s, t)
    missing = universe - first_with.keys()
    if missing:
        raise InputError(f"uncoverable elements: {sorted(missing, key=repr)}")
    g = nx.Graph()
    g.add_nodes_from(range(len(elements)))
    pos = {e: p for p, e in enumerate(elements)}
    for s in pair_index:
        a, b = sorted(pos[e] for e in s)
        g.add_edge(a, b)
    matching = nx.max_weight_matching(g, maxcardinality=True)
    chosen = []
    matched = set()
    for a, b in matching:
        chosen.append(pair_index[frozenset((elements[a], elements[b]))])
        matched.update((elements[a], elements[b]))
    for e in elements:
        if e not in matched:
            chosen.append(first_with[e])
    return sorted(set(chosen))


@dataclass
class AuditCheck:
    name: str
    i: int
    passed: bool
    asserted: bool
    detail: str = ""


@dataclass
class AuditReport:
    checks: list

    @property
    def ok(self):
        return all(c.passed for c in self.checks if c.asserted)

    def failures(self, asserted_only=True):
        return [c for c in self.checks if not c.passed and (c.asserted or not asserted_only)]

    def lines(self):
        return [
            f"{'PASS' if c.passed else 'FAIL'}{'' if c.asserted else ' (reported)'} {c.name} i={c.i}: {c.detail}"
            for c in self.checks
        ]


def stage_opts(instance, trace, budget=DEFAULT_BUDGET, component_level=True):
    """Exact OPT(G_{R_i}) for every recorded stage 3 <= i < k.

    By default the optimum is taken on the components graph (see
    ``dpa_opt``); pass ``component_level=False`` for the plain optimum, which
    can undercut the stage lower bound when earlier high nodes already join
    two components.
    """
    return {
        i: len(dpa_opt(instance, budget, base=PowerAssignment(r), component_level=component_level))
        for i, r in trace.stage_sets().items()
    }


def audit_trace(trace, exact_opts=None):
    k = trace.k
    if [r.i for r in trace.iterations] != list(range(k - 1, 3, -1)):
        raise AuditError("iteration records must cover i = k-1 down to 4 in order")
    n = {r.i: r.n_i for r in trace.iterations}
    n[3] = trace.n3
    checks = []
    for rec in trace.iterations:
        i = rec.i
        if any(not 4 <= j < i for j in rec.b_ij):
            raise AuditError(f"iteration {i} has b_ij outside 4 <= j < i")
        rhs = n[i - 1] + (i - 1) * rec.b_i + sum((j - 1) * c for j, c in rec.b_ij.items())
        checks.append(AuditCheck("recurrence", i, n[i] == rhs, True, f"n_i={n[i]} rhs={rhs}"))
        logged = sum(1 for c in rec.contractions if c["size"] == i)
        if logged != rec.b_i:
            raise AuditError(f"iteration {i}: b_i={rec.b_i} but log has {logged}")
    if exact_opts is None:
        return AuditReport(checks)

    half = math.ceil(k / 2)
    opt = exact_opts
    for i in range(3, k):
        if i not in opt:
            continue
        lo = math.ceil(Fraction(i, i - 1) * (n[i] - 1))
        hi = 2 * (n[i] - 1)
        checks.append(AuditCheck("stage-bounds", i, lo <= opt[i] <= hi, True, f"{lo} <= {opt[i]} <= {hi}"))
    for rec in trace.iterations:
        i = rec.i
        if i not in opt or i - 1 not in opt:
            continue
        b = rec.b_ij
        if i <= half:
            bound = opt[i] - 2 * rec.b_i - 2 * sum(c for j, c in b.items() if j < i)
            name = "saving-small"
        else:
            bound = (opt[i] - rec.b_i - 2 * sum(c for j, c in b.items() if j <= half)
                     - sum(c for j, c in b.items() if half < j < i))
            name = "saving-large"
        checks.append(AuditCheck(name, i, opt[i - 1] <= bound, k == 8, f"OPT_(i-1)={opt[i - 1]} <= {bound}"))
        lb = opt[i] - rec.leaves
        checks.append(AuditCheck("leaf-saving", i, opt[i - 1] <= lb, True, f"OPT_(i-1)={opt[i - 1]} <= {lb}"))
    return AuditReport(checks)
