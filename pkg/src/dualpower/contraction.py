"""Contracted sets and the contractible structures they induce.

A contracted set picks one representative node in each of ``k`` distinct
components of CG_R such that turning the representatives to high power
merges the ``k`` components into one SCC.  "Reach" in a structure is direct:
arc C_i -> C_j exists when the high-range disk of the representative of C_i
covers some node of C_j.
"""
import enum
import itertools
from dataclasses import dataclass
from functools import cached_property

from .components import component_graph_of
from .digraph import bits, reach, scc, DiGraph
from .errors import ContractError, InputError
from .instance import PowerAssignment


class StructureClass(enum.Enum):
    TWO_PLUS_LEAVES = "TwoPlusLeaves"
    ONE_LEAF = "OneLeaf"
    SIMPLE_CYCLE = "SimpleCycle"
    COMBINED_CYCLES = "CombinedCycles"


@dataclass(frozen=True)
class ContractedSet:
    comps: tuple
    reps: tuple

    def __len__(self):
        return len(self.comps)

    def to_dict(self):
        return {"comps": list(self.comps), "reps": list(self.reps)}


@dataclass(frozen=True)
class ContractibleStructure:
    base: ContractedSet
    arcs: frozenset

    def to_dict(self):
        return {**self.base.to_dict(), "arcs": sorted(map(list, self.arcs))}


class Snapshot:
    """G_R for a fixed R together with everything the searches reuse."""

    def __init__(self, instance, assignment=None):
        if assignment is None:
            assignment = PowerAssignment()
        elif not isinstance(assignment, PowerAssignment):
            assignment = PowerAssignment(frozenset(assignment))
        assignment.check(instance)
        self.instance = instance
        self.assignment = assignment
        self.high = assignment.mask
        self.out = instance.out_masks(self.high)
        self.part = scc(DiGraph.from_masks(self.out))
        self.cg = component_graph_of(instance, self.part)

    @cached_property
    def inn(self):
        inn = [0] * len(self.out)
        for u, m in enumerate(self.out):
            for v in bits(m):
                inn[v] |= 1 << u
        return inn

    @cached_property
    def comp_reach(self):
        """comp_reach[u]: bitmask of foreign component ids within u's high range."""
        comp_of = self.part.comp_of
        res = []
        for u, m in enumerate(self.instance.high_masks):
            r = 0
            for v in bits(m):
                r |= 1 << comp_of[v]
            res.append(r & ~(1 << comp_of[u]))
        return tuple(res)

    @cached_property
    def cg_masks(self):
        return tuple(sum(1 << j for j in nb) for nb in self.cg.neighbours)

    @property
    def n_components(self):
        return len(self.part)

    def merged_scc(self, reps):
        """Node mask of the SCC containing reps[0] once all reps go high."""
        hi = self.instance.high_masks
        out = list(self.out)
        inn = list(self.inn)
        for r in reps:
            extra = hi[r] & ~out[r]
            out[r] = hi[r]
            for v in bits(extra):
                inn[v] |= 1 << r
        src = 1 << reps[0]
        return reach(out, src) & reach(inn, src)

    def check_reps(self, comps, reps):
        if len(comps) != len(reps) or len(set(comps)) != len(comps):
            raise InputError("comps must be distinct and match reps one-to-one")
        for c, r in zip(comps, reps):
            if not 0 <= c < self.n_components:
                raise InputError(f"component id {c} out of range")
            if self.part.comp_of[r] != c:
                raise InputError(f"rep {r} is not in component {c}")

    def is_contracted(self, comps, reps, tight=False):
        if not reps:
            return False
        merged = self.merged_scc(reps)
        want = 0
        for c in comps:
            want |= self.part.masks[c]
        if merged & want != want:
            return False
        return merged == want if tight else True

    def structure(self, cset):
        cmask = sum(1 << c for c in cset.comps)
        arcs = set()
        for c, r in zip(cset.comps, cset.reps):
            for d in bits(self.comp_reach[r] & cmask):
                arcs.add((c, d))
        return ContractibleStructure(cset, frozenset(arcs))

    def leaves(self, structure):
        cset = structure.base
        comps, reps = cset.comps, cset.reps
        cmask = sum(1 << c for c in comps)
        found = set()
        for t, c in enumerate(comps):
            others = cmask & ~(1 << c)
            # (i) the rest still forms a contracted set
            rest_c = comps[:t] + comps[t + 1:]
            rest_r = reps[:t] + reps[t + 1:]
            if len(rest_c) > 1 and not self.is_contracted(rest_c, rest_r):
                continue
            # (ii) no detour from c into the rest of the set through outside components
            start = self.cg_masks[c] & ~cmask
            seen = start
            frontier = start
            detour = False
            while frontier:
                nxt = 0
                for d in bits(frontier):
                    if self.cg_masks[d] & others:
                        detour = True
                        break
                    nxt |= self.cg_masks[d]
                if detour:
                    break
                frontier = nxt & ~cmask & ~seen
                seen |= frontier
            if detour:
                continue
            # (iii) a node of c reaching into the set reaches nothing outside it
            ok = True
            for u in self.part.components[c]:
                r = self.comp_reach[u]
                if r & others and r & ~cmask:
                    ok = False
                    break
            if ok:
                found.add(c)
        return frozenset(found)

    def iter_sets(self, size, tight=False):
        """All ``size``-contracted sets in lexicographic (comps, reps) order."""
        m = self.n_components
        if size < 2 or size > m:
            return
        members = [sorted(c) for c in self.part.components]
        for comps in itertools.combinations(range(m), size):
            if tight and not self._cg_connected(comps):
                continue
            for reps in itertools.product(*(members[c] for c in comps)):
                if self.is_contracted(comps, reps, tight):
                    yield ContractedSet(comps, reps)

    def _cg_connected(self, comps):
        cmask = sum(1 << c for c in comps)
        seen = frontier = 1 << comps[0]
        while frontier:
            nxt = 0
            for d in bits(frontier):
                nxt |= self.cg_masks[d]
            frontier = nxt & cmask & ~seen
            seen |= frontier
        return seen == cmask

    def classified(self, sizes, tight=True):
        """(cset, structure, leaves, class) for every contracted set of the given sizes."""
        out = []
        for size in sizes:
            for cset in self.iter_sets(size, tight):
                st = self.structure(cset)
                lv = self.leaves(st)
                out.append((cset, st, lv, classify(st, len(lv))))
        return out


def is_contracted_set(instance, assignment, comps, reps):
    snap = Snapshot(instance, assignment)
    comps, reps = tuple(comps), tuple(reps)
    snap.check_reps(comps, reps)
    return snap.is_contracted(comps, reps)


def induced_structure(instance, assignment, cset):
    snap = Snapshot(instance, assignment)
    snap.check_reps(cset.comps, cset.reps)
    if not snap.is_contracted(cset.comps, cset.reps):
        raise ContractError(f"{cset} is not a contracted set")
    return snap.structure(cset)


def leaves(instance, assignment, structure):
    return Snapshot(instance, assignment).leaves(structure)


def is_simple_cycle(structure):
    comps = structure.base.comps
    k = len(comps)
    if len(structure.arcs) != k:
        return False
    succ = {}
    for a, b in structure.arcs:
        if a in succ:
            return False
        succ[a] = b
    if set(succ) != set(comps):
        return False
    cur, steps = comps[0], 0
    while True:
        cur = succ[cur]
        steps += 1
        if cur == comps[0]:
            return steps == k
        if steps > k:
            return False


def has_hamiltonian_cycle(structure):
    comps = structure.base.comps
    first, rest = comps[0], comps[1:]
    for perm in itertools.permutations(rest):
        order = (first,) + perm
        if all((order[t], order[(t + 1) % len(order)]) in structure.arcs for t in range(len(order))):
            return True
    return False


def classify(structure, leaf_count):
    if leaf_count >= 2:
        return StructureClass.TWO_PLUS_LEAVES
    if leaf_count == 1:
        return StructureClass.ONE_LEAF
    if is_simple_cycle(structure):
        return StructureClass.SIMPLE_CYCLE
    return StructureClass.COMBINED_CYCLES


@dataclass(frozen=True)
class Want:
    """A search query: sizes in the order tried, an optional class filter and
    whether the merged SCC must consist of exactly the chosen components."""
    sizes: tuple
    classes: frozenset = None
    tight: bool = False

    @classmethod
    def at_least(cls, k, n_components):
        return cls(tuple(range(k, n_components + 1)))


def find_contracted_set(instance, assignment, want):
    """First qualifying (cset, structure) in the query's size order, then
    lexicographic order; None if there is none."""
    snap = Snapshot(instance, assignment)
    return search(snap, want)


def search(snap, want):
    for size in want.sizes:
        for cset in snap.iter_sets(size, want.tight):
            st = snap.structure(cset)
            if want.classes is not None:
                if classify(st, len(snap.leaves(st))) not in want.classes:
                    continue
            return cset, st
    return None
