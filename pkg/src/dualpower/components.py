"""The components graph CG_R: SCCs of G_R joined when any two of their nodes
lie within the high range of each other."""
from dataclasses import dataclass
from functools import cached_property

from .digraph import SccPartition, bits, scc
from .instance import PowerAssignment, induce_graph


@dataclass(frozen=True)
class ComponentGraph:
    partition: SccPartition
    edges: frozenset  # {(i, j), i < j}

    def __len__(self):
        return len(self.partition)

    @cached_property
    def neighbours(self):
        nb = [set() for _ in range(len(self))]
        for i, j in self.edges:
            nb[i].add(j)
            nb[j].add(i)
        return tuple(frozenset(s) for s in nb)

    def witness(self, instance, i, j):
        """Smallest node pair (u in C_i, v in C_j) within the high range."""
        hi = instance.high_masks
        for u in sorted(self.partition.components[i]):
            common = hi[u] & self.partition.masks[j]
            if common:
                return u, next(bits(common))
        return None

    def to_dot(self, name="CG"):
        lines = [f"graph {name} {{"]
        lines += [f"  {c};" for c in range(len(self))]
        lines += [f"  {i} -- {j};" for i, j in sorted(self.edges)]
        lines.append("}")
        return "\n".join(lines) + "\n"


def component_graph(instance, assignment=None):
    assignment = assignment or PowerAssignment()
    part = scc(induce_graph(instance, assignment))
    return component_graph_of(instance, part)


def component_graph_of(instance, part):
    hi = instance.high_masks
    # high-range neighbourhood of each component (symmetric relation)
    touch = []
    for comp in part.components:
        m = 0
        for u in comp:
            m |= hi[u]
        touch.append(m)
    edges = set()
    for i, m in enumerate(touch):
        for j in range(i + 1, len(part)):
            if m & part.masks[j]:
                edges.add((i, j))
    return ComponentGraph(part, frozenset(edges))
