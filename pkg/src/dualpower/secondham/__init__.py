"""Second V-Hamiltonian cycles: search, constructive transforms, the
lollipop walk and the exhaustive sweep."""
from .forest import forest_decompose_deg23, odd_forest_decompose
from .lollipop import hamiltonian_cubic_graphs, lollipop_second_cycle, lollipop_walk
from .structure import (
    CycleWitness, StructureGraph, find_sec_ham, read_structure, shared_neighbour_witness,
    validate_witness, write_structure,
)
from .sweep import SweepReport, random_tree_instance, verify_conjecture_sweep
from .transforms import (
    Transformed, bipartize, constructive_sec_ham, duplicate_transform, leaf_transform, split_high_degree,
)
