"""Dual power assignment and symmetric SCSS approximations, exact
brute-force oracles, and second-Hamiltonian-cycle tools."""
from .components import ComponentGraph, component_graph
from .contraction import (
    ContractedSet, ContractibleStructure, StructureClass, Want, classify, find_contracted_set,
    induced_structure, is_contracted_set, leaves,
)
from .digraph import DiGraph, SccPartition, condensation, is_strongly_connected, scc
from .dpa import (
    AuditReport, DpaResult, RunTrace, audit_trace, dpa_approx, phase3_optimal, ratio_bound, stage_opts,
    two_set_cover_solve,
)
from .errors import (
    AuditError, ContractError, DualPowerError, GenerationError, InputError, OracleTimeout, ParseError,
    SweepTimeout, WitnessError,
)
from .instance import Instance, Point, PowerAssignment, generate_instance, induce_graph
from .oracles import OracleBudget, dpa_opt, enumerate_gamma_ham_cycles, scss_opt
from .scss import ScssResult, SymDigraph, base_case_solve, longest_cycle, scss_approx, scss_bounded_ratio

__version__ = "0.1.0"
