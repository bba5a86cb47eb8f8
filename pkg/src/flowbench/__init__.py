"""flowbench: max-flow/min-cut solver suite with verification and benchmarking.

Four solvers behind one interface (push-relabel, Hochbaum pseudoflow,
Boykov-Kolmogorov, partial augment-relabel), an independent verification
oracle, DIMACS I/O, synthetic vision-style instance generators, and a
benchmark harness with three-phase timing and memory measurement.
"""

from .boykov_kolmogorov import bk_solve
from .dimacs import (ProblemInstance, parse_dimacs, write_cut_solution,
                     write_dimacs, write_flow_solution)
from .errors import (CutDisagreementError, DimacsFormatError, FlowbenchError,
                     GraphBuildError, SolverInvariantError, VerificationFailure)
from .generators import InstanceSpec, generate_instance
from .network import (CutSolution, FlowNetwork, FlowState, build_network,
                      recompute_excesses, residual_capacity)
from .partial_augment import par_recover_flow, par_solve
from .pseudoflow import hpf_min_cut, hpf_recover_flow, hpf_simple_init
from .push_relabel import prf_min_cut, prf_recover_flow
from .report import SolveReport, TimingBreakdown
from .solvers import ALGORITHMS, solve
from .verify import (brute_force_min_cut, certify, check_feasible_flow,
                     cut_capacity)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS", "CutDisagreementError", "CutSolution", "DimacsFormatError",
    "FlowNetwork", "FlowState", "FlowbenchError", "GraphBuildError",
    "InstanceSpec", "ProblemInstance", "SolveReport", "SolverInvariantError",
    "TimingBreakdown", "VerificationFailure", "bk_solve", "brute_force_min_cut",
    "build_network", "certify", "check_feasible_flow", "cut_capacity",
    "generate_instance", "hpf_min_cut", "hpf_recover_flow", "hpf_simple_init",
    "par_recover_flow", "par_solve", "parse_dimacs", "prf_min_cut",
    "prf_recover_flow", "recompute_excesses", "residual_capacity", "solve",
    "write_cut_solution", "write_dimacs", "write_flow_solution",
]
