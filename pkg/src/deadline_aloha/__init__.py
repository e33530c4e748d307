"""Slotted-Aloha IoT network performance under hard packet deadlines.

Two engines over one parameter set: an analytical pipeline coupling
per-packet absorbing Markov chains with the interference-driven distribution
of link qualities, and a seeded Monte Carlo simulator of the full
spatiotemporal protocol used to validate it.
"""

__version__ = "0.1.0"

from .chain import (
    AbsorptionSummary,
    ChainSolution,
    SlotMatrices,
    absorption_distribution,
    absorption_summary,
    enumerate_paths_oracle,
    slot_matrices,
    transient_distribution,
)
from .config import (
    DeadlinePmf,
    NetworkParams,
    SimConfig,
    SolverConfig,
    TrafficParams,
    deadline_cdf,
    uniform_deadline_pmf,
    validate,
)
from .coupler import (
    ConvergenceError,
    Equilibrium,
    NetworkKpis,
    average_over_offsets,
    network_kpis,
    solve_fixed_point,
)
from .metadist import (
    DegenerateBetaError,
    MacroState,
    MetaModel,
    beta_shape,
    inv_reg_inc_beta,
    meta_ccdf,
    moment_m1,
    moment_m2,
    reg_inc_beta,
    tsp_class_medians,
)
from .simulator import (
    NetworkRealization,
    SimStats,
    conditional_tsp,
    conditional_tsp_all,
    empirical_meta_ccdf,
    realize_network,
    run_simulation,
    torus_distance,
)

__all__ = [
    "__version__",
    "AbsorptionSummary",
    "ChainSolution",
    "SlotMatrices",
    "absorption_distribution",
    "absorption_summary",
    "enumerate_paths_oracle",
    "slot_matrices",
    "transient_distribution",
    "DeadlinePmf",
    "NetworkParams",
    "SimConfig",
    "SolverConfig",
    "TrafficParams",
    "deadline_cdf",
    "uniform_deadline_pmf",
    "validate",
    "ConvergenceError",
    "Equilibrium",
    "NetworkKpis",
    "average_over_offsets",
    "network_kpis",
    "solve_fixed_point",
    "DegenerateBetaError",
    "MacroState",
    "MetaModel",
    "beta_shape",
    "inv_reg_inc_beta",
    "meta_ccdf",
    "moment_m1",
    "moment_m2",
    "reg_inc_beta",
    "tsp_class_medians",
    "NetworkRealization",
    "SimStats",
    "conditional_tsp",
    "conditional_tsp_all",
    "empirical_meta_ccdf",
    "realize_network",
    "run_simulation",
    "torus_distance",
]
