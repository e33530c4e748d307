"""Fixed-point coupling of the per-class chains with the TSP distribution.

The chain solutions determine the network-average activity, the activity
determines the interference field and hence the TSP moments, and the TSP
class medians feed back into the chains.  The loop below iterates that cycle
to a fixed point:

    1. moments m1, m2 from the current (x1, ys)
    2. class medians s_1 < ... < s_L from the beta fit
    3. one chain solve per class
    4. slot-and-class average back to a macro state

Iteration is plain Picard by default; if the residual stops improving for ten
consecutive iterations the update switches to half-step damping, which tames
the oscillations that can appear at high load.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import AbsorptionSummary, ChainSolution, solve_chain, summarize_chain
from .config import NetworkParams, SolverConfig, TrafficParams
from .metadist import MacroState, MetaModel, moment_m1, moment_m2, tsp_class_medians

#: Consecutive non-improving iterations before half-step damping engages.
DAMPING_PATIENCE = 10


class ConvergenceError(RuntimeError):
    """Fixed-point iteration exhausted max_iters."""

    def __init__(self, residual: float, iterations: int, history: tuple[float, ...]):
        super().__init__(
            f"fixed point did not converge after {iterations} iterations "
            f"(last residual {residual:.3e})"
        )
        self.residual = residual
        self.iterations = iterations
        self.history = history


@dataclass(frozen=True)
class ClassSolution:
    """Chain solution and its absorption summary for one TSP class."""

    median: float
    chain: ChainSolution
    summary: AbsorptionSummary


@dataclass(frozen=True)
class Equilibrium:
    """Converged state of the coupled system."""

    macro: MacroState
    meta: MetaModel
    per_class: tuple[ClassSolution, ...]
    iterations: int
    residual: float
    residual_history: tuple[float, ...]


@dataclass(frozen=True)
class NetworkKpis:
    """Class-averaged packet outcomes of an equilibrium."""

    success_prob: float
    timeout_prob: float
    mean_success_latency: float
    mean_timeout_latency: float
    latency_pmf: np.ndarray | None


def _macro_vector(solutions: list[ChainSolution]) -> np.ndarray:
    """Unweighted class mean, then slot average over the attempt window.

    The occupancy contribution is x_t per slot; the absorption contribution is
    cumulative (everything absorbed at or before t), which is what makes each
    slot's four categories a full distribution and hence the average one too.
    """
    n = solutions[0].x.shape[0] - 1
    window = n - 1
    x_mean = np.mean([sol.x for sol in solutions], axis=0)
    y_mean = np.mean([sol.y for sol in solutions], axis=0)
    y_cum = np.cumsum(y_mean, axis=0)
    xbar = x_mean[1 : window + 1].sum(axis=0) / window
    ybar = y_cum[1 : window + 1].sum(axis=0) / window
    return np.array([xbar[0], xbar[1], ybar[0], ybar[1]])


def average_over_offsets(solutions: list[ChainSolution]) -> MacroState:
    """Average per-class chain solutions over classes and slot offsets."""
    if not solutions:
        raise ValueError("need at least one chain solution")
    v = _macro_vector(solutions)
    return MacroState(x0=v[0], x1=v[1], ys=v[2], yf=v[3])


def solve_fixed_point(
    net: NetworkParams, traffic: TrafficParams, solver: SolverConfig
) -> Equilibrium:
    """Iterate the coupled system until the macro state stops moving.

    Convergence is declared when the max absolute change across all four
    macro components drops to ``solver.epsilon``.  Raises ConvergenceError
    (carrying the residual trace) if ``solver.max_iters`` is exhausted.
    """
    window = traffic.window
    state = np.array(
        [(1.0 - traffic.aloha_p) / window, traffic.aloha_p / window, 0.0, 0.0]
    )
    history: list[float] = []
    damping = False
    stalled = 0
    prev_residual = np.inf

    for iteration in range(1, solver.max_iters + 1):
        m1 = moment_m1(net, state[1])
        m2 = moment_m2(net, state[1], state[2])
        meta = tsp_class_medians(solver.n_classes, m1, m2, solver.beta_tol)
        chains = [solve_chain(s, traffic) for s in meta.medians]
        proposal = _macro_vector(chains)
        if damping:
            proposal = 0.5 * (proposal + state)
        residual = float(np.max(np.abs(proposal - state)))
        history.append(residual)
        state = proposal
        if residual <= solver.epsilon:
            per_class = tuple(
                ClassSolution(median=float(c.s), chain=c, summary=summarize_chain(c))
                for c in chains
            )
            return Equilibrium(
                macro=MacroState(x0=state[0], x1=state[1], ys=state[2], yf=state[3]),
                meta=meta,
                per_class=per_class,
                iterations=iteration,
                residual=residual,
                residual_history=tuple(history),
            )
        stalled = stalled + 1 if residual >= prev_residual else 0
        if stalled >= DAMPING_PATIENCE:
            damping = True
        prev_residual = residual

    raise ConvergenceError(
        residual=history[-1], iterations=solver.max_iters, history=tuple(history)
    )


def network_kpis(eq: Equilibrium) -> NetworkKpis:
    """Equal-weight average of the per-class packet outcomes."""
    a = np.sum([cs.summary.a for cs in eq.per_class], axis=0)
    d = np.sum([cs.summary.d for cs in eq.per_class], axis=0)
    n_classes = len(eq.per_class)
    success = float(a[0] / n_classes)
    timeout = float(a[1] / n_classes)
    mean_success = float(d[0] / a[0]) if a[0] > 0.0 else float("nan")
    mean_timeout = float(d[1] / a[1]) if a[1] > 0.0 else float("nan")
    if a[0] > 0.0:
        latency_pmf = np.sum([cs.chain.y[2:, 0] for cs in eq.per_class], axis=0) / a[0]
    else:
        latency_pmf = None
    return NetworkKpis(
        success_prob=success,
        timeout_prob=timeout,
        mean_success_latency=mean_success,
        mean_timeout_latency=mean_timeout,
        latency_pmf=latency_pmf,
    )
