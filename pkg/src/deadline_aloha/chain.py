"""Per-packet absorbing Markov chain over the Aloha protocol states.

A packet lives on the transient states {backoff, transmit} and is absorbed
into {success, timeout}.  For a device whose per-attempt decoding probability
is ``s``, the slot-t transition blocks are::

    Q_t = (1 - F(t)) * [[1-p,      p     ],        F(t) = deadline CDF at t
                        [(1-s)(1-p), (1-s)p]]      p    = aloha_p

    H_t = [[0,  F(t)          ],
           [s,  (1 - s) * F(t)]]

Rows of ``[Q_t | H_t]`` are stochastic: a failed attempt either survives into
slot t+1 (Q) or is absorbed (H) because it decoded or its deadline elapsed.
The deadline enters as the per-slot elapse probability F(t), evaluated
unconditionally at each slot.

State vectors follow 1-based slot indexing: ``x[t]`` is the occupancy of
{backoff, transmit} at slot ``t`` and ``y[t]`` the probability of absorption
recorded at slot ``t`` (i.e. caused by the slot ``t-1`` events).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import TrafficParams

#: Decoding probabilities further than this outside [0, 1] are rejected;
#: anything closer is round-off from upstream quantile inversion and clamped.
TSP_CLAMP_TOL = 1e-9


def _clamp_tsp(s: float) -> float:
    if not -TSP_CLAMP_TOL <= s <= 1.0 + TSP_CLAMP_TOL:
        raise ValueError(f"decoding probability must lie in [0, 1], got {s}")
    return min(max(float(s), 0.0), 1.0)


@dataclass(frozen=True)
class SlotMatrices:
    """Transient block Q and absorption block H for one local slot."""

    Q: np.ndarray
    H: np.ndarray


@dataclass(frozen=True)
class ChainSolution:
    """Slot-by-slot transient occupancy and absorption of one chain.

    x : (cycle_slots + 1, 2) array; rows 1..cycle_slots hold the {backoff,
        transmit} occupancy, with ``x[1] = init_vector`` and
        ``x[cycle_slots] = 0`` (absorption is certain by then).
    y : (cycle_slots + 1, 2) array; rows 1..cycle_slots hold the {success,
        timeout} absorption recorded at each slot, ``y[1] = 0``.
    s : decoding probability the chain was built with.
    beta : the initial Aloha state distribution.
    """

    s: float
    beta: np.ndarray
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class AbsorptionSummary:
    """Final-state split and scaled absorption times of one chain.

    a : (2,) array {a_success, a_timeout}; sums to 1.
    d : (2,) array; ``d[k] / a[k]`` is the mean number of slots until
        absorption into state k.
    latency_pmf : P(delivery latency == t) for t = 1..window, conditioned on
        success; ``None`` when the success probability is zero.
    """

    a: np.ndarray
    d: np.ndarray
    latency_pmf: np.ndarray | None

    @property
    def success_prob(self) -> float:
        return float(self.a[0])

    @property
    def timeout_prob(self) -> float:
        return float(self.a[1])

    @property
    def mean_success_time(self) -> float:
        """Mean slots to delivery, conditioned on success (nan if impossible)."""
        return float(self.d[0] / self.a[0]) if self.a[0] > 0.0 else float("nan")

    @property
    def mean_timeout_time(self) -> float:
        return float(self.d[1] / self.a[1]) if self.a[1] > 0.0 else float("nan")


def slot_matrices(s: float, traffic: TrafficParams, t: int) -> SlotMatrices:
    """Build the (Q_t, H_t) blocks for local slot ``t`` in 1..window."""
    if not 1 <= t <= traffic.window:
        raise ValueError(
            f"slot index must lie in 1..{traffic.window}, got {t}"
        )
    s = _clamp_tsp(s)
    p = traffic.aloha_p
    ft = traffic.deadline.cdf(t)
    fbar = 1.0 - ft
    sbar = 1.0 - s
    q = fbar * np.array([[1.0 - p, p], [sbar * (1.0 - p), sbar * p]])
    h = np.array([[0.0, ft], [s, sbar * ft]])
    return SlotMatrices(Q=q, H=h)


@lru_cache(maxsize=128)
def _cdf_by_slot(traffic: TrafficParams) -> tuple[float, ...]:
    return tuple(traffic.deadline.cdf(t) for t in range(traffic.window + 1))


def solve_chain(s: float, traffic: TrafficParams) -> ChainSolution:
    """Propagate the chain through one duty cycle.

    The recursion keeps a single running row vector (x_{t+1} = x_t Q_t,
    y_{t+1} = x_t H_t) rather than materialising the full block matrix;
    with the block structure above that collapses to scalar updates on
    u = x0 + (1-s) x1, the mass that failed to leave by decoding.
    """
    s = _clamp_tsp(s)
    n = traffic.cycle_slots
    p = traffic.aloha_p
    sbar = 1.0 - s
    cdf = _cdf_by_slot(traffic)
    beta = traffic.init_vector
    x = np.zeros((n + 1, 2))
    y = np.zeros((n + 1, 2))
    x[1] = beta
    x0, x1 = float(beta[0]), float(beta[1])
    for t in range(1, n):
        ft = cdf[t]
        u = x0 + sbar * x1
        y[t + 1, 0] = s * x1
        y[t + 1, 1] = ft * u
        if t + 1 <= n - 1:
            survivors = (1.0 - ft) * u
            x0 = survivors * (1.0 - p)
            x1 = survivors * p
            x[t + 1, 0] = x0
            x[t + 1, 1] = x1
    return ChainSolution(s=s, beta=beta, x=x, y=y)


def transient_distribution(s: float, traffic: TrafficParams) -> np.ndarray:
    """Occupancy vectors x_t for t = 1..cycle_slots (row index = slot)."""
    return solve_chain(s, traffic).x


def absorption_distribution(s: float, traffic: TrafficParams) -> np.ndarray:
    """Absorption vectors y_t for t = 1..cycle_slots (row index = slot)."""
    return solve_chain(s, traffic).y


def summarize_chain(solution: ChainSolution) -> AbsorptionSummary:
    """Absorption split, scaled mean absorption times and latency pmf."""
    n = solution.y.shape[0] - 1
    a = solution.y[2:].sum(axis=0)
    # y[t+1] records events of slot t, so absorption at y[t+1] took t slots
    weights = np.arange(1, n)
    d = (weights[:, None] * solution.y[2:]).sum(axis=0)
    if a[0] > 0.0:
        latency_pmf = solution.y[2:, 0] / a[0]
    else:
        latency_pmf = None
    return AbsorptionSummary(a=a, d=d, latency_pmf=latency_pmf)


def absorption_summary(s: float, traffic: TrafficParams) -> AbsorptionSummary:
    """Solve the chain and summarize where its probability mass ends up."""
    return summarize_chain(solve_chain(s, traffic))


def enumerate_paths_oracle(s: float, traffic: TrafficParams) -> AbsorptionSummary:
    """Exact absorption statistics by brute-force path enumeration.

    Walks every sequence of per-slot draws (Aloha transmit draw, decode draw,
    deadline-elapse draw) with its probability, touching no matrices at all,
    which makes it an independent check of the recursion above.  Within a
    slot: a decoded transmission succeeds; otherwise the packet times out if
    the elapse draw fires; otherwise it survives into the next slot.
    Exponential in the window length, hence the size guard.
    """
    if traffic.cycle_slots > 8:
        raise ValueError(
            "path enumeration is exponential in the window; "
            f"cycle_slots must be <= 8, got {traffic.cycle_slots}"
        )
    s = _clamp_tsp(s)
    p = traffic.aloha_p
    window = traffic.window
    elapse = [traffic.deadline.cdf(t) for t in range(window + 1)]

    a = [0.0, 0.0]
    d = [0.0, 0.0]
    success_by_slot = [0.0] * (window + 1)

    def walk(t: int, mass: float) -> None:
        # transmit branch: decode draw first
        tx = mass * p
        won = tx * s
        a[0] += won
        d[0] += t * won
        success_by_slot[t] += won
        # losing transmission and backoff both face the elapse draw
        for stuck in (tx * (1.0 - s), mass * (1.0 - p)):
            out = stuck * elapse[t]
            a[1] += out
            d[1] += t * out
            survive = stuck * (1.0 - elapse[t])
            if survive > 0.0 and t < window:
                walk(t + 1, survive)

    walk(1, 1.0)
    if a[0] > 0.0:
        latency_pmf = np.array(success_by_slot[1:]) / a[0]
    else:
        latency_pmf = None
    return AbsorptionSummary(a=np.array(a), d=np.array(d), latency_pmf=latency_pmf)
