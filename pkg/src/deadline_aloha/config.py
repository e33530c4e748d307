"""Parameter objects shared by the analytical and Monte Carlo engines.

All types are frozen dataclasses: they validate themselves on construction,
are hashable, and are safe to share across threads and worker processes.

Timing convention used throughout the package: a duty cycle consists of
``cycle_slots - 1`` attempt-slot positions (local slots ``1 .. cycle_slots-1``).
A device generates exactly one packet per cycle, at local slot 1, and the
packet's deadline never exceeds ``cycle_slots - 1`` slots, so every packet is
resolved (delivered or expired) before the next one is generated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Tolerance for the deadline pmf normalisation check.  Downstream matrix
#: products amplify drift, so this is kept tight.
PMF_SUM_TOL = 1e-12


@dataclass(frozen=True)
class DeadlinePmf:
    """Discrete per-packet deadline distribution.

    ``probs[k]`` is the probability that a packet's deadline equals
    ``tau_min + k`` slots.  The support therefore runs over
    ``{tau_min, ..., tau_min + len(probs) - 1}``.
    """

    tau_min: int
    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "probs", tuple(float(p) for p in self.probs))
        self._check()

    def _check(self) -> None:
        if self.tau_min < 1:
            raise ValueError(f"tau_min must be at least 1, got {self.tau_min}")
        if not self.probs:
            raise ValueError("deadline pmf needs at least one probability")
        if any(p < 0.0 for p in self.probs):
            raise ValueError("pmf probabilities must be non-negative")
        total = float(sum(self.probs))
        if abs(total - 1.0) > PMF_SUM_TOL:
            raise ValueError(f"pmf must sum to 1, got {total!r}")

    @property
    def tau_max(self) -> int:
        """Largest deadline in the support."""
        return self.tau_min + len(self.probs) - 1

    def pmf(self, t: int) -> float:
        """P(deadline == t)."""
        if self.tau_min <= t <= self.tau_max:
            return self.probs[t - self.tau_min]
        return 0.0

    def cdf(self, t: int) -> float:
        """P(deadline <= t); 0 below the support, exactly 1 above it."""
        if t < self.tau_min:
            return 0.0
        if t >= self.tau_max:
            return 1.0
        return float(sum(self.probs[: t - self.tau_min + 1]))

    def cdf_table(self, n_slots: int) -> np.ndarray:
        """CDF values for slots ``1..n_slots`` as a float array (index = slot)."""
        table = np.zeros(n_slots + 1)
        for t in range(1, n_slots + 1):
            table[t] = self.cdf(t)
        return table

    def support(self) -> np.ndarray:
        """Deadline values with positive index range, as an int array."""
        return np.arange(self.tau_min, self.tau_max + 1)


def uniform_deadline_pmf(tau_min: int, cycle_slots: int) -> DeadlinePmf:
    """Uniform deadlines over ``{tau_min, ..., cycle_slots - 1}``."""
    if not 1 <= tau_min <= cycle_slots - 1:
        raise ValueError(
            f"tau_min must lie in 1..cycle_slots-1, got tau_min={tau_min} "
            f"with cycle_slots={cycle_slots}"
        )
    n = cycle_slots - tau_min
    return DeadlinePmf(tau_min=tau_min, probs=(1.0 / n,) * n)


def deadline_cdf(pmf: DeadlinePmf, t: int) -> float:
    """Cumulative deadline distribution F(t) = P(deadline <= t)."""
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    return pmf.cdf(t)


@dataclass(frozen=True)
class NetworkParams:
    """Physical-layer parameters of the bipolar network.

    intensity      device density (devices per m^2), >= 0
    link_distance  transmitter-receiver separation R (m), > 0
    eta            path-loss exponent, > 2 (moment integrals diverge otherwise)
    theta          SIR decoding threshold (linear), > 0
    tx_power_mw    transmit power (mW); carried through to outputs but never
                   used in SIR computations: the system is interference
                   limited, so a common power level cancels
    """

    intensity: float
    link_distance: float = 2.0
    eta: float = 4.0
    theta: float = 5.0
    tx_power_mw: float = 1.0

    def __post_init__(self) -> None:
        self._check()

    def _check(self) -> None:
        if self.intensity < 0.0:
            raise ValueError(f"intensity must be non-negative, got {self.intensity}")
        if self.link_distance <= 0.0:
            raise ValueError(f"link_distance must be positive, got {self.link_distance}")
        if self.eta <= 2.0:
            raise ValueError(f"eta must exceed 2, got {self.eta}")
        if self.theta <= 0.0:
            raise ValueError(f"theta must be positive, got {self.theta}")
        if self.tx_power_mw <= 0.0:
            raise ValueError(f"tx_power_mw must be positive, got {self.tx_power_mw}")


@dataclass(frozen=True)
class TrafficParams:
    """Traffic and protocol parameters.

    cycle_slots  duty-cycle parameter T (integer >= 3); deadlines span
                 ``{1, ..., cycle_slots - 1}`` and a cycle comprises the
                 ``cycle_slots - 1`` attempt-slot positions
    aloha_p      per-slot transmit probability of an active device, in (0, 1]
    deadline     per-packet deadline distribution
    """

    cycle_slots: int
    aloha_p: float
    deadline: DeadlinePmf

    def __post_init__(self) -> None:
        self._check()

    def _check(self) -> None:
        if self.cycle_slots < 3:
            raise ValueError(
                f"cycle_slots must be at least 3, got {self.cycle_slots} "
                "(the attempt window needs at least two slots)"
            )
        if not 0.0 < self.aloha_p <= 1.0:
            raise ValueError(f"aloha_p must lie in (0, 1], got {self.aloha_p}")
        if self.deadline.tau_max > self.cycle_slots - 1:
            raise ValueError(
                f"deadline support extends to {self.deadline.tau_max} but must "
                f"not exceed cycle_slots - 1 = {self.cycle_slots - 1}"
            )

    @property
    def window(self) -> int:
        """Number of attempt-slot positions per duty cycle."""
        return self.cycle_slots - 1

    @property
    def init_vector(self) -> np.ndarray:
        """First-slot Aloha state distribution {backoff, transmit}."""
        return np.array([1.0 - self.aloha_p, self.aloha_p])


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the analytical fixed-point engine."""

    n_classes: int = 25
    epsilon: float = 1e-8
    max_iters: int = 500
    beta_tol: float = 1e-12

    def __post_init__(self) -> None:
        self._check()

    def _check(self) -> None:
        if self.n_classes < 1:
            raise ValueError(f"n_classes must be at least 1, got {self.n_classes}")
        if self.epsilon <= 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be at least 1, got {self.max_iters}")
        if self.beta_tol <= 0.0:
            raise ValueError(f"beta_tol must be positive, got {self.beta_tol}")


@dataclass(frozen=True)
class SimConfig:
    """Monte Carlo engine configuration.

    side           torus side length (m); wrap-around boundaries
    n_cycles       duty cycles simulated per replication
    warmup_cycles  leading cycles excluded from all statistics
    seed           master RNG seed; replication streams are spawned from it
    replications   independent network realizations
    min_attempts   per-link attempt count required before the link enters the
                   empirical meta distribution
    cutoff_radius  optional interference cutoff (m); None sums network-wide
    """

    side: float = 100.0
    n_cycles: int = 500
    warmup_cycles: int = 2
    seed: int = 0
    replications: int = 1
    min_attempts: int = 50
    cutoff_radius: float | None = None

    def __post_init__(self) -> None:
        self._check()

    def _check(self) -> None:
        if self.side <= 0.0:
            raise ValueError(f"side must be positive, got {self.side}")
        if self.warmup_cycles < 0:
            raise ValueError(f"warmup_cycles must be non-negative, got {self.warmup_cycles}")
        if self.n_cycles <= self.warmup_cycles:
            raise ValueError(
                f"n_cycles ({self.n_cycles}) must exceed warmup_cycles "
                f"({self.warmup_cycles})"
            )
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")
        if self.replications < 1:
            raise ValueError(f"replications must be at least 1, got {self.replications}")
        if self.min_attempts < 1:
            raise ValueError(f"min_attempts must be at least 1, got {self.min_attempts}")
        if self.cutoff_radius is not None and self.cutoff_radius <= 0.0:
            raise ValueError(f"cutoff_radius must be positive, got {self.cutoff_radius}")


def validate(
    network: NetworkParams,
    traffic: TrafficParams,
    solver: SolverConfig,
    sim: SimConfig | None = None,
) -> None:
    """Re-run every type invariant; raises ValueError on the first violation.

    Construction already enforces these, so this is primarily a guard for
    configurations assembled field-by-field (e.g. from overrides).
    """
    network._check()
    traffic._check()
    traffic.deadline._check()
    solver._check()
    if sim is not None:
        sim._check()
