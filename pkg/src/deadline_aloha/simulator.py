"""Seeded Monte Carlo engine for the slotted protocol on a torus.

The network is a marked Poisson bipolar process: transmitter locations are a
Poisson scatter over a square torus, each with a dedicated receiver at the
link distance and a uniform angle.  Every device runs the duty cycle
described in :mod:`deadline_aloha.config`: one packet per cycle, a fresh
deadline draw at generation, Aloha transmit draws each slot, absorption on
SIR success or deadline expiry, then idle until its next cycle.

Per slot, every concurrently transmitting device contributes interference to
every active receiver (no cutoff unless configured), with fresh unit-mean
exponential fades per transmitting link and per interfering pair.  Decoding
succeeds when SIR exceeds the threshold; with no interferers the SIR is
infinite and the attempt always succeeds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .config import NetworkParams, SimConfig, TrafficParams
from .metadist import MacroState


def torus_distance(p: np.ndarray, q: np.ndarray, side: float) -> np.ndarray:
    """Euclidean distance with per-axis wrap-around on a square torus.

    Broadcasts over leading dimensions; the last axis holds (x, y).
    """
    delta = np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float))
    delta = np.minimum(delta, side - delta)
    return np.hypot(delta[..., 0], delta[..., 1])


@dataclass(frozen=True)
class NetworkRealization:
    """One draw of the marked bipolar network.

    tx, rx   (n, 2) positions in [0, side)^2; rx_i sits at the link distance
             from tx_i under the torus metric
    offsets  per-device cycle phase in {0, ..., window - 1}
    side     torus side length (m)
    """

    tx: np.ndarray
    rx: np.ndarray
    offsets: np.ndarray
    side: float

    def __len__(self) -> int:
        return len(self.offsets)

    def link_distances(self) -> np.ndarray:
        """Torus distance of each transmitter to its own receiver."""
        return torus_distance(self.tx, self.rx, self.side)

    def cross_gains(self, eta: float, cutoff_radius: float | None = None) -> np.ndarray:
        """Path gain from tx_j into rx_i as an (n, n) matrix, zero diagonal.

        Gains beyond ``cutoff_radius`` are zeroed when a cutoff is set.
        Dense by construction; intended for desk-scale realizations.
        """
        dist = torus_distance(self.rx[:, None, :], self.tx[None, :, :], self.side)
        with np.errstate(divide="ignore"):
            gain = dist**-eta
        np.fill_diagonal(gain, 0.0)
        if cutoff_radius is not None:
            gain[dist > cutoff_radius] = 0.0
        return gain


@dataclass
class SimStats:
    """Tallies from one (or several merged) replications.

    Packet-level counters cover packets generated in measured cycles only;
    their attempts are attributed to the packet even when the absorbing slot
    spills past the measurement window.  Slot-level occupancy counters cover
    the measured slot range and classify every device-slot into transmit,
    backoff, idle-after-success, idle-after-timeout, or fresh (no packet
    history yet, only possible with warmup_cycles = 0).
    """

    n_devices: int
    attempts: np.ndarray
    sir_successes: np.ndarray
    packets_generated: int
    packet_successes: int
    packet_timeouts: int
    success_latency: np.ndarray
    timeout_latency: np.ndarray
    transmit_slots: int
    backoff_slots: int
    idle_success_slots: int
    idle_timeout_slots: int
    fresh_slots: int
    observed_slots: int
    device_slots: int

    @classmethod
    def merge(cls, parts: list["SimStats"]) -> "SimStats":
        """Pool replications: per-link arrays concatenate, counters add."""
        if not parts:
            raise ValueError("nothing to merge")
        width = {p.success_latency.shape[0] for p in parts}
        if len(width) != 1:
            raise ValueError("cannot merge stats with different cycle lengths")
        return cls(
            n_devices=sum(p.n_devices for p in parts),
            attempts=np.concatenate([p.attempts for p in parts]),
            sir_successes=np.concatenate([p.sir_successes for p in parts]),
            packets_generated=sum(p.packets_generated for p in parts),
            packet_successes=sum(p.packet_successes for p in parts),
            packet_timeouts=sum(p.packet_timeouts for p in parts),
            success_latency=np.sum([p.success_latency for p in parts], axis=0),
            timeout_latency=np.sum([p.timeout_latency for p in parts], axis=0),
            transmit_slots=sum(p.transmit_slots for p in parts),
            backoff_slots=sum(p.backoff_slots for p in parts),
            idle_success_slots=sum(p.idle_success_slots for p in parts),
            idle_timeout_slots=sum(p.idle_timeout_slots for p in parts),
            fresh_slots=sum(p.fresh_slots for p in parts),
            observed_slots=sum(p.observed_slots for p in parts),
            device_slots=sum(p.device_slots for p in parts),
        )

    def link_tsp(self, min_attempts: int) -> np.ndarray:
        """Per-link empirical success ratios, links with enough attempts."""
        mask = self.attempts >= min_attempts
        return self.sir_successes[mask] / self.attempts[mask]

    def empirical_macro(self) -> MacroState:
        """Observed device-state occupancy as a macro state."""
        denom = self.device_slots - self.fresh_slots
        if denom <= 0:
            raise ValueError("no measured device-slots")
        return MacroState(
            x0=self.backoff_slots / denom,
            x1=self.transmit_slots / denom,
            ys=self.idle_success_slots / denom,
            yf=self.idle_timeout_slots / denom,
        )

    def success_fraction(self) -> float:
        done = self.packet_successes + self.packet_timeouts
        return self.packet_successes / done if done else float("nan")

    def mean_success_latency(self) -> float:
        lat = np.arange(self.success_latency.shape[0])
        n = self.success_latency.sum()
        return float((lat * self.success_latency).sum() / n) if n else float("nan")

    def mean_timeout_latency(self) -> float:
        lat = np.arange(self.timeout_latency.shape[0])
        n = self.timeout_latency.sum()
        return float((lat * self.timeout_latency).sum() / n) if n else float("nan")


def realize_network(
    net: NetworkParams,
    traffic: TrafficParams,
    sim: SimConfig,
    rng: np.random.Generator,
) -> NetworkRealization:
    """Draw device locations, receivers, and cycle phases."""
    if sim.side < 20.0 * net.link_distance:
        warnings.warn(
            f"torus side {sim.side} is below 20 link distances; "
            "wrap-around artefacts may be visible",
            stacklevel=2,
        )
    n = int(rng.poisson(net.intensity * sim.side**2))
    if n == 0:
        raise ValueError("empty realization: the Poisson draw produced no devices")
    tx = rng.uniform(0.0, sim.side, size=(n, 2))
    angles = rng.uniform(0.0, 2.0 * np.pi, size=n)
    rx = np.mod(
        tx + net.link_distance * np.column_stack([np.cos(angles), np.sin(angles)]),
        sim.side,
    )
    offsets = rng.integers(0, traffic.window, size=n)
    return NetworkRealization(tx=tx, rx=rx, offsets=offsets, side=sim.side)


def run_simulation(
    realization: NetworkRealization,
    net: NetworkParams,
    traffic: TrafficParams,
    sim: SimConfig,
    rng: np.random.Generator,
) -> SimStats:
    """Advance the slotted protocol through warmup plus measured cycles."""
    n = len(realization)
    window = traffic.window
    p_aloha = traffic.aloha_p
    theta = net.theta
    signal_gain = net.link_distance**-net.eta
    gains = realization.cross_gains(net.eta, sim.cutoff_radius)
    support = traffic.deadline.support()
    probs = np.asarray(traffic.deadline.probs)
    probs = probs / probs.sum()

    # per-device packet state; state codes: 0 fresh, 1 alive, 2 done-success,
    # 3 done-timeout
    state = np.zeros(n, dtype=np.int8)
    age = np.zeros(n, dtype=np.int64)
    deadline = np.zeros(n, dtype=np.int64)
    measured = np.zeros(n, dtype=bool)

    attempts = np.zeros(n, dtype=np.int64)
    sir_successes = np.zeros(n, dtype=np.int64)
    packets_generated = 0
    packet_successes = 0
    packet_timeouts = 0
    success_latency = np.zeros(window + 1, dtype=np.int64)
    timeout_latency = np.zeros(window + 1, dtype=np.int64)
    transmit_slots = 0
    backoff_slots = 0
    idle_success_slots = 0
    idle_timeout_slots = 0
    fresh_slots = 0
    observed_slots = 0

    first_measured_slot = sim.warmup_cycles * window
    last_measured_slot = sim.n_cycles * window
    total_slots = (sim.n_cycles + 1) * window  # tail lets final packets resolve

    for g in range(total_slots):
        cycle, phase = divmod(g, window)
        if cycle < sim.n_cycles:
            gen = realization.offsets == phase
            n_gen = int(gen.sum())
            if n_gen:
                state[gen] = 1
                age[gen] = 0
                deadline[gen] = rng.choice(support, size=n_gen, p=probs)
                in_window = cycle >= sim.warmup_cycles
                measured[gen] = in_window
                if in_window:
                    packets_generated += n_gen

        alive = state == 1
        age[alive] += 1
        sending = alive & (rng.random(n) < p_aloha)
        senders = np.flatnonzero(sending)

        if first_measured_slot <= g < last_measured_slot:
            observed_slots += 1
            transmit_slots += senders.size
            backoff_slots += int(alive.sum()) - senders.size
            idle_success_slots += int((state == 2).sum())
            idle_timeout_slots += int((state == 3).sum())
            fresh_slots += int((state == 0).sum())

        if senders.size:
            own_fade = rng.exponential(size=senders.size)
            pair_fades = rng.exponential(size=(senders.size, senders.size))
            interference = (pair_fades * gains[np.ix_(senders, senders)]).sum(axis=1)
            decoded = own_fade * signal_gain > theta * interference
            meas = measured[senders]
            attempts[senders[meas]] += 1
            winners = senders[decoded]
            sir_successes[senders[meas & decoded]] += 1
            n_meas_wins = int((meas & decoded).sum())
            packet_successes += n_meas_wins
            if n_meas_wins:
                np.add.at(success_latency, age[senders[meas & decoded]], 1)
            state[winners] = 2

        expired = (state == 1) & (age >= deadline)
        if expired.any():
            meas_exp = expired & measured
            packet_timeouts += int(meas_exp.sum())
            np.add.at(timeout_latency, deadline[meas_exp], 1)
            state[expired] = 3

    return SimStats(
        n_devices=n,
        attempts=attempts,
        sir_successes=sir_successes,
        packets_generated=packets_generated,
        packet_successes=packet_successes,
        packet_timeouts=packet_timeouts,
        success_latency=success_latency,
        timeout_latency=timeout_latency,
        transmit_slots=transmit_slots,
        backoff_slots=backoff_slots,
        idle_success_slots=idle_success_slots,
        idle_timeout_slots=idle_timeout_slots,
        fresh_slots=fresh_slots,
        observed_slots=observed_slots,
        device_slots=n * observed_slots,
    )


def conditional_tsp(
    realization: NetworkRealization,
    link: int,
    macro: MacroState,
    net: NetworkParams,
) -> float:
    """Per-link success probability given the geometry and the macro state.

    Every other device contributes one factor: it is treated as transmitting,
    backing off, or timed out with the macro-state probabilities renormalized
    over the not-yet-succeeded mass, and a transmitting interferer at distance
    d attenuates the success odds by 1 / (1 + theta (R/d)^eta).
    """
    return float(conditional_tsp_all(realization, macro, net, links=[link])[0])


def conditional_tsp_all(
    realization: NetworkRealization,
    macro: MacroState,
    net: NetworkParams,
    links: np.ndarray | list[int] | None = None,
    chunk: int = 256,
) -> np.ndarray:
    """Vectorized :func:`conditional_tsp` over many links."""
    idx = np.arange(len(realization)) if links is None else np.asarray(links)
    remaining = 1.0 - macro.ys
    if remaining <= 0.0:
        raise ValueError("macro state has no unabsorbed mass")
    silent = (macro.x0 + macro.yf) / remaining
    active = macro.x1 / remaining
    theta_r = net.theta * net.link_distance**net.eta
    out = np.empty(idx.size)
    for start in range(0, idx.size, chunk):
        rows = idx[start : start + chunk]
        dist = torus_distance(
            realization.rx[rows, None, :], realization.tx[None, :, :], realization.side
        )
        factors = active / (1.0 + theta_r / dist**net.eta) + silent
        factors[np.arange(rows.size), rows] = 1.0
        out[start : start + chunk] = factors.prod(axis=1)
    return out


def empirical_meta_ccdf(
    stats: SimStats, grid: np.ndarray, min_attempts: int = 50
) -> np.ndarray:
    """Fraction of well-sampled links whose empirical TSP reaches each level.

    A link counts toward level gamma when its success ratio is >= gamma, so
    the curve is exactly 1 at gamma = 0 and equals the zero-failure fraction
    at gamma = 1.
    """
    grid = np.asarray(grid, dtype=float)
    if np.any((grid < 0.0) | (grid > 1.0)):
        raise ValueError("grid values must lie in [0, 1]")
    tsp = stats.link_tsp(min_attempts)
    if tsp.size == 0:
        raise ValueError(
            f"no links with at least {min_attempts} recorded attempts"
        )
    return (tsp[None, :] >= grid[:, None]).mean(axis=1)
