"""Seeded Monte Carlo simulation of one UAV visit cycle.

Trials are vectorized over fixed-size blocks. Block ``b`` draws from its
own stream, ``SeedSequence(seed, spawn_key=(b,))``, so results depend only
on ``(cfg, trials, seed)`` and blocks can be computed in any order.

Estimates are ED-weighted: each ED contributes the fraction of its own
messages that met an outcome, and these fractions are averaged over all
EDs and trials. This is the delivery probability of an arbitrary message
of an arbitrary ED, the quantity the closed forms describe.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analytic import DeliveryReport, EnergyReport
from .config import ScenarioConfig
from .phy import MIN_SF, dbm_to_milliwatts, frame_airtime

NEVER = -1
BLOCK_TRIALS = 512
Z_95 = 1.96

ROUTE_UAV = 1
ROUTE_DIRECT = 2


@dataclass
class CycleBlock:
    """Outcomes of ``trials`` independent cycles; message arrays are (trials, n_eds, m_max)."""

    message_count: np.ndarray
    wake_slot: np.ndarray
    valid: np.ndarray
    route: np.ndarray
    slot: np.ndarray
    freq: np.ndarray
    sf: np.ndarray
    delivered: np.ndarray
    energy_mj: np.ndarray

    @property
    def trials(self) -> int:
        return self.message_count.shape[0]


@dataclass
class EdState:
    message_count: int
    wake_slot: int
    # (message id, slot, frequency index, sf)
    uav_assignments: list[tuple[int, int, int, int]] = field(default_factory=list)
    direct_messages: list[int] = field(default_factory=list)


@dataclass
class CycleOutcome:
    """Per-message outcomes of a single cycle."""

    block: CycleBlock

    def ed_states(self) -> list[EdState]:
        b = self.block
        states = []
        for ed in range(b.message_count.shape[1]):
            state = EdState(int(b.message_count[0, ed]), int(b.wake_slot[0, ed]))
            for msg in range(state.message_count):
                if b.route[0, ed, msg] == ROUTE_UAV:
                    state.uav_assignments.append(
                        (msg, int(b.slot[0, ed, msg]), int(b.freq[0, ed, msg]), int(b.sf[0, ed, msg]))
                    )
                else:
                    state.direct_messages.append(msg)
            states.append(state)
        return states

    @property
    def total_messages(self) -> int:
        return int(self.block.valid.sum())

    @property
    def delivered_uav(self) -> int:
        return int((self.block.delivered & (self.block.route == ROUTE_UAV)).sum())

    @property
    def lost_uav(self) -> int:
        return int((~self.block.delivered & (self.block.route == ROUTE_UAV)).sum())

    @property
    def delivered_direct(self) -> int:
        return int((self.block.delivered & (self.block.route == ROUTE_DIRECT)).sum())

    @property
    def erased_direct(self) -> int:
        return int((~self.block.delivered & (self.block.route == ROUTE_DIRECT)).sum())


@dataclass(frozen=True)
class SimResult:
    trials: int
    seed: int
    messages: int
    delivery: DeliveryReport
    energy: EnergyReport
    ci_halfwidth: float
    ci_uav: float
    ci_lambda: float
    ci_energy: float


def _frame_buckets(trial, slot, freq, sf, cfg: ScenarioConfig):
    """Collision bucket of each UAV frame: frames sharing a bucket are all lost."""
    n_sf = cfg.max_sf - MIN_SF + 1
    return ((trial * cfg.n_slots + slot) * cfg.n_freq + freq) * n_sf + (sf - MIN_SF)


def simulate_block(cfg: ScenarioConfig, rng: np.random.Generator, trials: int) -> CycleBlock:
    """Simulate ``trials`` independent cycles with one generator."""
    n, n_slots, m_max = cfg.n_eds, cfg.n_slots, cfg.m_max
    shape = (trials, n, m_max)

    counts = rng.integers(1, m_max + 1, size=(trials, n))
    wub = rng.random((trials, n, n_slots)) < cfg.p_wub
    woke = wub.any(axis=2)
    wake = np.where(woke, wub.argmax(axis=2), NEVER)
    n_uav = np.minimum(counts, np.where(woke, n_slots - wake, 0))

    # Random order of the slots still open after waking; closed slots sort last.
    slot_keys = rng.random((trials, n, n_slots))
    slot_keys[np.arange(n_slots) < wake[..., None]] = 2.0
    slot_keys[~woke] = 2.0
    slot_order = np.argsort(slot_keys, axis=2, kind="stable")

    # Random order of the messages; message j exists iff j < count.
    valid = np.arange(m_max) < counts[..., None]
    msg_keys = np.where(valid, rng.random(shape), 2.0)
    msg_rank = np.argsort(np.argsort(msg_keys, axis=2, kind="stable"), axis=2, kind="stable")

    to_uav = valid & (msg_rank < n_uav[..., None])
    slot = np.take_along_axis(slot_order, np.minimum(msg_rank, n_slots - 1), axis=2)
    slot = np.where(to_uav, slot, -1)
    freq = rng.integers(0, cfg.n_freq, size=shape)
    sf = rng.integers(MIN_SF, cfg.max_sf + 1, size=shape)

    trial_idx = np.broadcast_to(np.arange(trials)[:, None, None], shape)
    buckets = _frame_buckets(trial_idx[to_uav], slot[to_uav], freq[to_uav], sf[to_uav], cfg)
    occupancy = np.bincount(buckets)
    delivered = np.zeros(shape, dtype=bool)
    delivered[to_uav] = occupancy[buckets] == 1

    to_direct = valid & ~to_uav
    erasure_draw = rng.random(shape)
    delivered |= to_direct & (erasure_draw < cfg.p_direct)

    phy = cfg.phy
    airtime_by_sf = np.array([frame_airtime(k, phy) for k in range(MIN_SF, cfg.max_sf + 1)])
    energy = np.zeros(shape)
    energy[to_uav] = dbm_to_milliwatts(cfg.tx_power_uav_dbm) * airtime_by_sf[sf[to_uav] - MIN_SF]
    energy[to_direct] = dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, phy)

    route = np.zeros(shape, dtype=np.int8)
    route[to_uav] = ROUTE_UAV
    route[to_direct] = ROUTE_DIRECT
    return CycleBlock(
        message_count=counts,
        wake_slot=wake,
        valid=valid,
        route=route,
        slot=slot,
        freq=np.where(to_uav, freq, -1),
        sf=np.where(to_uav, sf, -1),
        delivered=delivered,
        energy_mj=energy,
    )


def simulate_cycle(cfg: ScenarioConfig, rng: np.random.Generator) -> CycleOutcome:
    return CycleOutcome(simulate_block(cfg, rng, 1))


def block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def iter_blocks(cfg: ScenarioConfig, trials: int, seed: int):
    if trials < 1:
        raise ValueError(f"trials must be a positive integer, got {trials}")
    for b, start in enumerate(range(0, trials, BLOCK_TRIALS)):
        yield simulate_block(cfg, block_rng(seed, b), min(BLOCK_TRIALS, trials - start))


def _ci(p: float, n: int) -> float:
    """95% normal-approximation half-width over ``n`` messages.

    The estimate is held half an event away from 0 and 1 so the width
    does not collapse when no event was observed.
    """
    p = min(max(p, 0.5 / n), 1.0 - 0.5 / n)
    return Z_95 * float(np.sqrt(p * (1.0 - p) / n))


def run_trials(cfg: ScenarioConfig, trials: int, seed: int) -> SimResult:
    """Aggregate ``trials`` cycles into ED-weighted estimates."""
    sums = np.zeros(4)  # uav delivered, direct delivered, sent direct, energy
    energy_sq = 0.0
    eds = 0
    messages = 0
    for block in iter_blocks(cfg, trials, seed):
        counts = block.message_count
        uav_ok = (block.delivered & (block.route == ROUTE_UAV)).sum(axis=2)
        direct_ok = (block.delivered & (block.route == ROUTE_DIRECT)).sum(axis=2)
        direct = (block.route == ROUTE_DIRECT).sum(axis=2)
        energy = block.energy_mj.sum(axis=2)
        sums += [np.sum(x / counts) for x in (uav_ok, direct_ok, direct, energy)]
        energy_sq += float(np.sum((energy / counts) ** 2))
        eds += counts.size
        messages += int(counts.sum())

    s_uav, s_direct, lam, tx_energy = sums / eds
    s_total = s_uav + s_direct
    # Each ED's energy depends only on its own draws, so ED means are i.i.d.
    energy_var = max(energy_sq / eds - tx_energy**2, 0.0) * eds / max(eds - 1, 1)
    return SimResult(
        trials=trials,
        seed=seed,
        messages=messages,
        delivery=DeliveryReport(s_uav=s_uav, s_direct=s_direct, s_total=s_total, lam=lam),
        energy=EnergyReport(tx_energy_mj=tx_energy),
        ci_halfwidth=_ci(s_total, messages),
        ci_uav=_ci(s_uav, messages),
        ci_lambda=_ci(lam, messages),
        ci_energy=Z_95 * float(np.sqrt(energy_var / eds)),
    )


def tagged_slot_frequencies(cfg: ScenarioConfig, trials: int, seed: int) -> tuple[np.ndarray, int]:
    """Empirical probability that message 0 of an ED is sent to the UAV in each slot.

    Message order is randomized before slot assignment, so message 0 is an
    arbitrary message of its ED. Returns (frequency per slot, sample count).
    """
    hits = np.zeros(cfg.n_slots, dtype=np.int64)
    samples = 0
    for block in iter_blocks(cfg, trials, seed):
        slots = block.slot[..., 0]
        hits += np.bincount(slots[slots >= 0], minlength=cfg.n_slots)
        samples += slots.size
    return hits / samples, samples


def simulate_direct_backoff(cfg: ScenarioConfig, rng: np.random.Generator, trials: int = 1) -> float:
    """Fraction of direct frames lost to collisions among themselves after backoff.

    Each direct frame waits ``Z ~ Uniform{0..backoff_max}`` slots after the
    UAV leaves and picks a frequency; frames sharing both collide. All use
    the same SF. Returns 0 when no direct frames occur.
    """
    block = simulate_block(cfg, rng, trials)
    direct = block.route == ROUTE_DIRECT
    shape = direct.shape
    backoff = rng.integers(0, cfg.backoff_max + 1, size=shape)
    freq = rng.integers(0, cfg.n_freq, size=shape)
    trial_idx = np.broadcast_to(np.arange(trials)[:, None, None], shape)
    buckets = (trial_idx[direct] * (cfg.backoff_max + 1) + backoff[direct]) * cfg.n_freq + freq[direct]
    if buckets.size == 0:
        return 0.0
    occupancy = np.bincount(buckets)
    return float(np.mean(occupancy[buckets] > 1))
