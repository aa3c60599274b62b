"""Closed-form delivery probability and energy for the WuR scheme and its baselines.

Message counts are uniform on ``1..m_max``; every ED wakes in the first
slot whose WUB it receives. Frames to the UAV are lost only when another
frame in the same slot uses the same frequency and SF. The direct link is
an erasure channel with success probability ``p_direct``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import ScenarioConfig
from .phy import dbm_to_milliwatts, frame_airtime, sf_probability


@dataclass(frozen=True)
class WakeupPmf:
    """Distribution of the wake-up slot; ``never_wakes`` is the leftover mass."""

    mass: np.ndarray
    never_wakes: float

    def total(self) -> float:
        return float(self.mass.sum()) + self.never_wakes


@dataclass(frozen=True)
class DeliveryReport:
    s_uav: float
    s_direct: float
    s_total: float
    lam: float


@dataclass(frozen=True)
class EnergyReport:
    """Per-message TX energy (mJ) and per-cycle receive cost.

    ``rx_airtime_s_per_cycle`` is the receive energy normalized by the
    receive power; ``rx_energy_mj_per_cycle`` is set only when that power
    is known.
    """

    tx_energy_mj: float
    rx_airtime_s_per_cycle: float = 0.0
    rx_energy_mj_per_cycle: float | None = None


def wakeup_pmf(cfg: ScenarioConfig) -> WakeupPmf:
    p = cfg.p_wub
    slots = np.arange(cfg.n_slots)
    mass = (1.0 - p) ** slots * p
    return WakeupPmf(mass=mass, never_wakes=(1.0 - p) ** cfg.n_slots)


def remaining_slots(i, cfg: ScenarioConfig):
    """N(i): slots left to an ED that wakes in slot ``i``."""
    return cfg.n_slots - i


def _check_slot(value: int, name: str, cfg: ScenarioConfig) -> None:
    if not 0 <= value <= cfg.n_slots - 1:
        raise ValueError(f"{name} must lie in [0, {cfg.n_slots - 1}], got {value}")


def cond_tx_prob(s: int, i: int, m0: int, cfg: ScenarioConfig) -> float:
    """Probability an ED with ``m0`` messages waking in slot ``i`` sends in slot ``s``."""
    _check_slot(s, "s", cfg)
    _check_slot(i, "i", cfg)
    if not 1 <= m0 <= cfg.m_max:
        raise ValueError(f"m0 must lie in [1, {cfg.m_max}], got {m0}")
    if s < i:
        return 0.0
    return min(m0 / remaining_slots(i, cfg), 1.0)


def _per_wake_slot_terms(cfg: ScenarioConfig) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per wake slot i: P_W(i), mean_m0 min{m0/N(i),1}, mean_m0 min{N(i)/m0,1}."""
    pmf = wakeup_pmf(cfg).mass
    n_rem = remaining_slots(np.arange(cfg.n_slots), cfg).astype(float)
    m0 = np.arange(1, cfg.m_max + 1, dtype=float)[:, None]
    busy = np.minimum(m0 / n_rem, 1.0).sum(axis=0) / cfg.m_max
    picked = np.minimum(n_rem / m0, 1.0).sum(axis=0) / cfg.m_max
    return pmf, busy, picked


def collision_probs(cfg: ScenarioConfig) -> np.ndarray:
    """P_col(s) for every slot s: an arbitrary other ED also transmits in s."""
    pmf, busy, _ = _per_wake_slot_terms(cfg)
    return np.cumsum(busy * pmf)


def collision_prob(s: int, cfg: ScenarioConfig) -> float:
    _check_slot(s, "s", cfg)
    return float(collision_probs(cfg)[s])


def single_ed_loss_probs(cfg: ScenarioConfig) -> np.ndarray:
    return sf_probability(cfg.sf_set) / cfg.n_freq * collision_probs(cfg)


def single_ed_loss_prob(s: int, cfg: ScenarioConfig) -> float:
    _check_slot(s, "s", cfg)
    return float(single_ed_loss_probs(cfg)[s])


def uav_success_probs(cfg: ScenarioConfig) -> np.ndarray:
    return (1.0 - single_ed_loss_probs(cfg)) ** (cfg.n_eds - 1)


def uav_success_prob(s: int, cfg: ScenarioConfig) -> float:
    _check_slot(s, "s", cfg)
    return float(uav_success_probs(cfg)[s])


def msg_tx_probs(cfg: ScenarioConfig) -> np.ndarray:
    """T(s) for every slot s: a tagged message goes to the UAV in slot s."""
    pmf, _, picked = _per_wake_slot_terms(cfg)
    n_rem = remaining_slots(np.arange(cfg.n_slots), cfg)
    return np.cumsum(pmf * picked / n_rem)


def msg_tx_prob(s: int, cfg: ScenarioConfig) -> float:
    _check_slot(s, "s", cfg)
    return float(msg_tx_probs(cfg)[s])


def not_sent_to_uav_prob(cfg: ScenarioConfig) -> float:
    """lambda: probability a tagged message is left for the direct link."""
    pmf, _, picked = _per_wake_slot_terms(cfg)
    return float(1.0 - np.sum(pmf * picked))


def mdp_wur(cfg: ScenarioConfig) -> DeliveryReport:
    s_uav = float(np.sum(msg_tx_probs(cfg) * uav_success_probs(cfg)))
    lam = not_sent_to_uav_prob(cfg)
    s_direct = lam * cfg.p_direct
    return DeliveryReport(s_uav=s_uav, s_direct=s_direct, s_total=s_uav + s_direct, lam=lam)


def mean_uav_frame_energy_mj(cfg: ScenarioConfig) -> float:
    """Expected energy of one UAV-bound frame, SF drawn uniformly from the set."""
    eta = sf_probability(cfg.sf_set)
    power = dbm_to_milliwatts(cfg.tx_power_uav_dbm)
    return sum(eta * power * frame_airtime(k, cfg.phy) for k in cfg.sf_set)


def direct_frame_energy_mj(cfg: ScenarioConfig) -> float:
    return dbm_to_milliwatts(cfg.tx_power_direct_dbm) * frame_airtime(cfg.sf_direct, cfg.phy)


def _mixed_tx_energy(lam: float, cfg: ScenarioConfig) -> float:
    return (1.0 - lam) * mean_uav_frame_energy_mj(cfg) + lam * direct_frame_energy_mj(cfg)


def energy_wur(cfg: ScenarioConfig) -> EnergyReport:
    # Wake-up radio listening cost is negligible next to the main radio.
    return EnergyReport(tx_energy_mj=_mixed_tx_energy(not_sent_to_uav_prob(cfg), cfg))


def mdp_direct(cfg: ScenarioConfig) -> DeliveryReport:
    return DeliveryReport(s_uav=0.0, s_direct=cfg.p_direct, s_total=cfg.p_direct, lam=1.0)


def energy_direct(cfg: ScenarioConfig) -> EnergyReport:
    return EnergyReport(tx_energy_mj=direct_frame_energy_mj(cfg))


def classb_collision_prob(cfg: ScenarioConfig) -> float:
    m0 = np.arange(1, cfg.m_max + 1)
    return float(np.minimum(m0 / cfg.n_slots, 1.0).sum() / cfg.m_max)


def classb_not_sent_prob(cfg: ScenarioConfig) -> float:
    m0 = np.arange(1, cfg.m_max + 1)
    return float(1.0 - np.minimum(cfg.n_slots / m0, 1.0).sum() / cfg.m_max)


def mdp_classb(cfg: ScenarioConfig) -> DeliveryReport:
    """Ideal Class B: every ED is awake from slot 0."""
    lam = classb_not_sent_prob(cfg)
    loss = sf_probability(cfg.sf_set) / cfg.n_freq * classb_collision_prob(cfg)
    s_uav = (1.0 - lam) * (1.0 - loss) ** (cfg.n_eds - 1)
    s_direct = lam * cfg.p_direct
    return DeliveryReport(s_uav=s_uav, s_direct=s_direct, s_total=s_uav + s_direct, lam=lam)


def classb_rx_airtime(cfg: ScenarioConfig) -> float:
    """Seconds per cycle spent receiving pings and beacons."""
    phy = cfg.phy
    ping = frame_airtime(cfg.beacon_sf, phy, cfg.ping_bytes)
    beacon = frame_airtime(cfg.beacon_sf, phy, cfg.beacon_bytes)
    return cfg.uav_period_s / cfg.ping_period_s * ping + cfg.uav_period_s / cfg.beacon_period_s * beacon


def energy_classb(cfg: ScenarioConfig, p_rx_mw: float | None = None) -> EnergyReport:
    rx_airtime = classb_rx_airtime(cfg)
    return EnergyReport(
        tx_energy_mj=_mixed_tx_energy(classb_not_sent_prob(cfg), cfg),
        rx_airtime_s_per_cycle=rx_airtime,
        rx_energy_mj_per_cycle=None if p_rx_mw is None else rx_airtime * p_rx_mw,
    )
