"""Analytic model, Monte Carlo simulator and sweep harness for WuR-triggered UAV LoRa uplinks."""

__version__ = "0.1.0"

from .analytic import (
    DeliveryReport,
    EnergyReport,
    WakeupPmf,
    energy_classb,
    energy_direct,
    energy_wur,
    mdp_classb,
    mdp_direct,
    mdp_wur,
)
from .config import ScenarioConfig
from .phy import ConfigError, PhyParams, SfSet, dbm_to_milliwatts, frame_airtime, slot_length, sf_probability
from .simulator import SimResult, run_trials, simulate_cycle

__all__ = [
    "ConfigError",
    "DeliveryReport",
    "EnergyReport",
    "PhyParams",
    "ScenarioConfig",
    "SfSet",
    "SimResult",
    "WakeupPmf",
    "dbm_to_milliwatts",
    "energy_classb",
    "energy_direct",
    "energy_wur",
    "frame_airtime",
    "mdp_classb",
    "mdp_direct",
    "mdp_wur",
    "run_trials",
    "sf_probability",
    "simulate_cycle",
    "slot_length",
]
