"""Scenario parameters shared by the analytic model and the simulator."""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, fields

from .phy import ConfigError, PhyParams, SfSet, check_sf

PROBABILITY_FIELDS = ("p_wub", "p_direct")
POSITIVE_INT_FIELDS = ("n_eds", "m_max", "n_freq", "n_slots", "payload_bytes", "ping_bytes", "beacon_bytes")
POSITIVE_REAL_FIELDS = ("ping_period_s", "beacon_period_s")
SF_FIELDS = ("max_sf", "sf_direct", "beacon_sf")


@dataclass(frozen=True)
class ScenarioConfig:
    """Every parameter of one scenario; defaults are the reference setup.

    The layout is flat so that config files and sweeps address each field
    by name. ``sf_set`` and ``phy`` give the grouped views.
    """

    n_eds: int = 30
    m_max: int = 5
    n_freq: int = 8
    n_slots: int = 25
    p_wub: float = 0.75
    p_direct: float = 0.75
    max_sf: int = 10
    sf_direct: int = 11
    tx_power_uav_dbm: float = 6.0
    tx_power_direct_dbm: float = 14.0
    bandwidth_hz: float = 125_000.0
    payload_bytes: int = 10
    ldro_threshold_sf: int = 11
    uav_period_s: float = 3600.0
    ping_period_s: float = 64.0
    beacon_period_s: float = 128.0
    ping_bytes: int = 4
    beacon_bytes: int = 16
    beacon_sf: int = 9
    backoff_max: int = 255

    def __post_init__(self):
        for name in POSITIVE_INT_FIELDS:
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ConfigError(name, f"must be a positive integer, got {value!r}")
        for name in PROBABILITY_FIELDS:
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(name, f"must be a probability in [0, 1], got {value!r}")
        for name in POSITIVE_REAL_FIELDS:
            value = getattr(self, name)
            if not value > 0:
                raise ConfigError(name, f"must be positive, got {value!r}")
        if not self.uav_period_s >= 0:
            raise ConfigError("uav_period_s", f"must be non-negative, got {self.uav_period_s!r}")
        for name in SF_FIELDS:
            check_sf(getattr(self, name), name)
        if isinstance(self.backoff_max, bool) or int(self.backoff_max) != self.backoff_max or self.backoff_max < 0:
            raise ConfigError("backoff_max", f"must be a non-negative integer, got {self.backoff_max!r}")
        if int(self.ldro_threshold_sf) != self.ldro_threshold_sf:
            raise ConfigError("ldro_threshold_sf", f"must be an integer, got {self.ldro_threshold_sf!r}")
        for name in (*POSITIVE_INT_FIELDS, *SF_FIELDS, "backoff_max", "ldro_threshold_sf"):
            object.__setattr__(self, name, int(getattr(self, name)))
        # PhyParams validates bandwidth, payload and LDRO threshold.
        self.phy

    @property
    def phy(self) -> PhyParams:
        return PhyParams(
            bandwidth_hz=self.bandwidth_hz,
            payload_bytes=self.payload_bytes,
            ldro_threshold_sf=self.ldro_threshold_sf,
        )

    @property
    def sf_set(self) -> SfSet:
        return SfSet(self.max_sf)

    def replace(self, **changes) -> ScenarioConfig:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def digest(self) -> str:
        """Short stable hash of the parameter values."""
        blob = json.dumps(self.as_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


FIELD_NAMES = tuple(f.name for f in fields(ScenarioConfig))
FIELD_TYPES = {f.name: type(f.default) for f in fields(ScenarioConfig)}
