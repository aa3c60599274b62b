"""LoRa chirp-spread-spectrum timing and power arithmetic."""

from __future__ import annotations

from dataclasses import dataclass

MIN_SF = 7
MAX_SF = 12

# Fixed frame overhead in symbols for a rate-4/5 code without the optional header.
FRAME_OVERHEAD_SYMBOLS = 20.25


class ConfigError(ValueError):
    """Raised when a parameter violates its documented range."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def check_sf(sf: int, field: str = "sf") -> int:
    if isinstance(sf, bool) or int(sf) != sf:
        raise ConfigError(field, f"spreading factor must be an integer, got {sf!r}")
    sf = int(sf)
    if not MIN_SF <= sf <= MAX_SF:
        raise ConfigError(field, f"spreading factor must lie in [{MIN_SF}, {MAX_SF}], got {sf}")
    return sf


@dataclass(frozen=True)
class PhyParams:
    """Radio settings shared by every frame.

    ``ldro_threshold_sf`` is the smallest SF that enables low data rate
    optimization; 13 disables it for every SF.
    """

    bandwidth_hz: float = 125_000.0
    payload_bytes: int = 10
    ldro_threshold_sf: int = 11
    coding_rate: str = "4/5"

    def __post_init__(self):
        if not self.bandwidth_hz > 0:
            raise ConfigError("bandwidth_hz", f"must be positive, got {self.bandwidth_hz}")
        if int(self.payload_bytes) != self.payload_bytes or self.payload_bytes < 1:
            raise ConfigError("payload_bytes", f"must be a positive integer, got {self.payload_bytes}")
        if not MIN_SF <= self.ldro_threshold_sf <= MAX_SF + 1:
            raise ConfigError(
                "ldro_threshold_sf", f"must lie in [{MIN_SF}, {MAX_SF + 1}], got {self.ldro_threshold_sf}"
            )

    def ldro(self, sf: int) -> int:
        return 1 if sf >= self.ldro_threshold_sf else 0


@dataclass(frozen=True)
class SfSet:
    """The SF set {7, ..., max_sf}, each member drawn with equal probability."""

    max_sf: int = 10

    def __post_init__(self):
        check_sf(self.max_sf, "max_sf")

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(range(MIN_SF, self.max_sf + 1))

    def __len__(self) -> int:
        return self.max_sf - MIN_SF + 1

    def __iter__(self):
        return iter(self.members)


def frame_airtime(sf: int, phy: PhyParams, payload_bytes: int | None = None) -> float:
    """Duration in seconds of one frame sent with spreading factor ``sf``.

    ``payload_bytes`` overrides ``phy.payload_bytes`` (used for Class B
    ping and beacon frames).
    """
    sf = check_sf(sf)
    b = phy.payload_bytes if payload_bytes is None else payload_bytes
    if int(b) != b or b < 1:
        raise ConfigError("payload_bytes", f"must be a positive integer, got {b}")
    q = phy.ldro(sf)
    numerator, denominator = 2 * b - sf + 11, sf - 2 * q
    payload_symbols = max(5 * -(-numerator // denominator), 0)
    return (FRAME_OVERHEAD_SYMBOLS + payload_symbols) * 2**sf / phy.bandwidth_hz


def sf_probability(sf_set: SfSet) -> float:
    return 1.0 / (sf_set.max_sf - 6)


def slot_length(sf_set: SfSet, phy: PhyParams) -> float:
    """Slot duration: long enough for a frame at the largest SF of the set."""
    return frame_airtime(sf_set.max_sf, phy)


def dbm_to_milliwatts(p_dbm: float) -> float:
    return 10.0 ** (p_dbm / 10.0)
