"""Config loading, scheme comparison, figure sweeps and the cross-validation runner."""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np
import yaml

from . import __version__, analytic, simulator
from .config import FIELD_NAMES, FIELD_TYPES, ScenarioConfig
from .phy import ConfigError

SCHEMES = ("wur", "classb", "direct")
MODES = ("analytic", "simulate", "both")
SWEEPABLE = ("p_direct", "max_sf", "n_slots", "p_wub", "beacon_sf")
CSV_COLUMNS = (
    "parameter", "value", "scheme", "s_total", "s_uav", "s_direct",
    "lambda", "tx_energy_mj", "rx_airtime_s", "ci_halfwidth",
)
SEED_ENV = "WURLORA_SEED"
DEFAULT_SEED = 20240
TARGET_MESSAGES = 200_000


class UsageError(ValueError):
    pass


def load_config(path) -> ScenarioConfig:
    """Read a flat ``key: value`` YAML file; absent keys keep their defaults."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError("<file>", f"cannot parse {path}: {exc}") from exc
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError("<file>", f"{path} must hold a flat key-value mapping")
    return config_from_mapping(data)


def config_from_mapping(data: dict) -> ScenarioConfig:
    values = {}
    for key, raw in data.items():
        if key not in FIELD_NAMES:
            raise ConfigError(str(key), f"unknown key; allowed keys: {', '.join(FIELD_NAMES)}")
        values[key] = _coerce(key, raw)
    return ScenarioConfig(**values)


def _coerce(key: str, raw):
    kind = FIELD_TYPES[key]
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise ConfigError(key, f"expected a number, got {raw!r}")
    if kind is int:
        if float(raw) != int(raw):
            raise ConfigError(key, f"expected an integer, got {raw!r}")
        return int(raw)
    return float(raw)


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    grid: tuple
    schemes: tuple = SCHEMES
    mode: str = "analytic"
    trials: int | None = None
    seed: int = DEFAULT_SEED

    def validate(self, base: ScenarioConfig) -> None:
        if self.parameter not in SWEEPABLE:
            raise UsageError(f"unknown sweep parameter {self.parameter!r}; allowed: {', '.join(SWEEPABLE)}")
        if not self.grid:
            raise UsageError("sweep grid is empty")
        if self.mode not in MODES:
            raise UsageError(f"unknown mode {self.mode!r}; allowed: {', '.join(MODES)}")
        bad = [s for s in self.schemes if s not in SCHEMES]
        if bad or not self.schemes:
            raise UsageError(f"schemes must be a non-empty subset of {SCHEMES}, got {self.schemes}")
        for value in self.grid:
            base.replace(**{self.parameter: value})


@dataclass(frozen=True)
class SweepRow:
    parameter: str
    value: float | None
    scheme: str
    s_total: float
    s_uav: float
    s_direct: float
    lam: float
    tx_energy_mj: float
    rx_airtime_s: float
    ci_halfwidth: float | None = None

    def csv_fields(self) -> list[str]:
        return [
            self.parameter,
            _fmt(self.value),
            self.scheme,
            *(_fmt(x) for x in (self.s_total, self.s_uav, self.s_direct, self.lam,
                                self.tx_energy_mj, self.rx_airtime_s)),
            "" if self.ci_halfwidth is None else _fmt(self.ci_halfwidth),
        ]

    def rounded(self) -> SweepRow:
        """The row as it reads back from CSV."""
        values = asdict(self)
        for f in fields(self):
            v = values[f.name]
            if isinstance(v, float):
                values[f.name] = float(_fmt(v))
        return SweepRow(**values)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{x:.9g}"


def _parse_value(text: str):
    if text == "":
        return None
    try:
        return int(text)
    except ValueError:
        return float(text)


def trials_for_messages(cfg: ScenarioConfig, messages: int = TARGET_MESSAGES) -> int:
    """Cycles that yield at least ``messages`` simulated messages in practice.

    The 2% headroom is many standard deviations of the random message total.
    """
    per_cycle = cfg.n_eds * (cfg.m_max + 1) / 2
    return max(1, math.ceil(1.02 * messages / per_cycle))


def scheme_config(cfg: ScenarioConfig, scheme: str) -> ScenarioConfig:
    """Configuration the simulator runs to stand in for ``scheme``.

    Ideal Class B is the WuR scheme with every WUB received; the direct
    scheme is the WuR scheme with none received.
    """
    if scheme == "wur":
        return cfg
    if scheme == "classb":
        return cfg.replace(p_wub=1.0)
    if scheme == "direct":
        return cfg.replace(p_wub=0.0)
    raise UsageError(f"unknown scheme {scheme!r}")


def analytic_row(cfg: ScenarioConfig, scheme: str, parameter: str = "", value=None) -> SweepRow:
    if scheme == "wur":
        d, e = analytic.mdp_wur(cfg), analytic.energy_wur(cfg)
    elif scheme == "classb":
        d, e = analytic.mdp_classb(cfg), analytic.energy_classb(cfg)
    elif scheme == "direct":
        d, e = analytic.mdp_direct(cfg), analytic.energy_direct(cfg)
    else:
        raise UsageError(f"unknown scheme {scheme!r}")
    return SweepRow(parameter, value, scheme, d.s_total, d.s_uav, d.s_direct, d.lam,
                    e.tx_energy_mj, e.rx_airtime_s_per_cycle)


def simulated_row(cfg: ScenarioConfig, scheme: str, trials: int, seed: int,
                  parameter: str = "", value=None) -> SweepRow:
    res = simulator.run_trials(scheme_config(cfg, scheme), trials, seed)
    d = res.delivery
    rx = analytic.classb_rx_airtime(cfg) if scheme == "classb" else 0.0
    return SweepRow(parameter, value, scheme, d.s_total, d.s_uav, d.s_direct, d.lam,
                    res.energy.tx_energy_mj, rx, res.ci_halfwidth)


def _rows_for(cfg, scheme, mode, trials, seed, parameter="", value=None) -> list[SweepRow]:
    rows = []
    if mode in ("analytic", "both"):
        rows.append(analytic_row(cfg, scheme, parameter, value))
    if mode in ("simulate", "both"):
        n = trials if trials is not None else trials_for_messages(cfg)
        rows.append(simulated_row(cfg, scheme, n, seed, parameter, value))
    return rows


def compare(cfg: ScenarioConfig, mode: str = "analytic", trials: int | None = None,
            seed: int = DEFAULT_SEED) -> list[SweepRow]:
    """One row per scheme (two in ``both`` mode: analytic first) under ``cfg``."""
    if mode not in MODES:
        raise UsageError(f"unknown mode {mode!r}; allowed: {', '.join(MODES)}")
    rows = []
    for scheme in SCHEMES:
        rows += _rows_for(cfg, scheme, mode, trials, seed)
    return rows


def sweep(spec: SweepSpec, base: ScenarioConfig) -> list[SweepRow]:
    """Rows in grid order, then scheme order, then analytic before simulated."""
    spec.validate(base)
    rows = []
    for value in spec.grid:
        cfg = base.replace(**{spec.parameter: value})
        for scheme in (s for s in SCHEMES if s in spec.schemes):
            rows += _rows_for(cfg, scheme, spec.mode, spec.trials, spec.seed, spec.parameter, value)
    return rows


def format_csv(rows: list[SweepRow], metadata: dict | None = None) -> str:
    buf = io.StringIO()
    for key, val in (metadata or {}).items():
        buf.write(f"# {key}: {val}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow(row.csv_fields())
    return buf.getvalue()


def write_csv(path, rows: list[SweepRow], metadata: dict | None = None) -> None:
    Path(path).write_text(format_csv(rows, metadata))


def parse_csv(text: str) -> list[SweepRow]:
    lines = [line for line in text.splitlines() if not line.startswith("#")]
    reader = csv.DictReader(lines)
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    rows = []
    for rec in reader:
        rows.append(SweepRow(
            parameter=rec["parameter"],
            value=_parse_value(rec["value"]),
            scheme=rec["scheme"],
            s_total=float(rec["s_total"]),
            s_uav=float(rec["s_uav"]),
            s_direct=float(rec["s_direct"]),
            lam=float(rec["lambda"]),
            tx_energy_mj=float(rec["tx_energy_mj"]),
            rx_airtime_s=float(rec["rx_airtime_s"]),
            ci_halfwidth=float(rec["ci_halfwidth"]) if rec["ci_halfwidth"] else None,
        ))
    return rows


def read_csv(path) -> list[SweepRow]:
    return parse_csv(Path(path).read_text())


def run_metadata(cfg: ScenarioConfig, **extra) -> dict:
    meta = {"tool": f"wurlora {__version__}", "config_sha256": cfg.digest()}
    meta.update({k: v for k, v in extra.items() if v is not None})
    return meta


def resolve_seed(flag_value: int | None) -> int:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return DEFAULT_SEED


# Figure presets: each variant fixes some fields and sweeps one axis.

def _grid(start_twentieths: int) -> tuple[float, ...]:
    return tuple(k / 20 for k in range(start_twentieths, 21))


@dataclass(frozen=True)
class PresetVariant:
    label: str
    overrides: dict
    spec: SweepSpec


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    variants: tuple[PresetVariant, ...]


def _sf_variants(n_slots_values) -> tuple[PresetVariant, ...]:
    return tuple(
        PresetVariant(f"n_slots{ns}", {"n_slots": ns}, SweepSpec("max_sf", tuple(range(7, 13))))
        for ns in n_slots_values
    )


def _pwub_variants(n_slots_values) -> tuple[PresetVariant, ...]:
    return tuple(
        PresetVariant(f"n_slots{ns}", {"n_slots": ns}, SweepSpec("p_wub", _grid(1)))
        for ns in n_slots_values
    )


PRESETS = {
    p.name: p
    for p in (
        Preset("fig1", "delivery vs direct-link success probability",
               (PresetVariant("", {}, SweepSpec("p_direct", _grid(0))),)),
        Preset("fig2", "delivery vs largest SF, two slot counts", _sf_variants((10, 25))),
        Preset("fig3", "TX energy per message vs largest SF", _sf_variants((25,))),
        Preset("fig4", "delivery vs WUB reception probability, two slot counts", _pwub_variants((10, 25))),
        Preset("fig5", "TX energy per message vs WUB reception probability", _pwub_variants((10, 25))),
        Preset("fig6", "Class B receive airtime per cycle vs ping/beacon SF",
               (PresetVariant("", {}, SweepSpec("beacon_sf", tuple(range(7, 13)), schemes=("wur", "classb"))),)),
    )
}


def run_preset(name: str, base: ScenarioConfig, mode: str = "analytic",
               trials: int | None = None, seed: int = DEFAULT_SEED) -> list[tuple[PresetVariant, list[SweepRow]]]:
    if name not in PRESETS:
        raise UsageError(f"unknown preset {name!r}; allowed: {', '.join(PRESETS)}")
    out = []
    for variant in PRESETS[name].variants:
        spec = SweepSpec(variant.spec.parameter, variant.spec.grid, variant.spec.schemes, mode, trials, seed)
        out.append((variant, sweep(spec, base.replace(**variant.overrides))))
    return out


# Cross-validation

@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    deviation: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name}  deviation={self.deviation:.3g}  tolerance={self.tolerance:.3g}"


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self) -> dict:
        return {"passed": self.passed, "checks": [asdict(c) for c in self.checks]}


IDENTITY_TOL = 1e-12


def _check(name, deviation, tolerance) -> CheckResult:
    return CheckResult(name, bool(deviation <= tolerance), float(deviation), float(tolerance))


def analytic_checks(cfg: ScenarioConfig) -> list[CheckResult]:
    checks = []
    pmf = analytic.wakeup_pmf(cfg)
    checks.append(_check("pmf_normalization", abs(pmf.total() - 1.0), IDENTITY_TOL))
    lam = analytic.not_sent_to_uav_prob(cfg)
    checks.append(_check("transmission_mass_identity",
                         abs(analytic.msg_tx_probs(cfg).sum() - (1.0 - lam)), IDENTITY_TOL))

    full = cfg.replace(p_wub=1.0)
    wur, cb = analytic.mdp_wur(full), analytic.mdp_classb(full)
    checks.append(_check("classb_reduction_delivery",
                         max(abs(getattr(wur, f) - getattr(cb, f)) for f in ("s_uav", "s_direct", "s_total", "lam")),
                         IDENTITY_TOL))
    checks.append(_check("classb_reduction_energy",
                         abs(analytic.energy_wur(full).tx_energy_mj - analytic.energy_classb(full).tx_energy_mj),
                         IDENTITY_TOL))

    probs = [*analytic.collision_probs(cfg), *analytic.msg_tx_probs(cfg), *analytic.uav_success_probs(cfg)]
    for rep in (analytic.mdp_wur(cfg), analytic.mdp_classb(cfg), analytic.mdp_direct(cfg)):
        probs += [rep.s_uav, rep.s_direct, rep.s_total, rep.lam]
    excess = max(max(-p, p - 1.0, 0.0) for p in probs)
    checks.append(_check("probability_bounds", excess, 0.0))

    lo, hi = sorted((analytic.mean_uav_frame_energy_mj(cfg), analytic.direct_frame_energy_mj(cfg)))
    e = analytic.energy_wur(cfg).tx_energy_mj
    checks.append(_check("tx_energy_convex_bounds", max(lo - e, e - hi, 0.0), 1e-12))
    return checks


def sim_checks(cfg: ScenarioConfig, trials: int, seed: int, label: str = "") -> list[CheckResult]:
    """|simulated - analytic| within 3 confidence half-widths for s_total, s_uav and lambda."""
    res = simulator.run_trials(cfg, trials, seed)
    ana = analytic.mdp_wur(cfg)
    prefix = f"sim_vs_analysis{label}"
    return [
        _check(f"{prefix}.s_total", abs(res.delivery.s_total - ana.s_total), 3 * res.ci_halfwidth),
        _check(f"{prefix}.s_uav", abs(res.delivery.s_uav - ana.s_uav), 3 * res.ci_uav),
        _check(f"{prefix}.lambda", abs(res.delivery.lam - ana.lam), 3 * res.ci_lambda),
    ]


def verify(cfg: ScenarioConfig, trials: int | None = None, seed: int = DEFAULT_SEED) -> VerifyReport:
    """Analytic identities, Class B reduction and simulation agreement for ``cfg``."""
    if trials is None:
        trials = trials_for_messages(cfg)
    return VerifyReport(tuple(analytic_checks(cfg) + sim_checks(cfg, trials, seed)))
