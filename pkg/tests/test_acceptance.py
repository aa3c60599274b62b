"""Exit criteria. Each test records one PASS/FAIL line shown in the terminal summary."""

import itertools
import json
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import ACCEPTANCE_RESULTS
from wurlora import analytic as A
from wurlora import harness as H
from wurlora import simulator as S
from wurlora.config import ScenarioConfig
from wurlora.phy import PhyParams, frame_airtime

DEFAULT = ScenarioConfig()
IDENTITY_TOL = 1e-12
FIXTURE = Path(__file__).parent / "fixtures" / "airtime_table.json"


def record(key: str, passed: bool, detail: str) -> None:
    ACCEPTANCE_RESULTS[key] = (passed, detail)
    assert passed, detail


def random_grid(count=100, seed=2024):
    rng = np.random.default_rng(seed)
    configs = []
    for _ in range(count):
        configs.append(ScenarioConfig(
            n_eds=int(rng.integers(1, 61)),
            m_max=int(rng.integers(1, 11)),
            n_freq=int(rng.integers(1, 17)),
            n_slots=int(rng.integers(1, 51)),
            p_wub=float(rng.random()),
            p_direct=float(rng.random()),
            max_sf=int(rng.integers(7, 13)),
            sf_direct=int(rng.integers(7, 13)),
            tx_power_uav_dbm=float(rng.uniform(0, 20)),
            tx_power_direct_dbm=float(rng.uniform(0, 20)),
            payload_bytes=int(rng.integers(1, 65)),
        ))
    return configs


def test_1_analysis_simulation_agreement():
    grid = [DEFAULT] + [
        DEFAULT.replace(p_wub=pb, n_slots=ns, max_sf=km)
        for pb, ns, km in itertools.product((0.0, 0.25, 0.5, 0.75, 1.0), (5, 10, 25), (7, 10, 12))
    ]
    start = time.perf_counter()
    failures, worst = [], 0.0
    for i, cfg in enumerate(grid):
        res = S.run_trials(cfg, H.trials_for_messages(cfg), seed=1000 + i)
        assert res.messages >= 200_000
        ana = A.mdp_wur(cfg)
        for name, sim, exact, ci in (
            ("s_total", res.delivery.s_total, ana.s_total, res.ci_halfwidth),
            ("s_uav", res.delivery.s_uav, ana.s_uav, res.ci_uav),
            ("lambda", res.delivery.lam, ana.lam, res.ci_lambda),
        ):
            ratio = abs(sim - exact) / (3 * ci)
            worst = max(worst, ratio)
            if ratio > 1:
                failures.append((cfg.p_wub, cfg.n_slots, cfg.max_sf, name, sim, exact, ci))
    elapsed = time.perf_counter() - start
    record("1 analysis-simulation agreement",
           not failures and elapsed < 120,
           f"{len(grid)} configs, worst |diff|/(3 ci) = {worst:.3f}, {elapsed:.1f} s, failures={failures}")


def test_2_classb_reduction():
    worst = 0.0
    for cfg in random_grid():
        full = cfg.replace(p_wub=1.0)
        wur, cb = A.mdp_wur(full), A.mdp_classb(full)
        worst = max(worst, *(abs(getattr(wur, f) - getattr(cb, f)) for f in ("s_uav", "s_direct", "s_total", "lam")))
        worst = max(worst, abs(A.energy_wur(full).tx_energy_mj - A.energy_classb(full).tx_energy_mj))
    record("2 Class B reduction", worst <= IDENTITY_TOL, f"max deviation {worst:.3g} over 100 configs")


def test_3_analytic_identities():
    worst_pmf = worst_mass = 0.0
    for cfg in random_grid():
        worst_pmf = max(worst_pmf, abs(A.wakeup_pmf(cfg).total() - 1.0))
        worst_mass = max(worst_mass, abs(A.msg_tx_probs(cfg).sum() - (1.0 - A.not_sent_to_uav_prob(cfg))))
    record("3 analytic identities", max(worst_pmf, worst_mass) <= IDENTITY_TOL,
           f"pmf normalization {worst_pmf:.3g}, transmission mass {worst_mass:.3g}")


def test_4_fig1_trend():
    rows = H.sweep(H.SweepSpec("p_direct", tuple(k / 20 for k in range(21))), DEFAULT)
    by = {(r.value, r.scheme): r.s_total for r in rows}
    grid = sorted({r.value for r in rows})
    direct_exact = all(by[(p, "direct")] == p for p in grid)
    gap = max(abs(by[(p, "wur")] - by[(p, "classb")]) for p in grid)
    below = [p for p in grid if p <= 0.9 and not (by[(p, "wur")] > p and by[(p, "classb")] > p)]
    record("4 Fig. 1 trend", direct_exact and gap < 0.01 and not below,
           f"direct==P_d: {direct_exact}, max |wur-classb| = {gap:.2e}, "
           f"P_d <= 0.9 where UAV schemes do not exceed direct: {below} "
           f"(wur at defaults = {by[(0.9, 'wur')]:.6f})")


def test_5_fig2_trend():
    s = {}
    for ns in (10, 25):
        for km in range(7, 13):
            cfg = DEFAULT.replace(n_slots=ns, max_sf=km)
            s[(ns, km, "wur")] = A.mdp_wur(cfg).s_total
            s[(ns, km, "classb")] = A.mdp_classb(cfg).s_total
    monotone = all(
        s[(ns, km + 1, sch)] >= s[(ns, km, sch)]
        for ns in (10, 25) for km in range(7, 12) for sch in ("wur", "classb")
    )
    more_slots = all(s[(25, km, sch)] >= s[(10, km, sch)] for km in range(7, 13) for sch in ("wur", "classb"))
    record("5 Fig. 2 trend", monotone and more_slots,
           f"non-decreasing in K_m: {monotone}, N_s=25 >= N_s=10: {more_slots}")


def test_6_fig3_trend():
    ok = True
    for km in range(7, 13):
        cfg = DEFAULT.replace(max_sf=km)
        direct = A.energy_direct(cfg).tx_energy_mj
        ok &= direct > A.energy_wur(cfg).tx_energy_mj and direct > A.energy_classb(cfg).tx_energy_mj
    wur, cb = A.energy_wur(DEFAULT).tx_energy_mj, A.energy_classb(DEFAULT).tx_energy_mj
    rel = abs(wur - cb) / cb
    record("6 Fig. 3 trend", ok and rel < 0.02,
           f"direct above UAV schemes at every K_m: {ok}, |wur-classb|/classb = {rel:.2e}")


def test_7_fig4_trend():
    grid = [k / 20 for k in range(1, 21)]
    s25 = [A.mdp_wur(DEFAULT.replace(n_slots=25, p_wub=p)).s_total for p in grid]
    s10 = [A.mdp_wur(DEFAULT.replace(n_slots=10, p_wub=p)).s_total for p in grid]
    monotone25 = all(b >= a for a, b in zip(s25, s25[1:]))
    dips10 = any(s10[i] > s10[j] for i in range(len(grid)) for j in range(i + 1, len(grid)))
    record("7 Fig. 4 trend", monotone25 and dips10,
           f"N_s=25 non-decreasing: {monotone25}, N_s=10 non-monotone: {dips10}")


def test_8_rx_airtime_point():
    cfg = DEFAULT.replace(beacon_sf=9, bandwidth_hz=125_000.0)
    assert cfg.phy.ldro(9) == 0
    rx = A.energy_classb(cfg).rx_airtime_s_per_cycle
    wur_rx = A.energy_wur(cfg).rx_airtime_s_per_cycle
    fig6 = dict((r.scheme, r) for r in H.run_preset("fig6", DEFAULT)[0][1] if r.value == 9)
    ok = abs(rx - 11.6064) <= 1e-6 and wur_rx == 0.0 and fig6["wur"].rx_airtime_s == 0.0
    record("8 Class B RX airtime", ok, f"rx airtime {rx:.9f} s, wur {wur_rx}")


def test_9_airtime_fixture():
    table = json.loads(FIXTURE.read_text())
    phy = PhyParams(bandwidth_hz=125_000.0, ldro_threshold_sf=11)
    worst = max(abs(frame_airtime(r["sf"], phy, r["payload_bytes"]) - float(r["airtime_s"])) for r in table["rows"])
    record("9 airtime oracle", len(table["rows"]) == 18 and worst <= 1e-9, f"max |error| {worst:.3g} s over 18 entries")


def _cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "wurlora", *args], cwd=cwd, capture_output=True, check=True)


def test_10_determinism(tmp_path):
    outputs = []
    for run in ("a", "b"):
        sim = tmp_path / f"sim-{run}.csv"
        sw = tmp_path / f"sweep-{run}.csv"
        _cli("simulate", "--seed", "77", "--trials", "400", "--out", str(sim), cwd=tmp_path)
        _cli("sweep", "--parameter", "p_wub", "--grid", "0.25,0.5,0.75", "--mode", "simulate",
             "--seed", "77", "--trials", "300", "--out", str(sw), cwd=tmp_path)
        outputs.append((sim.read_bytes(), sw.read_bytes()))
    same = outputs[0] == outputs[1]
    record("10 determinism", same, f"simulate and sweep CSVs byte-identical across runs: {same}")
