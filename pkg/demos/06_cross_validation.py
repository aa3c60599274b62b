"""
Closed forms vs. Monte Carlo
============================

Simulate the protocol message by message and compare against the closed
forms, then run the full verification report. Finally, quantify how often
direct transmissions would collide with each other after random backoff,
which the analysis treats as negligible.
"""

import numpy as np

from wurlora import ScenarioConfig, mdp_wur, run_trials
from wurlora.harness import trials_for_messages, verify
from wurlora.simulator import simulate_direct_backoff

for cfg in (ScenarioConfig(), ScenarioConfig(n_slots=5, p_wub=0.25)):
    res = run_trials(cfg, trials_for_messages(cfg), seed=1)
    ana = mdp_wur(cfg)
    print(f"N_s={cfg.n_slots} P_b={cfg.p_wub}: {res.messages} messages")
    print(f"  s_total  sim {res.delivery.s_total:.5f} +- {res.ci_halfwidth:.5f}   analytic {ana.s_total:.5f}")
    print(f"  lambda   sim {res.delivery.lam:.5f} +- {res.ci_lambda:.5f}   analytic {ana.lam:.5f}")

print()
for check in verify(ScenarioConfig(), seed=3).checks:
    print(check.line())

print("\ndirect-link self-collisions after backoff (N_s=10, P_b=0.3):")
for z_max in (0, 10, 100, 1000):
    cfg = ScenarioConfig(n_slots=10, p_wub=0.3, backoff_max=z_max)
    frac = simulate_direct_backoff(cfg, np.random.default_rng(0), trials=2000)
    print(f"  backoff window 0..{z_max:<5d} lost fraction {frac:.4f}")
