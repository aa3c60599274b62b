"""
WUB reception probability
=========================

With a long window (25 slots) better wake-up reception spreads frames over
more slots and helps. With a short window (10 slots) poor reception pushes
messages onto the direct link instead, which here beats crowding them into
the last few slots, so the curve dips in the middle.
"""

from wurlora import ScenarioConfig, energy_wur, mdp_wur

base = ScenarioConfig()
print(" P_b   MDP(N_s=10)  lambda   TX mJ  |  MDP(N_s=25)  lambda   TX mJ")
for k in range(1, 21):
    p = k / 20
    cols = []
    for n_slots in (10, 25):
        cfg = base.replace(n_slots=n_slots, p_wub=p)
        rep = mdp_wur(cfg)
        cols.append(f"{rep.s_total:11.5f}  {rep.lam:6.4f}  {energy_wur(cfg).tx_energy_mj:6.3f}")
    print(f"{p:4.2f}  " + "  |  ".join(cols))
