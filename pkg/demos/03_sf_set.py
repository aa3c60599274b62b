"""
Effect of the SF set on delivery and energy
===========================================

Adding spreading factors adds quasi-orthogonal resources (fewer same-SF
collisions) but also longer frames, so energy per message rises with the
largest SF while delivery improves.
"""

from wurlora import ScenarioConfig, energy_classb, energy_direct, energy_wur, mdp_classb, mdp_wur

base = ScenarioConfig()
for n_slots in (10, 25):
    print(f"N_s = {n_slots}")
    print("  K_m   wur MDP  classb MDP   wur TX mJ  classb TX mJ  direct TX mJ")
    for max_sf in range(7, 13):
        cfg = base.replace(n_slots=n_slots, max_sf=max_sf)
        print(f"  {max_sf:<4d} {mdp_wur(cfg).s_total:8.5f} {mdp_classb(cfg).s_total:10.5f}"
              f" {energy_wur(cfg).tx_energy_mj:11.4f} {energy_classb(cfg).tx_energy_mj:13.4f}"
              f" {energy_direct(cfg).tx_energy_mj:13.4f}")
