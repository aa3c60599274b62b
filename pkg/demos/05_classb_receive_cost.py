"""
Receive cost of Class B synchronization
=======================================

Per UAV cycle an ideal Class B device listens to T_u/T_p pings and T_u/T_b
beacons. The receive time per cycle, multiplied by the receive power,
is the energy the wake-up radio avoids.
"""

from wurlora import ScenarioConfig, energy_classb

base = ScenarioConfig()
print("ping/beacon SF   RX airtime per cycle (s)   at 40 mW (mJ)")
for sf in range(7, 13):
    rep = energy_classb(base.replace(beacon_sf=sf), p_rx_mw=40.0)
    print(f"{sf:<16d} {rep.rx_airtime_s_per_cycle:24.4f} {rep.rx_energy_mj_per_cycle:14.1f}")
