"""
Frame airtime, slot length and transmit energy
==============================================

How long a 10-byte frame occupies the channel at each spreading factor,
how long a slot must be for a given SF set, and what one frame costs in
energy at the UAV and direct-link powers.
"""

from wurlora import ScenarioConfig, dbm_to_milliwatts, frame_airtime, slot_length

cfg = ScenarioConfig()
phy = cfg.phy

print("SF   airtime (ms)   LDRO")
for sf in range(7, 13):
    print(f"{sf:<4d} {1e3 * frame_airtime(sf, phy):10.3f}     {phy.ldro(sf)}")

# A slot fits the longest frame of the SF set, i.e. the frame at max_sf.
for max_sf in range(7, 13):
    print(f"SF set 7..{max_sf}: slot length {1e3 * slot_length(cfg.replace(max_sf=max_sf).sf_set, phy):.3f} ms")

uav_mw = dbm_to_milliwatts(cfg.tx_power_uav_dbm)
direct_mw = dbm_to_milliwatts(cfg.tx_power_direct_dbm)
print(f"\none SF7 frame to the UAV at {cfg.tx_power_uav_dbm} dBm: {uav_mw * frame_airtime(7, phy):.4f} mJ")
print(f"one SF{cfg.sf_direct} frame on the direct link at {cfg.tx_power_direct_dbm} dBm: "
      f"{direct_mw * frame_airtime(cfg.sf_direct, phy):.4f} mJ")
