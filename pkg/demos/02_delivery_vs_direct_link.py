"""
Delivery probability vs. direct-link quality
============================================

The three schemes side by side as the direct link improves. The UAV-aided
schemes only fall back on the direct link for messages that did not fit
into the collection window, so their curves are almost flat.
"""

from wurlora import ScenarioConfig
from wurlora.harness import run_preset

rows = run_preset("fig1", ScenarioConfig())[0][1]
table = {}
for r in rows:
    table.setdefault(r.value, {})[r.scheme] = r.s_total

print(" P_d    wur      classb   direct")
for p_d, s in table.items():
    print(f"{p_d:4.2f}  {s['wur']:.5f}  {s['classb']:.5f}  {s['direct']:.5f}")

crossing = next(p for p, s in table.items() if s["direct"] >= s["wur"])
print(f"\ndirect transmission catches up with the WuR scheme at P_d = {crossing}")
