"""Evading a sampling brown-out detector by splitting a fault.

A sampling detector probes the supply every `sample_period` ticks.  A
400 ns fault is wider than a 400 ns sampling period, so some sample
always lands inside it (pigeonhole).  Splitting it into 170 ns + 140 ns
with a 100 ns gap keeps the faulted region covered while opening phases
where every sample misses.
"""

from glitchsim import CampaignConfig
from glitchsim.campaign import run_bod_eval
from glitchsim.dut import BodModel

cfg = CampaignConfig(
    scenario="bod_scenario",
    oversampling=20,
    dut_period_ns=100,  # 5 ns ticks; period 80 ticks = 400 ns
    bod=BodModel(enabled=True, sample_period=80),
)
summary = run_bod_eval(cfg)

print(f"wide fault window:   {summary['wide_windows']} (ticks)")
print(f"split fault windows: {summary['split_windows']}")
print(f"sampling period:     {summary['sample_period']} ticks\n")
print(f"wide fault detected at  {summary['wide_detection_rate']:.0%} of phases")
print(f"split fault detected at {summary['split_detection_rate']:.0%} of phases")
evading = summary["split_evading_phases"]
print(f"split fault evades {len(evading)} phases: "
      f"{evading[0]}..{evading[-1]}")
print("\n(the evading phases are exactly those where both samples fall "
      "into the 100 ns gap or past the fault)")
