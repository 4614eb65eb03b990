"""Trial-count comparison: exhaustive grid search vs the sweeping flow.

The exhaustive baseline enumerates the full Cartesian product of
per-fault (offset, width) grids and only sees the overall success
function.  The flow locates each target with single faults first, so
its cost grows linearly with the number of faults instead of
exponentially.
"""

from glitchsim import CampaignConfig, SearchConfig, deterministic_model
from glitchsim.campaign import run_comparison

print(f"{'scenario':<22} {'exhaustive':>12} {'flow':>8} {'ratio':>8}")
for preset in ("dup_registers_7_43", "dup_registers_33_19",
               "dup_registers_4_50", "dup_registers_22_1"):
    cfg = CampaignConfig(
        scenario=preset,
        oversampling=1,  # 1 tick per cycle keeps the demo grid small
        model=deterministic_model(),
        search=SearchConfig(offset_min=0, offset_max=200, width_set=(1,), psi=2),
        master_seed=7,
    )
    s = run_comparison(cfg)
    print(f"{preset:<22} {s['exhaustive']['trials_used']:>12} "
          f"{s['flow']['trials_used']:>8} {s['ratio']:>8.1f}")

print("""
With four faults the exhaustive product explodes: on a 200-point grid
it needs ~10^9 combinations while the flow stays in the hundreds (run
`glitchsim compare` with the tzm_full_attack scenario to see the
exhaustive side blow a 10^7-trial cap).""")
