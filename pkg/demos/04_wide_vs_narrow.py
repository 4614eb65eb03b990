"""One wide fault vs two narrow faults over adjacent instructions.

The target executes a shift-right / shift-left pair that clears the
bottom bit of a branch destination; skipping both keeps the bit set.
One wide fault covering both instructions skips the pair more often
than two narrow faults do, while two separate faults lock the device up
more often -- the calibrated noise model reproduces both effects.
"""

from glitchsim import CampaignConfig, shift_model
from glitchsim.campaign import run_wide_vs_narrow

cfg = CampaignConfig(
    scenario="successive_shifts",
    model=shift_model(),
    trials=100_000,
    master_seed=5,
)
summary = run_wide_vs_narrow(cfg)

cols = summary["columns"]
print(f"{'':>8}" + "".join(f"{c:>12}" for c in cols))
for row in ("wide", "narrow"):
    cells = summary["distributions"][row]
    print(f"{row:>8}" + "".join(f"{cells[c]:>12.3f}" for c in cols))

wide, narrow = summary["distributions"]["wide"], summary["distributions"]["narrow"]
print(f"""
joint skip ('both'):  wide {wide['both']:.3f} > narrow {narrow['both']:.3f}
lockups ('invalid'):  narrow {narrow['invalid']:.3f} > wide {wide['invalid']:.3f}
  (each fault window carries its own lockup risk)""")
