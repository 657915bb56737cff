"""Randomised verification of the localisation estimates.

Runs every suite with a modest trial count and prints the table of worst
ratios.  The two squared cut-off checks report ``inf``: they fail for
functions whose Laplacian lives on the level where the cut-off vanishes.
The variants with the indicator of the ball hold.

    python3 demos/03_inequality_lab.py
"""

from magbilap import TrialConfig, run_suite

report = run_suite(TrialConfig(trials=200, seed=5))
print(report.table())
worst = report["squared_cutoff_bound_P"].witness
print("\nwitness for the squared cut-off failure:",
      {k: worst[k] for k in ("family", "n", "generator", "support_size")})
