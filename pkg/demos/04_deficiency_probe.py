"""Deficiency probes on the unit half-line with potential W(k) = -k.

Shooting solutions of ``H u = +-i nu u`` all grow, and the shell-augmented
least singular values stay bounded away from zero.  Both agree with the
hypothesis checker.

    python3 demos/04_deficiency_probe.py
"""

from magbilap import build_example, consistency_probe, shoot
from magbilap.deficiency import dirichlet_floor

f = build_example("half_line_unit")
W = f.potential_model

for sol in shoot(f, W, nu=1.0, sign=1, horizon=200):
    s = sol.summary()
    print(f"{s['basis_index']:>10}: {s['growth_class']}, log10 P_200 = "
          f"{s['log10_partial_norm_end']:.1f}, residual {s['residual']:.1e}")

rep = consistency_probe(f, W)
print(f"\nconsistency over nu = 0.5, 1, 2: {rep.conclusion} (agreed: {rep.agreed})")
for r in rep.reports:
    if r.method == "rectangular_residual":
        sN = ", ".join(f"{d['s_N']:.4f}" for d in r.diagnostics)
        print(f"  nu={r.nu:g} sign {r.settings['sign']}: s_N = {sN}")
print(f"\nDirichlet floor at N=20, nu=1: {dirichlet_floor(f, W, 1.0, 20):.4f} (always >= nu)")
