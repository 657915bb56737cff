"""Operators on a magnetic radial tree and the product rule for cut-offs.

Builds a tree with random phases, applies the magnetic Laplacian and its
square to a point mass, then checks the product rule with the cut-off
``chi_n`` as the multiplier.

    python3 demos/01_operators_and_cutoffs.py
"""

import numpy as np

from magbilap import (Amplitudes, CutoffFamily, apply_bilaplacian, apply_laplacian, apply_P,
                      build_example, growth_table, norm)

f = build_example("radial_tree", kappa=0.5, phase="random", phase_seed=1)
g = f.generate(8)
print(f"tree with kappa=0.5, ball of radius 8: {g.n_vertices} vertices, {g.n_edges} edges")
print("level sizes:", np.bincount(g.level).tolist())

u = Amplitudes.delta(g, g.ids[3])
Lu, L2u = apply_laplacian(g, u), apply_bilaplacian(g, u)
print(f"L delta has {np.count_nonzero(Lu)} nonzero values, L^2 delta has {np.count_nonzero(L2u)}")

print("\ngrowth statistics")
print(" n  d_n  p_n  beta_n")
for s in growth_table(f, 3):
    print(f"{s.n:2d}  {s.d_n:3d}  {s.p_n:3.0f}  {s.beta_n:.3f}")

n = 3
chi = np.real(CutoffFamily(f).as_amplitudes(n, horizon=8).values)
rng = np.random.default_rng(0)
v = rng.uniform(-1, 1, g.n_vertices) + 1j * rng.uniform(-1, 1, g.n_vertices)
v[g.level > 7] = 0
lhs = apply_laplacian(g, chi * v)
rhs = chi * apply_laplacian(g, v) - apply_P(g, chi, v) + v * apply_laplacian(g, chi, magnetic=False)
print(f"\nproduct rule with chi_{n}: relative residual "
      f"{norm(g, lhs - rhs) / norm(g, lhs):.2e}")
