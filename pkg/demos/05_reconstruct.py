"""
Recovering a potential from its field strength
==============================================

Radial integration of a closed 2-form gives a potential whose curvature
matches the input to second order.  A form that is not closed is refused.
"""

import numpy as np

from gaugered import CompatibilityError, LatticeChart, curvature, holonomy, poincare_reconstruct
from gaugered.samples import SmoothForm, random_form

rng = np.random.default_rng(3)
base = LatticeChart.uniform(3, 10, 1.0, "clamped")
A_sp = SmoothForm.random(rng, base, 1, periods=(4.0,) * 3)

chart = base
for level in range(3):
    F = curvature(A_sp.sample(chart))
    A = poincare_reconstruct(F)
    print(f"n = {chart.sizes[0]:3d}  |curvature(A_rec) - F|_inf = {(curvature(A) - F).norm_inf():.3e}")
    chart = chart.refined()

# both potentials carry the same plaquette holonomy up to discretization error
A0 = A_sp.sample(base)
A = poincare_reconstruct(curvature(A0))
for c in [(3, 3, 3), (4, 4, 4), (5, 2, 4)]:
    print(f"plaquette at {c}: original {holonomy(A0, '+x+y-x-y', c)[0]:+.6f}"
          f"  reconstructed {holonomy(A, '+x+y-x-y', c)[0]:+.6f}")

try:
    poincare_reconstruct(random_form(rng, base, 2))
except CompatibilityError as exc:
    print("refused:", exc)
