"""
A Maxwell plane wave and its conserved currents
===============================================

A null plane wave A = sin(2 pi (t + z)) dx solves the vacuum equations.  On
the lattice its residual decays at second order, and so does the divergence
of the current attached to a closed symmetry generator.
"""

import numpy as np

from gaugered import LatticeChart, PlaneWave, Theory, curvature, maxwell_residual, noether_divergence
from gaugered.suites import closed_generator

wave = PlaneWave((2 * np.pi, 0, 0, 2 * np.pi), (0, 1, 0, 0))
print("g(k, eps), g(k, k):", wave.constraints(LatticeChart.uniform(4, 4, signature="-+++").signature))

rng = np.random.default_rng(2)
# finer along t and z than along x and y; the wave only varies in (t, z)
base = LatticeChart((12, 4, 4, 16), (1 / 12, 1 / 4, 1 / 4, 1 / 16), signature="-+++")
xi = closed_generator(rng, base, axes=(0, 3))

prev = None
for level in range(3):
    f = 2 ** level
    chart = LatticeChart((12 * f, 4, 4, 16 * f), (1 / (12 * f), 1 / 4, 1 / 4, 1 / (16 * f)), signature="-+++")
    A = wave.sample(chart)
    res = maxwell_residual(curvature(A)).norm_inf()
    div = noether_divergence(Theory.maxwell(chart), A, xi(chart)).norm_inf()
    line = f"level {level}: residual {res:.3e}  div J {div:.3e}"
    if prev:
        line += f"  ratios {prev[0] / res:.2f} {prev[1] / div:.2f}"
    print(line)
    prev = (res, div)
