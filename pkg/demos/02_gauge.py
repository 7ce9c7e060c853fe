"""
Gauge transformations and curvature
===================================

The u(1) curvature is unchanged by A -> A + d chi on the grid.  For su(2)
the curvature rotates by Ad_{h^-1} up to a discretization error that
shrinks fourfold each time the spacing is halved.
"""

import warnings

import numpy as np

from gaugered import (GroupField, LatticeChart, SU2, U1, curvature, gauge_transform_connection,
                      gauge_transform_curvature)
from gaugered.gauge import ProjectionWarning
from gaugered.samples import SmoothForm

rng = np.random.default_rng(1)

chart = LatticeChart.uniform(3, 8, 1.0)
A = SmoothForm.random(rng, chart, 1, U1).sample(chart)
h = GroupField.exp(SmoothForm.random(rng, chart, 0, U1).sample(chart))
print("u1 |F(A^h) - F(A)|_inf:", (curvature(gauge_transform_connection(A, h)) - curvature(A)).norm_inf())

# the same smooth su2 fields sampled on three clamped grids
base = LatticeChart.uniform(3, 7, 1.0, "clamped")
A_sp = SmoothForm.random(rng, base, 1, SU2, amplitude=0.5, periods=(4.0,) * 3)
h_sp = SmoothForm.random(rng, base, 0, SU2, amplitude=0.5, periods=(4.0,) * 3)

prev = None
chart = base
for level in range(3):
    A, h = A_sp.sample(chart), GroupField.exp(h_sp.sample(chart))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProjectionWarning)
        err = curvature(gauge_transform_connection(A, h)) - gauge_transform_curvature(curvature(A), h)
    # compare on the sites the coarsest grid can resolve
    f = 2 ** level
    sites = tuple(slice(s.start * f, (s.stop - 1) * f + 1, f) for s in base.interior(2))
    e = np.abs(err.data[(Ellipsis,) + sites]).max()
    print(f"h = {chart.spacings[0]:.4f}  covariance error {e:.3e}" + (f"  ratio {prev / e:.2f}" if prev else ""))
    prev, chart = e, chart.refined()
