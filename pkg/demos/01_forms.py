"""
Differential forms on a lattice
===============================

Build a few forms, apply d, the Hodge star and the codifferential, and look
at the identities that hold exactly on the grid.
"""

import numpy as np

from gaugered import FormField, LatticeChart, codifferential, exterior_derivative, hodge_star, inner_product
from gaugered.samples import random_form

# a 2D clamped chart: 9 points per axis covering [0, 2]
chart = LatticeChart.uniform(2, 9, 2.0, "clamped")
x, y = chart.mesh()

# d(xy) = y dx + x dy, exact for central differences
f = FormField.from_components(chart, 0, {(): x * y})
df = exterior_derivative(f)
inner = chart.interior(df.margin)
print("d(xy) - (y dx + x dy):", np.abs(df.component((0,))[0][inner] - y[inner]).max(),
      np.abs(df.component((1,))[0][inner] - x[inner]).max())

# every derivative spoils one boundary layer of a clamped chart
print("margins of f, df, ddf:", f.margin, df.margin, exterior_derivative(df).margin)

# Hodge star in 2D: dx -> dy, dy -> -dx
dx = FormField.from_components(chart, 1, {(0,): 1.0})
print("*dx coefficient on dy:", hodge_star(dx).component((1,)).max())

# on a periodic Lorentzian chart d and the codifferential are adjoint
rng = np.random.default_rng(0)
lor = LatticeChart.uniform(4, 6, 1.0, signature="-+++")
a, b = random_form(rng, lor, 1), random_form(rng, lor, 2)
lhs, rhs = inner_product(exterior_derivative(a), b), inner_product(a, codifferential(b))
print(f"<da, b> = {lhs:.15f}")
print(f"<a, db> = {rhs:.15f}")

# and d d vanishes to roundoff on arbitrary (even non-smooth) data
print("|dd a|_inf:", exterior_derivative(exterior_derivative(a)).norm_inf())
