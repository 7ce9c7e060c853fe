import numpy as np
import pytest

from gaugered.lattice import LatticeChart, partial_derivative
from gaugered.lie import SU2
from gaugered.samples import PlaneWave, SmoothForm


def test_same_field_on_refined_charts(rng):
    base = LatticeChart.uniform(3, 7, 1.0, "clamped")
    sp = SmoothForm.random(rng, base, 1, SU2, periods=(4.0,) * 3)
    coarse, fine = sp.sample(base), sp.sample(base.refined())
    np.testing.assert_allclose(fine.data[..., ::2, ::2, ::2], coarse.data, atol=1e-14)


def test_zero_mean(rng):
    c = LatticeChart.uniform(3, 8)
    A = SmoothForm.random(rng, c, 1, zero_mean=True).sample(c)
    assert np.abs(A.data.mean(axis=(2, 3, 4))).max() <= 1e-14
    with pytest.raises(ValueError):
        SmoothForm.random(rng, c, 1, cutoff=0, zero_mean=True)


def test_axes_restriction(rng):
    c = LatticeChart.uniform(3, 8)
    A = SmoothForm.random(rng, c, 0, axes=(0,)).sample(c)
    assert np.ptp(A.data, axis=(3, 4)).max() <= 1e-14


def test_exact_derivative_second_order(rng):
    sp = SmoothForm.random(rng, LatticeChart.uniform(2, 8), 0)
    err = []
    for n in (16, 32):
        c = LatticeChart.uniform(2, n)
        err.append(np.abs(partial_derivative(sp.sample(c), 1).data - sp.derivative(1).sample(c).data).max())
    assert 3.8 <= err[0] / err[1] <= 4.2


def test_plane_wave_constraints():
    sig = LatticeChart.uniform(4, 4, signature="-+++").signature
    w = PlaneWave((1.0, 0, 0, 1.0), (0, 1, 0, 0))
    assert w.constraints(sig) == {"k_dot_eps": 0.0, "k_dot_k": 0.0}
    assert PlaneWave((1.0, 0, 0, 0), (1, 0, 0, 0)).constraints(sig)["k_dot_eps"] == -1.0
