import warnings

import numpy as np
import pytest

from gaugered import lie
from gaugered.gauge import (GroupField, ProjectionWarning, bracket_wedge, covariant_derivative, curvature,
                            gauge_transform_connection, gauge_transform_curvature, group_derivative_term, phi_map)
from gaugered.lattice import FormField, LatticeChart, exterior_derivative, pointwise_pairing
from gaugered.lie import SU2, U1
from gaugered.samples import SmoothForm, random_form


def su2_const(chart, degree, comps):
    """``{multi_index: algebra_vector}`` with constant coefficients."""
    out = FormField.zeros(chart, degree, SU2)
    for axes, vec in comps.items():
        out.data[out.indices.index(axes)] = np.asarray(vec, float).reshape((3,) + (1,) * chart.dim)
    return out


E1, E2, E3 = np.eye(3)


@pytest.fixture
def plane():
    return LatticeChart.uniform(2, 6)


def test_bracket_wedge_basis_example(plane):
    a = su2_const(plane, 1, {(0,): E1})
    b = su2_const(plane, 1, {(1,): E2})
    np.testing.assert_array_equal(bracket_wedge(a, b).data, su2_const(plane, 2, {(0, 1): E3}).data)


def test_self_bracket_wedge_need_not_vanish(plane):
    a = su2_const(plane, 1, {(0,): E1, (1,): E2})
    np.testing.assert_array_equal(bracket_wedge(a, a).data, su2_const(plane, 2, {(0, 1): 2 * E3}).data)


def test_bracket_wedge_graded_symmetry(rng):
    c = LatticeChart.uniform(4, 5)
    a, b = random_form(rng, c, 1, SU2), random_form(rng, c, 2, SU2)
    # [a^b] = -(-1)^{kl}[b^a]
    np.testing.assert_allclose(bracket_wedge(a, b).data, -bracket_wedge(b, a).data, atol=1e-14)
    p = random_form(rng, c, 1, SU2)
    np.testing.assert_allclose(bracket_wedge(a, p).data, bracket_wedge(p, a).data, atol=1e-14)


def test_bracket_wedge_abelian_vanishes(rng):
    c = LatticeChart.uniform(3, 5)
    a = random_form(rng, c, 1)
    assert bracket_wedge(a, a).norm_inf() == 0.0


def test_curvature_examples():
    c = LatticeChart.uniform(2, 9, 2.0, "clamped")
    assert curvature(FormField.zeros(c, 1, SU2)).norm_inf() == 0.0
    x, _ = c.mesh()
    F = curvature(FormField.from_components(c, 1, {(1,): x}))
    np.testing.assert_allclose(F.interior_data(), 1.0, atol=1e-14)


def test_curvature_of_constant_su2(plane):
    A = su2_const(plane, 1, {(0,): E1, (1,): E2})
    np.testing.assert_allclose(curvature(A).data, su2_const(plane, 2, {(0, 1): E3}).data, atol=1e-15)


def test_curvature_needs_connection(rng, plane):
    with pytest.raises(ValueError):
        curvature(random_form(rng, plane, 2))


def test_covariant_derivative_abelian_is_d(rng):
    c = LatticeChart.uniform(3, 6)
    xi, A = random_form(rng, c, 0), random_form(rng, c, 1)
    np.testing.assert_array_equal(covariant_derivative(xi, A).data, exterior_derivative(xi).data)


def test_phi_map_examples(rng, plane):
    z = FormField.zeros(plane, 1, SU2)
    a, b = phi_map(z)
    assert a.norm_inf() == 0.0 and b.norm_inf() == 0.0
    xi = random_form(rng, plane, 1)
    a, b = phi_map(xi)
    np.testing.assert_array_equal(a.data, xi.data)
    assert b.degree == 2 and b.norm_inf() == 0.0
    xi = su2_const(plane, 1, {(0,): E1, (1,): E2})
    a, b = phi_map(xi)
    np.testing.assert_array_equal(a.data, xi.data)
    np.testing.assert_array_equal(b.data, su2_const(plane, 2, {(0, 1): -E3}).data)


def test_group_field_validation(plane):
    with pytest.raises(ValueError):
        GroupField(plane, SU2, np.zeros((3, 6, 6)))
    bad = lie.group_identity(SU2, plane.sizes)
    bad[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        GroupField(plane, SU2, bad)


def test_group_derivative_of_constant(rng):
    c = LatticeChart.uniform(3, 6)
    h = GroupField(c, SU2, np.broadcast_to(lie.exp(SU2, rng.standard_normal(3))[:, None, None, None], (4, 6, 6, 6)))
    assert group_derivative_term(h).norm_inf() <= 1e-15


def test_group_derivative_u1_matches_d(rng):
    c = LatticeChart.uniform(3, 8, 1.0)
    chi = SmoothForm.random(rng, c, 0, U1).sample(c)
    h = GroupField.exp(chi)
    np.testing.assert_allclose(group_derivative_term(h).data, exterior_derivative(chi).data, atol=1e-14)


def test_group_derivative_su2_one_parameter_subgroup():
    def err(n):
        c = LatticeChart.uniform(2, n, 1.0)
        x, _ = c.mesh()
        t = np.sin(2 * np.pi * x)
        h = GroupField(c, SU2, lie.exp(SU2, np.stack([0 * t, 0 * t, t])))
        mu = group_derivative_term(h, tol=1.0)
        exact = np.zeros_like(mu.data)
        exact[0, 2] = 2 * np.pi * np.cos(2 * np.pi * x)
        return np.abs(mu.data - exact).max()

    assert 3.5 <= err(32) / err(64) <= 4.5


def test_projection_warning_on_coarse_grid(rng):
    c = LatticeChart.uniform(3, 4, 1.0)
    h = GroupField.exp(random_form(rng, c, 0, SU2, scale=2.0))
    with pytest.warns(ProjectionWarning):
        _, res = group_derivative_term(h, return_residual=True)
    assert res > 1e-6


def test_identity_transform_is_trivial(rng):
    c = LatticeChart.uniform(3, 6)
    A = random_form(rng, c, 1, SU2)
    h = GroupField.identity(c, SU2)
    np.testing.assert_allclose(gauge_transform_connection(A, h).data, A.data, atol=1e-15)
    F = random_form(rng, c, 2, SU2)
    np.testing.assert_allclose(gauge_transform_curvature(F, h).data, F.data, atol=1e-15)


def test_u1_transform_adds_gradient(rng):
    c = LatticeChart.uniform(3, 8)
    A = SmoothForm.random(rng, c, 1, U1).sample(c)
    chi = SmoothForm.random(rng, c, 0, U1).sample(c)
    At = gauge_transform_connection(A, GroupField.exp(chi))
    np.testing.assert_allclose(At.data, (A + exterior_derivative(chi)).data, atol=1e-13)
    assert (curvature(At) - curvature(A)).norm_inf() <= 1e-12
    F = curvature(A)
    np.testing.assert_array_equal(gauge_transform_curvature(F, GroupField.exp(chi)).data, F.data)


def test_constant_gauge_preserves_density(rng):
    c = LatticeChart.uniform(3, 6)
    F = random_form(rng, c, 2, SU2)
    g = lie.exp(SU2, rng.standard_normal(3))
    h = GroupField(c, SU2, np.broadcast_to(g[:, None, None, None], (4,) + c.sizes))
    Fh = gauge_transform_curvature(F, h)
    assert np.abs(pointwise_pairing(Fh, Fh) - pointwise_pairing(F, F)).max() <= 1e-12


def test_constant_gauge_is_exact_covariance(rng):
    c = LatticeChart.uniform(3, 8)
    A = SmoothForm.random(rng, c, 1, SU2).sample(c)
    g = lie.exp(SU2, rng.standard_normal(3))
    h = GroupField(c, SU2, np.broadcast_to(g[:, None, None, None], (4,) + c.sizes))
    with warnings.catch_warnings():
        warnings.simplefilter("error", ProjectionWarning)
        lhs = curvature(gauge_transform_connection(A, h))
    assert (lhs - gauge_transform_curvature(curvature(A), h)).norm_inf() <= 1e-12


def test_covariance_converges(rng):
    def err(n):
        c = LatticeChart.uniform(3, n, 1.0)
        A = spA.sample(c)
        h = GroupField.exp(spH.sample(c))
        return (curvature(gauge_transform_connection(A, h)) - gauge_transform_curvature(curvature(A), h)).norm_inf()

    base = LatticeChart.uniform(3, 8, 1.0)
    spA = SmoothForm.random(rng, base, 1, SU2, amplitude=0.5)
    spH = SmoothForm.random(rng, base, 0, SU2, amplitude=0.5)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ProjectionWarning)
        assert 3.5 <= err(16) / err(32) <= 4.5


def test_mismatched_charts_rejected(rng):
    a = random_form(rng, LatticeChart.uniform(3, 6), 1, SU2)
    h = GroupField.identity(LatticeChart.uniform(3, 7), SU2)
    with pytest.raises(ValueError):
        gauge_transform_connection(a, h)
