import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from gaugered import lie
from gaugered.lie import SU2, U1

vec3 = arrays(np.float64, 3, elements=st.floats(-2, 2, allow_nan=False))


def series_expm(X, terms=20, squarings=6):
    """Scaling and squaring with a truncated Taylor series."""
    Y = X / 2 ** squarings
    out = np.eye(X.shape[0], dtype=complex)
    term = np.eye(X.shape[0], dtype=complex)
    for n in range(1, terms + 1):
        term = term @ Y / n
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def basis(a):
    e = np.zeros(3)
    e[a] = 1.0
    return e


def test_algebra_lookup():
    assert lie.algebra_by_name("su2") is SU2
    assert lie.algebra_by_name("U1") is U1
    with pytest.raises(ValueError):
        lie.algebra_by_name("so3")


def test_u1_bracket_vanishes():
    assert lie.bracket(U1, [2.0], [-3.0])[0] == 0.0


def test_su2_structure_constants():
    np.testing.assert_array_equal(lie.bracket(SU2, basis(0), basis(1)), basis(2))
    np.testing.assert_array_equal(lie.bracket(SU2, basis(1), basis(2)), basis(0))
    np.testing.assert_array_equal(lie.bracket(SU2, basis(1), basis(0)), -basis(2))


def test_bracket_matches_matrix_commutator(rng):
    x, y = rng.standard_normal(3), rng.standard_normal(3)
    X, Y = lie.algebra_matrix(SU2, x), lie.algebra_matrix(SU2, y)
    np.testing.assert_allclose(lie.algebra_matrix(SU2, lie.bracket(SU2, x, y)), X @ Y - Y @ X, atol=1e-14)


def test_bracket_with_itself(rng):
    x = rng.standard_normal((3, 5))
    np.testing.assert_array_equal(lie.bracket(SU2, x, x), 0.0)


def test_jacobi_over_basis():
    worst = 0.0
    for a in range(3):
        for b in range(3):
            for c in range(3):
                x, y, z = basis(a), basis(b), basis(c)
                j = (lie.bracket(SU2, x, lie.bracket(SU2, y, z)) + lie.bracket(SU2, y, lie.bracket(SU2, z, x))
                     + lie.bracket(SU2, z, lie.bracket(SU2, x, y)))
                worst = max(worst, np.abs(j).max())
    assert worst <= 1e-14


def test_exp_zero_is_identity():
    np.testing.assert_array_equal(lie.exp(SU2, np.zeros(3)), [1.0, 0.0, 0.0, 0.0])
    assert lie.exp(U1, [0.0])[0] == 0.0


def test_su2_exp_matches_series(rng):
    worst = 0.0
    for _ in range(100):
        x = rng.standard_normal(3)
        x *= rng.uniform(0, 2) / np.linalg.norm(x)
        M = lie.to_matrix(SU2, lie.exp(SU2, x))
        worst = max(worst, np.abs(M - series_expm(lie.algebra_matrix(SU2, x))).max())
    assert worst <= 1e-12


def test_u1_exp_periodicity():
    g = lie.group_mul(U1, lie.exp(U1, [np.pi]), lie.exp(U1, [np.pi]))
    np.testing.assert_allclose(lie.to_matrix(U1, g)[..., 0, 0], 1.0, atol=1e-15)
    np.testing.assert_allclose(lie.log(U1, g), 0.0, atol=1e-15)


def test_su2_log_inverts_exp(rng):
    x = rng.standard_normal((3, 50))
    x *= 2.5 / np.linalg.norm(x, axis=0).max()
    np.testing.assert_allclose(lie.log(SU2, lie.exp(SU2, x)), x, atol=1e-12)


def test_adjoint_identity_and_u1(rng):
    x = rng.standard_normal(3)
    np.testing.assert_allclose(lie.adjoint(SU2, lie.group_identity(SU2), x), x)
    assert lie.adjoint(U1, np.array([1.3]), np.array([0.4]))[0] == 0.4


@pytest.mark.parametrize("t", [0.3, 1.0, 2.5, -1.2])
def test_adjoint_rotation(t):
    g = lie.exp(SU2, t * basis(2))
    np.testing.assert_allclose(lie.adjoint(SU2, g, basis(0)), [np.cos(t), np.sin(t), 0.0], atol=1e-15)


def test_adjoint_matches_conjugation(rng):
    g = lie.exp(SU2, rng.standard_normal(3))
    x = rng.standard_normal(3)
    G = lie.to_matrix(SU2, g)
    expected = G @ lie.algebra_matrix(SU2, x) @ G.conj().T
    np.testing.assert_allclose(lie.algebra_matrix(SU2, lie.adjoint(SU2, g, x)), expected, atol=1e-14)


def test_coadjoint_pairing_over_basis():
    for a in range(3):
        for b in range(3):
            for c in range(3):
                lhs = lie.coadjoint(SU2, basis(a), basis(b)) @ basis(c)
                rhs = -basis(b) @ lie.bracket(SU2, basis(a), basis(c))
                assert lhs == rhs


def test_coadjoint_trivial_cases(rng):
    assert lie.coadjoint(U1, [1.5], [2.0])[0] == 0.0
    np.testing.assert_array_equal(lie.coadjoint(SU2, np.zeros(3), rng.standard_normal(3)), 0.0)


def test_invariant_form_conventions(rng):
    assert lie.invariant_form(U1, [2.0], [3.0]) == 6.0
    x = rng.standard_normal(3)
    assert lie.invariant_form(SU2, x, x) > 0
    assert lie.invariant_form(SU2, np.zeros(3), np.zeros(3)) == 0.0
    # K = -Killing / 2
    np.testing.assert_allclose(SU2.form, -0.5 * SU2.killing(), atol=1e-15)


def test_group_inverse(rng):
    x = rng.standard_normal((3, 20))
    g = lie.exp(SU2, x)
    ident = lie.group_mul(SU2, g, lie.exp(SU2, -x))
    np.testing.assert_allclose(ident, lie.group_identity(SU2, (20,)), atol=1e-12)
    np.testing.assert_allclose(lie.group_mul(SU2, g, lie.group_inv(SU2, g)), lie.group_identity(SU2, (20,)),
                               atol=1e-15)


def test_products_stay_unit(rng):
    g = lie.group_identity(SU2)
    for _ in range(10000):
        g = lie.group_mul(SU2, g, lie.exp(SU2, 0.1 * rng.standard_normal(3)))
    assert abs(np.linalg.norm(g) - 1.0) <= 1e-15


def test_ad_taylor_third_order(rng):
    x, y = rng.standard_normal(3), rng.standard_normal(3)

    def err(s):
        xi = s * x
        approx = y + lie.bracket(SU2, xi, y) + 0.5 * lie.bracket(SU2, xi, lie.bracket(SU2, xi, y))
        return np.abs(lie.adjoint(SU2, lie.exp(SU2, xi), y) - approx).max()

    ratio = err(0.05) / err(0.025)
    assert 7.0 <= ratio <= 9.0


def test_leading_axis_checked():
    with pytest.raises(ValueError):
        lie.bracket(SU2, np.zeros(2), np.zeros(2))


@settings(max_examples=60, deadline=None)
@given(vec3, vec3, vec3)
def test_invariant_form_ad_invariance(g_log, x, y):
    g = lie.exp(SU2, g_log)
    lhs = lie.invariant_form(SU2, lie.adjoint(SU2, g, x), lie.adjoint(SU2, g, y))
    assert abs(lhs - lie.invariant_form(SU2, x, y)) <= 1e-12 * (1 + np.abs(x).max() * np.abs(y).max())


@settings(max_examples=60, deadline=None)
@given(vec3, vec3, vec3)
def test_invariant_form_bracket_invariance(z, x, y):
    lhs = lie.invariant_form(SU2, lie.bracket(SU2, z, x), y)
    rhs = -lie.invariant_form(SU2, x, lie.bracket(SU2, z, y))
    assert abs(lhs - rhs) <= 1e-12


@settings(max_examples=60, deadline=None)
@given(vec3)
def test_exp_inverse_property(x):
    ident = lie.group_mul(SU2, lie.exp(SU2, x), lie.exp(SU2, -x))
    assert np.abs(ident - lie.group_identity(SU2)).max() <= 1e-12
