import numpy as np
import pytest

from gaugered.gauge import curvature
from gaugered.lattice import FormField, LatticeChart, exterior_derivative
from gaugered.lie import SU2
from gaugered.samples import SmoothForm, random_form
from gaugered.theory import Theory, action, maxwell_residual
from gaugered.variation import (FlowDivergenceError, FlowParams, analytic_action_gradient, gradient_flow_solve,
                                numeric_action_gradient, reduced_residual, reduction_equivalence_check,
                                stable_step, trace_csv)


@pytest.fixture
def small():
    return LatticeChart.uniform(3, 4, 1.0)


def rel(a, b):
    return (a - b).norm_inf() / max(b.norm_inf(), 1e-300)


def test_gradients_vanish_at_zero(small):
    for T in (Theory.maxwell(small), Theory.yang_mills(small)):
        z = FormField.zeros(small, 1, T.algebra)
        assert analytic_action_gradient(T, z).norm_inf() == 0.0
        assert numeric_action_gradient(T, z).norm_inf() == 0.0


def test_maxwell_gradient_is_twice_residual(rng):
    c = LatticeChart.uniform(4, 5, signature="-+++")
    T = Theory.maxwell(c)
    for _ in range(5):
        A = random_form(rng, c, 1)
        diff = analytic_action_gradient(T, A) - 2.0 * maxwell_residual(curvature(A))
        assert diff.norm_inf() <= 1e-12


def test_numeric_gradient_u1(rng, small):
    T = Theory.maxwell(small)
    A = random_form(rng, small, 1)
    assert rel(numeric_action_gradient(T, A), analytic_action_gradient(T, A)) <= 1e-8


def test_numeric_gradient_lorentzian(rng):
    c = LatticeChart.uniform(4, 4, signature="-+++")
    T = Theory.maxwell(c)
    A = random_form(rng, c, 1)
    assert rel(numeric_action_gradient(T, A), analytic_action_gradient(T, A)) <= 1e-8


def test_numeric_gradient_kform(rng):
    c = LatticeChart.uniform(4, 4)
    T = Theory.kform(c, 2)
    B = random_form(rng, c, 2)
    assert rel(numeric_action_gradient(T, B), analytic_action_gradient(T, B)) <= 1e-8


def test_numeric_gradient_su2(rng, small):
    T = Theory.yang_mills(small)
    A = random_form(rng, small, 1, SU2, scale=0.5)
    assert rel(numeric_action_gradient(T, A), analytic_action_gradient(T, A)) <= 1e-6


def test_numeric_gradient_linear_u1(rng, small):
    T = Theory.maxwell(small)
    A, B = random_form(rng, small, 1), random_form(rng, small, 1)
    lhs = numeric_action_gradient(T, A + B)
    rhs = numeric_action_gradient(T, A) + numeric_action_gradient(T, B)
    assert rel(lhs, rhs) <= 1e-8


def test_fd_step_validated(small):
    with pytest.raises(ValueError):
        numeric_action_gradient(Theory.maxwell(small), FormField.zeros(small, 1), fd_step=0.0)


def test_equivalence_report(rng):
    c = LatticeChart.uniform(3, 6)
    rep = reduction_equivalence_check(Theory.maxwell(c), random_form(rng, c, 1))
    assert rep.passed
    rep = reduction_equivalence_check(Theory.yang_mills(c), FormField.zeros(c, 1, SU2))
    assert all(r["Linf"] == 0.0 for r in rep.rows)


def test_su2_equivalence_holds(rng):
    c = LatticeChart.uniform(3, 8)
    A = SmoothForm.random(rng, c, 1, SU2).sample(c)
    rep = reduction_equivalence_check(Theory.yang_mills(c), A)
    assert rep.passed
    assert rep["difference"]["Linf"] <= 1e-12 * (1 + rep["euler_lagrange"]["Linf"])


def test_step_bound():
    c = LatticeChart.uniform(3, 8, 1.0)
    assert stable_step(c) == pytest.approx(0.4 / (3 * 4 * 64))
    with pytest.raises(ValueError):
        FlowParams(step_size=2 * stable_step(c)).resolve_step(c)
    with pytest.raises(ValueError):
        FlowParams(step_size=-1.0)
    with pytest.raises(ValueError):
        FlowParams(residual_tol=0.0)


def test_flow_from_zero_returns_immediately():
    c = LatticeChart.uniform(3, 6)
    res = gradient_flow_solve(Theory.yang_mills(c), FormField.zeros(c, 1, SU2))
    assert res.converged and res.iterations == 0 and res.trace[0][3] == 0.0


def test_flow_rejects_lorentzian():
    c = LatticeChart.uniform(4, 4, signature="-+++")
    with pytest.raises(ValueError):
        gradient_flow_solve(Theory.maxwell(c), FormField.zeros(c, 1))


def test_u1_flow_converges_monotonically(rng):
    c = LatticeChart.uniform(3, 6)
    T = Theory.maxwell(c)
    A0 = SmoothForm.random(rng, c, 1, amplitude=0.1).sample(c)
    res = gradient_flow_solve(T, A0, FlowParams(residual_tol=1e-8))
    assert res.converged and res.monotone
    actions = [row[1] for row in res.trace]
    assert all(b <= a for a, b in zip(actions, actions[1:]))
    assert reduced_residual(T, res.field).norm_inf() <= 1e-8
    assert numeric_action_gradient(T, res.field).norm_inf() <= 10 * 1e-8


def test_u1_flow_commutes_with_gauge_shift(rng):
    c = LatticeChart.uniform(3, 6)
    T = Theory.maxwell(c)
    A0 = SmoothForm.random(rng, c, 1, amplitude=0.1).sample(c)
    chi = exterior_derivative(SmoothForm.random(rng, c, 0).sample(c))
    a_states, b_states = [], []
    params = FlowParams(max_iters=200, residual_tol=1e-12)
    gradient_flow_solve(T, A0, params, callback=lambda it, A: a_states.append(curvature(A)))
    gradient_flow_solve(T, A0 + chi, params, callback=lambda it, A: b_states.append(curvature(A)))
    assert len(a_states) == len(b_states) == 201
    assert max((a - b).norm_inf() for a, b in zip(a_states, b_states)) <= 1e-10


def test_flow_divergence_detected(rng):
    c = LatticeChart.uniform(3, 6)
    A0 = SmoothForm.random(rng, c, 1, SU2, amplitude=50.0).sample(c)
    with np.errstate(all="ignore"), pytest.raises(FlowDivergenceError):
        gradient_flow_solve(Theory.yang_mills(c), A0, FlowParams(max_iters=300))


def test_trace_csv_columns():
    text = trace_csv([(0, 1.5, 0.25, 0.5)])
    assert text == "iter,action,residual_L2,residual_Linf\n0,1.5,0.25,0.5\n"


def test_broken_product_flow(rng):
    c = LatticeChart.uniform(3, 6)
    T = Theory.broken_product(c)
    A_N = SmoothForm.random(rng, c, 1, SU2, amplitude=0.05, zero_mean=True).sample(c)
    A_1 = SmoothForm.random(rng, c, 1, amplitude=0.05).sample(c)
    res = gradient_flow_solve(T, (A_N, A_1), FlowParams(residual_tol=1e-6, gauge_penalty=1.0))
    assert res.converged and res.monotone
    assert isinstance(res.field, tuple)
    assert action(T, res.field) <= action(T, (A_N, A_1))


def test_flow_divergence_window(rng):
    # a stiff gauge penalty breaks the explicit step bound
    c = LatticeChart.uniform(3, 6)
    A0 = SmoothForm.random(rng, c, 1, amplitude=0.1).sample(c)
    with pytest.raises(FlowDivergenceError, match="10 consecutive"):
        gradient_flow_solve(Theory.maxwell(c), A0, FlowParams(max_iters=3000, gauge_penalty=20.0))
