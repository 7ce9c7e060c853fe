"""Action gradients, the unreduced/reduced equivalence check and gradient flow."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .lattice import FormField, _weights, codifferential, exterior_derivative, inner_product
from .theory import ResidualReport, Theory, action, field_strength, maxwell_residual, ym_residual
from . import lie

__all__ = [
    "FlowParams",
    "FlowResult",
    "FlowDivergenceError",
    "numeric_action_gradient",
    "analytic_action_gradient",
    "reduction_equivalence_check",
    "gradient_flow_solve",
    "stable_step",
    "trace_csv",
]


class FlowDivergenceError(RuntimeError):
    """The action increased for too many consecutive steps."""


def stable_step(chart) -> float:
    """Largest accepted explicit step, ``0.4 / sum_mu 4 / h_mu^2``."""
    return 0.4 / sum(4.0 / h ** 2 for h in chart.spacings)


@dataclass(frozen=True)
class FlowParams:
    step_size: float | None = None
    max_iters: int = 50_000
    residual_tol: float = 1e-6
    gauge_penalty: float = 0.0
    seed: int = 0
    divergence_window: int = 10

    def __post_init__(self):
        if self.step_size is not None and not self.step_size > 0:
            raise ValueError("step_size must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.gauge_penalty < 0:
            raise ValueError("gauge_penalty must be nonnegative")

    def resolve_step(self, chart) -> float:
        bound = stable_step(chart)
        if self.step_size is None:
            return bound
        # step * (sum 4/h^2) must stay below 0.4
        if self.step_size > bound * (1 + 1e-12):
            raise ValueError(
                f"step_size {self.step_size:.3e} exceeds the stability bound {bound:.3e} "
                f"(0.4 / sum 4/h^2)")
        return self.step_size


def _raise_index(T: Theory, g: np.ndarray) -> np.ndarray:
    """Convert coordinate derivatives into the metric gradient: divide by g^{II} and K."""
    w = _weights(T.chart.signature.diag, T.degree)
    Kinv = np.linalg.inv(T.algebra.form)
    return np.einsum("i,ab,ib...->ia...", w, Kinv, g)


def numeric_action_gradient(T: Theory, A: FormField, fd_step: float = 1e-5) -> FormField:
    """Central finite difference of :func:`action` in every coordinate, divided by the cell volume.

    The result is returned as the metric gradient (index raised with the chart
    metric and the algebra form) so that it is directly comparable with
    :func:`analytic_action_gradient`.
    """
    if not fd_step > 0:
        raise ValueError("fd_step must be positive")
    T.check_field(A)
    data = A.data.copy()
    grad = np.zeros_like(data)
    work = FormField(A.chart, A.degree, data, A.algebra, A.margin)
    flat = data.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + fd_step
        sp = action(T, work)
        flat[i] = orig - fd_step
        sm = action(T, work)
        flat[i] = orig
        gflat[i] = (sp - sm) / (2.0 * fd_step)
    grad /= A.chart.cell_volume
    return A.with_data(_raise_index(T, grad))


def _bracket_force(A: FormField, F: FormField) -> FormField:
    """``-sum_mu g^{mu mu} [A_mu, F_{mu nu}]`` assembled component by component."""
    alg = A.algebra
    diag = A.chart.signature.diag
    out = np.zeros_like(A.data)
    for nu in range(A.dim):
        for mu in range(A.dim):
            if mu == nu:
                continue
            out[nu] -= diag[mu] * lie.bracket(alg, A.data[mu], F.component((mu, nu)))
    return A.with_data(out, max(A.margin, F.margin))


def analytic_action_gradient(T: Theory, A: FormField) -> FormField:
    """Exact metric gradient of the discrete action.

    Abelian theories: ``2 delta(dA)``.  Yang-Mills: ``2 delta F`` plus the
    bracket force obtained by varying ``1/2 [A ^ A]`` and moving the bracket
    across the invariant form.
    """
    T.check_field(A)
    if T.kind == "broken_product":
        raise ValueError("differentiate the sectors separately for broken_product")
    F = field_strength(T, A)
    grad = 2.0 * codifferential(F)
    if T.kind == "yang_mills":
        grad = grad + 2.0 * _bracket_force(A, F)
    return grad


def reduced_residual(T: Theory, A: FormField) -> FormField:
    if T.kind == "yang_mills":
        return ym_residual(A)
    return maxwell_residual(field_strength(T, A))


def reduction_equivalence_check(T: Theory, A: FormField, tol: float | None = None) -> ResidualReport:
    """Compare the unreduced Euler-Lagrange residual (action gradient) with twice the reduced residual.

    The default verdict tolerance is ``1e-12 * (1 + |gradient|_inf)``.
    """
    grad = analytic_action_gradient(T, A)
    red = reduced_residual(T, A)
    diff = grad - 2.0 * red
    if tol is None:
        tol = 1e-12 * (1.0 + grad.norm_inf())
    report = ResidualReport("reduction_equivalence", metadata={**T.chart.metadata(), "theory": T.label(),
                                                               "algebra": T.algebra.name,
                                                               "form_normalization": "K = -Killing/2 (su2), 1 (u1)"})
    report.add_field("euler_lagrange", grad)
    report.add_field("reduced", red)
    report.add_field("difference", diff, tol)
    return report


@dataclass
class FlowResult:
    field: object
    trace: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    monotone: bool = True


def _sectors(T: Theory, A):
    """Split a field into independently flowing ``(theory, field)`` sectors."""
    if T.kind == "broken_product":
        A_N, A_1 = A
        return [Theory.yang_mills(T.chart), Theory.maxwell(T.chart)], [A_N, A_1]
    return [T], [A]


def _objective(theories, fields, lam):
    S = 0.0
    for T, A in zip(theories, fields):
        S += action(T, A)
        if lam:
            dA = codifferential(A)
            S += lam * inner_product(dA, dA)
    return S


def _residual_norms(theories, fields):
    l2 = linf = 0.0
    for T, A in zip(theories, fields):
        r = reduced_residual(T, A)
        l2 += r.norm_l2() ** 2
        linf = float(np.maximum(linf, r.norm_inf()))  # propagates NaN, unlike builtin max
    return float(np.sqrt(l2)), linf


def gradient_flow_solve(T: Theory, A0, params: FlowParams = FlowParams(), callback=None) -> FlowResult:
    """Explicit Euler descent ``A <- A - step (grad S + lambda grad |delta A|^2)``.

    Stops when the reduced residual's sup norm drops to ``residual_tol`` or
    after ``max_iters`` steps.  Each trace row is ``(iter, action, L2, Linf)``
    where ``action`` includes the gauge penalty when one is set.  For
    ``broken_product`` the pair ``(A_N, A_1)`` flows jointly: the action is
    the sum over sectors, ``L2`` combines and ``Linf`` takes the larger.
    """
    T.check_field(A0)
    if not T.chart.signature.euclidean_like:
        raise ValueError("gradient flow runs on Euclidean-signature charts only")
    step = params.resolve_step(T.chart)
    lam = params.gauge_penalty
    theories, fields = _sectors(T, A0)
    fields = [A.copy() for A in fields]
    result = FlowResult(None)
    S = _objective(theories, fields, lam)
    ups = 0
    for it in range(params.max_iters + 1):
        l2, linf = _residual_norms(theories, fields)
        result.trace.append((it, S, l2, linf))
        if not (np.isfinite(S) and np.isfinite(linf)):
            raise FlowDivergenceError(f"flow produced non-finite values at iteration {it}")
        if callback is not None:
            callback(it, fields[0] if len(fields) == 1 else tuple(fields))
        if linf <= params.residual_tol:
            result.converged = True
            break
        if it == params.max_iters:
            break
        new = []
        for Ts, A in zip(theories, fields):
            grad = analytic_action_gradient(Ts, A)
            if lam:
                grad = grad + (2.0 * lam) * exterior_derivative(codifferential(A))
            new.append(A - step * grad)
        fields = new
        S_new = _objective(theories, fields, lam)
        if S_new > S:
            result.monotone = False
            ups += 1
            if ups >= params.divergence_window:
                raise FlowDivergenceError(
                    f"action increased for {ups} consecutive steps (iteration {it + 1}, action {S_new:.6e})")
        else:
            ups = 0
        S = S_new
    result.field = fields[0] if len(fields) == 1 else tuple(fields)
    result.iterations = result.trace[-1][0]
    return result


def trace_csv(trace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["iter", "action", "residual_L2", "residual_Linf"])
    for it, S, l2, linf in trace:
        w.writerow([it, repr(float(S)), repr(float(l2)), repr(float(linf))])
    return buf.getvalue()
