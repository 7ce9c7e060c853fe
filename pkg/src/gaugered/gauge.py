"""Connections, curvature and gauge transformations on a lattice chart."""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import lie
from .lattice import FormField, LatticeChart, _diff, _mask, exterior_derivative, shuffle_product
from .lie import SU2, U1, LieAlgebra

__all__ = [
    "GroupField",
    "bracket_wedge",
    "curvature",
    "covariant_derivative",
    "group_derivative_term",
    "gauge_transform_connection",
    "gauge_transform_curvature",
    "phi_map",
    "ProjectionWarning",
]


class ProjectionWarning(UserWarning):
    """The derivative of a group field left the Lie algebra by more than the tolerance."""


@dataclass(frozen=True, eq=False)
class GroupField:
    """Group-valued 0-field.

    ``data`` has shape ``(1, *sizes)`` of lifted angles for U(1) (not reduced
    mod 2 pi, so their differences are meaningful) or ``(4, *sizes)`` of unit
    quaternions for SU(2).
    """

    chart: LatticeChart
    algebra: LieAlgebra
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        expected = (self.algebra.group_dim,) + self.chart.sizes
        if data.shape != expected:
            raise ValueError(f"group field data must have shape {expected}, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("group field contains non-finite values")
        if self.algebra is SU2:
            norm = np.sqrt(np.sum(data * data, axis=0))
            if np.max(np.abs(norm - 1.0)) > 1e-12:
                data = data / norm
        object.__setattr__(self, "data", data)

    @classmethod
    def identity(cls, chart, algebra):
        return cls(chart, algebra, lie.group_identity(algebra, chart.sizes))

    @classmethod
    def exp(cls, xi: FormField) -> "GroupField":
        """Pointwise exponential of an algebra-valued 0-form."""
        if xi.degree != 0:
            raise ValueError("exp needs an algebra-valued 0-form")
        return cls(xi.chart, xi.algebra, lie.exp(xi.algebra, xi.data[0]))

    def inverse(self) -> "GroupField":
        return GroupField(self.chart, self.algebra, lie.group_inv(self.algebra, self.data))

    def __mul__(self, other: "GroupField") -> "GroupField":
        return GroupField(self.chart, self.algebra, lie.group_mul(self.algebra, self.data, other.data))


def bracket_wedge(alpha: FormField, beta: FormField) -> FormField:
    """``[alpha ^ beta]_I = sum over shuffles of sign * [alpha_J, beta_K]``."""
    if alpha.algebra != beta.algebra:
        raise ValueError("forms take values in different algebras")
    alg = alpha.algebra
    return shuffle_product(alpha, beta, lambda a, b: lie.bracket(alg, a, b), alg)


def curvature(A: FormField) -> FormField:
    """``F = dA + 1/2 [A ^ A]``."""
    if A.degree != 1:
        raise ValueError("curvature needs a 1-form connection")
    F = exterior_derivative(A)
    if A.algebra.abelian:
        return F
    return F + 0.5 * bracket_wedge(A, A)


def covariant_derivative(xi: FormField, A: FormField) -> FormField:
    """``D xi = d xi + [A ^ xi]`` for an algebra-valued form ``xi``."""
    out = exterior_derivative(xi)
    if A.algebra.abelian:
        return out
    return out + bracket_wedge(A, xi)


def group_derivative_term(h: GroupField, tol: float = 1e-6, return_residual: bool = False):
    """Algebra-valued 1-form ``(dh) h^{-1}``.

    U(1): the lifted angle field is differenced directly, giving ``d(angle)``
    with the same stencil as :func:`exterior_derivative`.  SU(2): the
    quaternion (defining representation) is central-differenced, multiplied
    on the right by ``h^{-1}`` and projected onto the algebra; the discarded
    real part is the projection residual.  A residual above ``tol`` emits a
    :class:`ProjectionWarning` (the grid is too coarse for ``h``).
    """
    chart = h.chart
    alg = h.algebra
    margin = 0 if chart.periodic else 1
    out = FormField.zeros(chart, 1, alg, margin)
    residual = 0.0
    for mu in range(chart.dim):
        dh = _diff(h.data, 1 + mu, chart.spacings[mu], chart.periodic)
        if alg is U1:
            out.data[mu] = dh
            continue
        prod_ = lie.qmul(dh, lie.qconj(h.data))
        out.data[mu] = 2.0 * prod_[1:]
        real = prod_[0][chart.interior(margin)]
        if real.size:
            residual = max(residual, float(np.max(np.abs(real))))
    _mask(out.data, chart, margin)
    if residual > tol:
        warnings.warn(
            f"group derivative projection residual {residual:.3e} exceeds {tol:.1e}",
            ProjectionWarning,
            stacklevel=2,
        )
    if return_residual:
        return out, residual
    return out


def _ad_inverse(h: GroupField, w: FormField) -> FormField:
    if w.algebra.abelian:
        return w.copy()
    hinv = lie.group_inv(h.algebra, h.data)
    data = np.stack([lie.adjoint(h.algebra, hinv, w.data[i]) for i in range(w.data.shape[0])]) if w.data.shape[0] else w.data.copy()
    return w.with_data(data)


def gauge_transform_connection(A: FormField, h: GroupField) -> FormField:
    """Right action ``A -> Ad_{h^{-1}}(A + (dh) h^{-1})``."""
    if A.chart != h.chart or A.algebra != h.algebra:
        raise ValueError("connection and gauge field live on different charts or algebras")
    return _ad_inverse(h, A + group_derivative_term(h))


def gauge_transform_curvature(F: FormField, h: GroupField) -> FormField:
    """``F -> Ad_{h^{-1}} F`` pointwise."""
    if F.chart != h.chart or F.algebra != h.algebra:
        raise ValueError("curvature and gauge field live on different charts or algebras")
    return _ad_inverse(h, F)


def phi_map(xi: FormField) -> tuple[FormField, FormField]:
    """``xi -> (xi, -1/2 [xi ^ xi])``, the splitting used for second-jet gauge symmetries."""
    if xi.degree != 1:
        raise ValueError("phi_map needs an algebra-valued 1-form")
    if xi.algebra.abelian:
        return xi.copy(), FormField.zeros(xi.chart, 2, xi.algebra, xi.margin)
    return xi.copy(), -0.5 * bracket_wedge(xi, xi)
