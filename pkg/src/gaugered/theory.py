"""Lagrangian densities, actions and reduced-equation residuals.

Four theories are supported:

``maxwell``
    u(1) connection ``A``, density ``g(F, F)`` with ``F = dA``.
``kform``
    scalar ``k``-form ``A``, density ``g(dA, dA)``.
``yang_mills``
    su(2) connection, density ``<F, F>_g`` contracted with the invariant form.
``broken_product``
    pair ``(A_N, A_1)`` of an su(2) and a u(1) connection with the trivial flat
    connection on the quotient, so the two sectors decouple.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import lie
from .gauge import bracket_wedge, covariant_derivative, curvature
from .lattice import (
    FormField,
    LatticeChart,
    _diff,
    _mask,
    _weights,
    codifferential,
    exterior_derivative,
    hodge_star,
    multi_indices,
    permutation_sign,
    pointwise_pairing,
    star_inverse,
)
from .lie import SU2, U1, LieAlgebra

__all__ = [
    "Theory",
    "ResidualReport",
    "NoetherPreconditionError",
    "field_strength",
    "lagrangian_density",
    "action",
    "mass_density",
    "maxwell_residual",
    "ym_residual",
    "bianchi_residual",
    "delta_l_delta_F",
    "coadjoint_curvature_residual",
    "noether_current",
    "noether_divergence",
    "broken_product_residuals",
]

KINDS = ("maxwell", "kform", "yang_mills", "broken_product")


class NoetherPreconditionError(ValueError):
    """The symmetry generator does not satisfy the constraint defining the symmetry subbundle."""


@dataclass(frozen=True)
class Theory:
    kind: str
    chart: LatticeChart
    degree: int = 1
    algebra: LieAlgebra = U1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown theory kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "kform" and not 1 <= self.degree <= self.chart.dim - 1:
            raise ValueError(f"k-form electromagnetism needs 1 <= k <= {self.chart.dim - 1}")
        if self.kind != "kform" and self.degree != 1:
            raise ValueError(f"{self.kind} fields are 1-forms")
        if self.kind in ("maxwell", "kform") and self.algebra is not U1:
            raise ValueError(f"{self.kind} is an Abelian u1 theory")
        if self.kind == "yang_mills" and self.algebra is not SU2:
            raise ValueError("yang_mills is implemented for su2")

    @classmethod
    def maxwell(cls, chart):
        return cls("maxwell", chart)

    @classmethod
    def kform(cls, chart, k):
        return cls("kform", chart, degree=k)

    @classmethod
    def yang_mills(cls, chart):
        return cls("yang_mills", chart, algebra=SU2)

    @classmethod
    def broken_product(cls, chart):
        return cls("broken_product", chart, algebra=SU2)

    @property
    def abelian(self) -> bool:
        return self.kind in ("maxwell", "kform")

    def check_field(self, A):
        if self.kind == "broken_product":
            if not (isinstance(A, tuple) and len(A) == 2):
                raise ValueError("broken_product fields are (A_N, A_1) pairs")
            A_N, A_1 = A
            if A_N.algebra is not SU2 or A_1.algebra is not U1 or A_N.degree != 1 or A_1.degree != 1:
                raise ValueError("broken_product needs an su2 1-form and a u1 1-form")
            if A_N.chart != A_1.chart:
                raise ValueError("broken_product fields must share a chart")
            return
        if not isinstance(A, FormField):
            raise ValueError("expected a FormField")
        if A.degree != self.degree:
            raise ValueError(f"{self.kind} expects a {self.degree}-form, got degree {A.degree}")
        if A.algebra != self.algebra:
            raise ValueError(f"{self.kind} expects {self.algebra.name} values, got {A.algebra.name}")
        if A.chart != self.chart:
            raise ValueError("field lives on a different chart")

    def label(self) -> str:
        return self.kind if self.kind != "kform" else f"kform{self.degree}"


@dataclass
class ResidualReport:
    """Named residual norms with tolerances and verdicts.

    ``rows`` hold field norms; ``checks`` hold scalar quantities (refinement
    ratios, relative errors) with an accepted interval.  Entries flagged as
    ``control`` are negative controls: their failure is the expected outcome,
    they are reported but do not enter :attr:`passed`.
    """

    title: str
    metadata: dict = field(default_factory=dict)
    rows: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    def add(self, name: str, l2: float, linf: float, tol: float | None = None, passed: bool | None = None,
            control: bool = False):
        l2, linf = float(l2), float(linf)
        if not (l2 >= 0 and linf >= 0):
            raise ValueError("norms are nonnegative")
        if passed is None and tol is not None:
            passed = linf <= tol
        self.rows.append({"name": name, "L2": l2, "Linf": linf, "tol": tol, "pass": passed, "control": control})
        return self

    def add_field(self, name: str, w: FormField, tol: float | None = None, control: bool = False):
        return self.add(name, w.norm_l2(), w.norm_inf(), tol, control=control)

    def add_check(self, name: str, value: float, lo: float | None = None, hi: float | None = None,
                  control: bool = False):
        value = float(value)
        ok = (lo is None or value >= lo) and (hi is None or value <= hi)
        self.checks.append({"name": name, "value": value, "lo": lo, "hi": hi, "pass": bool(ok),
                            "control": control})
        return self

    def __getitem__(self, name):
        for row in self.rows + self.checks:
            if row["name"] == name:
                return row
        raise KeyError(name)

    def failures(self) -> list[str]:
        return [r["name"] for r in self.rows + self.checks if r["pass"] is False and not r["control"]]

    @property
    def passed(self) -> bool:
        return not self.failures()

    def to_dict(self) -> dict:
        return {"title": self.title, "metadata": dict(self.metadata), "rows": [dict(r) for r in self.rows],
                "checks": [dict(c) for c in self.checks], "pass": self.passed}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        """Flat ``key = value`` table with ``repr`` floats."""
        lines = [f"title = {self.title}"]
        for k in sorted(self.metadata):
            lines.append(f"meta.{k} = {self.metadata[k]}")
        for row in self.rows:
            n = row["name"]
            lines.append(f"{n}.L2 = {row['L2']!r}")
            lines.append(f"{n}.Linf = {row['Linf']!r}")
            lines.append(f"{n}.tol = {row['tol']!r}")
            lines.append(f"{n}.pass = {row['pass']}")
            if row["control"]:
                lines.append(f"{n}.control = True")
        for c in self.checks:
            n = c["name"]
            lines.append(f"{n}.value = {c['value']!r}")
            lines.append(f"{n}.range = [{c['lo']!r}, {c['hi']!r}]")
            lines.append(f"{n}.pass = {c['pass']}")
            if c["control"]:
                lines.append(f"{n}.control = True")
        lines.append(f"pass = {self.passed}")
        return "\n".join(lines) + "\n"


def field_strength(T: Theory, A: FormField) -> FormField:
    """Curvature for connections, ``dA`` for k-form fields."""
    if T.kind == "kform":
        return exterior_derivative(A)
    return curvature(A)


def lagrangian_density(T: Theory, A) -> FormField:
    """Pointwise ``g(F, F)`` (contracted with the invariant form) as a scalar 0-form."""
    T.check_field(A)
    if T.kind == "broken_product":
        A_N, A_1 = A
        F_N, F_1 = curvature(A_N), curvature(A_1)
        dens = pointwise_pairing(F_N, F_N) + pointwise_pairing(F_1, F_1)
        margin = max(F_N.margin, F_1.margin)
    else:
        F = field_strength(T, A)
        dens, margin = pointwise_pairing(F, F), F.margin
    return FormField(T.chart, 0, dens[None, None], U1, margin)


def _integrate(density: FormField) -> float:
    return float(np.sum(density.interior_data()) * density.chart.cell_volume)


def action(T: Theory, A) -> float:
    """``sum_sites density * cell volume`` over the valid interior."""
    return _integrate(lagrangian_density(T, A))


def mass_density(A: FormField) -> FormField:
    """Non-gauge-invariant density ``g(A, A)`` (negative control)."""
    return FormField(A.chart, 0, pointwise_pairing(A, A)[None, None], U1, A.margin)


def maxwell_residual(F: FormField) -> FormField:
    """``delta F`` for an Abelian field strength."""
    if not F.algebra.abelian:
        raise ValueError("maxwell_residual takes an Abelian field strength; use ym_residual")
    return codifferential(F)


def ym_residual(A: FormField) -> FormField:
    """``delta F + *^{-1}[A ^ *F]`` with ``F = curvature(A)``.

    For an Abelian connection the bracket term vanishes and this is exactly
    ``maxwell_residual(curvature(A))``.
    """
    F = curvature(A)
    out = codifferential(F)
    if A.algebra.abelian:
        return out
    return out + star_inverse(bracket_wedge(A, hodge_star(F)))


def bianchi_residual(A: FormField) -> FormField:
    """``dF + [A ^ F]``; degenerate (zero components) on 2-dimensional charts."""
    F = curvature(A)
    out = exterior_derivative(F)
    if A.algebra.abelian or out.degenerate:
        return out
    return out + bracket_wedge(A, F)


def delta_l_delta_F(T: Theory, F: FormField) -> FormField:
    """Index-raised ``2 F``: ``2 g^{II} K F_I`` (metric on form slots, invariant form on algebra slots)."""
    w = _weights(F.chart.signature.diag, F.degree)
    data = 2.0 * np.einsum("i,ab,ib...->ia...", w, F.algebra.form, F.data)
    return F.with_data(data)


def coadjoint_curvature_residual(F: FormField, T: Theory | None = None) -> np.ndarray:
    """``sum_I ad*_{F_I} (dl/dF)^I`` per site, shape ``(m, *sizes)``.

    Vanishes identically for an Ad-invariant reduced Lagrangian.
    """
    T = T or Theory.yang_mills(F.chart)
    Pi = delta_l_delta_F(T, F)
    out = np.zeros((F.algebra.m,) + F.chart.sizes)
    for i in range(F.data.shape[0]):
        out += lie.coadjoint(F.algebra, F.data[i], Pi.data[i])
    return out


def noether_current(T: Theory, A: FormField, xi: FormField, closed_tol: float = 1e-10) -> np.ndarray:
    return _current(T, A, xi, closed_tol)[0]


def _current(T, A, xi, closed_tol):
    """Current ``J^mu = sum_{I not containing mu} sign(mu, I) (dl/dF)^{mu I} eta_I``.

    ``eta = xi`` for the Abelian theories (``xi`` a closed scalar form of the
    field's degree) and ``eta = D xi = d xi + [A, xi]`` for Yang-Mills
    (``xi`` an algebra-valued 0-form).  Returns an array ``(dim, *sizes)``.
    """
    T.check_field(A)
    chart = T.chart
    if T.abelian:
        if xi.degree != T.degree or xi.algebra is not U1:
            raise NoetherPreconditionError(f"Abelian symmetry generators are scalar {T.degree}-forms")
        dxi = exterior_derivative(xi)
        if dxi.norm_inf() > closed_tol:
            raise NoetherPreconditionError(
                f"symmetry generator is not closed: |d xi|_inf = {dxi.norm_inf():.3e} > {closed_tol:.1e}")
        eta = xi
    elif T.kind == "yang_mills":
        if xi.degree != 0 or xi.algebra is not SU2:
            raise NoetherPreconditionError("Yang-Mills symmetry generators are su2-valued 0-forms")
        eta = covariant_derivative(xi, A)
    else:
        raise ValueError("use the sector theories for broken_product currents")
    C = field_strength(T, A)
    Pi = delta_l_delta_F(T, C)
    k = eta.degree
    dim = chart.dim
    lookup_C = {J: n for n, J in enumerate(multi_indices(dim, k + 1))}
    J = np.zeros((dim,) + chart.sizes)
    for mu in range(dim):
        for n, I in enumerate(multi_indices(dim, k)):
            if mu in I:
                continue
            sign = permutation_sign((mu,) + I)
            target = lookup_C[tuple(sorted(I + (mu,)))]
            # Pi already carries the metric and invariant-form factors; pair with eta by plain contraction
            J[mu] += sign * np.einsum("a...,a...->...", Pi.data[target], eta.data[n])
    return J, max(C.margin, eta.margin)


def noether_divergence(T: Theory, A: FormField, xi: FormField, closed_tol: float = 1e-10) -> FormField:
    """Discrete divergence ``sum_mu d_mu J^mu`` of the Noether current as a scalar 0-form."""
    J, margin = _current(T, A, xi, closed_tol)
    chart = T.chart
    div = np.zeros(chart.sizes)
    for mu in range(chart.dim):
        div += _diff(J[mu], mu, chart.spacings[mu], chart.periodic)
    margin = margin + (0 if chart.periodic else 1)
    data = _mask(div[None, None], chart, margin)
    return FormField(chart, 0, data, U1, margin)


def broken_product_residuals(A_N: FormField, A_1: FormField, tol_n: float | None = None,
                             tol_1: float | None = None) -> ResidualReport:
    """Residuals of the decoupled product theory (trivial flat connection on the quotient)."""
    T = Theory.broken_product(A_N.chart)
    T.check_field((A_N, A_1))
    report = ResidualReport("broken_product", metadata={**A_N.chart.metadata(), "theory": "broken_product",
                                                         "coupling": "trivial flat connection (decoupled)"})
    report.add_field("su2_ym_residual", ym_residual(A_N), tol_n)
    report.add_field("u1_maxwell_residual", maxwell_residual(curvature(A_1)), tol_1)
    return report
