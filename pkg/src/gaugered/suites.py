"""Refinement sweeps and the verification suites built on them.

Every suite takes a seed, draws all randomness from one generator and
returns a :class:`~gaugered.theory.ResidualReport`.  Sweeps evaluate a
residual on a chart and its successive refinements and record the sup norm
over the sites of the coarsest chart, so every level is measured on the same
physical points.
"""
from __future__ import annotations

import csv
import functools
import io
import warnings
from dataclasses import dataclass, field
from math import prod

import numpy as np

from .gauge import GroupField, ProjectionWarning, curvature, gauge_transform_connection, gauge_transform_curvature
from .lattice import (
    FormField,
    LatticeChart,
    codifferential,
    exterior_derivative,
    hodge_star,
    inner_product,
)
from .lie import SU2, U1
from .reconstruct import CompatibilityError, poincare_reconstruct
from .samples import PlaneWave, SmoothForm, random_form
from .theory import (
    ResidualReport,
    Theory,
    action,
    bianchi_residual,
    broken_product_residuals,
    coadjoint_curvature_residual,
    lagrangian_density,
    mass_density,
    maxwell_residual,
    noether_divergence,
    ym_residual,
)
from .variation import (
    FlowParams,
    analytic_action_gradient,
    gradient_flow_solve,
    numeric_action_gradient,
    reduction_equivalence_check,
)

__all__ = [
    "RATIO_BAND",
    "Sweep",
    "refinement_levels",
    "wave_chart",
    "default_wave",
    "SWEEPS",
    "SUITES",
    "run_sweep",
    "calculus_suite",
    "gauge_suite",
    "utiyama_suite",
    "wave_suite",
    "equivalence_suite",
    "coadjoint_suite",
    "noether_suite",
    "bianchi_suite",
    "reconstruct_suite",
    "solver_suite",
    "broken_product_suite",
]

RATIO_BAND = (3.5, 4.5)
EXACT_TOL = 1e-12
MAX_SITES = 2 ** 22


# ---------------------------------------------------------------- sweeps


@dataclass
class Sweep:
    """One residual measured across refinement levels."""

    name: str
    hs: list = field(default_factory=list)
    linf: list = field(default_factory=list)
    exact_tol: float = EXACT_TOL

    def append(self, h, value):
        self.hs.append(float(h))
        self.linf.append(float(value))

    @property
    def ratios(self) -> list:
        return [a / b if b > 0 else float("inf") for a, b in zip(self.linf, self.linf[1:])]

    @property
    def exact(self) -> bool:
        return max(self.linf) <= self.exact_tol

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["level", "h", "Linf", "ratio"])
        prev = None
        for level, (h, v) in enumerate(zip(self.hs, self.linf)):
            if prev is None:
                ratio = ""
            elif max(prev, v) <= self.exact_tol:
                ratio = "exact"
            else:
                ratio = repr(prev / v) if v > 0 else "inf"
            w.writerow([level, repr(h), repr(v), ratio])
            prev = v
        return buf.getvalue()

    def record(self, report: ResidualReport, band=RATIO_BAND):
        """Add one row per level and a ratio check per refinement step."""
        for level, (h, v) in enumerate(zip(self.hs, self.linf)):
            report.add(f"{self.name}.level{level}", v, v)
        for i, r in enumerate(self.ratios, start=1):
            report.add_check(f"{self.name}.ratio{i}", r, *band)
        return report


def refinement_levels(chart: LatticeChart, levels: int) -> list:
    if levels < 2:
        raise ValueError("a sweep needs at least 2 levels")
    charts = [chart]
    for _ in range(levels - 1):
        charts.append(charts[-1].refined(2))
    if prod(charts[-1].sizes) > MAX_SITES:
        raise ValueError(f"refinement to {charts[-1].sizes} exceeds {MAX_SITES} sites")
    return charts


def _coarse_sites(coarse: LatticeChart, margin: int, chart: LatticeChart) -> tuple:
    f = round(coarse.spacings[0] / chart.spacings[0])
    return tuple(slice(s.start * f, (s.stop - 1) * f + 1, f) for s in coarse.interior(margin))


def _sup_on(data: np.ndarray, sites: tuple) -> float:
    d = data[(Ellipsis,) + sites]
    return float(np.max(np.abs(d))) if d.size else 0.0


class _Levels:
    """Iterate refinement levels, exposing the coarse-site selection for each."""

    def __init__(self, base: LatticeChart, levels: int):
        self.charts = refinement_levels(base, levels)
        self.base = base
        self.margin = None

    def sites(self, chart, margin):
        # margins count layers, so the coarse valid sites lie inside every finer valid region
        if chart is self.charts[0]:
            self.margin = margin
        return _coarse_sites(self.base, self.margin, chart)


def wave_chart(levels_base=(12, 4, 4, 16), length=1.0, signature="-+++") -> LatticeChart:
    """Periodic Lorentzian chart with unequal t and z resolution (see :func:`default_wave`)."""
    return LatticeChart(levels_base, tuple(length / n for n in levels_base), "periodic", signature)


def default_wave(length=1.0) -> PlaneWave:
    """Null plane wave ``sin(2 pi (t + z) / L) dx`` polarized along x."""
    k = 2.0 * np.pi / length
    return PlaneWave((k, 0.0, 0.0, k), (0.0, 1.0, 0.0, 0.0))


def sweep_wave(base: LatticeChart, levels: int, wave: PlaneWave):
    res, bianchi = Sweep("maxwell_residual"), []
    lv = _Levels(base, levels)
    for c in lv.charts:
        F = exterior_derivative(wave.sample(c))
        r = maxwell_residual(F)
        res.append(c.spacings[0], _sup_on(r.data, lv.sites(c, r.margin)))
        bianchi.append(exterior_derivative(F).norm_inf())
    return res, bianchi


def _quiet(fn):
    """Coarse sweep levels trip the projection diagnostic by design; keep it out of the output."""
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ProjectionWarning)
            return fn(*args, **kwargs)
    return wrapper


def _slow_su2_pair(rng, base, amplitude, periods):
    A = SmoothForm.random(rng, base, 1, SU2, amplitude=amplitude, periods=periods)
    chi = SmoothForm.random(rng, base, 0, SU2, amplitude=amplitude, periods=periods)
    return A, chi


@_quiet
def sweep_su2_covariance(base, levels, rng, amplitude=0.5, periods=None):
    periods = periods or tuple(4.0 * L for L in base.lengths)
    A_sp, chi_sp = _slow_su2_pair(rng, base, amplitude, periods)
    sw = Sweep("su2_covariance")
    lv = _Levels(base, levels)
    for c in lv.charts:
        A, h = A_sp.sample(c), GroupField.exp(chi_sp.sample(c))
        err = curvature(gauge_transform_connection(A, h)) - gauge_transform_curvature(curvature(A), h)
        sw.append(c.spacings[0], _sup_on(err.data, lv.sites(c, err.margin)))
    return sw


@_quiet
def sweep_utiyama(base, levels, rng, amplitude=0.5, periods=None):
    """su2 density discrepancy (sup on coarse sites) and the action discrepancy over the coarse box."""
    periods = periods or tuple(4.0 * L for L in base.lengths)
    A_sp, chi_sp = _slow_su2_pair(rng, base, amplitude, periods)
    dens, act = Sweep("su2_density"), Sweep("su2_action")
    lv = _Levels(base, levels)
    for c in lv.charts:
        T = Theory.yang_mills(c)
        A, h = A_sp.sample(c), GroupField.exp(chi_sp.sample(c))
        a = lagrangian_density(T, gauge_transform_connection(A, h))
        b = lagrangian_density(T, A)
        diff = a.data[0, 0] - b.data[0, 0]
        sites = lv.sites(c, max(a.margin, b.margin))
        dens.append(c.spacings[0], _sup_on(diff, sites))
        box = tuple(slice(s.start, s.stop) for s in sites)
        act.append(c.spacings[0], abs(float(np.sum(diff[box])) * c.cell_volume))
    return dens, act


def sweep_u1_gauge(base, levels, rng, amplitude=1.0):
    A_sp = SmoothForm.random(rng, base, 1, U1, amplitude=amplitude)
    chi_sp = SmoothForm.random(rng, base, 0, U1, amplitude=amplitude)
    sw = Sweep("u1_gauge")
    lv = _Levels(base, levels)
    for c in lv.charts:
        A, h = A_sp.sample(c), GroupField.exp(chi_sp.sample(c))
        err = curvature(gauge_transform_connection(A, h)) - curvature(A)
        sw.append(c.spacings[0], _sup_on(err.data, lv.sites(c, err.margin)))
    return sw


def closed_generator(rng, base: LatticeChart, axes=None, amplitude=1.0):
    """Random closed scalar 1-form ``d chi + c`` (smooth ``chi``, constant ``c``) as a sampler."""
    chi = SmoothForm.random(rng, base, 0, U1, amplitude=amplitude, axes=axes)
    const = rng.standard_normal(base.dim) * amplitude

    def sample(c):
        xi = exterior_derivative(chi.sample(c))
        return xi + FormField(c, 1, np.broadcast_to(const.reshape((-1, 1) + (1,) * c.dim),
                                                     xi.data.shape).copy(), U1, xi.margin)
    return sample


def sweep_noether(base, levels, wave: PlaneWave, xi_sampler, name="noether_divergence"):
    sw = Sweep(name)
    lv = _Levels(base, levels)
    for c in lv.charts:
        div = noether_divergence(Theory.maxwell(c), wave.sample(c), xi_sampler(c))
        sw.append(c.spacings[0], _sup_on(div.data, lv.sites(c, div.margin)))
    return sw


def sweep_bianchi(base, levels, rng, amplitude=0.5, periods=None):
    periods = periods or tuple(4.0 * L for L in base.lengths)
    A_sp = SmoothForm.random(rng, base, 1, SU2, amplitude=amplitude, periods=periods)
    sw = Sweep("su2_bianchi")
    lv = _Levels(base, levels)
    for c in lv.charts:
        r = bianchi_residual(A_sp.sample(c))
        sw.append(c.spacings[0], _sup_on(r.data, lv.sites(c, r.margin)))
    return sw


def sweep_reconstruct(base, levels, rng, amplitude=1.0, periods=None):
    """Round trip ``curvature(A_rec) - dA_0`` plus the closedness measures for each level."""
    periods = periods or tuple(4.0 * L for L in base.lengths)
    A_sp = SmoothForm.random(rng, base, 1, U1, amplitude=amplitude, periods=periods)
    trip = Sweep("round_trip")
    closed, shift = [], []
    lv = _Levels(base, levels)
    for c in lv.charts:
        A0 = A_sp.sample(c)
        F = exterior_derivative(A0)
        A_rec = poincare_reconstruct(F)
        err = curvature(A_rec) - F
        trip.append(c.spacings[0], _sup_on(err.data, lv.sites(c, err.margin)))
        closed.append(exterior_derivative(A_rec - A0).norm_inf())
        corner = tuple(s.start for s in c.interior(F.margin))
        shift.append(exterior_derivative(A_rec - poincare_reconstruct(F, origin=corner)).norm_inf())
    return trip, closed, shift


# ---------------------------------------------------------------- suites


def _report(title, seed, **meta):
    return ResidualReport(title, metadata={"seed": seed, **meta})


def default_calculus_charts():
    return [
        LatticeChart.uniform(2, 8, 1.0),
        LatticeChart.uniform(3, 6, 1.0),
        LatticeChart.uniform(4, 6, 1.0, signature="-+++"),
        LatticeChart.uniform(3, 7, 1.0, "clamped"),
    ]


def calculus_suite(seed=0, charts=None, n_fields=50) -> ResidualReport:
    """``d d = 0``, adjointness of ``d`` and ``delta``, and the ``** `` sign law.

    Adjointness is checked on periodic charts only (clamped charts have
    boundary terms); the error is relative to ``|d alpha| |beta|``.
    """
    rng = np.random.default_rng(seed)
    charts = charts or default_calculus_charts()
    report = _report("calculus", seed, fields_per_degree=n_fields)
    for ci, c in enumerate(charts):
        tag = f"chart{ci}"
        report.metadata[f"{tag}"] = f"{c.sizes} {c.boundary} {c.signature}"
        for k in range(c.dim + 1):
            dd = star = adj = 0.0
            for _ in range(n_fields):
                w = SmoothForm.random(rng, c, k, U1, periods=None if c.periodic else c.lengths).sample(c)
                ddw = exterior_derivative(exterior_derivative(w))
                dd = max(dd, 0.0 if ddw.degenerate else ddw.norm_inf())
                noise = random_form(rng, c, k)
                sign = (-1) ** (k * (c.dim - k)) * c.signature.parity
                star = max(star, float(np.max(np.abs(hodge_star(hodge_star(noise)).data - sign * noise.data))))
                if c.periodic and k < c.dim:
                    beta = random_form(rng, c, k + 1)
                    da = exterior_derivative(noise)
                    lhs, rhs = inner_product(da, beta), inner_product(noise, codifferential(beta))
                    scale = da.norm_l2() * beta.norm_l2()
                    adj = max(adj, abs(lhs - rhs) / scale)
            report.add(f"{tag}.k{k}.dd", dd, dd, 1e-13)
            report.add(f"{tag}.k{k}.starstar", star, star, 0.0)
            if c.periodic and k < c.dim:
                report.add_check(f"{tag}.k{k}.adjoint_rel", adj, None, 1e-12)
    return report


def gauge_suite(seed=0, chart=None, n_transforms=20, levels=3) -> ResidualReport:
    """Abelian invariance under ``A -> A + d chi`` and su2 covariance under refinement."""
    rng = np.random.default_rng(seed)
    chart = chart or LatticeChart.uniform(3, 8, 1.0)
    report = _report("gauge", seed, chart=f"{chart.sizes} {chart.boundary} {chart.signature}")
    T = Theory.maxwell(chart)
    A_sp = SmoothForm.random(rng, chart, 1, U1, periods=None if chart.periodic else chart.lengths)
    A = A_sp.sample(chart)
    F, S = curvature(A), action(T, A)
    dF = dS = 0.0
    for _ in range(n_transforms):
        chi = SmoothForm.random(rng, chart, 0, U1, periods=None if chart.periodic else chart.lengths)
        Ah = gauge_transform_connection(A, GroupField.exp(chi.sample(chart)))
        dF = max(dF, (curvature(Ah) - F).norm_inf())
        dS = max(dS, abs(action(T, Ah) - S))
    report.add("u1_curvature_invariance", dF, dF, 1e-12)
    report.add("u1_action_invariance", dS, dS, 1e-12)
    base = LatticeChart.uniform(3, 7, 1.0, "clamped")
    sweep_su2_covariance(base, levels, rng).record(report)
    return report


@_quiet
def utiyama_suite(seed=0, chart=None, n_transforms=20, levels=3) -> ResidualReport:
    """Invariance of the curvature action; ``g(A, A)`` as the negative control."""
    rng = np.random.default_rng(seed)
    chart = chart or LatticeChart.uniform(3, 8, 1.0)
    report = _report("utiyama", seed, chart=f"{chart.sizes} {chart.boundary} {chart.signature}")
    T = Theory.maxwell(chart)
    per = None if chart.periodic else chart.lengths
    A = SmoothForm.random(rng, chart, 1, U1, periods=per).sample(chart)
    S, M = action(T, A), mass_density(A)
    dS = mass = 0.0
    for _ in range(n_transforms):
        h = GroupField.exp(SmoothForm.random(rng, chart, 0, U1, periods=per).sample(chart))
        Ah = gauge_transform_connection(A, h)
        dS = max(dS, abs(action(T, Ah) - S))
        Mh = mass_density(Ah)
        mass = max(mass, abs(float(np.sum(Mh.interior_data() - M.interior_data()))) / float(np.sum(M.interior_data())))
    report.add("u1_action_invariance", dS, dS, 1e-10)
    report.add("u1_mass_term_invariance", mass, mass, 1e-10, control=True)
    report.add_check("u1_mass_term_relative_change", mass, 1e-2, None)

    base = LatticeChart.uniform(3, 7, 1.0, "clamped")
    dens, act = sweep_utiyama(base, levels, rng)
    dens.record(report)
    for i, r in enumerate(act.ratios, start=1):
        report.add_check(f"su2_action.ratio{i}", r, RATIO_BAND[0], None)

    # su2 negative control on the coarse chart
    A_sp, chi_sp = _slow_su2_pair(rng, base, 0.5, tuple(4.0 * L for L in base.lengths))
    A, h = A_sp.sample(base), GroupField.exp(chi_sp.sample(base))
    m0 = mass_density(A).interior_data().sum()
    m1 = mass_density(gauge_transform_connection(A, h)).interior_data().sum()
    rel = abs(float(m1 - m0)) / float(m0)
    report.add("su2_mass_term_invariance", rel, rel, 1e-10, control=True)
    report.add_check("su2_mass_term_relative_change", rel, 1e-2, None)
    return report


def wave_suite(seed=0, base=None, wave=None, levels=3) -> ResidualReport:
    """Maxwell residual of a null plane wave under refinement, Bianchi identity at every level."""
    base = base or wave_chart()
    wave = wave or default_wave(base.lengths[0])
    report = _report("wave", seed, base=f"{base.sizes} {base.signature}", k=wave.wavevector,
                     eps=wave.polarization)
    cons = wave.constraints(base.signature)
    report.add("k_dot_eps", abs(cons["k_dot_eps"]), abs(cons["k_dot_eps"]), 1e-12)
    report.add("k_dot_k", abs(cons["k_dot_k"]), abs(cons["k_dot_k"]), 1e-12)
    res, bianchi = sweep_wave(base, levels, wave)
    res.record(report)
    for level, b in enumerate(bianchi):
        report.add(f"bianchi.level{level}", b, b, 1e-12)
    return report


def equivalence_suite(seed=0, n_fields=20) -> ResidualReport:
    """Action gradient versus twice the reduced residual; finite-difference gradient checks."""
    rng = np.random.default_rng(seed)
    report = _report("equivalence", seed, form_normalization="K = -Killing/2 (su2), 1 (u1)")
    lor = LatticeChart.uniform(4, 6, 1.0, signature="-+++")
    euc = LatticeChart.uniform(3, 6, 1.0)
    for label, T in (("maxwell", Theory.maxwell(lor)), ("yang_mills", Theory.yang_mills(euc))):
        worst = 0.0
        for _ in range(n_fields):
            A = SmoothForm.random(rng, T.chart, 1, T.algebra, amplitude=0.5).sample(T.chart)
            rep = reduction_equivalence_check(T, A)
            worst = max(worst, rep["difference"]["Linf"])
            if not rep.passed:
                report.add(f"{label}.failed_field", worst, worst, 0.0)
        report.add(f"{label}.gradient_minus_2residual", worst, worst, 1e-12)
    for label, T, tol in (("maxwell", Theory.maxwell(lor), 1e-8), ("yang_mills", Theory.yang_mills(euc), 1e-6)):
        A = SmoothForm.random(rng, T.chart, 1, T.algebra, amplitude=0.5).sample(T.chart)
        an = analytic_action_gradient(T, A)
        fd = numeric_action_gradient(T, A)
        rel = (fd - an).norm_inf() / an.norm_inf()
        report.add_check(f"{label}.fd_gradient_rel", rel, None, tol)
    return report


def coadjoint_suite(seed=0, n_fields=50) -> ResidualReport:
    """``sum ad*_F (dl/dF)`` for the Yang-Mills density on random su2 2-forms."""
    rng = np.random.default_rng(seed)
    report = _report("coadjoint", seed)
    charts = (LatticeChart.uniform(3, 6, 1.0), LatticeChart.uniform(4, 4, 1.0, signature="-+++"))
    worst = 0.0
    for i in range(n_fields):
        c = charts[i % 2]
        F = random_form(rng, c, 2, SU2)
        worst = max(worst, float(np.max(np.abs(coadjoint_curvature_residual(F)))))
    report.add("coadjoint_identity", worst, worst, 1e-12)
    return report


def noether_suite(seed=0, base=None, wave=None, n_generators=20, levels=3) -> ResidualReport:
    """Divergence of the Noether current on the plane-wave solution and on ``A = 0``.

    The generators ``xi = d chi + c`` vary along the propagation plane (t, z)
    where the charts resolve them.
    """
    rng = np.random.default_rng(seed)
    base = base or wave_chart()
    wave = wave or default_wave(base.lengths[0])
    report = _report("noether", seed, base=f"{base.sizes} {base.signature}", generators=n_generators)
    axes = tuple(i for i, k in enumerate(wave.wavevector) if k != 0.0) or None
    zero = PlaneWave(wave.wavevector, wave.polarization, 0.0)
    worst_zero = 0.0
    for g in range(n_generators):
        xi = closed_generator(rng, base, axes=axes)
        sweep_noether(base, levels, wave, xi, name=f"xi{g}").record(report)
        worst_zero = max(worst_zero, noether_divergence(Theory.maxwell(base), zero.sample(base), xi(base)).norm_inf())
    report.add("zero_field_divergence", worst_zero, worst_zero, 0.0)
    return report


def bianchi_suite(seed=0, chart=None, levels=3) -> ResidualReport:
    """Abelian Bianchi identity exactly; su2 Bianchi identity to second order."""
    rng = np.random.default_rng(seed)
    chart = chart or LatticeChart.uniform(3, 8, 1.0)
    report = _report("bianchi", seed)
    A = SmoothForm.random(rng, chart, 1, U1, periods=None if chart.periodic else chart.lengths).sample(chart)
    report.add_field("u1_bianchi", bianchi_residual(A), 1e-12)
    sweep_bianchi(LatticeChart.uniform(3, 7, 1.0, "clamped"), levels, rng).record(report)
    return report


def reconstruct_suite(seed=0, base=None, levels=3) -> ResidualReport:
    """Round trip ``F = dA_0 -> A_rec``, closedness, refusal of incompatible input."""
    rng = np.random.default_rng(seed)
    base = base or LatticeChart.uniform(3, 10, 1.0, "clamped")
    report = _report("reconstruct", seed, base=f"{base.sizes} {base.boundary}")
    trip, closed, shift = sweep_reconstruct(base, levels, rng)
    trip.record(report)
    for level, (a, b) in enumerate(zip(closed, shift)):
        report.add(f"closedness.level{level}", a, a, 1e-10)
        report.add(f"origin_shift_closedness.level{level}", b, b, 1e-10)

    # incompatible input: a 2-form with |dF| = O(1)
    bad_sp = SmoothForm.random(rng, base, 2, U1, periods=tuple(4.0 * L for L in base.lengths))
    F = bad_sp.sample(base)
    dF = exterior_derivative(F).norm_inf()
    try:
        poincare_reconstruct(F)
        refused = 0.0
    except CompatibilityError:
        refused = 1.0
    report.add_check("incompatible_refused", refused, 1.0, 1.0)
    report.add_check("incompatible_dF", dF, 1e-2, None)
    lv = _Levels(base, levels)
    for level, c in enumerate(lv.charts):
        F = bad_sp.sample(c)
        err = curvature(poincare_reconstruct(F, check=False)) - F
        ratio = _sup_on(err.data, lv.sites(c, err.margin)) / F.norm_inf()
        report.add_check(f"incompatible_round_trip.level{level}", ratio, 0.1, None)
    return report


def solver_problem(seed=0, chart=None, amplitude=0.1):
    """Zero-mean smooth random su2 connection of the given amplitude on the solver chart."""
    rng = np.random.default_rng(seed)
    chart = chart or LatticeChart.uniform(3, 8, 1.0)
    A = SmoothForm.random(rng, chart, 1, SU2, amplitude=amplitude, zero_mean=True).sample(chart)
    return Theory.yang_mills(chart), A, rng


SOLVER_PARAMS = FlowParams(gauge_penalty=1.0)


def solver_suite(seed=0, chart=None, params=SOLVER_PARAMS, fd_tol=1e-5):
    """Gradient flow to a Yang-Mills critical point; returns ``(report, flow result)``."""
    T, A0, _ = solver_problem(seed, chart)
    result = gradient_flow_solve(T, A0, params)
    report = _report("solver", seed, **T.chart.metadata(), iterations=result.iterations,
                     gauge_penalty=params.gauge_penalty, residual_tol=params.residual_tol)
    final = result.trace[-1]
    report.add("ym_residual", final[2], final[3], params.residual_tol)
    report.add_check("converged", float(result.converged), 1.0, 1.0)
    report.add_check("monotone", float(result.monotone), 1.0, 1.0)
    fd = numeric_action_gradient(T, result.field)
    report.add_field("fd_gradient", fd, fd_tol)
    return report, result


def broken_product_suite(seed=0, levels=3, params=SOLVER_PARAMS) -> ResidualReport:
    """Decoupled su2 x u1 pair: the plane-wave study and the flow study on both sectors."""
    rng = np.random.default_rng(seed)
    report = _report("broken_product", seed, coupling="trivial flat connection (decoupled)")

    # wave study: both sectors carry the null plane wave; the su2 one along a single generator
    base = wave_chart()
    wave = default_wave(base.lengths[0])
    sweeps = {"su2": Sweep("su2_wave_residual"), "u1": Sweep("u1_wave_residual")}
    lv = _Levels(base, levels)
    bianchi = 0.0
    for c in lv.charts:
        A_1 = wave.sample(c)
        A_N = FormField(c, 1, np.concatenate([np.zeros_like(A_1.data)] * 2 + [A_1.data], axis=1), SU2)
        joint = broken_product_residuals(A_N, A_1)
        for key, name, fieldres in (("su2", "su2_ym_residual", ym_residual(A_N)),
                                    ("u1", "u1_maxwell_residual", maxwell_residual(curvature(A_1)))):
            if joint[name]["Linf"] != fieldres.norm_inf():
                raise AssertionError("joint report disagrees with the sector residual")
            sweeps[key].append(c.spacings[0], _sup_on(fieldres.data, lv.sites(c, fieldres.margin)))
        bianchi = max(bianchi, bianchi_residual(A_N).norm_inf(), bianchi_residual(A_1).norm_inf())
    for sw in sweeps.values():
        sw.record(report)
    report.add("wave_bianchi", bianchi, bianchi, 1e-12)

    # flow study
    chart = LatticeChart.uniform(3, 8, 1.0)
    A_N = SmoothForm.random(rng, chart, 1, SU2, amplitude=0.1, zero_mean=True).sample(chart)
    A_1 = SmoothForm.random(rng, chart, 1, U1, amplitude=0.1, zero_mean=True).sample(chart)
    result = gradient_flow_solve(Theory.broken_product(chart), (A_N, A_1), params)
    joint = broken_product_residuals(*result.field, params.residual_tol, params.residual_tol)
    for row in joint.rows:
        report.rows.append({**row, "name": "flow." + row["name"]})
    report.add_check("flow.converged", float(result.converged), 1.0, 1.0)
    report.add_check("flow.monotone", float(result.monotone), 1.0, 1.0)
    report.metadata["flow_iterations"] = result.iterations
    return report


SUITES = {
    "calculus": calculus_suite,
    "gauge": gauge_suite,
    "utiyama": utiyama_suite,
    "wave": wave_suite,
    "equivalence": equivalence_suite,
    "coadjoint": coadjoint_suite,
    "noether": noether_suite,
    "bianchi": bianchi_suite,
    "reconstruct": reconstruct_suite,
}


def _sweep_wave_only(base, levels, rng, wave=None):
    return sweep_wave(base, levels, wave or default_wave(base.lengths[0]))[0]


def _sweep_noether_one(base, levels, rng, wave=None):
    wave = wave or default_wave(base.lengths[0])
    axes = tuple(i for i, k in enumerate(wave.wavevector) if k != 0.0) or None
    return sweep_noether(base, levels, wave, closed_generator(rng, base, axes=axes))


SWEEPS = {
    "wave": _sweep_wave_only,
    "u1_gauge": lambda base, levels, rng, wave=None: sweep_u1_gauge(base, levels, rng),
    "su2_covariance": lambda base, levels, rng, wave=None: sweep_su2_covariance(base, levels, rng),
    "utiyama": lambda base, levels, rng, wave=None: sweep_utiyama(base, levels, rng)[0],
    "noether": _sweep_noether_one,
    "bianchi": lambda base, levels, rng, wave=None: sweep_bianchi(base, levels, rng),
    "reconstruct": lambda base, levels, rng, wave=None: sweep_reconstruct(base, levels, rng)[0],
}


def run_sweep(name: str, base: LatticeChart, levels: int, seed=0, wave=None) -> Sweep:
    if name not in SWEEPS:
        raise ValueError(f"unknown sweep {name!r}; expected one of {sorted(SWEEPS)}")
    return SWEEPS[name](base, levels, np.random.default_rng(seed), wave=wave)
