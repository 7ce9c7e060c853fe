"""Continuum test fields that can be sampled on any chart.

Refinement studies need the *same* smooth field on several lattices, so the
random fields here are defined by Fourier coefficients over the physical
domain and only sampled when a chart is supplied.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from .lattice import FormField, LatticeChart
from .lie import U1, LieAlgebra

__all__ = ["SmoothForm", "PlaneWave", "random_form"]


@dataclass(frozen=True)
class SmoothForm:
    """Trigonometric polynomial ``sum_n a_n cos(2 pi n.x / L) + b_n sin(2 pi n.x / L)``.

    ``cos_coef`` and ``sin_coef`` have shape ``(nmodes, ncomp, m)``; ``modes``
    has shape ``(nmodes, dim)`` of integer wave numbers.  ``lengths`` fixes the
    physical period used for every chart the field is sampled on.
    """

    degree: int
    algebra: LieAlgebra
    modes: np.ndarray
    cos_coef: np.ndarray
    sin_coef: np.ndarray
    lengths: tuple[float, ...]

    @classmethod
    def random(cls, rng, chart: LatticeChart, degree: int, algebra: LieAlgebra = U1,
               amplitude: float = 1.0, cutoff: int = 1, axes=None, periods=None,
               zero_mean: bool = False) -> "SmoothForm":
        """Random coefficients for all wave numbers with ``|n_mu| <= cutoff``.

        ``periods`` defaults to the chart lengths (required for periodic
        charts); on clamped charts a longer period gives fields that vary
        slowly across the domain.  ``axes`` restricts the dependence to a
        subset of axes.  ``zero_mean`` drops the constant mode.
        """
        dim = chart.dim
        axes = tuple(range(dim)) if axes is None else tuple(axes)
        ranges = [range(-cutoff, cutoff + 1) if a in axes else range(1) for a in range(dim)]
        modes = np.array(list(itertools.product(*ranges)), dtype=float)
        if zero_mean:
            modes = modes[np.any(modes != 0, axis=1)]
            if not len(modes):
                raise ValueError("zero_mean leaves no modes; raise the cutoff or widen the axes")
        ncomp = comb(dim, degree)
        scale = amplitude / np.sqrt(len(modes))
        shape = (len(modes), ncomp, algebra.m)
        cos_coef = rng.standard_normal(shape) * scale
        sin_coef = rng.standard_normal(shape) * scale
        periods = chart.lengths if periods is None else tuple(float(p) for p in periods)
        return cls(degree, algebra, modes, cos_coef, sin_coef, periods)

    def sample(self, chart: LatticeChart) -> FormField:
        x = chart.coordinates()
        out = np.zeros((comb(chart.dim, self.degree), self.algebra.m) + chart.sizes)
        for n, a, b in zip(self.modes, self.cos_coef, self.sin_coef):
            phase = sum(2.0 * np.pi * n[mu] * x[mu] / self.lengths[mu] for mu in range(chart.dim))
            phase = np.broadcast_to(phase, chart.sizes)
            c, s = np.cos(phase), np.sin(phase)
            tail = (1,) * chart.dim
            out += a.reshape(a.shape + tail) * c + b.reshape(b.shape + tail) * s
        return FormField(chart, self.degree, out, self.algebra)

    def derivative(self, axis: int) -> "SmoothForm":
        """Exact partial derivative of the trigonometric polynomial."""
        k = 2.0 * np.pi * self.modes[:, axis] / self.lengths[axis]
        return SmoothForm(self.degree, self.algebra, self.modes,
                          k[:, None, None] * self.sin_coef, -k[:, None, None] * self.cos_coef, self.lengths)


def random_form(rng, chart, degree, algebra=U1, scale=1.0) -> FormField:
    """Independent Gaussian coefficients at every site (not smooth)."""
    n = comb(chart.dim, degree)
    return FormField(chart, degree, scale * rng.standard_normal((n, algebra.m) + chart.sizes), algebra)


@dataclass(frozen=True)
class PlaneWave:
    """Abelian plane wave ``A = amplitude * eps sin(k.x)`` with covector polarization ``eps``.

    ``wavevector`` holds the covector components ``k_mu``.
    """

    wavevector: tuple[float, ...]
    polarization: tuple[float, ...]
    amplitude: float = 1.0

    def constraints(self, signature) -> dict:
        """Metric contractions ``g(k, eps)`` and ``g(k, k)`` (zero for a vacuum solution)."""
        g = np.array(signature.diag, dtype=float)
        k = np.asarray(self.wavevector, dtype=float)
        e = np.asarray(self.polarization, dtype=float)
        return {"k_dot_eps": float(np.sum(g * k * e)), "k_dot_k": float(np.sum(g * k * k))}

    def sample(self, chart: LatticeChart) -> FormField:
        x = chart.coordinates()
        phase = np.broadcast_to(sum(k * xm for k, xm in zip(self.wavevector, x)), chart.sizes)
        comps = {(mu,): self.amplitude * e * np.sin(phase)
                 for mu, e in enumerate(self.polarization) if e != 0.0}
        return FormField.from_components(chart, 1, comps)
