"""Recovering a connection from its curvature, loop holonomy and flatness."""
from __future__ import annotations

import itertools
import re
from math import ceil

import numpy as np
from scipy.ndimage import map_coordinates

from . import lie
from .gauge import curvature
from .lattice import FormField, exterior_derivative

__all__ = [
    "CompatibilityError",
    "poincare_reconstruct",
    "parse_loop",
    "holonomy",
    "flatness_residual",
    "axis_names",
]


class CompatibilityError(ValueError):
    """The 2-form handed to the reconstruction is not closed."""


def axis_names(dim: int) -> str:
    """Letters used in loop strings: ``txyz`` in four dimensions, ``xyz`` truncated otherwise."""
    return "txyz" if dim == 4 else "xyz"[:dim]


def _simpson_nodes(n_intervals: int):
    t = np.linspace(0.0, 1.0, n_intervals + 1)
    w = np.ones(n_intervals + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return t, w / (3.0 * n_intervals)


def _lagrange_sample(arr: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Tensor-product 4-point Lagrange interpolation at fractional indices ``pts`` (dim, N).

    Stencils shift inwards at the edges so that only in-range samples are used.
    """
    starts, weights = [], []
    for a, n in enumerate(arr.shape):
        i0 = np.clip(np.floor(pts[a]).astype(int) - 1, 0, n - 4)
        s = pts[a] - i0
        starts.append(i0)
        weights.append((-(s - 1) * (s - 2) * (s - 3) / 6, s * (s - 2) * (s - 3) / 2,
                        -s * (s - 1) * (s - 3) / 2, s * (s - 1) * (s - 2) / 6))
    out = np.zeros(pts.shape[1])
    for off in itertools.product(range(4), repeat=arr.ndim):
        w = weights[0][off[0]].copy()
        for a in range(1, arr.ndim):
            w *= weights[a][off[a]]
        out += w * arr[tuple(starts[a] + off[a] for a in range(arr.ndim))]
    return out


def _linear_sample(arr: np.ndarray, pts: np.ndarray) -> np.ndarray:
    return map_coordinates(arr, pts, order=1, mode="nearest")


_SAMPLERS = {"cubic": _lagrange_sample, "linear": _linear_sample}


def poincare_reconstruct(F: FormField, origin=None, compat_tol: float = 1e-9, check: bool = True,
                         interpolation: str = "cubic") -> FormField:
    """Connection ``A`` with ``dA = F`` from the radial homotopy formula.

    ``A_mu(x) = sum_nu (x - x0)^nu int_0^1 t F_{nu mu}(x0 + t (x - x0)) dt``,
    evaluated with composite Simpson along each ray.  The number of Simpson
    intervals is ``ceil(2 * longest ray / min spacing)`` rounded up to even,
    shared by all rays.  ``origin`` is a site index inside the valid region
    of ``F`` (default: its centre).

    Off-site samples use ``interpolation="cubic"`` (local 4-point Lagrange,
    second-order round trip) or ``"linear"`` (multilinear; its kinks cost
    half an order once the result is differenced).

    Only the valid region of ``F`` is used, so the result carries the same
    margin.  With ``check`` set, ``|dF|_inf > compat_tol`` raises
    :class:`CompatibilityError`.
    """
    if F.degree != 2:
        raise ValueError("reconstruction takes a 2-form")
    if not F.algebra.abelian:
        raise ValueError("reconstruction is implemented for Abelian curvature only")
    if interpolation not in _SAMPLERS:
        raise ValueError(f"interpolation must be one of {sorted(_SAMPLERS)}")
    sample = _SAMPLERS[interpolation]
    chart = F.chart
    if chart.periodic:
        raise ValueError("reconstruction needs a clamped (contractible) chart")
    if check:
        dF = exterior_derivative(F)
        resid = 0.0 if dF.degenerate else dF.norm_inf()
        if resid > compat_tol:
            raise CompatibilityError(
                f"compatibility condition violated: |dF|_inf = {resid:.3e} > {compat_tol:.1e}")

    box = chart.interior(F.margin)
    lo = np.array([s.start for s in box])
    hi = np.array([s.stop - 1 for s in box])
    if np.any(hi - lo < 3):
        raise ValueError("the curvature needs at least 4 valid sites per axis")
    if origin is None:
        origin = (lo + hi) // 2
    origin = np.asarray(origin, dtype=int)
    if origin.shape != (chart.dim,) or np.any(origin < lo) or np.any(origin > hi):
        raise ValueError(f"origin {tuple(origin)} lies outside the valid sites {tuple(lo)}..{tuple(hi)}")

    h = np.asarray(chart.spacings)
    grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
    idx = np.stack([g.ravel() for g in grids]).astype(float)
    rel = idx - origin[:, None]
    disp = rel * h[:, None]
    longest = float(np.max(np.sqrt(np.sum(disp * disp, axis=0))))
    n = max(2, ceil(2.0 * longest / float(h.min())))
    n += n % 2
    t, w = _simpson_nodes(n)

    dim = chart.dim
    # G[nu][mu] accumulates int t F_{nu mu} along the ray
    G = np.zeros((dim, dim, idx.shape[1]))
    comps = {(nu, mu): F.data[i, 0][box] for i, (nu, mu) in enumerate(F.indices)}
    for tj, wj in zip(t, w):
        if wj * tj == 0.0:
            continue
        pts = (origin - lo)[:, None] + tj * rel
        for (nu, mu), arr in comps.items():
            val = wj * tj * sample(arr, pts)
            G[nu, mu] += val
            G[mu, nu] -= val

    A = FormField.zeros(chart, 1, F.algebra, F.margin)
    values = np.einsum("nk,nmk->mk", disp, G)
    for mu in range(dim):
        A.data[mu, 0][box] = values[mu].reshape(grids[0].shape)
    return A


_STEP = re.compile(r"([+\-−])([a-z])")


def parse_loop(text: str, dim: int) -> list[tuple[int, int]]:
    """``"+x+y-x-y"`` to ``[(axis, +-1), ...]``; see :func:`axis_names`."""
    names = axis_names(dim)
    compact = "".join(text.split())
    steps = []
    pos = 0
    for m in _STEP.finditer(compact):
        if m.start() != pos:
            break
        sign, letter = m.groups()
        if letter not in names:
            raise ValueError(f"unknown axis {letter!r} in loop {text!r}; axes are {names!r}")
        steps.append((names.index(letter), 1 if sign == "+" else -1))
        pos = m.end()
    if pos != len(compact) or not steps:
        raise ValueError(f"malformed loop specification {text!r}")
    return steps


def holonomy(A: FormField, loop, origin=None) -> np.ndarray:
    """Ordered product of ``exp(-A_mu(midpoint) h_mu dir)`` along a closed lattice path.

    Each step multiplies on the left.  ``A`` at the link midpoint is the mean
    of its two end sites.  ``loop`` is a string or a list of ``(axis, dir)``.
    On periodic charts a path counts as closed when it returns to the same
    site after wrapping.  Returns a group element: a lifted angle ``(1,)``
    for u1 or a unit quaternion ``(4,)`` for su2.
    """
    if A.degree != 1:
        raise ValueError("holonomy needs a 1-form connection")
    chart = A.chart
    steps = parse_loop(loop, chart.dim) if isinstance(loop, str) else [(int(a), int(d)) for a, d in loop]
    sizes = np.array(chart.sizes)
    site = np.zeros(chart.dim, dtype=int) if origin is None else np.array(origin, dtype=int)
    if site.shape != (chart.dim,) or np.any(site < 0) or np.any(site >= sizes):
        raise ValueError(f"origin {origin} is not a site of the chart")
    start = site.copy()
    alg = A.algebra
    U = lie.group_identity(alg)
    for axis, direction in steps:
        if direction not in (1, -1) or not 0 <= axis < chart.dim:
            raise ValueError(f"invalid step {(axis, direction)}")
        nxt = site.copy()
        nxt[axis] += direction
        if chart.periodic:
            nxt %= sizes
        elif not 0 <= nxt[axis] < sizes[axis]:
            raise ValueError("loop leaves the clamped chart")
        a_mid = 0.5 * (A.data[axis][(slice(None),) + tuple(site)] + A.data[axis][(slice(None),) + tuple(nxt)])
        U = lie.group_mul(alg, lie.exp(alg, -a_mid * chart.spacings[axis] * direction), U)
        site = nxt
    if not np.array_equal(site, start):
        raise ValueError("loop is not closed")
    return U


def flatness_residual(A: FormField) -> float:
    """``|curvature(A)|_inf`` over the valid sites."""
    return curvature(A).norm_inf()
