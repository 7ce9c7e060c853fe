"""Rectangular lattice charts and discrete exterior calculus on them.

A :class:`FormField` stores a Lie-algebra-valued ``k``-form as an array of
shape ``(C(dim, k), m, *sizes)``: one slot per strictly increasing
multi-index (lexicographic order), then the algebra coordinate, then the
sites.  Derivatives are central differences built from commuting shift
stencils, which makes ``d o d = 0`` hold to roundoff.

On clamped charts a derivative cannot be evaluated on the outermost layer of
sites.  Every field carries a ``margin``: the number of boundary layers (on
every axis) that hold no valid data.  Operators propagate it and zero the
invalid layers; norms and inner products only see the valid interior.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, prod
from typing import Sequence

import numpy as np

from .lie import U1, LieAlgebra

__all__ = [
    "MetricSignature",
    "LatticeChart",
    "FormField",
    "multi_indices",
    "permutation_sign",
    "partial_derivative",
    "exterior_derivative",
    "wedge",
    "shuffle_product",
    "hodge_star",
    "star_inverse",
    "codifferential",
    "inner_product",
    "pointwise_pairing",
]

PERIODIC = "periodic"
CLAMPED = "clamped"


@dataclass(frozen=True)
class MetricSignature:
    """Diagonal constant metric with unit-magnitude entries."""

    diag: tuple[int, ...]

    def __post_init__(self):
        diag = tuple(int(s) for s in self.diag)
        if any(s not in (1, -1) for s in diag):
            raise ValueError(f"signature entries must be +1 or -1, got {self.diag}")
        object.__setattr__(self, "diag", diag)

    @classmethod
    def parse(cls, text: str) -> "MetricSignature":
        """Build from a string such as ``"-+++"``."""
        table = {"+": 1, "-": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError:
            raise ValueError(f"bad signature string {text!r}") from None

    @classmethod
    def euclidean(cls, dim: int) -> "MetricSignature":
        return cls((1,) * dim)

    @classmethod
    def lorentzian(cls, dim: int) -> "MetricSignature":
        return cls((-1,) + (1,) * (dim - 1))

    @property
    def parity(self) -> int:
        return prod(self.diag)

    @property
    def euclidean_like(self) -> bool:
        return all(s == 1 for s in self.diag)

    def weight(self, axes: Sequence[int]) -> int:
        """``prod g^{mu mu}`` over the given axes."""
        return prod(self.diag[a] for a in axes)

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.diag)


@dataclass(frozen=True)
class LatticeChart:
    sizes: tuple[int, ...]
    spacings: tuple[float, ...]
    boundary: str = PERIODIC
    signature: MetricSignature | None = None

    def __post_init__(self):
        sizes = tuple(int(n) for n in self.sizes)
        spacings = tuple(float(h) for h in self.spacings)
        if len(sizes) not in (2, 3, 4):
            raise ValueError(f"chart dimension must be 2, 3 or 4, got {len(sizes)}")
        if len(spacings) != len(sizes):
            raise ValueError("one spacing per axis is required")
        if any(n < 4 for n in sizes):
            raise ValueError(f"every axis needs at least 4 points, got {sizes}")
        if any(not h > 0 for h in spacings):
            raise ValueError(f"spacings must be positive, got {spacings}")
        if self.boundary not in (PERIODIC, CLAMPED):
            raise ValueError(f"boundary must be 'periodic' or 'clamped', got {self.boundary!r}")
        sig = self.signature
        if sig is None:
            sig = MetricSignature.euclidean(len(sizes))
        elif isinstance(sig, str):
            sig = MetricSignature.parse(sig)
        if len(sig.diag) != len(sizes):
            raise ValueError("signature length must equal the chart dimension")
        object.__setattr__(self, "sizes", sizes)
        object.__setattr__(self, "spacings", spacings)
        object.__setattr__(self, "signature", sig)

    @classmethod
    def uniform(cls, dim, n, length=1.0, boundary=PERIODIC, signature=None):
        """``n`` points per axis covering ``length`` (period for periodic, extent for clamped)."""
        h = length / n if boundary == PERIODIC else length / (n - 1)
        return cls((n,) * dim, (h,) * dim, boundary, signature)

    @property
    def dim(self) -> int:
        return len(self.sizes)

    @property
    def periodic(self) -> bool:
        return self.boundary == PERIODIC

    @property
    def cell_volume(self) -> float:
        return float(prod(self.spacings))

    @property
    def lengths(self) -> tuple[float, ...]:
        """Period (periodic) or extent (clamped) per axis."""
        if self.periodic:
            return tuple(n * h for n, h in zip(self.sizes, self.spacings))
        return tuple((n - 1) * h for n, h in zip(self.sizes, self.spacings))

    def coordinates(self) -> list[np.ndarray]:
        """Broadcastable coordinate arrays, one per axis."""
        out = []
        for a, (n, h) in enumerate(zip(self.sizes, self.spacings)):
            shape = [1] * self.dim
            shape[a] = n
            out.append((np.arange(n) * h).reshape(shape))
        return out

    def mesh(self) -> list[np.ndarray]:
        return [np.broadcast_to(c, self.sizes) for c in self.coordinates()]

    def refined(self, factor: int = 2) -> "LatticeChart":
        """Same physical domain with spacing divided by ``factor``."""
        if self.periodic:
            sizes = tuple(n * factor for n in self.sizes)
        else:
            sizes = tuple((n - 1) * factor + 1 for n in self.sizes)
        spacings = tuple(h / factor for h in self.spacings)
        return LatticeChart(sizes, spacings, self.boundary, self.signature)

    def interior(self, margin: int) -> tuple[slice, ...]:
        if not self.periodic:
            margin = max(margin, 0)
        else:
            margin = 0
        return tuple(slice(margin, n - margin) for n in self.sizes)

    def interior_count(self, margin: int) -> int:
        return prod(max(s.stop - s.start, 0) for s in self.interior(margin))

    def metadata(self) -> dict:
        return {
            "dim": self.dim,
            "sizes": ",".join(map(str, self.sizes)),
            "spacings": ",".join(repr(h) for h in self.spacings),
            "boundary": self.boundary,
            "signature": str(self.signature),
        }


@lru_cache(maxsize=None)
def multi_indices(dim: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Strictly increasing multi-indices of length ``k`` in lexicographic order."""
    if k < 0 or k > dim:
        return ()
    return tuple(itertools.combinations(range(dim), k))


@lru_cache(maxsize=None)
def _index_of(dim: int, k: int) -> dict:
    return {I: n for n, I in enumerate(multi_indices(dim, k))}


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq`` (0 if it has repeats)."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class FormField:
    """Lie-algebra-valued ``k``-form sampled at lattice sites."""

    __slots__ = ("chart", "degree", "algebra", "data", "margin")

    def __init__(self, chart: LatticeChart, degree: int, data, algebra: LieAlgebra = U1, margin: int = 0):
        data = np.asarray(data, dtype=float)
        ncomp = comb(chart.dim, degree) if 0 <= degree <= chart.dim else 0
        expected = (ncomp, algebra.m) + chart.sizes
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        if data.shape != expected:
            raise ValueError(f"form data must have shape {expected}, got {data.shape}")
        self.chart = chart
        self.degree = degree
        self.algebra = algebra
        self.data = data
        self.margin = int(margin) if not chart.periodic else 0

    @classmethod
    def zeros(cls, chart, degree, algebra=U1, margin=0):
        ncomp = comb(chart.dim, degree) if degree <= chart.dim else 0
        return cls(chart, degree, np.zeros((ncomp, algebra.m) + chart.sizes), algebra, margin)

    @classmethod
    def from_components(cls, chart, degree, components: dict, algebra=U1):
        """Build from ``{multi_index: array}``; arrays are scalar fields (m=1) or ``(m, *sizes)``.

        Unsorted multi-indices are accepted and reordered with the permutation sign.
        """
        out = cls.zeros(chart, degree, algebra)
        lookup = _index_of(chart.dim, degree)
        for axes, value in components.items():
            axes = tuple(axes)
            sign = permutation_sign(axes)
            if sign == 0:
                continue
            value = np.asarray(value, dtype=float)
            if value.shape == chart.sizes or value.ndim == 0:
                if algebra.m != 1:
                    raise ValueError("scalar components need a 1-dimensional algebra")
                value = value[None]
            out.data[lookup[tuple(sorted(axes))]] += sign * np.broadcast_to(value, (algebra.m,) + chart.sizes)
        return out

    @property
    def dim(self) -> int:
        return self.chart.dim

    @property
    def indices(self):
        return multi_indices(self.chart.dim, self.degree)

    @property
    def degenerate(self) -> bool:
        """True when the form space is zero (degree above the chart dimension)."""
        return self.data.shape[0] == 0

    def component(self, axes) -> np.ndarray:
        """Coefficient array ``(m, *sizes)`` for a multi-index (any order, sign applied)."""
        axes = tuple(axes)
        sign = permutation_sign(axes)
        if sign == 0:
            return np.zeros((self.algebra.m,) + self.chart.sizes)
        return sign * self.data[_index_of(self.dim, self.degree)[tuple(sorted(axes))]]

    def interior_data(self) -> np.ndarray:
        return self.data[(slice(None), slice(None)) + self.chart.interior(self.margin)]

    def norm_inf(self) -> float:
        d = self.interior_data()
        return float(np.max(np.abs(d))) if d.size else 0.0

    def norm_l2(self) -> float:
        d = self.interior_data()
        return float(np.sqrt(np.sum(d * d) * self.chart.cell_volume))

    def copy(self) -> "FormField":
        return FormField(self.chart, self.degree, self.data.copy(), self.algebra, self.margin)

    def with_data(self, data, margin=None) -> "FormField":
        return FormField(self.chart, self.degree, data, self.algebra, self.margin if margin is None else margin)

    def _compatible(self, other: "FormField"):
        if not isinstance(other, FormField):
            return NotImplemented
        if other.chart != self.chart or other.degree != self.degree or other.algebra != self.algebra:
            raise ValueError("forms differ in chart, degree or algebra")
        return max(self.margin, other.margin)

    def __add__(self, other):
        margin = self._compatible(other)
        if margin is NotImplemented:
            return NotImplemented
        return self.with_data(self.data + other.data, margin)

    def __sub__(self, other):
        margin = self._compatible(other)
        if margin is NotImplemented:
            return NotImplemented
        return self.with_data(self.data - other.data, margin)

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return self.with_data(self.data * c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        return self * (1.0 / c)

    def __neg__(self):
        return self.with_data(-self.data)

    def __repr__(self):
        return (
            f"FormField(degree={self.degree}, algebra={self.algebra.name}, "
            f"sizes={self.chart.sizes}, margin={self.margin})"
        )


def _mask(data: np.ndarray, chart: LatticeChart, margin: int, lead: int = 2) -> np.ndarray:
    """Zero the invalid outer layers of a clamped field in place."""
    if chart.periodic or margin <= 0:
        return data
    for a, n in enumerate(chart.sizes):
        idx = [slice(None)] * data.ndim
        idx[lead + a] = slice(0, min(margin, n))
        data[tuple(idx)] = 0.0
        idx[lead + a] = slice(max(n - margin, 0), n)
        data[tuple(idx)] = 0.0
    return data


def _diff(arr: np.ndarray, axis: int, h: float, periodic: bool) -> np.ndarray:
    """Central difference of ``arr`` along array axis ``axis``."""
    if periodic:
        return (np.roll(arr, -1, axis) - np.roll(arr, 1, axis)) * (0.5 / h)
    n = arr.shape[axis]
    if n < 3:
        raise ValueError("clamped axis needs at least 3 points for a central difference")
    out = np.zeros_like(arr)
    hi = [slice(None)] * arr.ndim
    lo = [slice(None)] * arr.ndim
    mid = [slice(None)] * arr.ndim
    hi[axis], lo[axis], mid[axis] = slice(2, None), slice(None, -2), slice(1, -1)
    out[tuple(mid)] = (arr[tuple(hi)] - arr[tuple(lo)]) * (0.5 / h)
    return out


def partial_derivative(f: FormField, axis: int) -> FormField:
    """Central difference of every coefficient along one axis."""
    if not 0 <= axis < f.dim:
        raise ValueError(f"axis {axis} out of range for a {f.dim}-dimensional chart")
    chart = f.chart
    data = _diff(f.data, 2 + axis, chart.spacings[axis], chart.periodic)
    margin = f.margin + (0 if chart.periodic else 1)
    return f.with_data(_mask(data, chart, margin), margin)


@lru_cache(maxsize=None)
def _d_table(dim: int, k: int):
    """``(target, source, axis, sign)`` rows for ``d`` on ``k``-forms."""
    rows = []
    src = _index_of(dim, k)
    for t, J in enumerate(multi_indices(dim, k + 1)):
        for i, mu in enumerate(J):
            rows.append((t, src[J[:i] + J[i + 1:]], mu, (-1) ** i))
    return tuple(rows)


def exterior_derivative(w: FormField) -> FormField:
    """``(dw)_{mu_0..mu_k} = sum_i (-1)^i d_{mu_i} w_{..hat mu_i..}``.

    Applied to a form of top degree this returns the (degenerate) zero form
    of degree ``dim + 1``.
    """
    chart = w.chart
    k = w.degree
    margin = w.margin + (0 if chart.periodic else 1)
    out = FormField.zeros(chart, k + 1, w.algebra, margin)
    if out.degenerate:
        return out
    cache = {}
    for t, s, mu, sign in _d_table(chart.dim, k):
        key = (s, mu)
        if key not in cache:
            cache[key] = _diff(w.data[s], 1 + mu, chart.spacings[mu], chart.periodic)
        out.data[t] += sign * cache[key]
    _mask(out.data, chart, margin)
    return out


@lru_cache(maxsize=None)
def _shuffle_table(dim: int, k: int, l: int):
    """``(target, left, right, sign)`` rows for the shuffle product of a k- and an l-form."""
    rows = []
    left = _index_of(dim, k)
    right = _index_of(dim, l)
    for t, I in enumerate(multi_indices(dim, k + l)):
        for J in itertools.combinations(I, k):
            K = tuple(a for a in I if a not in J)
            rows.append((t, left[J], right[K], permutation_sign(J + K)))
    return tuple(rows)


def shuffle_product(alpha: FormField, beta: FormField, pair, algebra: LieAlgebra) -> FormField:
    """``(alpha ^ beta)_I = sum_{J u K = I} sign(J, K) pair(alpha_J, beta_K)``.

    ``pair`` maps two ``(m, *sizes)`` coefficient arrays to one; ``algebra`` is
    the algebra of the result.
    """
    if alpha.chart != beta.chart:
        raise ValueError("forms live on different charts")
    chart = alpha.chart
    k, l = alpha.degree, beta.degree
    if k + l > chart.dim:
        raise ValueError(f"degree overflow: {k} + {l} > {chart.dim}")
    margin = max(alpha.margin, beta.margin)
    out = FormField.zeros(chart, k + l, algebra, margin)
    for t, j, s, sign in _shuffle_table(chart.dim, k, l):
        out.data[t] += sign * pair(alpha.data[j], beta.data[s])
    return out


def wedge(alpha: FormField, beta: FormField) -> FormField:
    """Wedge product of scalar-valued (u1) forms."""
    if alpha.algebra.m != 1 or beta.algebra.m != 1:
        raise ValueError("wedge is defined for scalar-valued forms; use bracket_wedge for algebra values")
    return shuffle_product(alpha, beta, np.multiply, alpha.algebra)


@lru_cache(maxsize=None)
def _star_table(diag: tuple, k: int):
    dim = len(diag)
    target = _index_of(dim, dim - k)
    rows = []
    for s, I in enumerate(multi_indices(dim, k)):
        Ic = tuple(a for a in range(dim) if a not in I)
        coef = permutation_sign(I + Ic) * prod(diag[a] for a in I)
        rows.append((target[Ic], s, coef))
    return tuple(rows)


def hodge_star(w: FormField) -> FormField:
    """``(*w)_{I^c} = sign(I, I^c) g^{II} w_I`` for the chart's diagonal metric."""
    chart = w.chart
    if w.degree > chart.dim:
        raise ValueError("degree exceeds chart dimension")
    out = FormField.zeros(chart, chart.dim - w.degree, w.algebra, w.margin)
    for t, s, coef in _star_table(chart.signature.diag, w.degree):
        out.data[t] = coef * w.data[s]
    return out


def star_inverse(w: FormField) -> FormField:
    """Inverse of :func:`hodge_star`: ``(-1)^{k(n-k)} eps(g) *`` on ``k``-forms."""
    n, k = w.dim, w.degree
    return hodge_star(w) * float((-1) ** (k * (n - k)) * w.chart.signature.parity)


@lru_cache(maxsize=None)
def _codiff_table(diag: tuple, k: int):
    """Rows ``(target, source, axis, coef)`` for the codifferential on ``k``-forms."""
    dim = len(diag)
    src = _index_of(dim, k)
    rows = []
    for t, I in enumerate(multi_indices(dim, k - 1)):
        for mu in range(dim):
            if mu in I:
                continue
            J = tuple(sorted(I + (mu,)))
            rows.append((t, src[J], mu, -permutation_sign((mu,) + I) * diag[mu]))
    return tuple(rows)


def codifferential(w: FormField) -> FormField:
    """Metric adjoint of :func:`exterior_derivative`.

    ``(delta w)_I = -sum_{mu not in I} sign(mu, I) g^{mu mu} d_mu w_{mu I}``;
    on periodic charts ``<d a, b> = <a, delta b>`` holds to roundoff.
    """
    if w.degree < 1:
        raise ValueError("codifferential needs degree >= 1")
    chart = w.chart
    margin = w.margin + (0 if chart.periodic else 1)
    out = FormField.zeros(chart, w.degree - 1, w.algebra, margin)
    for t, s, mu, coef in _codiff_table(chart.signature.diag, w.degree):
        out.data[t] += coef * _diff(w.data[s], 1 + mu, chart.spacings[mu], chart.periodic)
    _mask(out.data, chart, margin)
    return out


@lru_cache(maxsize=None)
def _weights(diag: tuple, k: int) -> np.ndarray:
    return np.array([prod(diag[a] for a in I) for I in multi_indices(len(diag), k)], dtype=float)


def pointwise_pairing(alpha: FormField, beta: FormField) -> np.ndarray:
    """Site-wise ``sum_I g^{II} K(alpha_I, beta_I)`` as a ``sizes``-shaped array."""
    if alpha.chart != beta.chart or alpha.degree != beta.degree or alpha.algebra != beta.algebra:
        raise ValueError("forms differ in chart, degree or algebra")
    w = _weights(alpha.chart.signature.diag, alpha.degree)
    K = alpha.algebra.form
    return np.einsum("i,ab,ia...,ib...->...", w, K, alpha.data, beta.data)


def inner_product(alpha: FormField, beta: FormField) -> float:
    """Discrete metric inner product summed over the valid interior."""
    margin = max(alpha.margin, beta.margin)
    dens = pointwise_pairing(alpha, beta)[alpha.chart.interior(margin)]
    return float(np.sum(dens) * alpha.chart.cell_volume)
