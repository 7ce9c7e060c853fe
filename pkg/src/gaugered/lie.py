"""Lie algebra and matrix Lie group arithmetic for u(1) and su(2).

Algebra vectors are arrays whose *leading* axis holds the basis coordinates
(length ``m``); any trailing axes are broadcast, so a whole lattice of values
is handled in one call.  Group elements follow the same rule: U(1) elements
are angles with a leading axis of length 1, SU(2) elements are unit
quaternions ``(w, x, y, z)`` with a leading axis of length 4.

The su(2) basis is ``e_a = -i sigma_a / 2`` (equivalently half the unit
quaternions ``i, j, k``), so that ``[e_1, e_2] = e_3`` and the structure
constants are the Levi-Civita symbol.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

__all__ = [
    "LieAlgebra",
    "U1",
    "SU2",
    "algebra_by_name",
    "bracket",
    "exp",
    "log",
    "adjoint",
    "coadjoint",
    "invariant_form",
    "group_mul",
    "group_inv",
    "group_identity",
    "to_matrix",
    "qmul",
    "qconj",
]


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    """Finite-dimensional real Lie algebra with a fixed basis.

    ``structure[a, b, c]`` is the constant ``c^c_{ab}`` in
    ``[e_a, e_b] = c^c_{ab} e_c``; ``form`` is the symmetric Ad-invariant
    bilinear form used to contract algebra indices.
    """

    name: str
    structure: np.ndarray
    form: np.ndarray
    group_dim: int = field(default=1)

    @property
    def m(self) -> int:
        return self.structure.shape[0]

    @property
    def abelian(self) -> bool:
        return not np.any(self.structure)

    def basis(self, a: int) -> np.ndarray:
        e = np.zeros(self.m)
        e[a] = 1.0
        return e

    def killing(self) -> np.ndarray:
        """Killing form ``B_ab = tr(ad_a ad_b)`` computed from the structure constants."""
        ad = np.einsum("abc->acb", self.structure)  # ad[a][c, b] = c^c_{ab}
        return np.einsum("aij,bji->ab", ad, ad)

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and other.name == self.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"LieAlgebra({self.name!r})"


def _levi_civita() -> np.ndarray:
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


# u(1): Killing form vanishes, so the identity is used as the invariant form.
U1 = LieAlgebra("u1", np.zeros((1, 1, 1)), np.eye(1), group_dim=1)

# su(2): Killing form is -2 * identity in this basis; normalised to +identity.
SU2 = LieAlgebra("su2", _levi_civita(), np.eye(3), group_dim=4)

_ALGEBRAS = {"u1": U1, "su2": SU2}


def algebra_by_name(name: str) -> LieAlgebra:
    try:
        return _ALGEBRAS[name.lower()]
    except KeyError:
        raise ValueError(f"unknown algebra {name!r}; expected one of {sorted(_ALGEBRAS)}") from None


def _check(alg: LieAlgebra, *vecs):
    for v in vecs:
        if np.shape(v)[0] != alg.m:
            raise ValueError(f"{alg.name} vectors need leading axis {alg.m}, got shape {np.shape(v)}")


def bracket(alg: LieAlgebra, xi, eta) -> np.ndarray:
    """``[xi, eta]^c = c^c_{ab} xi^a eta^b``."""
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    _check(alg, xi, eta)
    if alg.abelian:
        return np.zeros(np.broadcast_shapes(xi.shape, eta.shape))
    if alg is SU2:
        return np.cross(xi, eta, axis=0)
    return np.einsum("abc,a...,b...->c...", alg.structure, xi, eta)


def coadjoint(alg: LieAlgebra, xi, mu) -> np.ndarray:
    """``ad*_xi mu`` with ``<ad*_xi mu, eta> = -<mu, [xi, eta]>``."""
    xi = np.asarray(xi, dtype=float)
    mu = np.asarray(mu, dtype=float)
    _check(alg, xi, mu)
    return -np.einsum("abc,a...,c...->b...", alg.structure, xi, mu)


def invariant_form(alg: LieAlgebra, xi, eta) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    eta = np.asarray(eta, dtype=float)
    _check(alg, xi, eta)
    return np.einsum("ab,a...,b...->...", alg.form, xi, eta)


# -- quaternions -------------------------------------------------------------

def qmul(p, q) -> np.ndarray:
    pw, px, py, pz = p
    qw, qx, qy, qz = q
    return np.stack(
        [
            pw * qw - px * qx - py * qy - pz * qz,
            pw * qx + px * qw + py * qz - pz * qy,
            pw * qy - px * qz + py * qw + pz * qx,
            pw * qz + px * qy - py * qx + pz * qw,
        ]
    )


def qconj(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return np.concatenate([q[:1], -q[1:]])


def _renormalize(q):
    return q / np.sqrt(np.sum(q * q, axis=0))


# -- group ---------------------------------------------------------------------

def group_identity(alg: LieAlgebra, shape=()) -> np.ndarray:
    g = np.zeros((alg.group_dim,) + tuple(shape))
    if alg is SU2:
        g[0] = 1.0
    return g


def exp(alg: LieAlgebra, xi) -> np.ndarray:
    """Exponential map.

    For U(1) the returned angle is *not* reduced; callers that need a
    canonical representative use ``np.mod(angle, 2 pi)``.
    """
    xi = np.asarray(xi, dtype=float)
    _check(alg, xi)
    if alg is U1:
        return xi.copy()
    theta = np.sqrt(np.sum(xi * xi, axis=0))
    # sin(theta/2)/theta, finite at theta = 0
    s = 0.5 * np.sinc(theta / (2.0 * np.pi))
    return np.concatenate([np.cos(theta / 2.0)[None], s * xi])


def log(alg: LieAlgebra, g) -> np.ndarray:
    """Principal logarithm (angle in (-pi, pi] for U(1), rotation angle <= 2 pi for SU(2))."""
    g = np.asarray(g, dtype=float)
    if alg is U1:
        return np.angle(np.exp(1j * g))
    w = np.clip(g[0], -1.0, 1.0)
    v = g[1:]
    vn = np.sqrt(np.sum(v * v, axis=0))
    theta = 2.0 * np.arctan2(vn, w)
    with np.errstate(invalid="ignore", divide="ignore"):
        scale = np.where(vn > 1e-300, theta / np.where(vn > 0, vn, 1.0), 2.0)
    return scale * v


def group_mul(alg: LieAlgebra, g, h) -> np.ndarray:
    if alg is U1:
        return np.asarray(g, dtype=float) + np.asarray(h, dtype=float)
    return _renormalize(qmul(g, h))


def group_inv(alg: LieAlgebra, g) -> np.ndarray:
    if alg is U1:
        return -np.asarray(g, dtype=float)
    return qconj(g)


def adjoint(alg: LieAlgebra, g, xi) -> np.ndarray:
    """``Ad_g xi = g xi g^{-1}`` in basis coordinates."""
    xi = np.asarray(xi, dtype=float)
    _check(alg, xi)
    if alg is U1:
        return np.broadcast_to(xi, np.broadcast_shapes(xi.shape, np.shape(g))).copy()
    g = np.asarray(g, dtype=float)
    w, u = g[0], g[1:]
    t = 2.0 * np.cross(u, xi, axis=0)
    return xi + w * t + np.cross(u, t, axis=0)


@lru_cache(maxsize=None)
def _pauli():
    return np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )


def to_matrix(alg: LieAlgebra, g) -> np.ndarray:
    """Defining representation: ``exp(i angle)`` for U(1), a 2x2 unitary for SU(2).

    Matrices occupy the trailing two axes.
    """
    g = np.asarray(g, dtype=float)
    if alg is U1:
        return np.exp(1j * g[0])[..., None, None]
    sig = _pauli()
    eye = np.eye(2)
    return (
        np.moveaxis(g[0][None, None], (0, 1), (-2, -1)) * eye
        - 1j * np.einsum("a...,aij->...ij", g[1:], sig)
    )


def algebra_matrix(alg: LieAlgebra, xi) -> np.ndarray:
    """Algebra element in the defining representation (``i xi`` or ``-i xi.sigma/2``)."""
    xi = np.asarray(xi, dtype=float)
    if alg is U1:
        return (1j * xi[0])[..., None, None]
    return -0.5j * np.einsum("a...,aij->...ij", xi, _pauli())
