"""Quadrature Radon transform on the unit disk and inner products.

This module is an independent numerical check of the singular value
decomposition used everywhere else: it integrates along chords directly
instead of using the closed-form singular values.

Grids
-----
* chord integrals: Gauss-Legendre in the chord parameter ``t``;
* radial integrals on the disk: Gauss-Legendre in ``r`` (weight ``r dr``);
* the ``u`` direction on the strip: Gauss-Legendre in ``tau`` with
  ``u = cos(tau)``, ``tau in (0, pi/2)``, which never touches ``u = 1`` and
  turns the ``sqrt(1 - u^2)`` weight into a smooth factor;
* angles: the uniform periodic rule, exact for trigonometric polynomials of
  degree below the number of nodes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .lattice import Index, phi_basis, psi_basis, singular_value

__all__ = [
    "QuadratureSpec",
    "radon_transform",
    "inner_product_S",
    "inner_product_H",
    "gram_matrix_H",
    "gram_matrix_S",
    "svd_residual",
    "observe_functional",
]


@dataclass(frozen=True)
class QuadratureSpec:
    n_radial: int = 32
    n_angular: int = 32
    n_line: int = 32

    def __post_init__(self):
        for name in ("n_radial", "n_angular", "n_line"):
            if getattr(self, name) < 8:
                raise ValueError(f"{name} must be at least 8")

    @classmethod
    def uniform(cls, n: int) -> "QuadratureSpec":
        return cls(n, n, n)


@lru_cache(maxsize=64)
def _gauss(n: int, lo: float, hi: float):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


@lru_cache(maxsize=64)
def _periodic(n: int):
    return 2.0 * math.pi * np.arange(n) / n, np.full(n, 2.0 * math.pi / n)


def _strip_nodes(n: int):
    """Nodes in ``u`` and weights for ``int_0^1 g(u) du`` via ``u = cos(tau)``."""
    tau, w = _gauss(n, 0.0, 0.5 * math.pi)
    return np.cos(tau), w * np.sin(tau)


def _polar(x, y):
    return np.hypot(x, y), np.mod(np.arctan2(y, x), 2.0 * math.pi)


def radon_transform(f, u, phi, q: QuadratureSpec = QuadratureSpec()):
    """``pi`` times the average of ``f(r, theta)`` over the chord at ``(u, phi)``.

    ``u`` and ``phi`` broadcast against each other.  ``f`` must accept arrays.
    """
    u = np.asarray(u, dtype=float)
    phi = np.asarray(phi, dtype=float)
    if np.any(u >= 1.0) or np.any(u < 0.0):
        raise ValueError("chord parameter u must lie in [0, 1)")
    u, phi = np.broadcast_arrays(u, phi)
    half = np.sqrt(1.0 - u * u)
    s, ws = _gauss(q.n_line, -1.0, 1.0)
    t = half[..., None] * s
    c, sn = np.cos(phi)[..., None], np.sin(phi)[..., None]
    x = u[..., None] * c - t * sn
    y = u[..., None] * sn + t * c
    vals = f(*_polar(x, y))
    # the chord length cancels against the 1/(2 half) prefactor
    return 0.5 * math.pi * (vals @ ws)


def _strip_grid(q: QuadratureSpec):
    u, wu = _strip_nodes(q.n_radial)
    phi, wphi = _periodic(q.n_angular)
    return u[:, None], phi[None, :], np.outer(wu, wphi)


def inner_product_S(g1, g2, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Inner product on the strip under ``mu0 = (2 sqrt(1-u^2)/pi) du dphi``."""
    u, phi, w = _strip_grid(q)
    mu0 = 2.0 * np.sqrt(1.0 - u * u) / math.pi
    return float(np.sum(w * mu0 * g1(u, phi) * g2(u, phi)))


def inner_product_H(f1, f2, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Lebesgue inner product on the unit disk in polar coordinates."""
    r, wr = _gauss(q.n_radial, 0.0, 1.0)
    theta, wt = _periodic(q.n_angular)
    w = np.outer(wr * r, wt)
    rr, tt = r[:, None], theta[None, :]
    return float(np.sum(w * f1(rr, tt) * f2(rr, tt)))


def _gram(values, w):
    flat = values.reshape(len(values), -1) * np.sqrt(w).ravel()
    return flat @ flat.T


def gram_matrix_H(indices, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    r, wr = _gauss(q.n_radial, 0.0, 1.0)
    theta, wt = _periodic(q.n_angular)
    w = np.outer(wr * r, wt)
    vals = np.stack([phi_basis(nu, r[:, None], theta[None, :]) for nu in indices])
    return _gram(vals, w)


def gram_matrix_S(indices, q: QuadratureSpec = QuadratureSpec()) -> np.ndarray:
    u, phi, w = _strip_grid(q)
    w = w * 2.0 * np.sqrt(1.0 - u * u) / math.pi
    vals = np.stack([psi_basis(nu, u, phi) for nu in indices])
    return _gram(vals, w)


def svd_residual(nu, q: QuadratureSpec = QuadratureSpec()) -> float:
    """Relative ``mu0``-norm of ``R phi_nu - b_nu psi_nu``, divided by ``b_nu``."""
    nu = Index(*nu)
    u, phi, w = _strip_grid(q)
    u, phi = np.broadcast_arrays(u, phi)
    b = singular_value(nu)
    image = radon_transform(lambda r, th: phi_basis(nu, r, th), u, phi, q)
    diff = image - b * psi_basis(nu, u, phi)
    mu0 = 2.0 * np.sqrt(1.0 - u * u) / math.pi
    return float(np.sqrt(np.sum(w * mu0 * diff * diff)) / b)


def observe_functional(f, g, eps: float, seed: int, q: QuadratureSpec = QuadratureSpec()) -> float:
    """One noisy observation of ``int g R f du dphi`` in the white-noise model.

    The noise is centred Gaussian with variance ``eps^2 int g^2 du dphi``.
    """
    if not eps > 0:
        raise ValueError("noise level must be positive")
    u, phi, w = _strip_grid(q)
    u, phi = np.broadcast_arrays(u, phi)
    gv = g(u, phi)
    signal = float(np.sum(w * gv * radon_transform(f, u, phi, q)))
    scale = eps * math.sqrt(float(np.sum(w * gv * gv)))
    return signal + scale * float(np.random.default_rng(seed).standard_normal())
