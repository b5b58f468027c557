"""The index lattice with its coefficient sequences and SVD bases.

Lattice points are pairs ``(j, l)`` of nonnegative integers.  Functions that
take an index accept either an :class:`Index` or a pair of integer arrays
``(j, l)``; in the latter case they broadcast.

Two unit systems are supported through :class:`ModelParams`.  Physical units
carry the ``1/L`` and ``1/pi`` factors of the coefficient sequences, normalized
units drop them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import eval_jacobi

__all__ = [
    "Index",
    "ModelParams",
    "order_key",
    "sort_indices",
    "singular_value",
    "sigma",
    "sigma_sq",
    "ellipsoid_coeff",
    "zernike_radial",
    "chebyshev_u",
    "phi_basis",
    "psi_basis",
    "lattice_below",
    "indices_below",
    "indices_up_to_degree",
]


class Index(NamedTuple):
    j: int
    l: int

    @property
    def degree(self) -> int:
        return self.j + self.l


@dataclass(frozen=True)
class ModelParams:
    """Smoothness ``p`` and ellipsoid scale ``L`` in a chosen unit system."""

    p: float
    L: float = 1.0
    normalized: bool = False

    def __post_init__(self):
        if not self.p > 0:
            raise ValueError(f"smoothness p must be positive, got {self.p}")
        if not self.L > 0:
            raise ValueError(f"scale L must be positive, got {self.L}")

    def with_p(self, p: float) -> "ModelParams":
        return ModelParams(p=p, L=self.L, normalized=self.normalized)

    @property
    def a_min(self) -> float:
        """Smallest ellipsoid coefficient, attained at (0, 0)."""
        return 1.0 if self.normalized else 1.0 / self.L


def order_key(nu) -> tuple[int, int]:
    """Sort key of the deterministic lattice order: by ``j + l``, then ``j``."""
    j, l = nu
    return (j + l, j)


def sort_indices(j, l):
    """Return ``(j, l)`` arrays rearranged into the deterministic lattice order."""
    j = np.asarray(j, dtype=np.int64)
    l = np.asarray(l, dtype=np.int64)
    order = np.lexsort((j, j + l))
    return j[order], l[order]


def _split(nu):
    j, l = nu
    if np.ndim(j) == 0 and np.ndim(l) == 0:
        if j < 0 or l < 0:
            raise ValueError(f"index {nu} is outside the lattice quadrant")
        return j, l
    return np.asarray(j), np.asarray(l)


def singular_value(nu):
    """Radon singular value ``b = pi / sqrt(j + l + 1)``."""
    j, l = _split(nu)
    return math.pi / np.sqrt(j + l + 1.0)


def sigma(nu, params: ModelParams):
    """Inverse singular value; the ``1/pi`` factor is dropped in normalized units."""
    j, l = _split(nu)
    s = np.sqrt(j + l + 1.0)
    return s if params.normalized else s / math.pi


def sigma_sq(nu, params: ModelParams):
    """``sigma^2 = j + l + 1`` (over ``pi^2`` in physical units), without a square root."""
    j, l = _split(nu)
    s2 = j + l + 1.0
    return s2 if params.normalized else s2 / math.pi**2


def ellipsoid_coeff(nu, params: ModelParams):
    """``a = (j+1)^p (l+1)^p``, divided by ``L`` in physical units."""
    j, l = _split(nu)
    a = ((j + 1.0) * (l + 1.0)) ** params.p
    return a if params.normalized else a / params.L


def zernike_radial(a: int, b: int, r):
    """Zernike radial polynomial ``Z_a^b(r)`` normalized so that ``Z_a^a(r) = r^a``.

    Written as ``r^b P_k^{(0,b)}(2r^2 - 1)`` with ``k = (a-b)/2``, which gives
    ``int_0^1 Z_a^b(r)^2 r dr = 1/(2(a+1))``.
    """
    if b < 0 or b > a or (a - b) % 2:
        raise ValueError(f"invalid Zernike degree/order pair ({a}, {b})")
    r = np.asarray(r, dtype=float)
    k = (a - b) // 2
    return r**b * eval_jacobi(k, 0.0, float(b), 2.0 * r * r - 1.0)


def chebyshev_u(m: int, u):
    """Chebyshev polynomial of the second kind by the three-term recurrence."""
    if m < 0:
        raise ValueError("degree must be nonnegative")
    u = np.asarray(u, dtype=float)
    prev = np.ones_like(u)
    if m == 0:
        return prev
    cur = 2.0 * u
    for _ in range(m - 1):
        prev, cur = cur, 2.0 * u * cur - prev
    return cur


def _angular(j: int, l: int, angle):
    k = j - l
    if k > 0:
        return math.sqrt(2.0) * np.cos(k * angle)
    if k < 0:
        return math.sqrt(2.0) * np.sin(-k * angle)
    return np.ones_like(angle)


def phi_basis(nu, r, theta):
    """Real orthonormal basis of L2 on the unit disk (Lebesgue measure)."""
    j, l = nu
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    radial = math.sqrt((j + l + 1) / math.pi) * zernike_radial(j + l, abs(j - l), r)
    return radial * _angular(j, l, theta)


def psi_basis(nu, u, phi):
    """Real orthonormal basis of L2 on the line-parameter strip under ``mu0``."""
    j, l = nu
    u = np.asarray(u, dtype=float)
    phi = np.asarray(phi, dtype=float)
    return chebyshev_u(j + l, u) / math.sqrt(math.pi) * _angular(j, l, phi)


def lattice_below(n_max: int):
    """All ``(j, l)`` with ``(j+1)(l+1) <= n_max`` as sorted integer arrays."""
    n_max = int(n_max)
    if n_max < 1:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    m = np.arange(1, n_max + 1, dtype=np.int64)
    counts = n_max // m
    mm = np.repeat(m, counts)
    starts = np.cumsum(counts) - counts
    nn = np.arange(mm.size, dtype=np.int64) - np.repeat(starts, counts) + 1
    return sort_indices(mm - 1, nn - 1)


def _product_bound(c: float, params: ModelParams) -> int:
    # a <= c  <=>  (j+1)(l+1) <= (c L)^(1/p); the slack absorbs rounding at exact hits
    scale = c if params.normalized else c * params.L
    if scale < 1.0:
        return 0
    return int(math.floor(scale ** (1.0 / params.p) * (1.0 + 1e-12)))


def indices_below(c: float, params: ModelParams, as_arrays: bool = False):
    """All lattice points with ``a_nu <= c`` in the deterministic order."""
    if not c > 0:
        raise ValueError("threshold must be positive")
    j, l = lattice_below(_product_bound(c, params))
    if as_arrays:
        return j, l
    return [Index(int(a), int(b)) for a, b in zip(j, l)]


def indices_up_to_degree(max_degree: int) -> list[Index]:
    """All lattice points with ``j + l <= max_degree``, ordered."""
    out = [Index(j, d - j) for d in range(max_degree + 1) for j in range(d + 1)]
    return sorted(out, key=order_key)
