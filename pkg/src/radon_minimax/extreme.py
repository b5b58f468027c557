"""Extreme problem for the ellipsoid-minus-ball alternative.

The minimizer of ``sum eta^4`` over the alternative has the water-filling
form ``eta^2 = z0^2 sigma^2 (1 - A a^2)_+``.  The Lagrange parameter ``A``
solves ``r^2 = A J1(A) / J2(A)``, which is monotone in ``A`` and is found by
bisection in ``log A``.  Leading-order asymptotics of the lattice sums are
provided as independent closed forms.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import EmptySupport, InfeasibleRadius, SolverFailure
from .lattice import Index, ModelParams, ellipsoid_coeff, lattice_below, sigma_sq
from .seqmodel import SequenceVector

__all__ = [
    "JSums",
    "ExtremeSolution",
    "apery_constant",
    "j_sums",
    "i_of_a",
    "i_asymptotic",
    "j_asymptotic",
    "lagrange_ratio",
    "solve_extreme",
    "eps_for_target_u",
    "asymptotic_u",
    "asymptotic_A",
    "separation_rate",
    "adaptive_rate",
    "w0_check",
]


@lru_cache(maxsize=1)
def apery_constant(n_terms: int = 2000) -> float:
    """``sum_{m>=1} m^-3`` from a partial sum and a midpoint integral tail.

    The tail ``1/(2 (M + 1/2)^2)`` is accurate to ``O(M^-5)``.
    """
    m = np.arange(n_terms, 0, -1, dtype=float)
    return float(np.sum(m**-3.0)) + 0.5 / (n_terms + 0.5) ** 2


class _Table:
    """Lattice points with ``A a^2 < 1`` for a fixed lower bound on ``A``.

    The support only shrinks as ``A`` grows, so one enumeration serves every
    evaluation on ``[A_lo, oo)``.
    """

    def __init__(self, A_lo: float, params: ModelParams, strict: bool = True):
        n_max = _product_cap(A_lo, params)
        j, l = lattice_below(n_max)
        a2 = ellipsoid_coeff((j, l), params) ** 2
        keep = A_lo * a2 < 1.0 if strict else A_lo * a2 <= 1.0 + 1e-12
        self.j, self.l, self.a2 = j[keep], l[keep], a2[keep]
        self.s2 = sigma_sq((self.j, self.l), params)
        self.s4 = self.s2 * self.s2

    def sums(self, A: float):
        gap = 1.0 - A * self.a2
        on = gap > 0.0
        g = gap[on]
        s4 = self.s4[on]
        J1 = float(np.sum(s4 * g))
        J0 = float(np.sum(s4 * g * g))
        J2 = float(np.sum(s4 * g * (1.0 - g)))
        return J0, J1, J2, on


def _product_cap(A: float, params: ModelParams) -> int:
    # A a^2 <= 1  <=>  (j+1)(l+1) <= (L^2/A)^(1/(2p))  (L = 1 when normalized)
    L = 1.0 if params.normalized else params.L
    return int(math.floor((L * L / A) ** (0.5 / params.p) * (1.0 + 1e-12)))


@dataclass(frozen=True)
class JSums:
    J0: float
    J1: float
    J2: float
    support_size: int

    def __iter__(self):
        return iter((self.J0, self.J1, self.J2))


def j_sums(A: float, params: ModelParams) -> JSums:
    """Exact ``J0, J1, J2`` over the support ``A a^2 < 1``.

    Past the last support point all three sums are zero.
    """
    if not A > 0:
        raise ValueError("A must be positive")
    if A * params.a_min**2 >= 1.0:
        return JSums(0.0, 0.0, 0.0, 0)
    J0, J1, J2, on = _Table(A, params).sums(A)
    return JSums(J0, J1, J2, int(on.sum()))


def i_of_a(A: float, params: ModelParams) -> float:
    """``I(A) = sum sigma^4`` over lattice points with ``A a^2 <= 1``."""
    if not A > 0:
        raise ValueError("A must be positive")
    if A * params.a_min**2 > 1.0 + 1e-12:
        raise EmptySupport(f"no lattice point satisfies A a^2 <= 1 at A={A}")
    t = _Table(A, params, strict=False)
    return float(np.sum(t.s4))


def i_asymptotic(A: float, p: float) -> float:
    """Leading term ``(2B/3) A^(-3/(2p))`` of ``I(A)`` in normalized units."""
    return 2.0 * apery_constant() / 3.0 * A ** (-1.5 / p)


def j_asymptotic(A: float, p: float) -> JSums:
    """Leading terms of ``J0, J1, J2`` as ``A -> 0`` in normalized units."""
    B = apery_constant()
    scale = A ** (-1.5 / p)
    J1 = 4 * B * p / (3 * (2 * p + 3)) * scale
    J2 = 4 * B * p / ((4 * p + 3) * (2 * p + 3)) * scale
    J0 = 16 * B * p * p / (3 * (2 * p + 3) * (4 * p + 3)) * scale
    return JSums(J0, J1, J2, 0)


def lagrange_ratio(A: float, params: ModelParams) -> float:
    """``g(A) = A J1 / J2``; the solver finds ``g(A) = r^2``."""
    s = j_sums(A, params)
    if s.support_size == 0:
        raise EmptySupport(f"empty support at A={A}")
    if s.J2 == 0.0:
        return math.inf
    return A * s.J1 / s.J2


@dataclass(frozen=True)
class ExtremeSolution:
    A: float
    z0_sq: float
    u_eps: float
    r: float
    eps: float
    params: ModelParams
    j: np.ndarray = field(repr=False)
    l: np.ndarray = field(repr=False)
    eta_sq: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    w0: float
    J0: float
    J1: float
    J2: float
    iterations: int = 0

    @property
    def support(self) -> list[Index]:
        return [Index(int(a), int(b)) for a, b in zip(self.j, self.l)]

    @property
    def support_size(self) -> int:
        return int(self.j.size)

    @property
    def eta_sq_vector(self) -> SequenceVector:
        return SequenceVector(self.j, self.l, self.eta_sq)

    @property
    def weight_vector(self) -> SequenceVector:
        return SequenceVector(self.j, self.l, self.weights)

    def constraint_residuals(self) -> tuple[float, float]:
        """Relative residuals of the ball and ellipsoid equalities."""
        s2 = sigma_sq((self.j, self.l), self.params)
        a2 = ellipsoid_coeff((self.j, self.l), self.params) ** 2
        ball = float(np.sum(s2 * self.eta_sq))
        ell = float(np.sum(a2 * s2 * self.eta_sq))
        return abs(ball / self.r**2 - 1.0), abs(ell - 1.0)

    def with_eps(self, eps: float) -> "ExtremeSolution":
        """Same extreme sequence at another noise level (only ``u`` changes)."""
        u = self.u_eps * (self.eps / eps) ** 2
        return replace(self, eps=eps, u_eps=u)


def _bracket(r2: float, params: ModelParams):
    top = 1.0 / params.a_min**2
    hi = top * (1.0 - 1e-15)
    lo = min(3.0 * r2 / (4.0 * params.p + 3.0), hi)
    floor = 1e-3 * r2
    while lagrange_ratio(lo, params) >= r2:
        hi = lo
        lo *= 0.5
        if lo < floor:
            raise SolverFailure(
                "could not bracket the Lagrange parameter from below",
                r_sq=r2, lo=lo, floor=floor,
            )
    # tighten from above with geometric steps before the fine bisection
    step = lo
    while step * 2.0 < hi and lagrange_ratio(step * 2.0, params) < r2:
        step *= 2.0
    lo = step
    hi = min(hi, step * 2.0)
    return lo, hi


def solve_extreme(r: float, eps: float, params: ModelParams, max_iter: int = 200) -> ExtremeSolution:
    """Solve the extreme problem at radius ``r`` and noise level ``eps``."""
    if not (r > 0 and eps > 0):
        raise ValueError("r and eps must be positive")
    r2 = r * r
    if r2 > 1.0 / params.a_min**2:
        raise InfeasibleRadius(
            f"r^2={r2:g} exceeds the largest squared semi-axis {1.0 / params.a_min**2:g}"
        )
    lo, hi = _bracket(r2, params)
    table = _Table(lo, params)

    def g(A):
        _, J1, J2, _ = table.sums(A)
        return math.inf if J2 == 0.0 else A * J1 / J2

    if not g(lo) < r2 <= g(hi) * (1.0 + 1e-15):
        raise SolverFailure("Lagrange bracket does not straddle r^2", lo=lo, hi=hi,
                            g_lo=g(lo), g_hi=g(hi), r_sq=r2)
    log_lo, log_hi = math.log(lo), math.log(hi)
    it = 0
    for it in range(1, max_iter + 1):
        mid = 0.5 * (log_lo + log_hi)
        if mid <= log_lo or mid >= log_hi:
            break
        if g(math.exp(mid)) < r2:
            log_lo = mid
        else:
            log_hi = mid
    A = math.exp(log_hi)
    J0, J1, J2, on = table.sums(A)
    z0_sq = r2 / J1
    j, l = table.j[on], table.l[on]
    eta_sq = z0_sq * table.s2[on] * (1.0 - A * table.a2[on])
    norm = math.sqrt(2.0 * float(np.sum(eta_sq * eta_sq)))
    weights = eta_sq / norm
    u_eps = math.sqrt((r / eps) ** 4 * J0 / (2.0 * J1 * J1))
    return ExtremeSolution(
        A=A, z0_sq=z0_sq, u_eps=u_eps, r=r, eps=eps, params=params,
        j=j, l=l, eta_sq=eta_sq, weights=weights, w0=float(weights.max()),
        J0=J0, J1=J1, J2=J2, iterations=it,
    )


def eps_for_target_u(sol: ExtremeSolution, u_target: float) -> float:
    """Noise level giving ``u_eps = u_target`` for the same radius (``u ~ eps^-2``)."""
    return sol.eps * math.sqrt(sol.u_eps / u_target)


def asymptotic_A(r: float, p: float) -> float:
    return 3.0 * r * r / (4.0 * p + 3.0)


def asymptotic_u(r: float, eps: float, params: ModelParams) -> float:
    """Closed-form small-radius limit of ``u_eps``."""
    p = params.p
    B = apery_constant()
    u2 = r ** (4 + 3 / p) * eps**-4 * (2 * p + 3) / (2 * B) * (3 / (4 * p + 3)) ** (1 + 1.5 / p)
    if not params.normalized:
        u2 *= math.pi**4 * params.L ** (-3 / p)
    return math.sqrt(u2)


def separation_rate(eps: float, p: float) -> float:
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    return eps ** (4 * p / (4 * p + 3))


def adaptive_rate(eps: float, p: float) -> float:
    """Separation rate inflated by ``(log log 1/eps)^(1/4)`` inside the power."""
    if not 0 < eps < math.exp(-1.0):
        raise ValueError("eps must lie in (0, 1/e) so that log log(1/eps) > 0")
    lll = math.log(math.log(1.0 / eps))
    return (eps * lll**0.25) ** (4 * p / (4 * p + 3))


def w0_check(sol: ExtremeSolution) -> float:
    """Largest test weight, recomputed from the water-filling profile."""
    s2 = sigma_sq((sol.j, sol.l), sol.params)
    a2 = ellipsoid_coeff((sol.j, sol.l), sol.params) ** 2
    profile = s2 * (1.0 - sol.A * a2)
    return float(profile.max() / math.sqrt(2.0 * np.sum(profile * profile)))
