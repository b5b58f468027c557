"""Chi-square tests for a single smoothness and for a smoothness grid, with Gaussian error predictions."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr
from scipy.stats import norm

from .errors import GridDegenerate
from .extreme import adaptive_rate
from .lattice import ModelParams, indices_below, sigma_sq
from .seqmodel import SequenceVector

__all__ = [
    "TestVerdict",
    "chi2_statistic",
    "chi2_statistics",
    "np_threshold",
    "total_error_threshold",
    "predicted_beta",
    "predicted_gamma",
    "Chi2Test",
    "AdaptiveGrid",
    "phi_of_p",
    "p_of_phi",
    "grid_size",
    "build_adaptive_grid",
    "adaptive_statistics",
    "adaptive_test",
    "AdaptiveTest",
]


@dataclass(frozen=True)
class TestVerdict:
    statistic: float | tuple
    threshold: float
    reject: bool

    __test__ = False  # keep pytest from collecting this class


def chi2_statistics(Y: np.ndarray, weights: np.ndarray, eps: float) -> np.ndarray:
    """Row-wise ``sum w ((y/eps)^2 - 1)`` for a batch of observations."""
    Y = np.asarray(Y, dtype=float)
    return ((Y / eps) ** 2 - 1.0) @ np.asarray(weights, dtype=float)


def chi2_statistic(y: SequenceVector, weights: SequenceVector, eps: float) -> float:
    if not eps > 0:
        raise ValueError("noise level must be positive")
    if not y.covers(weights):
        raise ValueError("observation is missing at a weighted index")
    yv = y.align(weights.j, weights.l)
    return float(np.sum(weights.values * ((yv / eps) ** 2 - 1.0)))


def np_threshold(alpha: float) -> float:
    """Upper ``alpha`` quantile of the standard normal."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    return float(norm.isf(alpha))


def total_error_threshold(u: float) -> float:
    if not u > 0:
        raise ValueError("u must be positive")
    return 0.5 * u


def predicted_beta(alpha: float, u: float) -> float:
    return float(ndtr(np_threshold(alpha) - u))


def predicted_gamma(u: float) -> float:
    return float(2.0 * ndtr(-0.5 * u))


@dataclass(frozen=True)
class Chi2Test:
    """Indicator test ``t > threshold`` with fixed weights on a finite support."""

    weights: SequenceVector
    eps: float
    threshold: float

    __test__ = False

    @property
    def support(self):
        return self.weights.j, self.weights.l

    def statistics(self, Y: np.ndarray) -> np.ndarray:
        return chi2_statistics(Y, self.weights.values, self.eps)

    def reject(self, Y: np.ndarray) -> np.ndarray:
        return self.statistics(Y) > self.threshold

    def verdict(self, y: SequenceVector) -> TestVerdict:
        t = chi2_statistic(y, self.weights, self.eps)
        return TestVerdict(t, self.threshold, t > self.threshold)


def phi_of_p(p):
    return 4.0 / (4.0 * np.asarray(p, dtype=float) + 3.0)


def p_of_phi(phi):
    return (4.0 / np.asarray(phi, dtype=float) - 3.0) / 4.0


def grid_size(eps: float) -> int:
    """``ceil(log(1/eps) log log(1/eps))`` with natural logarithms."""
    if not 0 < eps < math.exp(-1.0):
        raise ValueError("eps must lie in (0, 1/e)")
    L1 = math.log(1.0 / eps)
    return int(math.ceil(L1 * math.log(L1)))


@dataclass(frozen=True)
class AdaptiveGrid:
    """Bands ``k = 0..K`` with cut-offs ``c_k = 2 / r(p_k)`` and their index sets.

    ``union_j, union_l`` enumerate the union of all bands; ``weight_matrix``
    has one column per band, aligned with the union.
    """

    p_values: np.ndarray
    cutoffs: np.ndarray
    rates: np.ndarray
    index_sets: list
    K: int
    H_eps: float
    eps: float
    D_scale: float
    params: ModelParams
    union_j: np.ndarray = field(repr=False)
    union_l: np.ndarray = field(repr=False)
    weight_matrix: np.ndarray = field(repr=False)

    @property
    def n_bands(self) -> int:
        return len(self.p_values)

    def band_weights(self, k: int) -> SequenceVector:
        j, l = self.index_sets[k]
        s2 = sigma_sq((j, l), self.params)
        return SequenceVector(j, l, s2 / math.sqrt(2.0 * np.sum(s2 * s2)))

    def summary(self) -> dict:
        return {
            "K": self.K,
            "H_eps": self.H_eps,
            "eps": self.eps,
            "D_scale": self.D_scale,
            "bands": [
                {"k": k, "p_k": float(p), "c_k": float(c), "r_k": float(r), "size": int(len(js))}
                for k, (p, c, r, (js, _)) in enumerate(
                    zip(self.p_values, self.cutoffs, self.rates, self.index_sets)
                )
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2)


def build_adaptive_grid(p_min: float, p_max: float, eps: float, D_scale: float = 1.0,
                        params: ModelParams | None = None) -> AdaptiveGrid:
    """Grid uniform in ``phi(p) = 4/(4p+3)`` between ``phi(p_max)`` and ``phi(p_min)``."""
    if not 0 < p_min <= p_max:
        raise ValueError("need 0 < p_min <= p_max")
    params = params or ModelParams(p=p_max, normalized=True)
    K = grid_size(eps)
    a, b = float(phi_of_p(p_max)), float(phi_of_p(p_min))
    phis = a + np.arange(K + 1) * (b - a) / K
    phis[0], phis[-1] = a, b
    ps = p_of_phi(phis)
    ps[0], ps[-1] = p_max, p_min
    rates = np.array([D_scale * adaptive_rate(eps, p) for p in ps])
    cutoffs = 2.0 / rates

    sets = []
    for k, (p, c) in enumerate(zip(ps, cutoffs)):
        j, l = indices_below(c, params.with_p(p), as_arrays=True)
        if j.size == 0:
            raise GridDegenerate(f"band {k} (p={p:.4g}, c={c:.4g}) has no lattice point")
        sets.append((j, l))

    # the bands are nested in (j+1)(l+1), so the union is the largest one
    biggest = max(range(len(sets)), key=lambda k: sets[k][0].size)
    uj, ul = sets[biggest]
    key = {(int(x), int(y)): i for i, (x, y) in enumerate(zip(uj, ul))}
    s2 = sigma_sq((uj, ul), params)
    W = np.zeros((uj.size, len(sets)))
    for k, (j, l) in enumerate(sets):
        rows = np.fromiter((key[(int(x), int(y))] for x, y in zip(j, l)), dtype=np.int64, count=j.size)
        W[rows, k] = s2[rows] / math.sqrt(2.0 * np.sum(s2[rows] ** 2))
    return AdaptiveGrid(
        p_values=ps, cutoffs=cutoffs, rates=rates, index_sets=sets, K=K,
        H_eps=2.0 * math.sqrt(math.log(K)), eps=eps, D_scale=D_scale, params=params,
        union_j=uj, union_l=ul, weight_matrix=W,
    )


def adaptive_statistics(y: SequenceVector, grid: AdaptiveGrid) -> np.ndarray:
    """Band statistics ``t_k`` for one observation."""
    if not y.covers(SequenceVector.zeros(grid.union_j, grid.union_l)):
        raise ValueError("observation does not cover the union of the grid bands")
    yv = y.align(grid.union_j, grid.union_l)
    return chi2_statistics(yv[None, :], grid.weight_matrix, grid.eps)[0]


def adaptive_test(y: SequenceVector, grid: AdaptiveGrid) -> TestVerdict:
    t = adaptive_statistics(y, grid)
    return TestVerdict(tuple(t.tolist()), grid.H_eps, bool(t.max() > grid.H_eps))


@dataclass(frozen=True)
class AdaptiveTest:
    """Batch form of the adaptive test: reject when some band exceeds ``H_eps``."""

    grid: AdaptiveGrid

    __test__ = False

    @property
    def support(self):
        return self.grid.union_j, self.grid.union_l

    def statistics(self, Y: np.ndarray) -> np.ndarray:
        return chi2_statistics(Y, self.grid.weight_matrix, self.grid.eps)

    def reject(self, Y: np.ndarray) -> np.ndarray:
        return self.statistics(Y).max(axis=1) > self.grid.H_eps
