"""Gaussian sequence model ``y = eta + eps * xi`` on a finite lattice support.

Noise is counter based: the standard normal attached to a coordinate is a
pure function of ``(seed, trial, j, l)``, so results do not depend on how the
support is enumerated or how trials are partitioned.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .lattice import Index, ModelParams, ellipsoid_coeff, lattice_below, sigma, sigma_sq, sort_indices

__all__ = [
    "SequenceVector",
    "standard_normals",
    "observation_batch",
    "sample_observation",
    "extreme_signal",
    "PriorSpec",
    "make_prior",
    "prior_signal",
    "Membership",
    "membership_check",
]


def _keys(j, l):
    return (np.asarray(j, dtype=np.int64) << 32) | np.asarray(l, dtype=np.int64)


class SequenceVector:
    """Finitely supported real sequence on the lattice; absent entries are zero."""

    __slots__ = ("j", "l", "values", "_keys", "_pos")

    def __init__(self, j, l, values):
        j = np.atleast_1d(np.asarray(j, dtype=np.int64))
        l = np.atleast_1d(np.asarray(l, dtype=np.int64))
        values = np.atleast_1d(np.asarray(values, dtype=float))
        if not (j.shape == l.shape == values.shape) or j.ndim != 1:
            raise ValueError("j, l and values must be 1-d arrays of equal length")
        if j.size and (j.min() < 0 or l.min() < 0):
            raise ValueError("indices must be nonnegative")
        order = np.lexsort((j, j + l))
        self.j, self.l, self.values = j[order], l[order], values[order]
        keys = _keys(self.j, self.l)
        if keys.size != np.unique(keys).size:
            raise ValueError("duplicate lattice index")
        self._keys = keys
        self._pos = None

    @classmethod
    def from_dict(cls, mapping) -> "SequenceVector":
        items = list(mapping.items())
        j = [nu[0] for nu, _ in items]
        l = [nu[1] for nu, _ in items]
        return cls(j, l, [v for _, v in items])

    @classmethod
    def zeros(cls, j, l) -> "SequenceVector":
        return cls(j, l, np.zeros(np.size(j)))

    def __len__(self):
        return self.values.size

    def __getitem__(self, nu) -> float:
        if self._pos is None:
            self._pos = {int(k): i for i, k in enumerate(self._keys)}
        pos = self._pos.get((int(nu[0]) << 32) | int(nu[1]))
        return 0.0 if pos is None else float(self.values[pos])

    def __eq__(self, other):
        if not isinstance(other, SequenceVector):
            return NotImplemented
        return (
            np.array_equal(self.j, other.j)
            and np.array_equal(self.l, other.l)
            and np.array_equal(self.values, other.values)
        )

    def __repr__(self):
        return f"SequenceVector(n={len(self)})"

    @property
    def indices(self) -> list[Index]:
        return [Index(int(a), int(b)) for a, b in zip(self.j, self.l)]

    def items(self):
        return zip(self.indices, self.values.tolist())

    def to_dict(self) -> dict:
        return dict(self.items())

    def align(self, j, l) -> np.ndarray:
        """Values on the support ``(j, l)``; zero where this vector is absent."""
        target = _keys(j, l)
        order = np.argsort(self._keys)
        sorted_keys = self._keys[order]
        pos = np.searchsorted(sorted_keys, target)
        pos = np.clip(pos, 0, max(sorted_keys.size - 1, 0))
        hit = sorted_keys.size > 0
        out = np.zeros(target.shape, dtype=float)
        if hit:
            found = sorted_keys[pos] == target
            out[found] = self.values[order[pos[found]]]
        return out

    def covers(self, other: "SequenceVector") -> bool:
        return bool(np.isin(other._keys, self._keys).all())

    # serialization: ordered (j, l, value) triples

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "l", "value"])
        for a, b, v in zip(self.j, self.l, self.values):
            w.writerow([int(a), int(b), repr(float(v))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "SequenceVector":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        body = rows[1:]
        return cls([int(r[0]) for r in body], [int(r[1]) for r in body], [float(r[2]) for r in body])

    def to_json(self) -> str:
        triples = [[int(a), int(b), float(v)] for a, b, v in zip(self.j, self.l, self.values)]
        return json.dumps(triples)

    @classmethod
    def from_json(cls, text: str) -> "SequenceVector":
        triples = json.loads(text)
        if not triples:
            return cls([], [], [])
        j, l, v = zip(*triples)
        return cls(j, l, v)


# counter-based normals

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_S30, _S27, _S31, _S11 = (np.uint64(s) for s in (30, 27, 31, 11))


def _mix64(x):
    # splitmix64 finalizer; uint64 arithmetic wraps by design
    with np.errstate(over="ignore"):
        x = (x ^ (x >> _S30)) * _M1
        x = (x ^ (x >> _S27)) * _M2
    return x ^ (x >> _S31)


def _u64(v):
    return np.asarray(v, dtype=np.int64).astype(np.uint64)


def _index_stream(seed: int, j, l):
    with np.errstate(over="ignore"):
        h = _mix64(_u64(seed) + _GOLDEN)
        h = _mix64(h ^ (_u64(j) + _GOLDEN))
        return _mix64(h ^ (_u64(l) * _GOLDEN + _M1))


def standard_normals(seed: int, j, l, trials=0) -> np.ndarray:
    """Standard normals keyed by ``(seed, trial, j, l)``.

    Returns shape ``(len(trials), len(j))`` for array ``trials`` and
    ``(len(j),)`` for a scalar trial index.
    """
    base = _index_stream(seed, j, l)
    scalar = np.ndim(trials) == 0
    with np.errstate(over="ignore"):
        t = _mix64(_u64(np.atleast_1d(trials)) * _M2 + _GOLDEN)
    bits = _mix64(base[None, :] ^ t[:, None])
    u = ((bits >> _S11).astype(np.float64) + 0.5) * 2.0**-53
    z = ndtri(u)
    return z[0] if scalar else z


def observation_batch(eta: np.ndarray, j, l, eps: float, seed: int, trials) -> np.ndarray:
    """Observations for several trials on a fixed support, shape ``(trials, n)``."""
    return np.asarray(eta, dtype=float)[None, :] + eps * standard_normals(seed, j, l, np.asarray(trials))


def sample_observation(eta: SequenceVector, support, eps: float, seed: int, trial: int = 0) -> SequenceVector:
    """One draw of ``y = eta + eps * xi`` on ``support`` (an iterable of indices)."""
    if not eps > 0:
        raise ValueError("noise level must be positive")
    if isinstance(support, SequenceVector):
        j, l = support.j, support.l
    elif isinstance(support, tuple) and len(support) == 2 and np.ndim(support[0]) == 1:
        j, l = support
    else:
        pts = list(support)
        j = [p[0] for p in pts]
        l = [p[1] for p in pts]
    j, l = sort_indices(j, l)
    base = SequenceVector.zeros(j, l)
    if not base.covers(eta):
        raise ValueError("support must contain the support of eta")
    y = eta.align(j, l) + eps * standard_normals(seed, j, l, trial)
    return SequenceVector(j, l, y)


def extreme_signal(sol) -> SequenceVector:
    """Nonnegative extreme sequence of a solved extreme problem."""
    return SequenceVector(sol.j, sol.l, np.sqrt(sol.eta_sq))


@dataclass(frozen=True)
class PriorSpec:
    """Random-sign prior on the band ``T_lo < (j+1)(l+1) <= T_hi``."""

    k: int
    p: float
    radius: float
    T_lo: int
    T_hi: int
    z: float
    seed: int = 0

    def band(self):
        j, l = lattice_below(self.T_hi)
        keep = (j + 1) * (l + 1) > self.T_lo
        return j[keep], l[keep]


def make_prior(k: int, p: float, radius: float, T_lo: int, T_hi: int, params: ModelParams, seed: int = 0) -> PriorSpec:
    """Band prior with amplitude fixed so that ``z^2 sum sigma^4 = 2 radius^2``."""
    j, l = lattice_below(T_hi)
    keep = (j + 1) * (l + 1) > T_lo
    s4 = sigma_sq((j[keep], l[keep]), params.with_p(p)) ** 2
    if s4.size == 0:
        raise ValueError(f"band ({T_lo}, {T_hi}] is empty")
    z = math.sqrt(2.0 * radius**2 / float(s4.sum()))
    return PriorSpec(k=k, p=p, radius=radius, T_lo=int(T_lo), T_hi=int(T_hi), z=z, seed=seed)


def prior_signal(spec: PriorSpec, params: ModelParams) -> SequenceVector:
    """One draw ``v = z * xi * sigma`` with independent signs on the band."""
    j, l = spec.band()
    signs = np.where(standard_normals(spec.seed, j, l, spec.k) >= 0.0, 1.0, -1.0)
    return SequenceVector(j, l, spec.z * signs * sigma((j, l), params.with_p(spec.p)))


@dataclass(frozen=True)
class Membership:
    inside: bool
    ellipsoid_sum: float
    ball_sum: float
    radius: float

    def __bool__(self):
        return self.inside


def membership_check(eta: SequenceVector, params: ModelParams, r: float, rtol: float = 1e-9) -> Membership:
    """Test ``sum a^2 s^2 eta^2 <= 1`` and ``sum s^2 eta^2 >= r^2``.

    ``rtol`` absorbs rounding for signals that sit on the constraint surfaces.
    """
    nu = (eta.j, eta.l)
    s2e2 = sigma_sq(nu, params) * eta.values**2
    ell = float(np.sum(ellipsoid_coeff(nu, params) ** 2 * s2e2))
    ball = float(np.sum(s2e2))
    inside = bool(ell <= 1.0 + rtol and ball >= r * r * (1.0 - rtol))
    return Membership(inside, ell, ball, r)
