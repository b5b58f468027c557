"""Monte Carlo experiments and their tables, plus deterministic sweeps.

Every experiment is a deterministic function of its :class:`ExperimentSpec`:
trial ``i`` draws its noise from the counter-based stream keyed by
``(master_seed, i, j, l)``.  The noise never depends on chunking or ordering;
the statistics can differ only in the last bits of the BLAS summation.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
import math
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import ndtr

from . import __version__
from .detect import (
    AdaptiveTest,
    Chi2Test,
    build_adaptive_grid,
    grid_size,
    np_threshold,
    phi_of_p,
    p_of_phi,
    predicted_beta,
    predicted_gamma,
    total_error_threshold,
)
from .errors import OutsideAlternative
from .extreme import (
    ExtremeSolution,
    adaptive_rate,
    apery_constant,
    asymptotic_A,
    asymptotic_u,
    i_asymptotic,
    i_of_a,
    j_asymptotic,
    j_sums,
    separation_rate,
    solve_extreme,
)
from .lattice import ModelParams, ellipsoid_coeff, indices_up_to_degree, lattice_below, sigma_sq, singular_value
from .radon_oracle import QuadratureSpec, gram_matrix_H, gram_matrix_S, svd_residual
from .seqmodel import (
    SequenceVector,
    extreme_signal,
    make_prior,
    membership_check,
    standard_normals,
)

log = logging.getLogger(__name__)

MODES = (
    "null-calibration",
    "sharp-asymptotics",
    "rate-sweep",
    "adaptive-power",
    "lower-bound",
    "asymptotics-table",
    "svd-verify",
)

__all__ = [
    "ExperimentSpec",
    "ErrorEstimate",
    "Table",
    "rejection_rate",
    "estimate_alpha",
    "estimate_beta_at",
    "null_calibration",
    "sharp_asymptotics_experiment",
    "rate_sweep",
    "loglog_slope",
    "adaptive_signal",
    "band_means",
    "simulate_statistics",
    "lower_bound_rate",
    "calibrate_d_scale",
    "adaptive_power_experiment",
    "lower_bound_grid",
    "lower_bound_d_limit",
    "lower_bound_diagnostic",
    "asymptotics_table",
    "svd_verify",
    "solve_table",
]


@dataclass(frozen=True)
class ExperimentSpec:
    params: ModelParams
    eps: float
    r: float = 0.0
    alpha: float = 0.05
    n_trials: int = 10_000
    master_seed: int = 0
    mode: str = "sharp-asymptotics"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.n_trials < 100:
            raise ValueError("error-probability estimates need at least 100 trials")

    def spec_hash(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def provenance(self) -> dict:
        return {"version": __version__, "seed": self.master_seed, "spec_hash": self.spec_hash()}


@dataclass(frozen=True)
class ErrorEstimate:
    rate: float
    std_err: float
    n_trials: int

    @classmethod
    def from_count(cls, count: int, n: int) -> "ErrorEstimate":
        rate = count / n
        return cls(rate, math.sqrt(rate * (1.0 - rate) / n), n)


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _parse(s: str):
    for conv in (int, float):
        try:
            return conv(s)
        except ValueError:
            pass
    if s in ("True", "False"):
        return s == "True"
    return s


def _norm(v):
    # values held by a table are exactly what the CSV text encodes
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.12g}")
    return v


@dataclass
class Table:
    """Plot-ready table; floats are stored at the 12 significant digits written out."""

    columns: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, **row):
        missing = set(self.columns) - set(row)
        if missing:
            raise KeyError(f"row lacks columns {sorted(missing)}")
        self.rows.append([_norm(row[c]) for c in self.columns])

    def column(self, name) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([r[i] for r in self.rows])

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, r)) for r in self.rows]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        if not isinstance(other, Table):
            return NotImplemented
        return self.columns == other.columns and self.rows == other.rows and self.meta == other.meta

    def to_csv(self) -> str:
        buf = io.StringIO()
        for k, v in self.meta.items():
            buf.write(f"# {k}: {json.dumps(v)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([_fmt(v) for v in r])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Table":
        meta, body = {}, []
        for line in text.splitlines():
            if line.startswith("#"):
                key, _, val = line[1:].strip().partition(": ")
                meta[key] = json.loads(val)
            elif line.strip():
                body.append(line)
        rows = list(csv.reader(body))
        return cls(rows[0], [[_parse(v) for v in r] for r in rows[1:]], meta)

    def to_json(self) -> str:
        return json.dumps({"meta": self.meta, "columns": self.columns, "rows": self.rows}, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Table":
        d = json.loads(text)
        return cls(d["columns"], [list(r) for r in d["rows"]], d.get("meta", {}))

    def dump(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError(f"unknown format {fmt!r}")


# Monte Carlo core

def _chunks(n_trials: int, width: int, budget: int = 2_000_000):
    step = max(1, budget // max(width, 1))
    for start in range(0, n_trials, step):
        yield np.arange(start, min(start + step, n_trials))


def simulate_statistics(test, eta: np.ndarray, eps: float, n_trials: int, seed: int) -> np.ndarray:
    """Test statistics over ``n_trials`` draws of ``y = eta + eps xi`` on ``test.support``."""
    j, l = test.support
    out = []
    for trials in _chunks(n_trials, j.size):
        Y = eta[None, :] + eps * standard_normals(seed, j, l, trials)
        out.append(test.statistics(Y))
    return np.concatenate(out)


def rejection_rate(test, eta: np.ndarray, eps: float, n_trials: int, seed: int) -> ErrorEstimate:
    j, l = test.support
    count = 0
    for trials in _chunks(n_trials, j.size):
        Y = eta[None, :] + eps * standard_normals(seed, j, l, trials)
        count += int(np.count_nonzero(test.reject(Y)))
    return ErrorEstimate.from_count(count, n_trials)


def estimate_alpha(test, spec: ExperimentSpec) -> ErrorEstimate:
    """Fraction of null trials that reject."""
    n = test.support[0].size
    return rejection_rate(test, np.zeros(n), spec.eps, spec.n_trials, spec.master_seed)


def estimate_beta_at(test, signal: SequenceVector, spec: ExperimentSpec, r: float | None = None) -> ErrorEstimate:
    """Fraction of trials under ``signal`` that accept.

    The signal must lie in the alternative for ``spec.params`` and radius ``r``
    (default ``spec.r``).
    """
    r = spec.r if r is None else r
    mem = membership_check(signal, spec.params, r)
    if not mem:
        raise OutsideAlternative(
            f"signal outside the alternative: ellipsoid={mem.ellipsoid_sum:.6g}, "
            f"ball={mem.ball_sum:.6g} < r^2={r * r:.6g}?",
            membership=mem,
        )
    j, l = test.support
    eta = signal.align(j, l)
    if not SequenceVector.zeros(j, l).covers(signal):
        # energy outside the test support never changes the decision; keep it honest anyway
        log.debug("signal has support outside the test support; those coordinates are ignored")
    rej = rejection_rate(test, eta, spec.eps, spec.n_trials, spec.master_seed)
    acc = spec.n_trials - round(rej.rate * spec.n_trials)
    return ErrorEstimate.from_count(acc, spec.n_trials)


# experiments

def null_calibration(spec: ExperimentSpec, h: float | None = None) -> Table:
    """Null moments of the optimal statistic and its exponential moment at ``h``."""
    sol = solve_extreme(spec.r, spec.eps, spec.params)
    test = Chi2Test(sol.weight_vector, spec.eps, 0.0)
    t = simulate_statistics(test, np.zeros(sol.support_size), spec.eps, spec.n_trials, spec.master_seed)
    n = t.size
    if h is None:
        h = 0.05 / sol.w0
    w = sol.weights
    exact = math.exp(float(np.sum(-h * w - 0.5 * np.log1p(-2.0 * h * w))))
    e = np.exp(h * t)
    var = float(t.var(ddof=1))
    # standard error of the sample variance from the fourth central moment
    m4 = float(np.mean((t - t.mean()) ** 4))
    tab = Table(
        ["mean", "mean_se", "var", "var_se", "h", "h_wmax", "expmom_mc", "expmom_se",
         "expmom_exact", "expmom_gauss", "w0", "support"],
        meta=spec.provenance(),
    )
    tab.add(
        mean=float(t.mean()), mean_se=float(t.std(ddof=1) / math.sqrt(n)),
        var=var, var_se=math.sqrt(max(m4 - var * var, 0.0) / n),
        h=h, h_wmax=h * sol.w0, expmom_mc=float(e.mean()),
        expmom_se=float(e.std(ddof=1) / math.sqrt(n)), expmom_exact=exact,
        expmom_gauss=math.exp(h * h / 2), w0=sol.w0, support=sol.support_size,
    )
    return tab


_SHARP_COLUMNS = [
    "r", "eps", "A", "u_eps", "w0", "support", "alpha_level", "H_alpha",
    "alpha_hat", "beta_hat", "beta_se", "beta_pred", "H_gamma",
    "alpha_gamma_hat", "beta_gamma_hat", "gamma_hat", "gamma_se", "gamma_pred",
]


def _sharp_row(sol: ExtremeSolution, spec: ExperimentSpec, t0=None) -> dict:
    eta = np.sqrt(sol.eta_sq)
    mem = membership_check(extreme_signal(sol), spec.params, sol.r)
    if not mem:
        raise OutsideAlternative("extreme signal failed its own membership check", membership=mem)
    test = Chi2Test(sol.weight_vector, sol.eps, 0.0)
    if t0 is None:
        t0 = simulate_statistics(test, np.zeros_like(eta), sol.eps, spec.n_trials, spec.master_seed)
    t1 = simulate_statistics(test, eta, sol.eps, spec.n_trials, spec.master_seed)
    n = spec.n_trials
    H_a = np_threshold(spec.alpha)
    H_g = total_error_threshold(sol.u_eps)
    a_hat = ErrorEstimate.from_count(int(np.count_nonzero(t0 > H_a)), n)
    b_hat = ErrorEstimate.from_count(int(np.count_nonzero(t1 <= H_a)), n)
    ag = ErrorEstimate.from_count(int(np.count_nonzero(t0 > H_g)), n)
    bg = ErrorEstimate.from_count(int(np.count_nonzero(t1 <= H_g)), n)
    return dict(
        r=sol.r, eps=sol.eps, A=sol.A, u_eps=sol.u_eps, w0=sol.w0, support=sol.support_size,
        alpha_level=spec.alpha, H_alpha=H_a, alpha_hat=a_hat.rate, beta_hat=b_hat.rate,
        beta_se=b_hat.std_err, beta_pred=predicted_beta(spec.alpha, sol.u_eps), H_gamma=H_g,
        alpha_gamma_hat=ag.rate, beta_gamma_hat=bg.rate, gamma_hat=ag.rate + bg.rate,
        gamma_se=math.hypot(ag.std_err, bg.std_err), gamma_pred=predicted_gamma(sol.u_eps),
    )


def sharp_asymptotics_experiment(spec: ExperimentSpec, u_targets=None) -> Table:
    """Empirical versus Gaussian-limit errors of the optimal chi-square test.

    With ``u_targets`` the noise level is re-tuned for each target value of
    ``u_eps`` at the fixed radius ``spec.r`` (``u`` scales as ``eps^-2``).
    """
    sol = solve_extreme(spec.r, spec.eps, spec.params)
    if sol.w0 > 0.2:
        warnings.warn(f"w0={sol.w0:.3f} > 0.2: the Gaussian regime is not reached", stacklevel=2)
    sols = [sol] if u_targets is None else [
        sol.with_eps(sol.eps * math.sqrt(sol.u_eps / u)) for u in u_targets
    ]
    # under the null y/eps is pure noise, so one null run serves every noise level
    test = Chi2Test(sol.weight_vector, sol.eps, 0.0)
    t0 = simulate_statistics(test, np.zeros(sol.support_size), sol.eps, spec.n_trials, spec.master_seed)
    tab = Table(list(_SHARP_COLUMNS), meta=spec.provenance())
    for s in sols:
        tab.add(**_sharp_row(s, spec, t0))
    return tab


def loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(x), np.log(y), 1)[0])


def rate_sweep(spec: ExperimentSpec, c_values) -> Table:
    """Total error of the optimal test at ``r = c * eps^(4p/(4p+3))`` for each ``c``."""
    p = spec.params.p
    r_star = separation_rate(spec.eps, p)
    tab = Table(["c", "r", "A", "u_eps", "u_asym", "w0", "support", "alpha_hat", "beta_hat",
                 "gamma_hat", "gamma_se", "gamma_pred"], meta=spec.provenance())
    for c in c_values:
        sol = solve_extreme(c * r_star, spec.eps, spec.params)
        row = _sharp_row(sol, spec)
        tab.add(c=c, r=sol.r, A=sol.A, u_eps=sol.u_eps, u_asym=asymptotic_u(sol.r, spec.eps, spec.params),
                w0=sol.w0, support=sol.support_size, alpha_hat=row["alpha_gamma_hat"],
                beta_hat=row["beta_gamma_hat"], gamma_hat=row["gamma_hat"],
                gamma_se=row["gamma_se"], gamma_pred=row["gamma_pred"])
    tab.meta["slope_u_vs_c"] = loglog_slope(tab.column("c"), tab.column("u_eps"))
    tab.meta["slope_expected"] = (4 * p + 3) / (2 * p)
    return tab


# adaptive test

def adaptive_signal(eps: float, p_true: float, D_scale: float, params: ModelParams) -> ExtremeSolution:
    """Extreme sequence at the adaptive radius for smoothness ``p_true``."""
    r = D_scale * adaptive_rate(eps, p_true)
    return solve_extreme(r, eps, params.with_p(p_true))


def band_means(grid, sol: ExtremeSolution) -> np.ndarray:
    """Expected band statistics ``eps^-2 sum w_k eta^2`` under the extreme signal."""
    eta2 = SequenceVector(sol.j, sol.l, sol.eta_sq).align(grid.union_j, grid.union_l)
    return eta2 @ grid.weight_matrix / grid.eps**2


def calibrate_d_scale(eps: float, p_min: float, p_max: float, p_trues, params: ModelParams,
                      rel_tol: float = 1e-3, max_doublings: int = 12) -> float:
    """Smallest ``D_scale`` with ``max_k E t_k >= 2 H_eps`` for every ``p_true``.

    The grid itself depends on ``D_scale`` through its cut-offs, so each
    candidate rebuilds it.  Doubling from 1 brackets the answer, then
    bisection on ``log D``.
    """
    def ok(D):
        grid = build_adaptive_grid(p_min, p_max, eps, D, params)
        return all(
            band_means(grid, adaptive_signal(eps, p, D, params)).max() >= 2.0 * grid.H_eps
            for p in p_trues
        )

    lo, hi = 1.0, 1.0
    while ok(lo):
        lo *= 0.5
    hi = 2.0 * lo
    for _ in range(max_doublings):
        if ok(hi):
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise ValueError(f"no D_scale up to {hi} reaches the 2 H_eps mean shift")
    while hi / lo > 1.0 + rel_tol:
        mid = math.sqrt(lo * hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def adaptive_power_experiment(spec: ExperimentSpec, p_true: float, p_min: float, p_max: float,
                              D_scale: float = 1.0) -> Table:
    """Type I and type II errors of the adaptive test, blind to ``p_true``."""
    params = spec.params
    grid = build_adaptive_grid(p_min, p_max, spec.eps, D_scale, params)
    test = AdaptiveTest(grid)
    sol = adaptive_signal(spec.eps, p_true, D_scale, params)
    signal = extreme_signal(sol)
    sig_spec = ExperimentSpec(params.with_p(p_true), spec.eps, sol.r, spec.alpha,
                              spec.n_trials, spec.master_seed, spec.mode)
    a_hat = estimate_alpha(test, spec)
    b_hat = estimate_beta_at(test, signal, sig_spec)
    means = band_means(grid, sol)
    tab = Table(["p_true", "r", "u_eps", "D_scale", "K", "n_bands", "H_eps", "union_size",
                 "alpha_hat", "alpha_se", "alpha_bound", "beta_hat", "beta_se",
                 "best_band", "best_band_mean", "best_band_p"], meta=spec.provenance())
    k = int(np.argmax(means))
    tab.add(p_true=p_true, r=sol.r, u_eps=sol.u_eps, D_scale=D_scale, K=grid.K,
            n_bands=grid.n_bands, H_eps=grid.H_eps, union_size=grid.union_j.size,
            alpha_hat=a_hat.rate, alpha_se=a_hat.std_err, alpha_bound=2.0 / grid.K,
            beta_hat=b_hat.rate, beta_se=b_hat.std_err, best_band=k,
            best_band_mean=float(means[k]), best_band_p=float(grid.p_values[k]))
    tab.meta["grid"] = grid.summary()
    return tab


# lower bound

def lower_bound_rate(eps: float, p: float, d: float) -> float:
    """Radius at which ``u_eps(p) ~ sqrt(d log log 1/eps)`` to leading order."""
    phi = float(phi_of_p(p))
    a_p = 2.0 * apery_constant() / (2 * p + 3) * (0.75 * phi) ** (-(2 * p + 3) / (2 * p))
    lll = math.log(math.log(1.0 / eps))
    return (eps * (d * a_p * lll) ** 0.25) ** (phi * p)


def lower_bound_d_limit(p_min: float, p_max: float, eps: float = 1e-3) -> float:
    """Largest ``d`` keeping the leading exponent ``d1`` below one on the grid."""
    ps = lower_bound_grid(eps, p_min, p_max)
    worst = max((4 * p + 3) / (2 * p + 3) * (4 * (4 * p + 3) / 3) ** (1.5 / p) for p in ps)
    return 7.0 / (16.0 * worst)


def lower_bound_grid(eps: float, p_min: float, p_max: float) -> np.ndarray:
    """Smoothness grid with ``phi`` spacing close to ``log 2 / log(1/eps)``."""
    a, b = float(phi_of_p(p_max)), float(phi_of_p(p_min))
    K = max(1, int(math.ceil((b - a) * math.log(1.0 / eps) / math.log(2.0))))
    phis = a + np.arange(K + 1) * (b - a) / K
    ps = p_of_phi(phis)
    ps[0], ps[-1] = p_max, p_min
    return ps


def lower_bound_diagnostic(eps: float, p_min: float, p_max: float, d: float,
                           params: ModelParams | None = None, detail: bool = False,
                           radius_scale: float = 1.0, max_product: int = 10**7):
    """Upper bound on the chi-square distance between the band mixture and the null.

    Band ``k`` holds ``T_{k-1} < (j+1)(l+1) <= T_k`` with
    ``T_k = ceil((2 r(p_k))^(-1/p_k))`` and amplitude from ``z_k^2 sum sigma^4 = 2 r(p_k)^2``.
    The bound is ``K^-2 sum_k (exp(2 sum sinh^2(z_k^2 sigma^2 / (2 eps^2))) - 1)``.
    ``radius_scale`` multiplies every ``r(p_k)`` after ``d`` has set them.
    """
    params = params or ModelParams(p=p_max, normalized=True)
    if not params.normalized:
        raise ValueError("lower-bound radii are defined in normalized units")
    ps = lower_bound_grid(eps, p_min, p_max)
    rs = radius_scale * np.array([lower_bound_rate(eps, p, d) for p in ps])
    T = np.ceil((2.0 * rs) ** (-1.0 / ps))
    if T.max() > max_product:
        raise ValueError(f"band edge T={T.max():.3g} exceeds max_product={max_product}; radii too small")
    T = T.astype(np.int64)
    K = len(ps) - 1
    tab = Table(["k", "p_k", "r_k", "T_lo", "T_hi", "band_size", "z_k", "ellipsoid_sum", "ball_sum",
                 "exponent", "term"])
    total = 0.0
    for k in range(1, K + 1):
        lo_, hi_ = int(T[k - 1]), int(T[k])
        if hi_ <= lo_:
            tab.add(k=k, p_k=ps[k], r_k=rs[k], T_lo=lo_, T_hi=hi_, band_size=0, z_k=0.0,
                    ellipsoid_sum=0.0, ball_sum=0.0, exponent=0.0, term=0.0)
            continue
        pk = params.with_p(float(ps[k]))
        prior = make_prior(k, float(ps[k]), float(rs[k]), lo_, hi_, pk)
        j, l = prior.band()
        s2 = sigma_sq((j, l), pk)
        a2 = ellipsoid_coeff((j, l), pk) ** 2
        expo = 2.0 * float(np.sum(np.sinh(prior.z**2 * s2 / (2.0 * eps**2)) ** 2))
        term = math.expm1(expo) if expo < 700 else math.inf
        total += term
        tab.add(k=k, p_k=ps[k], r_k=rs[k], T_lo=lo_, T_hi=hi_, band_size=j.size, z_k=prior.z,
                ellipsoid_sum=prior.z**2 * float(np.sum(s2 * s2 * a2)),
                ball_sum=prior.z**2 * float(np.sum(s2 * s2)), exponent=expo, term=term)
    value = total / K**2
    tab.meta.update(K=K, d=d, radius_scale=radius_scale, eps=eps, bound=value)
    return (value, tab) if detail else value


# deterministic tables

def asymptotics_table(p_list, A_list) -> Table:
    """Exact lattice sums against their leading-order forms."""
    tab = Table(["p", "A", "I", "I_asym", "I_ratio", "J0", "J0_asym", "J0_ratio", "J1", "J1_asym",
                 "J1_ratio", "J2", "J2_asym", "J2_ratio", "support"])
    for p in p_list:
        P = ModelParams(p=p, normalized=True)
        for A in A_list:
            s = j_sums(A, P)
            a = j_asymptotic(A, p)
            I = i_of_a(A, P)
            Ia = i_asymptotic(A, p)
            tab.add(p=p, A=A, I=I, I_asym=Ia, I_ratio=I / Ia, J0=s.J0, J0_asym=a.J0, J0_ratio=s.J0 / a.J0,
                    J1=s.J1, J1_asym=a.J1, J1_ratio=s.J1 / a.J1, J2=s.J2, J2_asym=a.J2,
                    J2_ratio=s.J2 / a.J2, support=s.support_size)
    return tab


def svd_verify(max_degree: int, q: QuadratureSpec = QuadratureSpec()) -> Table:
    """SVD residual per index plus Gram-matrix deviations of both bases."""
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    idx = indices_up_to_degree(max_degree)
    eye = np.eye(len(idx))
    gH = float(np.abs(gram_matrix_H(idx, q) - eye).max())
    gS = float(np.abs(gram_matrix_S(idx, q) - eye).max())
    tab = Table(["j", "l", "b_nu", "b_formula", "residual"],
                meta={"gram_dev_H": gH, "gram_dev_S": gS, "n_radial": q.n_radial,
                      "n_angular": q.n_angular, "n_line": q.n_line})
    for nu in idx:
        tab.add(j=nu.j, l=nu.l, b_nu=float(singular_value(nu)),
                b_formula=math.pi / math.sqrt(nu.j + nu.l + 1), residual=svd_residual(nu, q))
    return tab


def solve_table(spec: ExperimentSpec, with_sequence: bool = False) -> Table:
    sol = solve_extreme(spec.r, spec.eps, spec.params)
    res_ball, res_ell = sol.constraint_residuals()
    tab = Table(["p", "L", "normalized", "r", "eps", "A", "A_asym", "z0_sq", "u_eps", "u_asym",
                 "w0", "J0", "J1", "J2", "support", "res_ball", "res_ellipsoid"], meta=spec.provenance())
    u_asym = asymptotic_u(spec.r, spec.eps, spec.params)
    A_asym = asymptotic_A(spec.r, spec.params.p)
    if not spec.params.normalized:
        # physical a = a_norm / L: the Lagrange parameter scales by L^2 at radius r / L
        A_asym = asymptotic_A(spec.r / spec.params.L, spec.params.p) * spec.params.L**2
    tab.add(p=spec.params.p, L=spec.params.L, normalized=spec.params.normalized, r=spec.r, eps=spec.eps,
            A=sol.A, A_asym=A_asym, z0_sq=sol.z0_sq, u_eps=sol.u_eps, u_asym=u_asym, w0=sol.w0,
            J0=sol.J0, J1=sol.J1, J2=sol.J2, support=sol.support_size,
            res_ball=res_ball, res_ellipsoid=res_ell)
    if with_sequence:
        tab.meta["eta"] = [[int(a), int(b), float(v)] for a, b, v in
                           zip(sol.j, sol.l, np.sqrt(sol.eta_sq))]
    return tab
