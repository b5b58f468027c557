"""Acceptance checks 1 to 9, each at its stated tolerance and runtime budget."""
import math
import time

import numpy as np
import pytest
from scipy.special import ndtr

from radon_minimax.detect import build_adaptive_grid
from radon_minimax.extreme import (
    asymptotic_A,
    asymptotic_u,
    i_asymptotic,
    i_of_a,
    j_asymptotic,
    j_sums,
    solve_extreme,
)
from radon_minimax.harness import (
    ExperimentSpec,
    adaptive_power_experiment,
    band_means,
    adaptive_signal,
    calibrate_d_scale,
    lower_bound_diagnostic,
    null_calibration,
    rate_sweep,
    sharp_asymptotics_experiment,
    svd_verify,
)
from radon_minimax.lattice import ModelParams

NORM = ModelParams(p=1.0, normalized=True)
A_LIST = (1e-3, 1e-4, 1e-5, 1e-6)


class Clock:
    def __init__(self, budget):
        self.budget = budget

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0

    def check(self):
        assert self.elapsed <= self.budget, f"took {self.elapsed:.1f}s, budget {self.budget}s"


# 1. SVD identity

@pytest.mark.criterion(1)
def test_svd_identity(note):
    with Clock(60) as clk:
        tab = svd_verify(6)
    worst = tab.column("residual").max()
    note(f"max residual {worst:.1e}, gram H {tab.meta['gram_dev_H']:.1e}, gram S {tab.meta['gram_dev_S']:.1e}")
    assert len(tab) == 28
    assert worst <= 1e-6
    assert tab.meta["gram_dev_H"] <= 1e-6 and tab.meta["gram_dev_S"] <= 1e-6
    clk.check()


# 2. exact enumeration

@pytest.mark.criterion(2)
def test_exact_enumeration(note):
    with Clock(1) as clk:
        value = i_of_a(0.01, NORM)
    brute = sum((m + n - 1) ** 2 for m in range(1, 11) for n in range(1, 11) if m * n <= 10)
    note(f"I(0.01) = {value:g}, brute force {brute}")
    assert value == brute == 957
    clk.check()


# 3. asymptotic ratios

def _ratios():
    rows = []
    for A in A_LIST:
        s, a = j_sums(A, NORM), j_asymptotic(A, 1.0)
        rows.append({
            "I": i_of_a(A, NORM) / i_asymptotic(A, 1.0),
            "J1": s.J1 / a.J1,
            "J2": s.J2 / a.J2,
            "J0": s.J0 / a.J0,
        })
    return rows


@pytest.fixture(scope="module")
def ratios():
    t0 = time.perf_counter()
    rows = _ratios()
    return rows, time.perf_counter() - t0


@pytest.mark.criterion(3)
def test_asymptotic_ratios_within_five_percent(ratios, note):
    rows, elapsed = ratios
    last = rows[-1]
    note("A=1e-6: " + ", ".join(f"{k} {v:.4f}" for k, v in last.items()))
    for v in last.values():
        assert abs(v - 1) <= 0.05
    assert elapsed < 10


@pytest.mark.criterion(3)
@pytest.mark.parametrize("name", ["I", "J1", "J2", "J0"])
def test_asymptotic_ratios_monotone(ratios, name, note):
    rows, _ = ratios
    dev = [abs(r[name] - 1) for r in rows]
    monotone = all(b < a for a, b in zip(dev, dev[1:]))
    if not monotone:
        note(f"{name} ratios " + ", ".join(f"{r[name]:.4f}" for r in rows))
    assert monotone, f"|{name} ratio - 1| over A={A_LIST}: {dev}"


# 4. solver correctness

@pytest.mark.criterion(4)
def test_solver_correctness(note):
    r = 1e-3
    sol = solve_extreme(r, 1e-4, NORM)
    rb, re = sol.constraint_residuals()
    ratio = sol.A / asymptotic_A(r, 1.0)
    note(f"residuals {max(rb, re):.1e}, A ratio {ratio:.5f}")
    assert rb <= 1e-10 and re <= 1e-10
    assert abs(ratio - 1) <= 0.1
    assert abs(np.sum(sol.weights**2) - 0.5) <= 1e-12


@pytest.mark.criterion(4)
@pytest.mark.parametrize("p, L", [(1.0, 2.0), (0.8, 0.7)])
def test_rescaling_identity(p, L):
    r, eps = 0.01 * L, 1e-3
    phys = solve_extreme(r, eps, ModelParams(p=p, L=L))
    norm = solve_extreme(r / L, eps, ModelParams(p=p, normalized=True))
    # u_phys(r) = (C D)^-2 u_norm(C r) with C = 1/L, D = 1/pi
    assert abs(phys.u_eps / (L**2 * math.pi**2 * norm.u_eps) - 1) <= 1e-10


# 5. sharp asymptotics

@pytest.fixture(scope="module")
def sharp():
    spec = ExperimentSpec(NORM, 1e-4, 1e-3, alpha=0.05, n_trials=10_000, master_seed=1)
    t0 = time.perf_counter()
    tab = sharp_asymptotics_experiment(spec, u_targets=[2.0, 4.0])
    return tab.records(), time.perf_counter() - t0


@pytest.mark.criterion(5)
def test_sharp_total_error_u2(sharp, note):
    rows, elapsed = sharp
    row = rows[0]
    note(f"u=2: w0 {row['w0']:.4f}, gamma {row['gamma_hat']:.4f} vs {2 * ndtr(-1):.4f}, "
         f"beta {row['beta_hat']:.4f} vs {ndtr(1.6449 - 2):.4f}")
    assert abs(row["u_eps"] - 2.0) < 1e-9 and row["w0"] <= 0.05
    assert abs(row["gamma_hat"] - 2 * ndtr(-1.0)) <= 0.05
    assert abs(row["beta_hat"] - ndtr(1.6449 - 2.0)) <= 0.05
    assert elapsed <= 300


@pytest.mark.criterion(5)
def test_sharp_total_error_u4(sharp, note):
    rows, _ = sharp
    row = rows[1]
    note(f"u=4: gamma {row['gamma_hat']:.4f} vs {2 * ndtr(-2):.4f}")
    assert abs(row["u_eps"] - 4.0) < 1e-9
    assert abs(row["gamma_hat"] - 2 * ndtr(-2.0)) <= 0.03


# 6. separation rate

@pytest.mark.criterion(6)
def test_rate_sweep(note):
    spec = ExperimentSpec(NORM, 1e-3, n_trials=10_000, master_seed=5, mode="rate-sweep")
    with Clock(600) as clk:
        tab = rate_sweep(spec, [0.2, 0.35, 0.6, 1.0, 1.7, 3.0, 5.0])
    g = dict(zip(tab.column("c"), tab.column("gamma_hat")))
    slope = tab.meta["slope_u_vs_c"]
    note(f"gamma(0.2) {g[0.2]:.3f}, gamma(5) {g[5.0]:.3f}, slope {slope:.4f} vs 3.5")
    assert g[0.2] >= 0.8
    assert g[5.0] <= 0.1
    assert abs(slope / 3.5 - 1) <= 0.05
    clk.check()


# 7. adaptive test

@pytest.fixture(scope="module")
def adaptive():
    eps, p_trues = 1e-3, [0.6, 1.0, 1.8]
    t0 = time.perf_counter()
    D = calibrate_d_scale(eps, 0.5, 2.0, p_trues, NORM)
    spec = ExperimentSpec(NORM.with_p(2.0), eps, n_trials=10_000, master_seed=3, mode="adaptive-power")
    rows = [adaptive_power_experiment(spec, p, 0.5, 2.0, D).records()[0] for p in p_trues]
    return D, rows, time.perf_counter() - t0


@pytest.mark.criterion(7)
def test_adaptive_alpha(adaptive, note):
    D, rows, elapsed = adaptive
    note(f"D_scale {D:.3f}, alpha {rows[0]['alpha_hat']:.4f} <= {rows[0]['alpha_bound']:.4f}")
    assert rows[0]["alpha_hat"] <= 2 / rows[0]["K"]
    assert elapsed <= 600


@pytest.mark.criterion(7)
def test_adaptive_beta(adaptive, note):
    _, rows, _ = adaptive
    note("beta " + ", ".join(f"p={r['p_true']}: {r['beta_hat']:.4f}" for r in rows))
    for r in rows:
        assert r["beta_hat"] <= 0.1


@pytest.mark.criterion(7)
def test_adaptive_matched_band_mean(adaptive):
    D, rows, _ = adaptive
    grid = build_adaptive_grid(0.5, 2.0, 1e-3, D, NORM)
    for r in rows:
        means = band_means(grid, adaptive_signal(1e-3, r["p_true"], D, NORM))
        assert means.max() >= 2 * grid.H_eps


# 8. lower bound

@pytest.mark.criterion(8)
def test_lower_bound_diagnostic(note):
    with Clock(60) as clk:
        small = lower_bound_diagnostic(1e-3, 0.5, 2.0, d=1e-4)
        scales = [0.5, 0.75, 1.0, 1.5, 2.0, 10.0]
        vals = [lower_bound_diagnostic(1e-3, 0.5, 2.0, d=1e-4, radius_scale=s) for s in scales]
        ds = np.geomspace(1e-6, 1e-2, 25)
        by_d = [lower_bound_diagnostic(1e-3, 0.5, 2.0, d=d) for d in ds]
    note(f"d=1e-4: {small:.4f}; x10 radii: {vals[-1]:.3g}")
    assert small <= 0.1
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert all(b >= a for a, b in zip(by_d, by_d[1:]))
    assert vals[-1] > 1
    clk.check()


# 9. null calibration

@pytest.mark.criterion(9)
def test_null_calibration(note):
    spec = ExperimentSpec(NORM, 1e-3, 0.01, n_trials=100_000, master_seed=2, mode="null-calibration")
    row = null_calibration(spec).records()[0]
    note(f"mean {row['mean']:.4f} (se {row['mean_se']:.4f}), var {row['var']:.4f}, "
         f"exp moment {row['expmom_mc']:.4f} vs {row['expmom_gauss']:.4f}")
    assert abs(row["mean"]) <= 3 * row["mean_se"]
    assert abs(row["var"] - 1) <= 0.05
    assert row["h_wmax"] <= 0.05 + 1e-12
    assert abs(row["expmom_mc"] / row["expmom_gauss"] - 1) <= 0.10
