"""
The extreme problem and its water-filling solution
==================================================

Detection is hardest for the signal in the ellipsoid-minus-ball set that has
the smallest fourth-power sum.  The solver returns that signal, its value
``u_eps`` and the weights of the optimal chi-square statistic.
"""

from radon_minimax import ModelParams, solve_extreme
from radon_minimax.extreme import (
    asymptotic_A,
    asymptotic_u,
    i_asymptotic,
    i_of_a,
    j_asymptotic,
    j_sums,
)

params = ModelParams(p=1.0, normalized=True)

# %%
# Exact lattice sums against their leading-order forms.  The J ratios creep
# toward one; I wobbles because lattice points pile up on the hyperbola
# ``mn = A^(-1/2)`` whenever that bound is an integer.
for A in (1e-3, 1e-4, 1e-5, 1e-6):
    s, a = j_sums(A, params), j_asymptotic(A, 1.0)
    print(f"A={A:.0e}  I {i_of_a(A, params) / i_asymptotic(A, 1.0):.4f}  "
          f"J1 {s.J1 / a.J1:.4f}  J2 {s.J2 / a.J2:.4f}  J0 {s.J0 / a.J0:.4f}")

# %%
# Solving at shrinking radii.  The support grows like ``A^(-1/(2p))`` in the
# index product and the largest weight ``w0`` shrinks, which is what makes the
# statistic Gaussian.
eps = 1e-4
for r in (0.01, 0.003, 0.001):
    sol = solve_extreme(r, eps, params)
    print(f"r={r:<6} A/A_asym={sol.A / asymptotic_A(r, 1.0):.4f}  "
          f"u/u_asym={sol.u_eps / asymptotic_u(r, eps, params):.4f}  "
          f"support={sol.support_size:5d}  w0={sol.w0:.4f}")

# %%
# The profile itself: eta^2 = z0^2 sigma^2 (1 - A a^2) on the support.
sol = solve_extreme(0.05, 0.01, params)
for nu, e2 in list(sol.eta_sq_vector.items())[:6]:
    print(nu, f"{e2:.3e}")
