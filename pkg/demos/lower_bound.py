"""
Second-moment lower-bound diagnostic
====================================

Mixing random-sign priors over a grid of smoothness bands gives a closed-form
bound on the chi-square distance to the null.  Small values mean no test can
tell the mixture from pure noise.
"""

from radon_minimax.harness import lower_bound_d_limit, lower_bound_diagnostic

eps = 1e-3
print(f"admissible d on [0.5, 2]: below {lower_bound_d_limit(0.5, 2.0, eps):.2e}")

for d in (1e-5, 1e-4, 3e-4, 1e-3, 3e-3):
    print(f"d={d:.0e}: bound {lower_bound_diagnostic(eps, 0.5, 2.0, d):.4g}")

# Inflating the radii directly: the bands shrink and the bound explodes.
for s in (0.5, 1.0, 1.5, 2.0):
    print(f"radius x{s}: bound {lower_bound_diagnostic(eps, 0.5, 2.0, 1e-4, radius_scale=s):.4g}")

value, tab = lower_bound_diagnostic(eps, 0.5, 2.0, 1e-4, detail=True)
print(tab.to_csv())
