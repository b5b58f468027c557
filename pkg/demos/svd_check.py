"""
Checking the Radon SVD by quadrature
====================================

The Zernike-type functions on the disk are mapped by the Radon transform onto
Chebyshev-type functions on the space of lines, scaled by ``pi/sqrt(j+l+1)``.
Here we integrate along chords directly and compare.
"""

import numpy as np

from radon_minimax.lattice import indices_up_to_degree, phi_basis, psi_basis, singular_value
from radon_minimax.radon_oracle import QuadratureSpec, radon_transform, svd_residual

# One basis function, evaluated on a few chords.
nu = (2, 1)
u = np.array([0.0, 0.4, 0.8])
phi = np.array([0.3, 1.1, 2.5])
image = radon_transform(lambda r, t: phi_basis(nu, r, t), u, phi)
print("R phi_nu          :", image)
print("b_nu * psi_nu     :", singular_value(nu) * psi_basis(nu, u, phi))

# The residual over every index of total degree at most 6.  The integrands are
# polynomials along each chord, so even 8 nodes per dimension are exact.
for n in (8, 16, 32):
    q = QuadratureSpec.uniform(n)
    worst = max(svd_residual(k, q) for k in indices_up_to_degree(6))
    print(f"{n:3d} nodes: max relative residual {worst:.2e}")
