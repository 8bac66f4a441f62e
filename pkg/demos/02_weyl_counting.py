#!/usr/bin/env python3
"""Eigenvalue counting: the Weyl law, its local variant, homogeneity, and
empirical unit-band sup-norm constants."""

import math

import numpy as np

from specon import (
    Sphere2,
    Torus,
    check_homogeneity,
    local_weyl,
    sogge_constant_estimate,
    weyl_count,
)

TWO_PI = 2 * math.pi

# N(lambda) counts eigenvalues with multiplicity; on the d=2 torus it is the
# number of lattice points in a disk, which approaches pi lambda^2
t2 = Torus(2)
print("lambda   N(lambda)   pi lambda^2   ratio")
for lam in [5, 10, 25, 50, 100]:
    n = weyl_count(t2, float(lam))
    print(f"{lam:6d} {n:11d} {math.pi * lam**2:13.1f} {n / (math.pi * lam**2):7.4f}")

# the sphere count is (l_max + 1)^2; at lambda = sqrt(l(l+1)) the Weyl
# prediction is lambda^2
s = Sphere2()
lam = math.sqrt(40 * 41)
print(f"\nsphere N({lam:.3f}) = {weyl_count(s, lam)}  (lambda^2 = {lam**2:.1f})")

# the local counting function N_x sums |e_j(x)|^2; integrating it over the
# space recovers N exactly because the basis is orthonormal
lam = 4.0
quad = s.build_quadrature(lam)
els = s.enumerate_basis(lam)
v = s.basis_matrix(els, quad.nodes)
integral = float(np.sum(quad.weights * np.sum(np.abs(v) ** 2, axis=1)))
print(f"\nintegral of N_x({lam}) over the sphere: {integral:.8f} "
      f"(N({lam}) = {weyl_count(s, lam)})")
x = [0.9, 2.2]
print(f"N_x at {x}: {local_weyl(s, x, lam):.6f}")

# homogeneity: each degeneracy class sums to multiplicity / |M| at every
# point; this is what makes the dimension-free uncertainty bound available
rng = np.random.default_rng(1)
pts = s.sample_points(200, rng)
holds, dev = check_homogeneity(s, math.sqrt(7 * 8), pts, tol=1e-9)
print(f"\nsphere degree-7 class constant? {holds} (max deviation {dev:.2e}, "
      f"target {15 / (4 * math.pi):.6f})")

# empirical unit-band constant: max over a frequency grid and sampled points
# of the band sum divided by lambda^{d-1}; a grid maximum, not a proven sup
for space, lam_max in [(Torus(1), 20.0), (s, 12.0)]:
    c = sogge_constant_estimate(space, lam_max, x_samples=64)
    print(f"unit-band constant estimate on {space.kind}: {c:.4f}")
