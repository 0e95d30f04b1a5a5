"""
Weierstrass functions on a rectangular lattice
==============================================

Evaluate wp, wp', zeta and sigma on the lattice Z*N + Z*i*kappa and check
them against the slow lattice sum and the differential equation.
"""

import numpy as np

from ellchain.weierstrass import make_lattice, sigma, wp, wp_lattice_sum_oracle, wp_prime, zeta_w

# a lattice taller than wide keeps the nome small; a flat one is swapped internally
for n, kappa in [(5, 10), (5, 2.5)]:
    L = make_lattice(n, kappa)
    print(f"N={n} kappa={kappa}: swapped={L.swapped} q={L.nome_q.real:.3e} g2={L.g2:.6f} g3={L.g3:.6f}")

L = make_lattice(5, 2.5)
z = 1.3 + 0.4j
print("wp      ", wp(z, L))
print("wp'     ", wp_prime(z, L))
print("zeta    ", zeta_w(z, L))
print("sigma   ", sigma(z, L))

# the q-series against the symmetric lattice sum; the sum converges slowly
for bound in (100, 200, 400):
    ref = wp_lattice_sum_oracle(z, L, bound)
    print(f"lattice sum, bound {bound:3d}: relative gap {abs(wp(z, L) - ref) / abs(ref):.2e}")

# wp'^2 = 4 wp^3 - g2 wp - g3
zs = np.array([0.3 + 0.2j, 1.7 - 0.9j, 4.1 + 1.2j])
p = wp(zs, L)
print("ODE residual:", np.abs(wp_prime(zs, L) ** 2 - (4 * p**3 - L.g2 * p - L.g3)))

# far from the square shape, wp approaches its trigonometric limit
L = make_lattice(5, 100)
x = np.linspace(0.5, 4.5, 5)
trig = (np.pi / 5) ** 2 * (1 / np.sin(np.pi * x / 5) ** 2 - 1 / 3)
print("trig limit gap:", np.max(np.abs(wp(x + 0j, L) - trig)))
