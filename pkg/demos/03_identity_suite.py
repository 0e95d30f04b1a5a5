"""
Elliptic identities behind the commutation
==========================================

Each identity is a sum of products of wp, wp' and zeta that should vanish.
They are checked at random points relative to the total size of the terms.
"""

import numpy as np

from ellchain.identities import R_terms, SamplePlan, near_pole_probe, run_identity_suite
from ellchain.integrals import ChainConfig

cfg = ChainConfig(6, 3)
for r in run_identity_suite(cfg, SamplePlan(count=500, seed=1)):
    print(f"{r.name:16s} samples={r.samples:4d} worst relative={r.max_rel:.2e} {'ok' if r.passed else 'FAIL'}")

# near v = -x single terms of R grow like 1/eps, but the sum does not
L = cfg.lattice
x, y, z = 1.3 + 0.4j, 2.2 + 1.1j, 4.4 + 0.7j
for eps in (1e-1, 1e-2, 1e-3):
    ring = -x + eps * np.exp(2j * np.pi * np.arange(8) / 8)
    terms = R_terms(x, y, z, ring, L, eps / 10)
    print(f"eps={eps:.0e}  largest term {max(np.max(np.abs(t)) for t in terms):.2e}"
          f"  |sum| {np.max(np.abs(sum(terms))):.2e}")

print("probe at v=-x:", np.max(near_pole_probe("R_vx", (x, y, z), L)))
