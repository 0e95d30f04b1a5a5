"""
When are J0, J1, J2 independent?
================================

A linear relation between the integrals needs the coefficient columns
(phi, F) to be proportional.  That happens at 3 and 4 sites only.
"""

from ellchain.independence import analyse, check_mu_rho_condition, verify_small_N_closed_forms
from ellchain.integrals import ChainConfig

for n in range(3, 9):
    rep = analyse(ChainConfig(n))
    extra = f"F/phi = {rep.ratio:.6f}" if rep.ratio is not None else f"smallest sv {rep.smallest_singular_value:.3f}"
    print(f"N={n}: {rep.verdict:11s} {extra}  distinct wp values {rep.distinct_wp_count}")

print(check_mu_rho_condition(ChainConfig(7)))

# at four sites everything collapses to phi_123 and wp'(1)
closed = verify_small_N_closed_forms()
print(f"phi_123 = zeta(2) - 2 zeta(1):        {closed['N4_phi_closed']:.1e}")
print(f"F_123 = (2/3)(phi^3 - wp'(1)):        {closed['N4_F_corrected']:.1e}")
print(f"F_123 = (2/3)(2 phi^3 - wp'(1)):      {closed['N4_F_closed']:.2f}  (does not hold)")
