"""Linear (in)dependence of J0, J1 and J2.

Since every coefficient is cyclically symmetrized, a relation
lambda J0 + mu J1 + rho J2 = 0 holds iff lambda + mu phi_jkl + rho F_jkl = 0
for every ordered triple, i.e. iff the columns (1, phi, F) are rank
deficient.  Antisymmetry makes the constant column orthogonal to the other
two, so with the true coefficients this is the rank of (phi, F) alone; the
three-column test also stays valid for shifted coefficients.
"""

from dataclasses import asdict, dataclass
from itertools import permutations
from typing import Optional

import numpy as np

from .group_algebra import p_jkl
from .integrals import ChainConfig, build_integrals, coeff_F, coeff_phi, site_values

SINGULAR_THRESHOLD = 1e-6
CLUSTER_RTOL = 1e-9


@dataclass
class IndependenceReport:
    n_sites: int
    kappa: float
    verdict: str
    ratio: Optional[float]
    ratio_spread: Optional[float]
    max_minor: float
    smallest_singular_value: float
    distinct_wp_count: int

    def as_dict(self):
        return asdict(self)


def coefficient_matrix(config: ChainConfig):
    """Rows (1, phi_jkl, F_jkl) over all ordered triples, plus the triple list."""
    L = config.lattice
    triples = list(permutations(range(1, config.n_sites + 1), 3))
    rows = [(1.0, coeff_phi(j, k, l, L), coeff_F(j, k, l, L)) for j, k, l in triples]
    return np.array(rows, dtype=complex), triples


def _normalized_columns(M):
    return M / np.linalg.norm(M, axis=0)


def smallest_singular_value(M):
    """Smallest singular value of the column-normalized (1, phi, F) matrix."""
    return float(np.linalg.svd(_normalized_columns(M), compute_uv=False)[-1])


def max_minor(M):
    """Largest |phi_a F_b - phi_b F_a| over row pairs, relative to the column scales."""
    phi, F = M[:, 1], M[:, 2]
    minors = np.abs(np.outer(phi, F) - np.outer(F, phi))
    return float(minors.max() / (np.abs(phi).max() * np.abs(F).max()))


def distinct_wp_values(config: ChainConfig, rtol=CLUSTER_RTOL):
    """Cluster wp(d), d = 1..N-1, at relative tolerance rtol; return representatives."""
    L = config.lattice
    reps = []
    for d in range(1, config.n_sites):
        v = site_values(d, L)[1].real
        if not any(abs(v - r) <= rtol * max(abs(v), abs(r)) for r in reps):
            reps.append(v)
    return reps


def check_mu_rho_condition(config: ChainConfig):
    """Count distinct wp(d); two or more distinct values force mu = rho = 0."""
    reps = distinct_wp_values(config)
    return {"n_sites": config.n_sites, "distinct_wp_count": len(reps), "values": reps,
            "forces_trivial": len(reps) >= 2}


def analyse(config: ChainConfig, M=None) -> IndependenceReport:
    if M is None:
        M, _ = coefficient_matrix(config)
    phi, F = M[:, 1], M[:, 2]
    sv = smallest_singular_value(M)
    minor = max_minor(M)
    ratio = spread = None
    verdict = "independent" if sv > SINGULAR_THRESHOLD else "dependent"
    if verdict == "dependent":
        r = F / phi
        ratio = complex(np.mean(r))
        spread = float(np.max(np.abs(r - ratio)) / abs(ratio))
        ratio = ratio.real if abs(ratio.imag) <= 1e-12 * abs(ratio) else ratio
    return IndependenceReport(
        n_sites=config.n_sites,
        kappa=config.kappa,
        verdict=verdict,
        ratio=ratio,
        ratio_spread=spread,
        max_minor=minor,
        smallest_singular_value=sv,
        distinct_wp_count=len(distinct_wp_values(config)),
    )


# ---------------------------------------------------------------------------
# small chains in closed form

# the eight 3-cycles of S_4 with their signs, as (j, k, l) labels of P_jkl
N4_PATTERN = [
    ((1, 2, 3), 1), ((2, 1, 3), -1), ((1, 2, 4), 1), ((2, 1, 4), -1),
    ((1, 3, 4), 1), ((3, 1, 4), -1), ((2, 3, 4), 1), ((3, 2, 4), -1),
]  # fmt: skip
N3_PATTERN = [((1, 2, 3), 1), ((2, 1, 3), -1)]


def _pattern_residual(A, pattern, coeff, n):
    expected = {p_jkl(*lbl, n): 3 * coeff * s for lbl, s in pattern}
    keys = set(expected) | set(A.terms)
    diff = max(abs(A[g] - expected.get(g, 0)) for g in keys)
    return diff / (3 * abs(coeff))


def n4_F_closed_form(phi, wp_prime_1):
    """F_123 at N = 4: (2/3)(phi^3 - wp'(1)), using phi^2 = 2 wp(1) + wp(2)."""
    return 2 / 3 * (phi**3 - wp_prime_1)


def n4_F_printed_form(phi, wp_prime_1):
    """The variant (2/3)(2 phi^3 - wp'(1)).  It does not match F_123; kept for comparison."""
    return 2 / 3 * (2 * phi**3 - wp_prime_1)


def verify_small_N_closed_forms(kappa_factor=1.0):
    """Match J1, J2 at N = 3, 4 against their closed forms.

    ``kappa_factor`` scales kappa relative to N.  Returns a dict of
    relative residuals.  ``N4_F_closed`` compares against the printed
    variant and is not expected to vanish; ``N4_F_corrected`` is.
    """
    out = {}
    for n, pattern in ((3, N3_PATTERN), (4, N4_PATTERN)):
        cfg = ChainConfig(n, kappa_factor * n)
        L = cfg.lattice
        S = build_integrals(cfg)
        phi = coeff_phi(1, 2, 3, L)
        F = coeff_F(1, 2, 3, L)
        out[f"N{n}_J1"] = _pattern_residual(S.J1, pattern, phi, n)
        out[f"N{n}_J2"] = _pattern_residual(S.J2, pattern, F, n)
        if n == 4:
            z1, _, dp1 = site_values(1, L)
            z2 = site_values(2, L)[0]
            phi_closed = z2 - 2 * z1
            F_closed = n4_F_closed_form(phi_closed, dp1)
            F_printed = n4_F_printed_form(phi_closed, dp1)
            out["N4_phi_closed"] = abs(phi - phi_closed) / abs(phi)
            out["N4_F_corrected"] = abs(F - F_closed) / abs(F)
            out["N4_F_closed"] = abs(F - F_printed) / abs(F)
            out["N4_ratio"] = abs(F / phi - F_closed / phi_closed) / abs(F / phi)
    return out
