"""Spin-1/2 representation of C[S_N] on (C^2)^N.

A permutation p acts on computational basis states by moving the spin of
site i to site p(i).  Site 1 is the most significant bit of the state
index.  Transpositions become two-qubit swaps, which coincide with
(1 + sigma_j . sigma_k) / 2; :func:`pauli_transposition` builds the latter
independently and is only used as a test oracle.
"""

from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg  # noqa: F401  (registers sp.linalg)

from .errors import DimensionCap
from .group_algebra import AlgebraElement
from .integrals import ChainConfig, IntegralSet, build_integrals

DEFAULT_MAX_SITES = 12


def _check_cap(n, cap):
    cap = DEFAULT_MAX_SITES if cap is None else cap
    if n > cap:
        raise DimensionCap(f"2^{n} basis states exceeds the cap of 2^{cap}")


def canonical(m):
    """CSR with sorted indices, summed duplicates and no stored zeros."""
    m = sp.csr_matrix(m)
    m.sum_duplicates()
    m.eliminate_zeros()
    m.sort_indices()
    return m


def _image_indices(p):
    n = len(p)
    states = np.arange(2**n, dtype=np.int64)
    out = np.zeros_like(states)
    for i, pi in enumerate(p, start=1):
        bit = (states >> (n - i)) & 1
        out |= bit << (n - pi)
    return out


def spin_matrix_of_perm(p, max_sites=None):
    """0/1 permutation matrix of p on the 2^N computational basis."""
    n = len(p)
    _check_cap(n, max_sites)
    dim = 2**n
    cols = np.arange(dim)
    rows = _image_indices(p)
    return sp.csr_matrix((np.ones(dim), (rows, cols)), shape=(dim, dim))


def represent(a: AlgebraElement, max_sites=None):
    """Linear extension of spin_matrix_of_perm to the group algebra."""
    n = a.n_sites
    _check_cap(n, max_sites)
    dim = 2**n
    cols = np.arange(dim)
    rows_all = []
    vals_all = []
    for g, c in sorted(a.terms.items()):
        rows_all.append(_image_indices(g))
        vals_all.append(np.full(dim, c, dtype=complex))
    if not rows_all:
        return sp.csr_matrix((dim, dim), dtype=complex)
    rows = np.concatenate(rows_all)
    vals = np.concatenate(vals_all)
    colsr = np.tile(cols, len(rows_all))
    return canonical(sp.coo_matrix((vals, (rows, colsr)), shape=(dim, dim)))


_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _site_op(op, site, n):
    mats = [np.eye(2)] * n
    mats[site - 1] = op
    out = sp.csr_matrix(mats[0])
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return out


def pauli_transposition(j, k, n):
    """(1 + sigma_j . sigma_k) / 2 assembled from Pauli tensor products."""
    dim = 2**n
    out = sp.identity(dim, dtype=complex, format="csr")
    for s in "xyz":
        out = out + _site_op(_PAULI[s], j, n) @ _site_op(_PAULI[s], k, n)
    return canonical(0.5 * out)


def frobenius(m):
    return float(sp.linalg.norm(m, "fro")) if sp.issparse(m) else float(np.linalg.norm(m))


def relative_commutator(A, B):
    """||[A, B]||_F / (||A||_F ||B||_F)."""
    C = A @ B - B @ A
    denom = frobenius(A) * frobenius(B)
    return frobenius(C) / denom if denom else 0.0


@dataclass
class SpinReport:
    n_sites: int
    kappa: float
    residuals: dict = field(default_factory=dict)
    negative_control: float = 0.0
    tol: float = 1e-9

    @property
    def passed(self):
        return all(v <= self.tol for v in self.residuals.values()) and self.negative_control > 1e-2

    def as_dict(self):
        d = asdict(self)
        d["pass"] = self.passed
        return d


SPIN_PAIRS = (("H", "J1"), ("H", "J2"), ("J1", "J2"), ("J0", "H"))


def verify_spin_commutators(config: ChainConfig, integrals: IntegralSet = None, max_sites=None, tol=1e-9):
    """Frobenius-relative commutator norms in the spin-1/2 representation."""
    _check_cap(config.n_sites, max_sites)
    S = integrals if integrals is not None else build_integrals(config)
    mats = {name: represent(S.operator(name), max_sites) for name in ("H", "J0", "J1", "J2")}
    res = {f"[{a},{b}]": relative_commutator(mats[a], mats[b]) for a, b in SPIN_PAIRS}
    rng = np.random.default_rng(config.seed)
    diag = sp.diags(rng.normal(size=2**config.n_sites))
    neg = relative_commutator(mats["J1"], diag)
    return SpinReport(config.n_sites, config.kappa, res, neg, tol)
