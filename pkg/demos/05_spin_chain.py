"""
The spin-1/2 chain
==================

Transpositions act as two-qubit swaps.  H and J1 become sparse matrices
that commute, so J1 is block diagonal in every eigenspace of H.
"""

import numpy as np

from ellchain.integrals import ChainConfig, build_integrals
from ellchain.spin_rep import relative_commutator, represent, verify_spin_commutators

cfg = ChainConfig(8)
S = build_integrals(cfg)
H = represent(S.H).toarray().real
J1 = represent(S.J1).toarray()
print(f"dimension {H.shape[0]}, ||[H,J1]|| / ||H|| ||J1|| = {relative_commutator(represent(S.H), represent(S.J1)):.1e}")

# J1 is real antisymmetric, so i*J1 is Hermitian and shares eigenvectors with H
evals, evecs = np.linalg.eigh(H)
K = evecs.T @ (1j * J1) @ evecs
edges = np.flatnonzero(np.diff(evals) > 1e-9) + 1
blocks = np.split(np.arange(len(evals)), edges)
leak = max(np.max(np.abs(K[np.ix_(b, np.setdiff1d(np.arange(len(evals)), b))]), initial=0) for b in blocks)
print(f"{len(blocks)} distinct energies, largest off-block entry of iJ1: {leak:.1e}")

print(verify_spin_commutators(ChainConfig(10)).as_dict())
