"""Hamiltonian and integrals of motion of the elliptic spin chain.

Every operator is a sum over ordered site pairs or triples, exactly as
written in the model:

    H  = h0 sum_{j != k} wp(j - k) P_jk
    J0 = sum P_jkl
    J1 = sum phi_jkl P_jkl
    J2 = sum F_jkl P_jkl

Each 3-cycle P_jkl is hit by the three cyclic relabelings of (j, k, l), so
its merged coefficient is three times the single-triple value.  The
builder checks that the three contributions agree instead of assuming it.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from typing import Optional

import numpy as np

from .errors import InvalidConfig, RepeatedIndex, SpectralParameterOnLattice
from .group_algebra import AlgebraElement, p_jkl, perm_transposition
from .weierstrass import (
    POLE_MARGIN,
    Lattice,
    distance_to_lattice,
    f_spectral,
    make_lattice,
    wp,
    wp_prime,
    zeta_w,
)


@dataclass(frozen=True)
class ChainConfig:
    n_sites: int
    kappa: Optional[float] = None
    h0: float = 1.0
    alpha: Optional[complex] = None
    seed: int = 0
    tol: float = 1e-9
    samples: int = 500

    def __post_init__(self):
        if int(self.n_sites) != self.n_sites or self.n_sites < 3:
            raise InvalidConfig(f"n_sites must be an integer >= 3, got {self.n_sites}")
        if self.kappa is None:
            object.__setattr__(self, "kappa", float(self.n_sites))
        if not self.kappa > 0:
            raise InvalidConfig(f"kappa must be positive, got {self.kappa}")
        if self.samples < 1:
            raise InvalidConfig("samples must be positive")
        if not self.tol > 0:
            raise InvalidConfig("tol must be positive")

    @property
    def lattice(self) -> Lattice:
        return _lattice(self.n_sites, self.kappa)


@lru_cache(maxsize=64)
def _lattice(n, kappa):
    return make_lattice(n, kappa)


@dataclass
class IntegralSet:
    H: AlgebraElement
    J0: AlgebraElement
    J1: AlgebraElement
    J2: AlgebraElement
    lattice: Lattice
    config: ChainConfig
    raw_counts: dict = field(default_factory=dict)

    def operator(self, name):
        return {"H": self.H, "J0": self.J0, "J1": self.J1, "J2": self.J2}[name]


# ---------------------------------------------------------------------------
# coefficient functions


@lru_cache(maxsize=4096)
def site_values(d, L):
    """(zeta, wp, wp') at the integer site separation d."""
    x = float(d)
    return zeta_w(x, L), wp(x, L), wp_prime(x, L)


def _distinct(*idx):
    if len(set(idx)) != len(idx):
        raise RepeatedIndex(f"indices {idx} must be mutually distinct")


def coeff_phi(j, k, l, L):
    """phi_jkl = zeta(j-k) + zeta(k-l) + zeta(l-j)."""
    _distinct(j, k, l)
    return site_values(j - k, L)[0] + site_values(k - l, L)[0] + site_values(l - j, L)[0]


def coeff_F(j, k, l, L):
    """Symmetric form of F_jkl, averaged over the three separations."""
    phi = coeff_phi(j, k, l, L)
    _, p1, d1 = site_values(j - k, L)
    _, p2, d2 = site_values(k - l, L)
    _, p3, d3 = site_values(l - j, L)
    return (2.0 * phi * (p1 + p2 + p3) + d1 + d2 + d3) / 3.0


def _F_single(j, k, l, L, a, b):
    phi = coeff_phi(j, k, l, L)
    _, p, d = site_values(a - b, L)
    return 2.0 * phi * p + d


def coeff_F_alt1(j, k, l, L):
    """F_jkl = 2 phi_jkl wp(j-k) + wp'(j-k)."""
    return _F_single(j, k, l, L, j, k)


def coeff_F_alt2(j, k, l, L):
    """F_jkl = 2 phi_jkl wp(l-j) + wp'(l-j)."""
    return _F_single(j, k, l, L, l, j)


def ordered_triples(n):
    return permutations(range(1, n + 1), 3)


# ---------------------------------------------------------------------------
# operators


def _merge_cyclic(n, coeff, rtol=1e-12):
    """Sum coeff(j, k, l) P_jkl over ordered triples, checking the 3-fold merge."""
    buckets = {}
    for j, k, l in ordered_triples(n):
        buckets.setdefault(p_jkl(j, k, l, n), []).append(coeff(j, k, l))
    for g, vals in buckets.items():
        if len(vals) != 3:
            raise RuntimeError(f"3-cycle {g} received {len(vals)} contributions, expected 3")
        ref = max(abs(v) for v in vals)
        if any(abs(v - vals[0]) > rtol * ref for v in vals):
            raise RuntimeError(f"cyclic contributions to {g} disagree: {vals}")
    terms = {g: sum(vals, 0j) for g, vals in sorted(buckets.items())}
    return AlgebraElement(n, terms), 3 * len(buckets)


def build_hamiltonian(n, L, h0=1.0):
    terms = {}
    for j, k in permutations(range(1, n + 1), 2):
        g = perm_transposition(j, k, n)
        terms[g] = terms.get(g, 0j) + h0 * site_values(j - k, L)[1]
    return AlgebraElement(n, terms)


def build_integrals(config: ChainConfig) -> IntegralSet:
    n = config.n_sites
    L = config.lattice
    H = build_hamiltonian(n, L, config.h0)
    J0, c0 = _merge_cyclic(n, lambda j, k, l: 1.0)
    J1, c1 = _merge_cyclic(n, lambda j, k, l: coeff_phi(j, k, l, L))
    J2, c2 = _merge_cyclic(n, lambda j, k, l: coeff_F(j, k, l, L))
    return IntegralSet(H, J0, J1, J2, L, config, raw_counts={"J0": c0, "J1": c1, "J2": c2})


def build_from_coefficients(n, phi, F):
    """J1 and J2 built from arbitrary coefficient callables phi(j,k,l), F(j,k,l).

    Used to check relabeling identities that hold for any coefficients.
    """
    J1, _ = _merge_cyclic(n, phi, rtol=np.inf)
    J2, _ = _merge_cyclic(n, F, rtol=np.inf)
    return J1, J2


def build_J_alpha(config: ChainConfig) -> AlgebraElement:
    """J(alpha) = sum f(j-k) f(k-l) f(l-j) P_jkl over ordered triples."""
    if config.alpha is None:
        raise InvalidConfig("build_J_alpha needs config.alpha")
    n = config.n_sites
    L = config.lattice
    alpha = complex(config.alpha)
    if distance_to_lattice(alpha, L) <= POLE_MARGIN:
        raise SpectralParameterOnLattice(f"alpha={alpha} is on the lattice")
    d = np.arange(-(n - 1), n, dtype=float)
    d = d[d != 0]
    fvals = dict(zip(d.astype(int).tolist(), f_spectral(d + 0j, alpha, L)))

    def coeff(j, k, l):
        return fvals[j - k] * fvals[k - l] * fvals[l - j]

    return _merge_cyclic(n, coeff, rtol=1e-9)[0]


def _combine(parts):
    keys = sorted(set().union(*(p.terms for _, p in parts)))
    out = {}
    mass = {}
    for g in keys:
        vals = [c * p[g] for c, p in parts]
        out[g] = sum(vals, 0j)
        mass[g] = sum(abs(v) for v in vals)
    return out, mass


def verify_J_alpha_decomposition(config: ChainConfig, integrals: IntegralSet = None):
    """Residual of J(alpha) + wp'(alpha)/2 J0 - wp(alpha) J1 + J2/2.

    Returns (relative residual, scale); the scale is the largest gross
    coefficient mass over permutations.
    """
    S = integrals if integrals is not None else build_integrals(config)
    L = S.lattice
    alpha = complex(config.alpha)
    J = build_J_alpha(config)
    parts = [
        (1.0, J),
        (0.5 * wp_prime(alpha, L), S.J0),
        (-wp(alpha, L), S.J1),
        (0.5, S.J2),
    ]
    out, mass = _combine(parts)
    scale = max(mass.values(), default=0.0)
    resid = max((abs(v) for v in out.values()), default=0.0)
    return (resid / scale if scale else 0.0), scale


def alpha_difference_remainder(config: ChainConfig, alpha2: complex):
    """Project J(alpha) - J(alpha2) onto span{J0, J1}; return relative remainder."""
    S = build_integrals(config)
    Ja = build_J_alpha(config)
    Jb = build_J_alpha(ChainConfig(**{**config.__dict__, "alpha": alpha2}))
    keys = sorted(set(Ja.terms) | set(Jb.terms) | set(S.J0.terms) | set(S.J1.terms))
    diff = np.array([Ja[g] - Jb[g] for g in keys])
    basis = np.array([[S.J0[g], S.J1[g]] for g in keys])
    coef, *_ = np.linalg.lstsq(basis, diff, rcond=None)
    rem = diff - basis @ coef
    scale = max(np.max(np.abs([Ja[g] for g in keys])), np.max(np.abs([Jb[g] for g in keys])))
    return float(np.max(np.abs(rem)) / scale), coef


def coefficient_reality(S: IntegralSet):
    """Largest |Im c| / max |c| over the coefficients of H, J1 and J2."""
    worst = 0.0
    for A in (S.H, S.J1, S.J2):
        vals = np.array(list(A.terms.values()))
        worst = max(worst, float(np.max(np.abs(vals.imag)) / np.max(np.abs(vals))))
    return worst
