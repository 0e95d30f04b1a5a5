"""Commutators of the integrals of motion and their overlap decomposition.

Two 3-cycles commute unless their supports share one or two sites.  The
commutator [J1, J2] is therefore split by the size of that overlap:

* one shared site: products are 5-cycles (``quartic_part``);
* two shared sites, product of two disjoint transpositions (``pair_part_a``);
* two shared sites, product is a 3-cycle (``pair_part_b``);
* no shared site, or the same three sites: exact zero (``disjoint_part``).

Each part must vanish on its own.
"""

from collections import defaultdict
from dataclasses import dataclass
from itertools import permutations

from .group_algebra import (
    AlgebraElement,
    _accumulate,
    ae_inf_norm,
    commutator_with_scale,
    cycle_type,
    p_5cycle,
    p_jkl,
    perm_compose,
    support,
)
from .integrals import IntegralSet, coeff_F, coeff_phi
from .errors import RepeatedIndex

PAIRS = (("J1", "J2"), ("H", "J1"), ("H", "J2"), ("J0", "H"), ("J0", "J1"), ("J0", "J2"))


@dataclass
class CommutatorResult:
    pair: tuple
    element: AlgebraElement
    scale: float

    @property
    def residual(self):
        return ae_inf_norm(self.element) / self.scale if self.scale else 0.0


def commutator_full(S: IntegralSet, which=("J1", "J2")) -> CommutatorResult:
    """Exact group-algebra commutator of two of H, J0, J1, J2."""
    a, b = which
    elem, scale = commutator_with_scale(S.operator(a), S.operator(b))
    return CommutatorResult(tuple(which), elem, scale)


@dataclass
class Part:
    element: AlgebraElement
    scale: float

    @property
    def residual(self):
        return ae_inf_norm(self.element) / self.scale if self.scale else 0.0


@dataclass
class OverlapDecomposition:
    quartic_part: Part
    pair_part_a: Part
    pair_part_b: Part
    disjoint_part: Part
    total: Part

    def parts(self):
        return {
            "quartic": self.quartic_part,
            "pair_a": self.pair_part_a,
            "pair_b": self.pair_part_b,
            "disjoint": self.disjoint_part,
        }


def _route(overlap, product):
    if overlap == 1:
        return "quartic"
    if overlap == 2:
        return "pair_a" if cycle_type(product)[:2] == (2, 2) else "pair_b"
    return "disjoint"


def decompose_pair(A: AlgebraElement, B: AlgebraElement) -> OverlapDecomposition:
    """Split [A, B] of two 3-cycle-supported elements by support overlap."""
    n = A.n_sites
    contrib = defaultdict(list)
    mass = defaultdict(lambda: defaultdict(float))
    right = [(h, cb, support(h)) for h, cb in sorted(B.terms.items())]
    for g, ca in sorted(A.terms.items()):
        sg = support(g)
        for h, cb, sh in right:
            c = ca * cb
            gh = perm_compose(g, h)
            hg = perm_compose(h, g)
            part = _route(len(sg & sh), gh)
            if gh == hg:
                contrib[part].append((gh, c - c))
                mass[part][gh] += 2 * abs(c)
                continue
            contrib[part] += [(gh, c), (hg, -c)]
            mass[part][gh] += abs(c)
            mass[part][hg] += abs(c)

    def make(names):
        pairs = [kv for name in names for kv in contrib[name]]
        merged = defaultdict(float)
        for name in names:
            for g, m in mass[name].items():
                merged[g] += m
        return Part(AlgebraElement(n, _accumulate(pairs)), max(merged.values(), default=0.0))

    return OverlapDecomposition(
        quartic_part=make(["quartic"]),
        pair_part_a=make(["pair_a"]),
        pair_part_b=make(["pair_b"]),
        disjoint_part=make(["disjoint"]),
        total=make(["quartic", "pair_a", "pair_b", "disjoint"]),
    )


def decompose_by_overlap(S: IntegralSet) -> OverlapDecomposition:
    return decompose_pair(S.J1, S.J2)


# ---------------------------------------------------------------------------
# five-index coefficient and the relabeled sums


def omega_terms(j, k, l, n, p, phi, F):
    """Five products of the quartic coefficient for coefficient callables phi, F."""
    return [
        F(j, k, l) * (phi(j, n, p) - phi(l, n, p)),
        F(j, n, p) * (phi(n, k, l) - phi(j, k, l)),
        F(k, l, n) * (phi(j, k, p) - phi(j, n, p)),
        F(j, k, p) * (phi(p, l, n) - phi(k, l, n)),
        F(l, n, p) * (phi(j, k, l) - phi(j, k, p)),
    ]


def _lattice_coeffs(L):
    return (lambda a, b, c: coeff_phi(a, b, c, L)), (lambda a, b, c: coeff_F(a, b, c, L))


def omega_coeff(j, k, l, n, p, L):
    """Quartic coefficient for the five sites j, k, l, n, p."""
    if len({j, k, l, n, p}) != 5:
        raise RepeatedIndex(f"indices {(j, k, l, n, p)} must be mutually distinct")
    return sum(omega_terms(j, k, l, n, p, *_lattice_coeffs(L)))


def quartic_unsymmetrized(nsites, phi, F):
    """9 sum (phi_jnp F_jkl - phi_jkl F_jnp) P_jklnp over ordered 5-tuples."""
    out = []
    for j, k, l, n, p in permutations(range(1, nsites + 1), 5):
        c = 9 * (phi(j, n, p) * F(j, k, l) - phi(j, k, l) * F(j, n, p))
        out.append((p_5cycle(j, k, l, n, p, nsites), c))
    return AlgebraElement(nsites, _accumulate(out))


def quartic_symmetrized(nsites, phi, F):
    """(9/5) sum Omega_jklnp P_jklnp over ordered 5-tuples."""
    out = []
    for j, k, l, n, p in permutations(range(1, nsites + 1), 5):
        c = 9 / 5 * sum(omega_terms(j, k, l, n, p, phi, F))
        out.append((p_5cycle(j, k, l, n, p, nsites), c))
    return AlgebraElement(nsites, _accumulate(out))


def cubic_unsymmetrized(nsites, phi, F):
    """9 sum F_jkp (phi_ljp - phi_klp) P_jkl over ordered 4-tuples."""
    out = []
    for j, k, l, p in permutations(range(1, nsites + 1), 4):
        out.append((p_jkl(j, k, l, nsites), 9 * F(j, k, p) * (phi(l, j, p) - phi(k, l, p))))
    return AlgebraElement(nsites, _accumulate(out))


def cubic_symmetrized(nsites, phi, F):
    """3 sum T_jklp P_jkl over ordered 4-tuples."""
    out = []
    for j, k, l, p in permutations(range(1, nsites + 1), 4):
        t = (
            F(j, k, p) * (phi(l, j, p) - phi(k, l, p))
            + F(l, j, p) * (phi(k, l, p) - phi(j, k, p))
            + F(k, l, p) * (phi(j, k, p) - phi(l, j, p))
        )
        out.append((p_jkl(j, k, l, nsites), 3 * t))
    return AlgebraElement(nsites, _accumulate(out))


def pair_unsymmetrized(nsites, phi, F):
    """9 sum (phi_jkl F_jkn - phi_jkn F_jkl) P_jl P_kn over ordered 4-tuples."""
    from .group_algebra import perm_transposition

    out = []
    for j, k, l, n in permutations(range(1, nsites + 1), 4):
        g = perm_compose(perm_transposition(j, l, nsites), perm_transposition(k, n, nsites))
        out.append((g, 9 * (phi(j, k, l) * F(j, k, n) - phi(j, k, n) * F(j, k, l))))
    return AlgebraElement(nsites, _accumulate(out))
