"""Sparse arithmetic in the complex group algebra C[S_N].

Permutations are tuples in one-line notation with 1-based sites, so that
``p[i - 1]`` is the image of site ``i``.  Products act right to left:
``perm_compose(p, q)`` applies ``q`` first, then ``p``.  With this
convention ``P_jk P_kl`` is the 3-cycle j -> k -> l -> j, and the same
convention makes the spin-1/2 map in :mod:`ellchain.spin_rep` a
homomorphism.
"""

import math
from collections import Counter, defaultdict
from typing import Dict, Iterable, Sequence, Tuple

from .errors import IndexOutOfRange, RepeatedIndex, SiteCountMismatch

Permutation = Tuple[int, ...]


# ---------------------------------------------------------------------------
# permutations


def _check_sites(indices, n):
    for i in indices:
        if not 1 <= i <= n:
            raise IndexOutOfRange(f"site {i} outside 1..{n}")
    if len(set(indices)) != len(indices):
        raise RepeatedIndex(f"indices {tuple(indices)} are not distinct")


def perm_identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def perm_transposition(j: int, k: int, n: int) -> Permutation:
    _check_sites((j, k), n)
    img = list(range(1, n + 1))
    img[j - 1], img[k - 1] = k, j
    return tuple(img)


def perm_compose(p: Permutation, q: Permutation) -> Permutation:
    """Product pq: apply q, then p."""
    if len(p) != len(q):
        raise SiteCountMismatch(f"cannot compose S_{len(p)} with S_{len(q)}")
    return tuple(p[i - 1] for i in q)


def perm_inverse(p: Permutation) -> Permutation:
    inv = [0] * len(p)
    for i, pi in enumerate(p, start=1):
        inv[pi - 1] = i
    return tuple(inv)


def perm_from_cycles(cycles: Iterable[Sequence[int]], n: int) -> Permutation:
    """Permutation sending c[0] -> c[1] -> ... -> c[-1] -> c[0] for each cycle."""
    cycles = [list(c) for c in cycles]
    _check_sites([i for c in cycles for i in c], n)
    img = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
    return tuple(img)


def cycle_type(p: Permutation) -> Tuple[int, ...]:
    """Cycle lengths sorted in descending order (a partition of N)."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        i = start
        while not seen[i]:
            seen[i] = True
            i = p[i] - 1
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def support(p: Permutation) -> frozenset:
    """Sites moved by p."""
    return frozenset(i for i, pi in enumerate(p, start=1) if pi != i)


def p_jkl(j: int, k: int, l: int, n: int) -> Permutation:
    """P_jkl = P_jk P_kl."""
    return perm_compose(perm_transposition(j, k, n), perm_transposition(k, l, n))


def p_5cycle(j: int, k: int, l: int, m: int, p: int, n: int) -> Permutation:
    """P_jklmp = P_jk P_kl P_lm P_mp."""
    _check_sites((j, k, l, m, p), n)
    out = perm_transposition(m, p, n)
    for a, b in ((l, m), (k, l), (j, k)):
        out = perm_compose(perm_transposition(a, b, n), out)
    return out


# ---------------------------------------------------------------------------
# algebra elements


class AlgebraElement:
    """Finitely supported complex combination of permutations of N sites.

    Exact zeros are dropped on write.  Nothing else is pruned implicitly;
    use :func:`ae_prune` for that.
    """

    __slots__ = ("n_sites", "terms")

    def __init__(self, n_sites: int, terms: Dict[Permutation, complex] = None):
        self.n_sites = n_sites
        clean = {}
        for g, c in (terms or {}).items():
            if len(g) != n_sites:
                raise SiteCountMismatch(
                    f"permutation on {len(g)} sites in element over {n_sites} sites"
                )
            c = complex(c)
            if c != 0:
                clean[g] = c
        self.terms = clean

    @classmethod
    def of(cls, p: Permutation, coeff: complex = 1.0) -> "AlgebraElement":
        return cls(len(p), {p: coeff})

    @classmethod
    def zero(cls, n_sites: int) -> "AlgebraElement":
        return cls(n_sites)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(sorted(self.terms.items()))

    def __getitem__(self, p):
        return self.terms.get(p, 0j)

    def __add__(self, other):
        return ae_add(self, other)

    def __sub__(self, other):
        return ae_add(self, ae_scale(-1.0, other))

    def __neg__(self):
        return ae_scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return ae_mul(self, other)
        return ae_scale(other, self)

    def __rmul__(self, other):
        return ae_scale(other, self)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.n_sites == other.n_sites and self.terms == other.terms

    def __repr__(self):
        return f"AlgebraElement(n_sites={self.n_sites}, terms={len(self.terms)})"

    def is_zero(self):
        return not self.terms


def _check_match(a, b):
    if a.n_sites != b.n_sites:
        raise SiteCountMismatch(f"elements over {a.n_sites} and {b.n_sites} sites")


def ae_add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_match(a, b)
    out = dict(a.terms)
    for g, c in sorted(b.terms.items()):
        out[g] = out.get(g, 0j) + c
    return AlgebraElement(a.n_sites, out)


def ae_scale(c: complex, a: AlgebraElement) -> AlgebraElement:
    return AlgebraElement(a.n_sites, {g: c * v for g, v in a.terms.items()})


def _accumulate(pairs):
    """Sum (key, value) contributions per key with exactly rounded sums.

    fsum makes the result independent of contribution order, so terms
    that cancel exactly give an exact zero.
    """
    buckets = defaultdict(list)
    for key, val in pairs:
        buckets[key].append(val)
    out = {}
    for key in sorted(buckets):
        vals = buckets[key]
        out[key] = complex(math.fsum(v.real for v in vals), math.fsum(v.imag for v in vals))
    return out


def ae_mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    """Convolution product induced by perm_compose."""
    _check_match(a, b)
    right = sorted(b.terms.items())
    contrib = (
        (perm_compose(g, h), ca * cb) for g, ca in sorted(a.terms.items()) for h, cb in right
    )
    return AlgebraElement(a.n_sites, _accumulate(contrib))


def ae_commutator(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return commutator_with_scale(a, b)[0]


def commutator_with_scale(a: AlgebraElement, b: AlgebraElement):
    """Return ([a, b], scale) where scale is the cancellation mass.

    For every output permutation g the mass is the sum of |c_a c_b| over
    all products landing on g; ``scale`` is the maximum over g.  Pairs
    whose products commute contribute an exact zero.
    """
    _check_match(a, b)
    left = sorted(a.terms.items())
    right = sorted(b.terms.items())
    contrib = []
    mass = defaultdict(float)
    for g, ca in left:
        for h, cb in right:
            c = ca * cb
            gh = perm_compose(g, h)
            hg = perm_compose(h, g)
            if gh == hg:
                contrib.append((gh, c - c))
                mass[gh] += 2 * abs(c)
                continue
            contrib.append((gh, c))
            contrib.append((hg, -c))
            mass[gh] += abs(c)
            mass[hg] += abs(c)
    scale = max(mass.values(), default=0.0)
    return AlgebraElement(a.n_sites, _accumulate(contrib)), scale


def ae_inf_norm(a: AlgebraElement) -> float:
    return max((abs(c) for c in a.terms.values()), default=0.0)


def ae_support_classes(a: AlgebraElement):
    """List of (cycle type, term count, max |coeff|), sorted by cycle type."""
    count = Counter()
    biggest = defaultdict(float)
    for g, c in a.terms.items():
        ct = cycle_type(g)
        count[ct] += 1
        biggest[ct] = max(biggest[ct], abs(c))
    return [(ct, count[ct], biggest[ct]) for ct in sorted(count, reverse=True)]


def ae_prune(a: AlgebraElement, threshold: float) -> AlgebraElement:
    """Drop terms whose magnitude is below threshold * inf-norm."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    cut = threshold * ae_inf_norm(a)
    return AlgebraElement(a.n_sites, {g: c for g, c in a.terms.items() if abs(c) >= cut})


def class_sum(n: int, ctype: Sequence[int]) -> AlgebraElement:
    """Sum of all permutations of S_n with the given cycle type."""
    from itertools import permutations

    target = tuple(sorted(ctype, reverse=True))
    return AlgebraElement(
        n, {p: 1.0 for p in permutations(range(1, n + 1)) if cycle_type(p) == target}
    )
