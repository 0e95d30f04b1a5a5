"""Numerical checks of the elliptic-function identities behind commutativity.

The expressions below are transcribed term by term, without algebraic
simplification, so that the checks exercise the formulas as written.
Every ``*_terms`` function returns the list of top-level products; the
value is their sum and the gross mass is the sum of their magnitudes.
Residuals are reported relative to that mass.

Argument conventions: for the quartic coefficient R(x, y, z, v) the
arguments come from five sites via x = p-j, y = p-k, z = p-l, v = n-p;
for the cubic function Phi(x, y, z) from four sites via x = j-p, y = k-p,
z = l-p.
"""

from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import List, Optional

import numpy as np

from .errors import PoleProximity, RepeatedIndex, SamplingExhausted
from .integrals import ChainConfig, coeff_F, coeff_phi, site_values
from .weierstrass import POLE_MARGIN, distance_to_lattice, wp, wp_prime, zeta_w

__all__ = [
    "SamplePlan",
    "IdentityReport",
    "sample_torus",
    "eval_R",
    "eval_A",
    "eval_B",
    "eval_T",
    "eval_Phi",
    "eval_Phi_closed",
    "R_terms",
    "A_terms",
    "B_terms",
    "Phi_terms",
    "Phi_closed_terms",
    "T_terms",
    "check_zeta_addition",
    "check_F_forms",
    "check_sum_rule",
    "near_pole_probe",
    "run_identity_suite",
    "zeta_addition_terms",
    "S_sum",
    "check_omega_equals_R",
    "check_T_equals_Phi",
    "R_COMBOS",
    "TRIPLE_COMBOS",
]


@dataclass(frozen=True)
class SamplePlan:
    count: int = 500
    seed: int = 0
    pole_margin: float = 1e-3
    coincidence_margin: float = 1e-3
    max_attempts: int = 10_000

    def __post_init__(self):
        if self.count < 1:
            raise ValueError("count must be >= 1")
        if not (self.pole_margin > 0 and self.coincidence_margin > 0):
            raise ValueError("margins must be positive")


@dataclass
class IdentityReport:
    name: str
    samples: int
    max_abs: float
    max_rel: float
    worst_point: Optional[tuple]
    tol: float
    passed: bool = field(init=False)
    scale: float = 0.0

    def __post_init__(self):
        self.passed = bool(self.max_rel <= self.tol)

    def as_dict(self):
        return {
            "name": self.name,
            "samples": self.samples,
            "max_abs": self.max_abs,
            "max_rel": self.max_rel,
            "scale": self.scale,
            "worst_point": None if self.worst_point is None else [str(c) for c in self.worst_point],
            "tol": self.tol,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# sampling

# linear combinations whose distance to the lattice must stay above a margin;
# rows are coefficient vectors over the tuple components
R_COMBOS = np.array(
    [
        [1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1],
        [-1, 1, 0, 0], [0, -1, 1, 0], [1, 0, -1, 0],
        [1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1],
    ]
)  # fmt: skip
TRIPLE_COMBOS = np.array(
    [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, -1, 0], [1, 0, -1], [0, 1, -1]]
)


def _default_combos(arity):
    rows = [np.eye(arity, dtype=int)[i] for i in range(arity)]
    for i, j in combinations(range(arity), 2):
        r = np.zeros(arity, dtype=int)
        r[i], r[j] = 1, -1
        rows.append(r)
    return np.array(rows)


def sample_torus(plan: SamplePlan, arity: int, L, combos=None) -> np.ndarray:
    """Seeded uniform tuples on the torus, rejection-sampled against the margins.

    Returns an array of shape (plan.count, arity).  Single components must
    keep ``pole_margin`` from the lattice; any other combination listed in
    ``combos`` must keep ``coincidence_margin``.
    """
    combos = _default_combos(arity) if combos is None else np.asarray(combos)
    single = (np.abs(combos).sum(axis=1) == 1)
    margins = np.where(single, plan.pole_margin, plan.coincidence_margin)
    rng = np.random.default_rng(plan.seed)
    accepted = []
    since_last = 0
    batch = 256
    while len(accepted) < plan.count:
        pts = rng.uniform(0, L.real_period, (batch, arity)) + 1j * rng.uniform(
            0, L.kappa, (batch, arity)
        )
        vals = pts @ combos.T
        ok = np.all(distance_to_lattice(vals, L) > margins, axis=1)
        for i in range(batch):
            since_last += 1
            if ok[i]:
                accepted.append(pts[i])
                since_last = 0
                if len(accepted) == plan.count:
                    break
            elif since_last >= plan.max_attempts:
                raise SamplingExhausted(
                    f"no admissible {arity}-tuple in {plan.max_attempts} attempts"
                )
    return np.array(accepted)


# ---------------------------------------------------------------------------
# transcribed expressions


class _Ev:
    """Labelled wp / wp' / zeta evaluations that name the offending argument."""

    def __init__(self, L, pole_margin=POLE_MARGIN):
        self.L = L
        self.pm = pole_margin

    def _call(self, fn, arg, label):
        try:
            return fn(arg, self.L, self.pm)
        except PoleProximity as exc:
            raise PoleProximity(f"{label}: {exc}", exc.argument, exc.distance) from None

    def z(self, arg, label):
        return self._call(zeta_w, arg, f"zeta({label})")

    def p(self, arg, label):
        return self._call(wp, arg, f"wp({label})")

    def dp(self, arg, label):
        return self._call(wp_prime, arg, f"wp'({label})")


def R_terms(x, y, z, v, L, pole_margin=POLE_MARGIN):
    e = _Ev(L, pole_margin)
    zx, zy, zz, zv = e.z(x, "x"), e.z(y, "y"), e.z(z, "z"), e.z(v, "v")
    zyx, zzy, zxz = e.z(y - x, "y-x"), e.z(z - y, "z-y"), e.z(x - z, "x-z")
    zzx = -zxz
    zvx, zvy, zvz = e.z(v + x, "v+x"), e.z(v + y, "v+y"), e.z(v + z, "v+z")
    t1 = (2 * (zyx + zzy + zxz) * e.p(x - z, "x-z") + e.dp(x - z, "x-z")) * (
        -zvx + zx + zvz - zz
    )
    t2 = (2 * (zx + zyx - zy) * e.p(y, "y") - e.dp(y, "y")) * (zz + zv - zzy - zvy)
    t3 = (2 * (zv + zx - zvx) * e.p(v + x, "v+x") - e.dp(v + x, "v+x")) * (
        zvy - zvz - zyx + zzx
    )
    t4 = (2 * (-zvz + zv + zz) * e.p(z, "z") + e.dp(z, "z")) * (zxz + zzy - zx + zy)
    t5 = (2 * (zzy - zvz + zvy) * e.p(v + y, "v+y") + e.dp(v + y, "v+y")) * (
        zyx - zy - zv + zvx
    )
    return [t1, t2, t3, t4, t5]


def eval_R(x, y, z, v, L, pole_margin=POLE_MARGIN):
    """Quartic commutator coefficient R(x, y, z, v) as a five-product sum."""
    return sum(R_terms(x, y, z, v, L, pole_margin))


def A_terms(x, y, z, L, pole_margin=POLE_MARGIN):
    e = _Ev(L, pole_margin)
    zx, zy, zz = e.z(x, "x"), e.z(y, "y"), e.z(z, "z")
    zyx, zzx, zzy = e.z(y - x, "y-x"), e.z(z - x, "z-x"), e.z(z - y, "z-y")
    zxz, zyz = -zzx, -zzy
    return [
        2 * e.p(x, "x") * (zy - zz - zyx + zzx),
        2 * e.p(z, "z") * (zxz + zzy - zx + zy),
        2 * e.p(y, "y") * (zx + zz - 2 * zy + zyx + zyz),
        -2 * e.dp(y, "y"),
    ]


def eval_A(x, y, z, L, pole_margin=POLE_MARGIN):
    """Coefficient of 1/v in R near v = 0."""
    return sum(A_terms(x, y, z, L, pole_margin))


def B_terms(x, y, z, L, pole_margin=POLE_MARGIN):
    e = _Ev(L, pole_margin)
    zx, zy, zz = e.z(x, "x"), e.z(y, "y"), e.z(z, "z")
    zyx, zzx, zzy = e.z(y - x, "y-x"), e.z(z - x, "z-x"), e.z(z - y, "z-y")
    zxz = -zzx
    px, py, pz = e.p(x, "x"), e.p(y, "y"), e.p(z, "z")
    wpp_y = 6 * py * py - L.g2 / 2
    return [
        -e.dp(x, "x") * (zz - zy + zyx - zzx),
        e.dp(z, "z") * (zy - zx + zxz + zzy),
        e.dp(y, "y") * (zx + zz - 2 * zy - zzy + zyx),
        2 * (px - py) * (pz - py),
        -wpp_y,
    ]


def eval_B(x, y, z, L, pole_margin=POLE_MARGIN):
    """Constant term of R near v = 0."""
    return sum(B_terms(x, y, z, L, pole_margin))


def Phi_terms(x, y, z, L, pole_margin=POLE_MARGIN):
    e = _Ev(L, pole_margin)
    zx, zy, zz = e.z(x, "x"), e.z(y, "y"), e.z(z, "z")
    zxy, zzx, zyz = e.z(x - y, "x-y"), e.z(z - x, "z-x"), e.z(y - z, "y-z")
    zyx, zxz, zzy = -zxy, -zzx, -zyz
    return [
        (2 * (zxy + zy - zx) * e.p(x - y, "x-y") + e.dp(x - y, "x-y"))
        * (zzx + zzy + zx + zy - 2 * zz),
        (2 * (zzx + zx - zz) * e.p(z - x, "z-x") + e.dp(z - x, "z-x"))
        * (zyz + zyx + zx + zz - 2 * zy),
        (2 * (zyz + zz - zy) * e.p(y - z, "y-z") + e.dp(y - z, "y-z"))
        * (zxy + zxz + zy + zz - 2 * zx),
    ]


def eval_Phi(x, y, z, L, pole_margin=POLE_MARGIN):
    """Cubic commutator coefficient Phi(x, y, z), six-bracket form."""
    return sum(Phi_terms(x, y, z, L, pole_margin))


def Phi_closed_terms(x, y, z, L, pole_margin=POLE_MARGIN):
    e = _Ev(L, pole_margin)
    px, py, pz = e.p(x, "x"), e.p(y, "y"), e.p(z, "z")
    return [
        2 * e.p(x - y, "x-y") * (py - px),
        2 * e.p(x - z, "x-z") * (px - pz),
        2 * e.p(y - z, "y-z") * (pz - py),
    ]


def eval_Phi_closed(x, y, z, L, pole_margin=POLE_MARGIN):
    """Closed form of Phi in terms of wp only."""
    return sum(Phi_closed_terms(x, y, z, L, pole_margin))


def T_terms(j, k, l, p, L):
    if len({j, k, l, p}) != 4:
        raise RepeatedIndex(f"indices {(j, k, l, p)} must be mutually distinct")
    phi = lambda a, b, c: coeff_phi(a, b, c, L)  # noqa: E731
    F = lambda a, b, c: coeff_F(a, b, c, L)  # noqa: E731
    return [
        F(j, k, p) * (phi(l, j, p) - phi(k, l, p)),
        F(l, j, p) * (phi(k, l, p) - phi(j, k, p)),
        F(k, l, p) * (phi(j, k, p) - phi(l, j, p)),
    ]


def eval_T(j, k, l, p, L):
    """Site-indexed cubic coefficient built from phi and F."""
    return sum(T_terms(j, k, l, p, L))


# ---------------------------------------------------------------------------
# single-point checks


def _rel(value, terms):
    mass = sum(abs(t) for t in terms)
    return abs(value), (abs(value) / mass if mass else 0.0), mass


def check_zeta_addition(y, z, L, pole_margin=POLE_MARGIN):
    """Residual of (wp'(y) + wp'(z)) / 2 = (wp(y) - wp(z)) (zeta(z) - zeta(y) + zeta(y - z)).

    Returns (absolute residual, relative residual, gross mass).
    """
    terms = zeta_addition_terms(y, z, L, pole_margin)
    return _rel(sum(terms), terms)


def zeta_addition_terms(y, z, L, pole_margin=POLE_MARGIN):
    e = _Ev(L, pole_margin)
    rhs = (e.p(y, "y") - e.p(z, "z")) * (e.z(z, "z") - e.z(y, "y") + e.z(y - z, "y-z"))
    return [0.5 * e.dp(y, "y"), 0.5 * e.dp(z, "z"), -rhs]


def check_F_forms(j, k, l, L):
    """Residual of the equal-F chain 2 phi wp(a) + wp'(a) over a in {j-k, k-l, l-j}.

    Returns (absolute residual, relative residual, gross mass).
    """
    phi = coeff_phi(j, k, l, L)
    parts = []
    for d in (j - k, k - l, l - j):
        _, p, dp = site_values(d, L)
        parts.append((2 * phi * p, dp))
    vals = [a + b for a, b in parts]
    resid = max(abs(vals[0] - vals[1]), abs(vals[1] - vals[2]))
    mass = max(abs(a) + abs(b) for a, b in parts)
    return resid, resid / mass, mass


def S_sum(k, config_or_L, n=None):
    """S(k) = sum over p != k of wp(k - p)."""
    L = config_or_L.lattice if isinstance(config_or_L, ChainConfig) else config_or_L
    n = config_or_L.n_sites if n is None else n
    return sum(site_values(k - p, L)[1] for p in range(1, n + 1) if p != k)


def check_sum_rule(j, k, l, config: ChainConfig):
    """Sum of Phi(j-p, k-p, l-p) over p not in {j, k, l}.

    Returns (relative residual, gross mass, relative spread of S over sites).
    """
    if len({j, k, l}) != 3:
        raise RepeatedIndex(f"indices {(j, k, l)} must be mutually distinct")
    L = config.lattice
    n = config.n_sites
    total = 0j
    mass = 0.0
    for p in range(1, n + 1):
        if p in (j, k, l):
            continue
        terms = Phi_terms(float(j - p), float(k - p), float(l - p), L)
        total += sum(terms)
        mass += sum(abs(t) for t in terms)
    S = [S_sum(s, L, n) for s in range(1, n + 1)]
    spread = (max(x.real for x in S) - min(x.real for x in S)) / abs(S[0])
    return (abs(total) / mass if mass else 0.0), mass, spread


# ---------------------------------------------------------------------------
# near-pole probes


def near_pole_probe(kind, base, L, eps=1e-3, n_angles=8):
    """Relative residual of an identity on a ring of radius eps around a potential pole.

    kind is one of "R_v0", "R_vx", "R_vy", "R_vz" (R as v approaches 0, -x,
    -y or -z) or "A_x0" (A as x approaches 0).  ``base`` supplies the other
    arguments: (x, y, z) for both.  A genuine simple pole would leave a
    residual of order one relative to the gross mass; pole cancellation
    keeps it at rounding level.  Returns the array of relative residuals.
    """
    x, y, z = base
    ring = eps * np.exp(2j * np.pi * np.arange(n_angles) / n_angles)
    pm = eps / 10
    if kind.startswith("R_v"):
        centre = {"R_v0": 0.0, "R_vx": -x, "R_vy": -y, "R_vz": -z}[kind]
        terms = R_terms(x, y, z, centre + ring, L, pm)
    elif kind == "A_x0":
        terms = A_terms(ring, y, z, L, pm)
    else:
        raise ValueError(f"unknown probe {kind!r}")
    value = sum(terms)
    mass = sum(np.abs(t) for t in terms)
    return np.abs(value) / mass


# ---------------------------------------------------------------------------
# suite


def _report(name, value, terms, points, tol):
    absval = np.abs(value)
    mass = sum(np.abs(t) for t in terms)
    rel = absval / mass
    i = int(np.argmax(rel))
    return IdentityReport(
        name=name,
        samples=len(rel),
        max_abs=float(absval[i]),
        max_rel=float(rel[i]),
        worst_point=tuple(complex(c) for c in np.atleast_1d(points[i])),
        tol=tol,
        scale=float(np.max(mass)),
    )


def _index_report(name, rows, tol):
    # rows: (index tuple, abs residual, rel residual, mass)
    worst = max(rows, key=lambda r: r[2])
    return IdentityReport(
        name=name,
        samples=len(rows),
        max_abs=float(max(r[1] for r in rows)),
        max_rel=float(worst[2]),
        worst_point=worst[0],
        tol=tol,
        scale=float(max(r[3] for r in rows)),
    )


def run_identity_suite(config: ChainConfig, plan: SamplePlan = None, tol=1e-8) -> List[IdentityReport]:
    """Run every vanishing identity on seeded samples and exhaustive index sets."""
    L = config.lattice
    n = config.n_sites
    plan = plan or SamplePlan(count=config.samples, seed=config.seed)
    reports = []

    pts = sample_torus(plan, 2, L)
    y, z = pts[:, 0], pts[:, 1]
    terms = zeta_addition_terms(y, z, L)
    reports.append(_report("zeta_addition", sum(terms), terms, pts, tol))

    rows = []
    for j, k, l in permutations(range(1, n + 1), 3):
        a, r, m = check_F_forms(j, k, l, L)
        rows.append(((j, k, l), a, r, m))
    reports.append(_index_report("F_forms", rows, tol))

    pts3 = sample_torus(SamplePlan(plan.count, plan.seed + 1, plan.pole_margin, plan.coincidence_margin), 3, L, TRIPLE_COMBOS)
    x, y, z = pts3.T
    for name, fn in (("A_vanishes", A_terms), ("B_vanishes", B_terms)):
        terms = fn(x, y, z, L)
        reports.append(_report(name, sum(terms), terms, pts3, tol))

    terms = Phi_terms(x, y, z, L) + [-t for t in Phi_closed_terms(x, y, z, L)]
    reports.append(_report("Phi_closed_form", sum(terms), terms, pts3, tol))

    pts4 = sample_torus(SamplePlan(plan.count, plan.seed + 2, plan.pole_margin, plan.coincidence_margin), 4, L, R_COMBOS)
    terms = R_terms(*pts4.T, L)
    reports.append(_report("R_vanishes", sum(terms), terms, pts4, tol))

    rows = []
    spreads = []
    for j, k, l in permutations(range(1, n + 1), 3):
        rel, mass, spread = check_sum_rule(j, k, l, config)
        rows.append(((j, k, l), rel * mass, rel, mass))
        spreads.append(spread)
    reports.append(_index_report("sum_rule", rows, tol))
    reports.append(
        IdentityReport(
            name="S_constancy",
            samples=n,
            max_abs=float(max(spreads)),
            max_rel=float(max(spreads)),
            worst_point=None,
            tol=min(tol, 1e-10),
        )
    )
    return reports


# ---------------------------------------------------------------------------
# site substitutions: the continuous functions against the site-indexed sums

# position of each R product among the five products of omega_terms
_R_TO_OMEGA = (0, 3, 1, 4, 2)


def check_omega_equals_R(config: ChainConfig):
    """Compare omega_coeff(j,k,l,n,p) with R(p-j, p-k, p-l, n-p) over all 5-tuples.

    Both sides vanish, so the sums alone say little; the five products are
    also compared one by one, since each is individually nonzero.
    Residuals are relative to the largest gross mass over all tuples.
    Returns (relative residual of the sums, relative residual term by term).
    """
    from .commutator import omega_terms

    L = config.lattice
    phi = lambda a, b, c: coeff_phi(a, b, c, L)  # noqa: E731
    F = lambda a, b, c: coeff_F(a, b, c, L)  # noqa: E731
    tuples = np.array(list(permutations(range(1, config.n_sites + 1), 5)))
    if len(tuples) == 0:
        return 0.0, 0.0
    j, k, l, n, p = tuples.T.astype(float)
    rt = R_terms(p - j, p - k, p - l, n - p, L)
    om = np.array([omega_terms(*t, phi, F) for t in tuples.tolist()]).T
    # some tuples vanish term by term; normalize by the largest mass instead
    scale = float(np.max(sum(np.abs(t) for t in rt) + np.sum(np.abs(om), axis=0)))
    total = np.abs(sum(rt) - np.sum(om, axis=0)) / scale
    termwise = max(
        float(np.max(np.abs(rt[i] - om[m]))) / scale for i, m in enumerate(_R_TO_OMEGA)
    )
    return float(np.max(total)), termwise


def check_T_equals_Phi(config: ChainConfig):
    """Compare eval_T(j,k,l,p) with Phi(j-p, k-p, l-p) over all 4-tuples.

    Returns (relative residual of the sums, relative residual term by term).
    """
    L = config.lattice
    tuples = np.array(list(permutations(range(1, config.n_sites + 1), 4)))
    if len(tuples) == 0:
        return 0.0, 0.0
    j, k, l, p = tuples.T.astype(float)
    pt = Phi_terms(j - p, k - p, l - p, L)
    tt = np.array([T_terms(*t, L) for t in tuples.tolist()]).T
    scale = float(np.max(sum(np.abs(t) for t in pt) + np.sum(np.abs(tt), axis=0)))
    total = np.abs(sum(pt) - np.sum(tt, axis=0)) / scale
    termwise = max(float(np.max(np.abs(pt[i] - tt[i]))) / scale for i in range(3))
    return float(np.max(total)), termwise
