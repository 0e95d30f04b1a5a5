"""Weierstrass functions on the rectangular lattice Z*N + Z*i*kappa.

All evaluators use q-series (Jacobi theta function expansions). When the
imaginary period is shorter than the real one the lattice is rotated by a
quarter turn first, so the working nome never exceeds exp(-pi).

The rotation uses the homogeneity laws of the Weierstrass functions with
lambda = -i, which maps Z*N + Z*i*kappa onto Z*kappa + Z*i*N::

    wp(z)    = -wp_w(-i z)
    wp'(z)   =  i wp'_w(-i z)
    zeta(z)  = -i zeta_w(-i z)
    sigma(z) =  i sigma_w(-i z)

Functions accept a Python scalar or a numpy array of complex arguments and
return the same kind of object.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    NonFiniteArgument,
    NonPositivePeriod,
    PoleProximity,
    SpectralParameterOnLattice,
)

__all__ = [
    "Lattice",
    "make_lattice",
    "wp",
    "wp_prime",
    "wp_regular",
    "zeta_w",
    "sigma",
    "f_spectral",
    "wp_lattice_sum_oracle",
    "eisenstein_oracle",
    "reduce_to_cell",
    "distance_to_lattice",
    "POLE_MARGIN",
]

POLE_MARGIN = 1e-6
SERIES_RTOL = 1e-17
_MAX_TERMS = 200


@dataclass(frozen=True)
class Lattice:
    """Rectangular period lattice with derived invariants.

    ``real_period`` and ``kappa`` are the full periods; ``tau`` and
    ``nome_q`` refer to the working frame, i.e. after the optional swap.
    """

    real_period: float
    kappa: float
    tau: complex
    nome_q: complex
    swapped: bool
    g2: float
    g3: float
    eta1: complex
    laurent_a: float
    nterms: int = field(repr=False)
    # working frame: real period, imaginary period, eta at both half-periods
    _lw: float = field(repr=False)
    _kw: float = field(repr=False)
    _eta1w: float = field(repr=False)
    _eta3w: complex = field(repr=False)
    legendre_residual: float = field(repr=False, default=0.0)

    @property
    def scale(self):
        """Natural magnitude of wp on this lattice, used for absolute tolerances."""
        return (math.pi / min(self.real_period, self.kappa)) ** 2


def _series_length(q):
    n = 1
    while (n + 1) ** 3 * q ** (n + 1) >= SERIES_RTOL and n < _MAX_TERMS:
        n += 1
    return n


def _theta_constants(q, nterms):
    th2 = 0.0
    th3 = 1.0
    th4 = 1.0
    for n in range(nterms + 2):
        th2 += 2.0 * q ** ((n + 0.5) ** 2)
    for n in range(1, nterms + 2):
        th3 += 2.0 * q ** (n * n)
        th4 += 2.0 * (-1) ** n * q ** (n * n)
    return th2, th3, th4


def make_lattice(real_period, kappa):
    """Build the lattice Z*real_period + Z*i*kappa with its invariants."""
    real_period = float(real_period)
    kappa = float(kappa)
    if not (0 < real_period < math.inf and 0 < kappa < math.inf):
        raise NonPositivePeriod(
            f"periods must be positive and finite, got real_period={real_period}, kappa={kappa}"
        )
    swapped = kappa < real_period
    lw, kw = (kappa, real_period) if swapped else (real_period, kappa)
    tau = 1j * kw / lw
    q = math.exp(-math.pi * kw / lw)
    nterms = _series_length(q)
    w1 = lw / 2.0

    s = 0.0
    for n in range(1, nterms + 1):
        s += n * q ** (2 * n) / (1.0 - q ** (2 * n))
    eta1w = math.pi**2 / (12.0 * w1) * (1.0 - 24.0 * s)
    # Legendre relation fixes eta at the imaginary half-period
    w3 = 0.5j * kw
    eta3w = (eta1w * w3 - 0.5j * math.pi) / w1

    th2, th3, th4 = _theta_constants(q, nterms)
    c = math.pi**2 / (12.0 * w1 * w1)
    e1 = c * (th3**4 + th4**4)
    e2 = c * (th2**4 - th4**4)
    e3 = -c * (th2**4 + th3**4)
    g2 = 2.0 * (e1 * e1 + e2 * e2 + e3 * e3)
    g3 = 4.0 * e1 * e2 * e3
    if swapped:
        g3 = -g3

    partial = Lattice(
        real_period=real_period,
        kappa=kappa,
        tau=complex(tau),
        nome_q=complex(q),
        swapped=swapped,
        g2=float(g2),
        g3=float(g3),
        eta1=0j,
        laurent_a=float(g2) / 20.0,
        nterms=nterms,
        _lw=lw,
        _kw=kw,
        _eta1w=eta1w,
        _eta3w=complex(eta3w),
    )
    eta1 = complex(_zeta_direct(np.asarray(real_period / 2.0 + 0j), partial))
    eta2 = complex(_zeta_direct(np.asarray(0.5j * kappa), partial))
    legendre = eta1 * 1j * kappa - eta2 * real_period
    resid = abs(legendre - 1j * math.pi) / math.pi
    return Lattice(
        real_period=real_period,
        kappa=kappa,
        tau=complex(tau),
        nome_q=complex(q),
        swapped=swapped,
        g2=float(g2),
        g3=float(g3),
        eta1=eta1,
        laurent_a=float(g2) / 20.0,
        nterms=nterms,
        _lw=lw,
        _kw=kw,
        _eta1w=eta1w,
        _eta3w=complex(eta3w),
        legendre_residual=resid,
    )


# ---------------------------------------------------------------------------
# argument handling


def _as_array(z):
    arr = np.asarray(z, dtype=complex)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteArgument("arguments must be finite")
    return arr


def _out(arr, like):
    if np.ndim(like) == 0 and not isinstance(like, np.ndarray):
        return complex(arr)
    return arr


def reduce_to_cell(z, L):
    """Representative of z in the fundamental rectangle [0, N) x [0, kappa)."""
    arr = _as_array(z)
    re = np.mod(arr.real, L.real_period)
    im = np.mod(arr.imag, L.kappa)
    # np.mod can return the period itself for tiny negative inputs
    re = np.where(re >= L.real_period, 0.0, re)
    im = np.where(im >= L.kappa, 0.0, im)
    return _out(re + 1j * im, z)


def distance_to_lattice(z, L):
    """Euclidean distance from z to the nearest lattice point."""
    arr = _as_array(z)
    re = np.mod(arr.real, L.real_period)
    im = np.mod(arr.imag, L.kappa)
    dx = np.minimum(re, L.real_period - re)
    dy = np.minimum(im, L.kappa - im)
    d = np.hypot(dx, dy)
    if np.ndim(z) == 0 and not isinstance(z, np.ndarray):
        return float(d)
    return d


def _check_poles(arr, L, pole_margin, what="z"):
    if pole_margin is None:
        return
    d = distance_to_lattice(arr, L)
    dmin = float(np.min(d)) if np.size(d) else math.inf
    if dmin <= pole_margin:
        bad = arr.flat[int(np.argmin(d))] if np.ndim(arr) else complex(arr)
        raise PoleProximity(
            f"{what}={bad} lies within {pole_margin:g} of a lattice point",
            argument=bad,
            distance=dmin,
        )


def _to_working(arr, L):
    return -1j * arr if L.swapped else arr


def _split_working(zw, L):
    """Split a working-frame argument into (centered cell point, m, n)."""
    m = np.rint(zw.real / L._lw)
    n = np.rint(zw.imag / L._kw)
    return zw - m * L._lw - 1j * n * L._kw, m, n


# ---------------------------------------------------------------------------
# q-series on the centered working cell


def _coeffs(L):
    q2 = L.nome_q.real ** 2
    return [(n, q2**n / (1.0 - q2**n)) for n in range(1, L.nterms + 1)]


def _wp_cell(zc, L):
    w1 = L._lw / 2.0
    k = math.pi / (2.0 * w1)
    v = k * zc
    s = np.sin(v)
    acc = 1.0 / (s * s)
    for n, c in _coeffs(L):
        acc = acc - 8.0 * n * c * np.cos(2 * n * v)
    return -L._eta1w / w1 + k * k * acc


def _bernoulli_even(count):
    """Exact B_0, B_2, ..., B_{2 count - 2} (Akiyama-Tanigawa)."""
    from fractions import Fraction

    top = 2 * count
    a = [Fraction(0)] * (top + 1)
    out = []
    for m in range(top + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        if m % 2 == 0:
            out.append(a[0])
    return out[:count]


# 1/sin^2 v - 1/v^2 - 1/3 = sum_j c_j v^(2j); 16 terms reach full precision
# for |v| < 1/2
_INV_SIN2_TAIL = [
    float((-1) ** (n + 1) * 4**n * (2 * n - 1) * b / math.factorial(2 * n))
    for n, b in enumerate(_bernoulli_even(18))
][2:]


def _inv_sin2_tail(v):
    small = np.abs(v) < 0.5
    vs = np.where(small, v, 0.0)
    v2 = vs * vs
    series = 0.0
    for c in reversed(_INV_SIN2_TAIL):
        series = (series + c) * v2
    vd = np.where(small, 1.0, v)
    s = np.sin(vd)
    direct = 1.0 / (s * s) - 1.0 / (vd * vd) - 1.0 / 3.0
    return np.where(small, series, direct)


def _wp_regular_cell(zc, L):
    # wp_w(z) - 1/z^2 with the constant term removed analytically: it is
    # zero because the regular part vanishes at the origin
    w1 = L._lw / 2.0
    k = math.pi / (2.0 * w1)
    v = k * zc
    acc = _inv_sin2_tail(v)
    for n, c in _coeffs(L):
        s = np.sin(n * v)
        acc = acc + 16.0 * n * c * s * s
    return k * k * acc


def _wp_prime_cell(zc, L):
    w1 = L._lw / 2.0
    k = math.pi / (2.0 * w1)
    v = k * zc
    s = np.sin(v)
    acc = -2.0 * np.cos(v) / (s * s * s)
    for n, c in _coeffs(L):
        acc = acc + 16.0 * n * n * c * np.sin(2 * n * v)
    return k**3 * acc


def _zeta_cell(zc, L):
    w1 = L._lw / 2.0
    k = math.pi / (2.0 * w1)
    v = k * zc
    acc = np.cos(v) / np.sin(v)
    for n, c in _coeffs(L):
        acc = acc + 4.0 * c * np.sin(2 * n * v)
    return L._eta1w * zc / w1 + k * acc


def _sigma_cell(zc, L):
    w1 = L._lw / 2.0
    k = math.pi / (2.0 * w1)
    v = k * zc
    q2 = L.nome_q.real ** 2
    prod = np.sin(v)
    c2v = np.cos(2 * v)
    for n in range(1, L.nterms + 1):
        qn = q2**n
        prod = prod * (1.0 - 2.0 * qn * c2v + qn * qn) / (1.0 - qn) ** 2
    return np.exp(L._eta1w * zc * zc / (2.0 * w1)) * prod / k


def _zeta_direct(zw_or_z, L):
    # only used for half-period evaluations at construction time
    zw = _to_working(zw_or_z, L)
    val = _zeta_cell(zw, L)
    return -1j * val if L.swapped else val


# ---------------------------------------------------------------------------
# public evaluators


def wp(z, L, pole_margin=POLE_MARGIN):
    """Weierstrass wp(z) for the lattice L."""
    arr = _as_array(z)
    _check_poles(arr, L, pole_margin)
    zc, _, _ = _split_working(_to_working(arr, L), L)
    val = _wp_cell(zc, L)
    if L.swapped:
        val = -val
    return _out(val, z)


def wp_regular(z, L):
    """Regular part wp(z) - 1/z^2, accurate to full relative precision near 0.

    Arguments outside the centred cell fall back to the plain difference.
    """
    arr = _as_array(z)
    zw = _to_working(arr, L)
    zc, m, n = _split_working(zw, L)
    home = (m == 0) & (n == 0)
    val = np.where(home, _wp_regular_cell(np.where(home, zc, 0.5), L), 0.0)
    if L.swapped:
        val = -val
    if not np.all(home):
        far = ~home
        val = np.where(far, 0.0, val)
        val[far] = wp(arr[far], L) - 1.0 / (arr[far] * arr[far])
    return _out(val, z)


def wp_prime(z, L, pole_margin=POLE_MARGIN):
    """Derivative wp'(z)."""
    arr = _as_array(z)
    _check_poles(arr, L, pole_margin)
    zc, _, _ = _split_working(_to_working(arr, L), L)
    val = _wp_prime_cell(zc, L)
    if L.swapped:
        val = 1j * val
    return _out(val, z)


def zeta_w(z, L, pole_margin=POLE_MARGIN):
    """Weierstrass zeta(z), quasi-periodic with zeta' = -wp."""
    arr = _as_array(z)
    _check_poles(arr, L, pole_margin)
    zc, m, n = _split_working(_to_working(arr, L), L)
    val = _zeta_cell(zc, L) + 2.0 * m * L._eta1w + 2.0 * n * L._eta3w
    if L.swapped:
        val = -1j * val
    return _out(val, z)


def sigma(z, L):
    """Weierstrass sigma(z); entire, so no pole check."""
    arr = _as_array(z)
    zc, m, n = _split_working(_to_working(arr, L), L)
    # sigma(z + W) = (-1)^(m+n+mn) exp(2 eta_W (zc + W/2)) sigma(zc)
    shift = m * L._lw + 1j * n * L._kw
    eta_shift = m * L._eta1w + n * L._eta3w
    sign = np.where(((m + n + m * n) % 2) == 0, 1.0, -1.0)
    val = sign * np.exp(2.0 * eta_shift * (zc + shift / 2.0)) * _sigma_cell(zc, L)
    if L.swapped:
        val = 1j * val
    return _out(val, z)


def f_spectral(x, alpha, L, pole_margin=POLE_MARGIN):
    """Lax-matrix entry f(x) = sigma(x + alpha) / (sigma(x) sigma(alpha)) * exp(-x zeta(alpha))."""
    if distance_to_lattice(complex(alpha), L) <= pole_margin:
        raise SpectralParameterOnLattice(f"alpha={alpha} is on the lattice")
    arr = _as_array(x)
    _check_poles(arr, L, pole_margin, what="x")
    za = zeta_w(alpha, L)
    val = sigma(arr + alpha, L) / (sigma(arr, L) * sigma(alpha, L)) * np.exp(-arr * za)
    return _out(val, x)


# ---------------------------------------------------------------------------
# independent oracles: classical lattice sums, no q-series involved


def _lattice_points(L, index_bound):
    m = np.arange(-index_bound, index_bound + 1, dtype=float)
    om = m[:, None] * L.real_period + 1j * m[None, :] * L.kappa
    om = om.ravel()
    return om[om != 0]


def wp_lattice_sum_oracle(z, L, index_bound=400):
    """Symmetric partial Eisenstein sum for wp over |m|, |n| <= index_bound."""
    if index_bound < 50:
        raise ValueError("index_bound must be at least 50")
    arr = _as_array(z)
    _check_poles(arr, L, POLE_MARGIN)
    om = _lattice_points(L, index_bound)
    inv2 = 1.0 / (om * om)
    flat = arr.ravel()
    out = np.empty(flat.shape, dtype=complex)
    for i, zi in enumerate(flat):
        d = zi - om
        out[i] = 1.0 / (zi * zi) + np.sum(1.0 / (d * d) - inv2)
    return _out(out.reshape(arr.shape), z)


def eisenstein_oracle(L, index_bound=200):
    """Truncated g2 = 60 sum' Omega^-4 and g3 = 140 sum' Omega^-6."""
    om = _lattice_points(L, index_bound)
    inv2 = 1.0 / (om * om)
    inv4 = inv2 * inv2
    return 60.0 * np.sum(inv4), 140.0 * np.sum(inv4 * inv2)
