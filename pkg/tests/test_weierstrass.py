import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ellchain.errors import NonFiniteArgument, NonPositivePeriod, PoleProximity, SpectralParameterOnLattice
from ellchain.weierstrass import (
    distance_to_lattice,
    eisenstein_oracle,
    f_spectral,
    make_lattice,
    reduce_to_cell,
    sigma,
    wp,
    wp_lattice_sum_oracle,
    wp_prime,
    wp_regular,
    zeta_w,
)

# Reference values from Jacobi theta functions at 40 digits (mpmath), independent
# of the q-series used by the package.
THETA_REFERENCE = [
    # (N, kappa, z, wp, wp', zeta, sigma)
    (5, 2.5, 1.3 + 0j, 0.7870963935387477 + 0j, -0.7042760433014222 + 0j,
     0.6717501029999918 + 0j, 1.256522737387024 + 0j),
    (5, 5, 1.3 + 0.6j, 0.33603214711660717 - 0.3472754835630011j, -0.14633474027753857 + 0.676461435527353j,
     0.6302815444844035 - 0.3069459982010229j, 1.3042380033292247 + 0.5937128253700503j),
    (6, 3, 0.7 + 0.4j, 0.8098371872522799 - 1.2856010034576424j, 0.05768625065840622 + 3.8535816464745283j,
     1.0759840651005277 - 0.628879601973275j, 0.7018561858921302 + 0.3987712165227873j),
    (7, 35, 2.2 + 1.1j, 0.10752854715580444 - 0.11597209776169805j, -0.012414331927504048 + 0.1441294948107123j,
     0.36249407210984114 - 0.19611745430691688j, 2.2153855421712736 + 1.085332564895981j),
    (8, 4, 3.1 - 1.7j, 0.1878932713152604 + 0.00786007949624963j, 0.024411653793806578 - 0.013581818711073166j,
     0.1379841118876245 + 0.35524369771805164j, 3.549196127917264 - 0.9248937531586334j),
]  # fmt: skip

# (N, kappa, g2, g3) from the same theta-function oracle
INVARIANTS_REFERENCE = [
    (5, 2.5, 3.3276798742745157, -1.1647194352703112),
    (5, 10, 0.20797999214215723, 0.018198741176098612),
    (6, 3, 1.6047838899857811, -0.3900621822723468),
    (7, 35, 0.05409362267640338, 0.002421236537092412),
]

GRID = [(n, k) for n in (5, 6, 7, 8) for k in (n / 2, n, 5 * n)]


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def random_points(L, count, seed, margin=0.3):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        z = complex(rng.uniform(0, L.real_period), rng.uniform(0, L.kappa))
        if distance_to_lattice(z, L) > margin:
            out.append(z)
    return np.array(out)


class TestLattice:
    def test_swap_below_square(self):
        L = make_lattice(5, 2.5)
        assert L.swapped
        assert L.nome_q == pytest.approx(math.exp(-math.pi * 5 / 2.5), rel=1e-14)

    def test_no_swap_above_square(self):
        L = make_lattice(5, 10)
        assert not L.swapped
        assert L.nome_q == pytest.approx(math.exp(-2 * math.pi), rel=1e-14)

    @pytest.mark.parametrize("n,kappa,g2,g3", INVARIANTS_REFERENCE)
    def test_invariants_match_theta_reference(self, n, kappa, g2, g3):
        L = make_lattice(n, kappa)
        assert rel(L.g2, g2) < 1e-13
        assert rel(L.g3, g3) < 1e-13

    def test_invariants_match_eisenstein_sums(self):
        L = make_lattice(5, 2.5)
        g2, g3 = eisenstein_oracle(L, 200)
        assert rel(L.g2, g2) < 1e-6
        assert rel(L.g3, g3) < 1e-6

    def test_square_lattice_has_vanishing_g3(self):
        L = make_lattice(6, 6)
        assert abs(L.g3) < 1e-14 * L.g2**1.5

    @pytest.mark.parametrize("n,kappa", GRID)
    def test_legendre_relation(self, n, kappa):
        assert make_lattice(n, kappa).legendre_residual < 1e-10

    @pytest.mark.parametrize("bad", [(0, 1), (-1, 2), (5, 0), (5, -3), (float("nan"), 1), (5, float("inf"))])
    def test_rejects_bad_periods(self, bad):
        with pytest.raises(NonPositivePeriod):
            make_lattice(*bad)


class TestThetaReference:
    @pytest.mark.parametrize("row", THETA_REFERENCE, ids=lambda r: f"N{r[0]}k{r[1]}")
    def test_all_four_functions(self, row):
        n, kappa, z, p, dp, zt, sg = row
        L = make_lattice(n, kappa)
        assert rel(wp(z, L), p) < 1e-13
        assert rel(wp_prime(z, L), dp) < 1e-13
        assert rel(zeta_w(z, L), zt) < 1e-13
        assert rel(sigma(z, L), sg) < 1e-13


class TestWp:
    def test_matches_lattice_sum(self):
        L = make_lattice(5, 2.5)
        assert rel(wp(1.3, L), wp_lattice_sum_oracle(1.3, L, 400)) < 1e-4

    @pytest.mark.parametrize("n,kappa", GRID)
    def test_lattice_sum_on_grid(self, n, kappa):
        L = make_lattice(n, kappa)
        z = random_points(L, 3, seed=n)
        assert np.max(np.abs(wp(z, L) - wp_lattice_sum_oracle(z, L, 400)) / np.abs(wp(z, L))) < 1e-4

    def test_scalar_returns_python_complex(self):
        assert isinstance(wp(1.3, make_lattice(5, 5)), complex)

    def test_real_on_real_axis(self):
        L = make_lattice(5, 2.5)
        assert abs(wp(1.3, L).imag) < 1e-12

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.05, 0.95), st.floats(0.05, 0.95))
    def test_even_and_periodic(self, a, b):
        L = make_lattice(6, 3)
        z = complex(a * L.real_period, b * L.kappa)
        if distance_to_lattice(z, L) < 0.05:
            return
        v = wp(z, L)
        assert rel(wp(-z, L), v) < 1e-12
        assert rel(wp(z + L.real_period, L), v) < 1e-12
        assert rel(wp(z + 1j * L.kappa, L), v) < 1e-12

    def test_pole_raises(self):
        L = make_lattice(5, 5)
        with pytest.raises(PoleProximity) as info:
            wp(5.0, L)
        assert info.value.distance < 1e-6

    def test_non_finite_raises(self):
        with pytest.raises(NonFiniteArgument):
            wp(complex("nan"), make_lattice(5, 5))


class TestWpPrime:
    def test_vanishes_at_half_period(self):
        L = make_lattice(5, 2.5)
        assert abs(wp_prime(L.real_period / 2, L)) < 1e-10 * L.scale

    @pytest.mark.parametrize("n,kappa", GRID)
    def test_differential_equation(self, n, kappa):
        L = make_lattice(n, kappa)
        z = random_points(L, 100, seed=7, margin=0.05)
        p, dp = wp(z, L), wp_prime(z, L)
        lhs, rhs = dp**2, 4 * p**3 - L.g2 * p - L.g3
        mass = np.abs(lhs) + 4 * np.abs(p) ** 3 + abs(L.g2) * np.abs(p) + abs(L.g3)
        assert np.max(np.abs(lhs - rhs) / mass) < 1e-9

    def test_odd(self):
        L = make_lattice(7, 3.5)
        z = random_points(L, 20, seed=2)
        assert np.allclose(wp_prime(-z, L), -wp_prime(z, L), rtol=1e-12, atol=0)

    def test_derivative_of_wp(self):
        L = make_lattice(6, 6)
        z, h = 1.1 + 0.7j, 1e-5
        fd = (wp(z + h, L) - wp(z - h, L)) / (2 * h)
        assert rel(fd, wp_prime(z, L)) < 1e-8


class TestZeta:
    def test_odd(self):
        L = make_lattice(5, 2.5)
        z = random_points(L, 20, seed=3)
        assert np.allclose(zeta_w(-z, L), -zeta_w(z, L), rtol=1e-12, atol=0)

    @pytest.mark.parametrize("n,kappa", [(5, 2.5), (6, 6), (7, 35)])
    def test_quasi_periodic(self, n, kappa):
        L = make_lattice(n, kappa)
        z = 1.1 + 0.3j
        assert rel(zeta_w(z + L.real_period, L) - zeta_w(z, L), 2 * L.eta1) < 1e-9

    @pytest.mark.parametrize("n,kappa", [(5, 2.5), (6, 6), (8, 40)])
    def test_derivative_is_minus_wp(self, n, kappa):
        L = make_lattice(n, kappa)
        h = 1e-5
        for z in random_points(L, 10, seed=11):
            fd = (zeta_w(z + h, L) - zeta_w(z - h, L)) / (2 * h)
            assert abs(fd + wp(z, L)) / abs(wp(z, L)) < 1e-6

    def test_laurent_leading_term(self):
        L = make_lattice(5, 5)
        z = 1e-3 * cmath.exp(0.4j)
        # zeta(z) = 1/z - g2 z^3 / 60 + ...
        assert abs(zeta_w(z, L) - 1 / z) < 1e-8


class TestLaurent:
    @pytest.mark.parametrize("n,kappa", GRID + [(3, 3), (12, 60)])
    def test_remainder_shrinks_like_fourth_power(self, n, kappa):
        """wp(x) - 1/x^2 - a x^2 = O(x^4): halving x shrinks it at least 12 times."""
        L = make_lattice(n, kappa)
        for phase in (0.0, 0.3, 0.7, math.pi / 4):
            u = cmath.exp(1j * phase)
            r1 = abs(wp_regular(1e-2 * u, L) - L.laurent_a * (1e-2 * u) ** 2)
            r2 = abs(wp_regular(5e-3 * u, L) - L.laurent_a * (5e-3 * u) ** 2)
            assert r1 / r2 >= 12

    @pytest.mark.parametrize("n,kappa", GRID)
    def test_coefficient_is_g2_over_20(self, n, kappa):
        L = make_lattice(n, kappa)
        ests = []
        for t in (0.1, 0.05):
            z = t * cmath.exp(0.3j) * min(n, kappa) / 5
            ests.append(wp_regular(z, L) / z**2)
        # Richardson step removes the z^2 correction
        a = (4 * ests[1] - ests[0]) / 3
        assert rel(a, L.g2 / 20) < 1e-6
        assert rel(L.laurent_a, L.g2 / 20) < 1e-12

    def test_regular_part_matches_plain_difference(self):
        L = make_lattice(6, 3)
        z = random_points(L, 20, seed=12, margin=0.3)
        assert np.allclose(wp_regular(z, L), wp(z, L) - 1 / z**2, rtol=0, atol=1e-12)
        far = np.array([5.5 + 0.2j, 2.9 - 1.4j])
        assert np.allclose(wp_regular(far, L), wp(far, L) - 1 / far**2, rtol=0, atol=1e-12)

    def test_regular_part_is_even_and_small_near_origin(self):
        L = make_lattice(5, 5 / 2)
        z = 1e-4 * cmath.exp(0.9j)
        assert wp_regular(z, L) == pytest.approx(wp_regular(-z, L), rel=1e-14)
        assert abs(wp_regular(z, L)) < 1e-6


class TestSecondOrderEquation:
    @pytest.mark.parametrize("n,kappa", GRID)
    def test_finite_difference(self, n, kappa):
        """Central second difference of wp against 6 wp^2 - g2/2.

        On long cells wp is nearly constant and the right side cancels, so the
        residual is measured against the size of its two terms.
        """
        L = make_lattice(n, kappa)
        h = 1e-4
        z = random_points(L, 20, seed=13, margin=0.3)
        fd = (wp(z + h, L) - 2 * wp(z, L) + wp(z - h, L)) / h**2
        exact = 6 * wp(z, L) ** 2 - L.g2 / 2
        mass = 6 * np.abs(wp(z, L)) ** 2 + abs(L.g2) / 2
        assert np.max(np.abs(fd - exact) / mass) <= 1e-5


class TestHomogeneity:
    @pytest.mark.parametrize("lam", [0.5, 1.7, 3.0])
    @pytest.mark.parametrize("n,kappa", [(5, 2.5), (6, 6), (7, 35)])
    def test_scaling_law(self, n, kappa, lam):
        L, Ls = make_lattice(n, kappa), make_lattice(lam * n, lam * kappa)
        z = random_points(L, 20, seed=14)
        assert np.allclose(wp(lam * z, Ls), wp(z, L) / lam**2, rtol=1e-9, atol=0)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.2, 5.0), st.floats(0.1, 0.9), st.floats(0.1, 0.9))
    def test_scaling_law_random(self, lam, a, b):
        L, Ls = make_lattice(6, 4), make_lattice(lam * 6, lam * 4)
        z = complex(a * 6, b * 4)
        assert rel(wp(lam * z, Ls), wp(z, L) / lam**2) <= 1e-9


class TestReproducibility:
    def test_bit_identical(self):
        z = random_points(make_lattice(7, 3.5), 50, seed=15)
        first = [f(z, make_lattice(7, 3.5)) for f in (wp, wp_prime, zeta_w, sigma, wp_regular)]
        second = [f(z, make_lattice(7, 3.5)) for f in (wp, wp_prime, zeta_w, sigma, wp_regular)]
        for a, b in zip(first, second):
            assert a.tobytes() == b.tobytes()


class TestSigma:
    def test_odd(self):
        L = make_lattice(6, 3)
        z = random_points(L, 10, seed=4)
        assert np.allclose(sigma(-z, L), -sigma(z, L), rtol=1e-12, atol=0)

    def test_normalized_at_origin(self):
        L = make_lattice(5, 5)
        z = 1e-6
        assert rel(sigma(z, L) / z, 1.0) < 1e-9

    @pytest.mark.parametrize("n,kappa", [(5, 2.5), (6, 6), (7, 35)])
    def test_quasi_periodic(self, n, kappa):
        L = make_lattice(n, kappa)
        N = L.real_period
        z = 0.9 + 0.4j
        expected = -sigma(z, L) * cmath.exp(2 * L.eta1 * (z + N / 2))
        assert rel(sigma(z + N, L), expected) < 1e-8

    def test_log_derivative_is_zeta(self):
        L = make_lattice(5, 5)
        z, h = 1.2 + 0.5j, 1e-5
        fd = (cmath.log(sigma(z + h, L)) - cmath.log(sigma(z - h, L))) / (2 * h)
        assert rel(fd, zeta_w(z, L)) < 1e-8


class TestSpectral:
    def test_product_with_reflection(self):
        L = make_lattice(5, 5)
        alpha = 0.3 + 0.2j
        for x in random_points(L, 20, seed=5):
            lhs = f_spectral(x, alpha, L) * f_spectral(-x, alpha, L)
            assert rel(lhs, wp(alpha, L) - wp(x, L)) < 1e-8

    def test_residue_at_origin(self):
        L = make_lattice(5, 5)
        x = 1e-5
        assert rel(x * f_spectral(x, 0.3 + 0.2j, L), 1.0) < 1e-6

    def test_matches_sigma_composition(self):
        L = make_lattice(6, 3)
        x, alpha = 1.7 + 0.2j, 0.4 - 0.9j
        direct = sigma(x + alpha, L) / (sigma(x, L) * sigma(alpha, L)) * cmath.exp(-zeta_w(alpha, L) * x)
        assert rel(f_spectral(x, alpha, L), direct) < 1e-8

    def test_alpha_on_lattice_rejected(self):
        with pytest.raises(SpectralParameterOnLattice):
            f_spectral(1.0, 5.0, make_lattice(5, 5))


class TestOracle:
    def test_converges(self):
        L = make_lattice(5, 5)
        z = 1.3 + 0.4j
        a, b, c = (wp_lattice_sum_oracle(z, L, m) for m in (100, 200, 400))
        assert abs(c - b) < abs(b - a)

    def test_even(self):
        L = make_lattice(5, 5)
        z = 1.3 + 0.4j
        assert rel(wp_lattice_sum_oracle(-z, L, 100), wp_lattice_sum_oracle(z, L, 100)) < 1e-12


class TestReduction:
    def test_reduce(self):
        L = make_lattice(5, 2.5)
        assert abs(reduce_to_cell(5.3, L) - 0.3) < 1e-14

    def test_distance_at_lattice_point(self):
        assert distance_to_lattice(5.0, make_lattice(5, 2.5)) == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("n,kappa", [(5, 2.5), (6, 6), (4, 9)])
    def test_distance_brute_force(self, n, kappa):
        L = make_lattice(n, kappa)
        rng = np.random.default_rng(0)
        for _ in range(20):
            z = complex(rng.uniform(-3 * n, 3 * n), rng.uniform(-3 * kappa, 3 * kappa))
            m0, n0 = round(z.real / n), round(z.imag / kappa)
            brute = min(
                abs(z - (m * n + 1j * k * kappa))
                for m in range(m0 - 1, m0 + 2)
                for k in range(n0 - 1, n0 + 2)
            )
            assert distance_to_lattice(z, L) == pytest.approx(brute, abs=1e-12)

    def test_cell_centre(self):
        L = make_lattice(5, 2.5)
        assert distance_to_lattice(2.5 + 1.25j, L) == pytest.approx(abs(2.5 + 1.25j), rel=1e-14)
