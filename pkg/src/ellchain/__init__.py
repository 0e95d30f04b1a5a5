"""Integrals of motion of the elliptic quantum spin chain, checked numerically."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .weierstrass import Lattice, make_lattice, wp, wp_prime, wp_regular, zeta_w, sigma, f_spectral  # noqa: F401
from .integrals import ChainConfig, IntegralSet, build_integrals, build_hamiltonian  # noqa: F401
