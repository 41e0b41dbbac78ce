"""Closed-form quantities for the 3D Newtonian potential operator on a ball.

Eigenvalues are ``lam = a**2 / mu**2`` with ``mu`` a root of the three-term
half-integer Bessel equation of :func:`ball_equation`.  Eigenfunction
integrals follow the radial/angular factorisation with the unnormalised
real harmonics ``P_l^m(cos t) cos(m phi)`` / ``sin(|m| phi)``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError
from .specfun import BesselOrder, adaptive_quad, bessel_j, bessel_j_array, refine_root, scan_brackets

SCAN_EPS = 1e-8


@dataclass(frozen=True)
class BallEigenpair:
    l: int
    j: int
    mu: float
    lam: float
    m: int = 0


@dataclass(frozen=True)
class AngularIntegral:
    l: int
    degree: int
    value: float


def ball_equation(l: int, x: float) -> float:
    """(2l+1) J_{l+1/2}(x) + (x/2) (J_{l-1/2}(x) - J_{l+3/2}(x))."""
    return (2 * l + 1) * bessel_j(BesselOrder.half(l), x) + 0.5 * x * (
        bessel_j(BesselOrder.half(l - 1), x) - bessel_j(BesselOrder.half(l + 1), x)
    )


@functools.lru_cache(maxsize=256)
def _halfint_roots(l: int, j_max: int) -> tuple[float, ...]:
    f = functools.partial(ball_equation, l)
    stop = SCAN_EPS + (j_max + l + 2) * math.pi
    roots = []
    for lo, hi in scan_brackets(f, SCAN_EPS, stop, math.pi / 8, j_max):
        mu = refine_root(f, lo, hi)
        roots.append(mu)
    return tuple(roots)


def solve_mu_halfint(l: int, j_max: int) -> list[float]:
    """First ``j_max`` positive roots of :func:`ball_equation`."""
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    if j_max < 1:
        raise DomainError(f"j_max must be >= 1, got {j_max}")
    return list(_halfint_roots(int(l), int(j_max)))


def ball_eigenvalues(a: float, l_max: int, j_max: int, expand_m: bool = False) -> list[BallEigenpair]:
    """Eigenpairs for l = 0..l_max, j = 1..j_max sorted by decreasing lambda.

    With ``expand_m`` every (l, j) is repeated for m = -l..l; otherwise only
    the m = 0 representative is returned.
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    pairs = []
    for l in range(l_max + 1):
        for j, mu in enumerate(solve_mu_halfint(l, j_max), start=1):
            lam = a * a / mu**2
            ms = range(-l, l + 1) if expand_m else (0,)
            pairs.extend(BallEigenpair(l, j, mu, lam, m) for m in ms)
    return sorted(pairs, key=lambda p: (-p.lam, p.l, p.j, abs(p.m), p.m))


def _cos_integral_fraction(l: int) -> Fraction:
    """Integral of P_{2l+1}(cos t) cos t over [0, pi], divided by pi.

    Expands P_n with its explicit monomial series and integrates each
    cos**(2p) t exactly (Wallis), in rational arithmetic.
    """
    n = 2 * l + 1
    f = math.factorial
    total = Fraction(0)
    for m in range(l + 1):
        p = l + 1 - m
        coeff = Fraction(f(2 * n - 2 * m), 2**n * f(m) * f(n - m) * f(n - 2 * m))
        wallis = Fraction(f(2 * p), 4**p * f(p) ** 2)
        total += (-1) ** m * coeff * wallis
    return total


def legendre_cos_integral(l: int, even: bool = False) -> AngularIntegral:
    """Integral of P_d^0(cos t) cos t over [0, pi] for d = 2l+1 (or d = 2l
    when ``even``, where it vanishes by symmetry)."""
    if l < 0:
        raise DomainError(f"l must be >= 0, got {l}")
    if even:
        return AngularIntegral(l, 2 * l, 0.0)
    return AngularIntegral(l, 2 * l + 1, float(_cos_integral_fraction(l)) * math.pi)


def ball_integral_parts(l: int, j: int, a: float) -> tuple[float, float]:
    """(integral, squared L2 norm) of u_{2l+1,j,0} on the ball of radius a.

    Radial parts after the substitution s = a r / mu:
    ``2 pi (mu/a)**3 * int_0^{a**2/mu} J_{2l+3/2}(s) s**2 ds * A`` and
    ``2 pi (mu/a)**3 * int_0^{a**2/mu} J_{2l+3/2}(s)**2 s**2 ds * B`` with
    A from :func:`legendre_cos_integral` and B = 2/(2d+1) the squared
    norm of P_d on [-1, 1].
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    if j < 1:
        raise DomainError(f"j must be >= 1, got {j}")
    degree = 2 * l + 1
    order = BesselOrder.half(degree)
    mu = solve_mu_halfint(degree, j)[j - 1]
    upper = a * a / mu
    r1 = adaptive_quad(lambda s: bessel_j_array(order, s) * s * s, 0.0, upper, abs_tol=0.0, rel_tol=1e-13)
    r2 = adaptive_quad(
        lambda s: bessel_j_array(order, s) ** 2 * s * s, 0.0, upper, abs_tol=0.0, rel_tol=1e-13
    )
    scale = 2.0 * math.pi * (mu / a) ** 3
    angular = legendre_cos_integral(l).value
    return scale * r1 * angular, scale * r2 * 2.0 / (2 * degree + 1)


def ball_normalized_integral(l: int, j: int, a: float, m: int = 0, even: bool = False) -> float:
    """Integral of the normalised eigenfunction v_{2l+1,j,m}; zero for m != 0
    and for even degrees."""
    if m != 0 or even:
        return 0.0
    num, norm_sq = ball_integral_parts(l, j, a)
    return num / math.sqrt(norm_sq)
