"""Independent reference computations used only by the tests.

Each oracle follows a different route from the library: truncated power
series with exact rational coefficients, scipy.special, brute-force grids
or Monte Carlo sampling.
"""

import math
from fractions import Fraction

import numpy as np
from scipy import integrate, special


def series_j(n: int, x: float, terms: int = 60) -> float:
    """Truncated power series of J_n at integer order."""
    total = 0.0
    for m in range(terms):
        total += (-1) ** m * (x / 2) ** (2 * m + n) / (math.factorial(m) * math.factorial(m + n))
    return total


def bisect(f, lo, hi, tol=1e-15):
    flo = f(lo)
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def jv(nu, x):
    return special.jv(nu, x)


def j_zero(n: int, j: int) -> float:
    return float(special.jn_zeros(n, j)[-1])


def gauss(f, lo, hi, n=64):
    x, w = np.polynomial.legendre.leggauss(n)
    half = 0.5 * (hi - lo)
    return half * float(np.sum(w * f(lo + half * (x + 1))))


def quad(f, lo, hi, **kw):
    return integrate.quad(f, lo, hi, epsabs=1e-13, epsrel=1e-12, limit=200, **kw)[0]


def legendre_cos_exact(degree: int) -> Fraction:
    """Integral over [0, pi] of P_d(cos t) cos t, divided by pi, from the
    monomial coefficients of P_d (Rodrigues) and Wallis' integrals."""
    # coefficients of (x^2 - 1)^d, differentiated d times, / (2^d d!)
    poly = np.polynomial.Polynomial([-1, 0, 1]) ** degree
    coeffs = poly.deriv(degree).coef / (2**degree * math.factorial(degree))
    total = Fraction(0)
    for power, c in enumerate(coeffs):
        k = power + 1  # times the extra cos t
        if k % 2:
            continue
        wallis = Fraction(math.factorial(k), 2**k * math.factorial(k // 2) ** 2)
        total += Fraction(round(c * 2**degree * math.factorial(degree)), 2**degree * math.factorial(degree)) * wallis
    return total


def ball_sign_scan(l: int, count: int, step: float = 1e-3):
    """Roots of the ball equation on a dense grid, using scipy's J_nu."""

    def f(x):
        return (2 * l + 1) * jv(l + 0.5, x) + 0.5 * x * (jv(l - 0.5, x) - jv(l + 1.5, x))

    x = np.arange(step, 60.0, step)
    y = f(x)
    idx = np.nonzero(np.sign(y[:-1]) * np.sign(y[1:]) < 0)[0][:count]
    return [bisect(f, x[i], x[i + 1]) for i in idx]


def monte_carlo_disc_self_integral(r: float, samples: int = 10**7, seed: int = 20240601, chunk: int = 10**6):
    """Mean of -log|x - y| / (2 pi) for uniform x, y in a disc, times area**2.

    Returns (estimate, standard error)."""
    rng = np.random.default_rng(seed)
    s = s2 = 0.0
    done = 0
    while done < samples:
        m = min(chunk, samples - done)

        def draw():
            rho = r * np.sqrt(rng.random(m))
            t = 2 * np.pi * rng.random(m)
            return rho * np.cos(t), rho * np.sin(t)

        x1, y1 = draw()
        x2, y2 = draw()
        f = -np.log(np.hypot(x1 - x2, y1 - y2)) / (2 * np.pi)
        s += f.sum()
        s2 += (f * f).sum()
        done += m
    mean = s / samples
    var = s2 / samples - mean**2
    area2 = (np.pi * r * r) ** 2
    return mean * area2, math.sqrt(var / samples) * area2


def disc_k0_root_quad(a: float, j: int, weight: float = 1.0) -> float:
    """k = 0 disc root from scipy Bessel values and Dixon brackets."""

    def f(x):
        return special.j0(x) + weight * math.log(a) * x * special.j1(x)

    lo = 1e-8 if j == 1 else j_zero(1, j - 1)
    return bisect(f, lo, j_zero(0, j))
