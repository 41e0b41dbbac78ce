"""Special-function kernel: Bessel J of integer and half-integer order, Gamma,
associated Legendre functions, certified Bessel zeros and an adaptive
Gauss-Legendre integrator.

Everything here is a pure function of its arguments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import BracketError, DomainError, UnsupportedOrderError

SERIES_LIMIT = 8.0
MAX_ORDER = 200
_EPS = np.finfo(float).eps
_BIG = 1e250


@dataclass(frozen=True)
class BesselOrder:
    """Order tag for J_nu: ``integer`` (nu = n) or ``half`` (nu = l + 1/2).

    ``half`` accepts l = -1 so that J_{-1/2} = sqrt(2/(pi x)) cos x is reachable;
    it appears in the three-term ball equation for l = 0.
    """

    kind: str
    index: int

    def __post_init__(self):
        if self.kind == "integer":
            if self.index < 0:
                raise DomainError(f"integer Bessel order must be >= 0, got {self.index}")
        elif self.kind == "half":
            if self.index < -1:
                raise DomainError(f"half-integer index must be >= -1, got {self.index}")
        else:
            raise DomainError(f"unknown Bessel order kind {self.kind!r}")

    @classmethod
    def integer(cls, n: int) -> "BesselOrder":
        return cls("integer", int(n))

    @classmethod
    def half(cls, l: int) -> "BesselOrder":
        return cls("half", int(l))

    @property
    def nu(self) -> float:
        return float(self.index) if self.kind == "integer" else self.index + 0.5

    def shift(self, d: int) -> "BesselOrder":
        return BesselOrder(self.kind, self.index + d)


def as_order(order) -> BesselOrder:
    if isinstance(order, BesselOrder):
        return order
    if isinstance(order, (int, np.integer)):
        return BesselOrder.integer(int(order))
    nu = float(order)
    if nu == int(nu):
        return BesselOrder.integer(int(nu))
    if 2 * nu == int(2 * nu):
        return BesselOrder.half(int(math.floor(nu)))
    raise UnsupportedOrderError(f"only integer and half-integer orders are supported, got {order}")


def crossover(nu: float) -> float:
    """Argument above which integer orders switch to the Hankel expansion.

    The nu**2 / 8 term keeps the expansion's largest term modest for high
    orders; it only bites for nu > 16.
    """
    return 25.0 if nu <= 5 else max(25.0, 2.0 * nu, nu * nu / 8.0)


def _series(nu: float, x: float) -> float:
    h = 0.5 * x
    term = math.exp(nu * math.log(h) - math.lgamma(nu + 1.0))
    total = term
    q = h * h
    for k in range(1, 200):
        term *= -q / (k * (k + nu))
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total


def _hankel(nu: float, x: float) -> float:
    mu = 4.0 * nu * nu
    p, q = 1.0, 0.0
    term = 1.0
    for k in range(1, 400):
        odd = (2 * k - 1) ** 2
        ratio = (mu - odd) / (8.0 * k * x)
        if odd > mu and abs(ratio) >= 1.0:
            break  # optimal truncation of the divergent tail
        term *= ratio
        if k % 4 == 1:
            q += term
        elif k % 4 == 2:
            p -= term
        elif k % 4 == 3:
            q -= term
        else:
            p += term
        if term == 0.0 or abs(term) < 1e-17 * (abs(p) + abs(q)):
            break
    chi = x - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def _miller(n: int, x: float) -> float:
    top = max(n, x)
    m = int(top) + 20 + int(10 * top ** (1.0 / 3.0))
    m += m % 2
    after, cur = 0.0, 1.0  # J_{m+1}, J_m up to scale
    even_sum = cur if m % 2 == 0 else 0.0
    result = cur if m == n else 0.0
    for k in range(m, 0, -1):
        after, cur = cur, (2.0 * k / x) * cur - after
        if abs(cur) > _BIG:
            after /= _BIG
            cur /= _BIG
            even_sum /= _BIG
            result /= _BIG
        if k - 1 == n:
            result = cur
        if (k - 1) % 2 == 0 and k > 1:
            even_sum += cur
    return result / (cur + 2.0 * even_sum)


def _half(l: int, x: float) -> float:
    nu = l + 0.5
    if x == 0.0:
        if l == -1:
            raise DomainError("J_{-1/2} is singular at x = 0")
        return 0.0
    s = math.sqrt(2.0 / (math.pi * x))
    j_minus, j_plus = s * math.cos(x), s * math.sin(x)  # J_{-1/2}, J_{1/2}
    if l == -1:
        return j_minus
    if l == 0:
        return j_plus
    if x >= nu:
        lo, hi = j_minus, j_plus
        for k in range(l):
            lo, hi = hi, ((2 * k + 1) / x) * hi - lo
        return hi
    # downward recurrence on F_k = J_{k+1/2}, scaled by the exact trig values
    m = l + 25 + int(x)
    after, cur = 0.0, 1.0
    result = 0.0
    f0 = 0.0
    for k in range(m, -1, -1):
        after, cur = cur, ((2 * k + 1) / x) * cur - after  # cur = F_{k-1}
        if abs(cur) > _BIG:
            after /= _BIG
            cur /= _BIG
            result /= _BIG
            f0 /= _BIG
        if k - 1 == l:
            result = cur
        if k == 1:
            f0 = cur
    f_minus = cur
    if abs(j_plus) >= abs(j_minus):
        return result * (j_plus / f0)
    return result * (j_minus / f_minus)


def bessel_j(order, x: float) -> float:
    """J_nu(x) for integer or half-integer nu and x >= 0.

    Integer orders use the power series for x <= 8, Miller's backward
    recurrence up to :func:`crossover`, and the Hankel expansion beyond it.
    Half-integer orders use the closed trigonometric forms with upward
    recurrence for x >= nu (where the Hankel expansion terminates and is
    exact) and normalized downward recurrence below.
    """
    order = as_order(order)
    x = float(x)
    if not x >= 0.0:
        raise DomainError(f"Bessel argument must be >= 0, got {x}")
    if abs(order.nu) > MAX_ORDER:
        raise UnsupportedOrderError(f"order {order.nu} exceeds {MAX_ORDER}")
    if order.kind == "half":
        return _half(order.index, x)
    n = order.index
    if x == 0.0:
        return 1.0 if n == 0 else 0.0
    if x <= SERIES_LIMIT:
        return _series(float(n), x)
    if x >= crossover(n):
        return _hankel(float(n), x)
    return _miller(n, x)


def bessel_jp(order, x: float) -> float:
    """Derivative J_nu'(x) = (J_{nu-1} - J_{nu+1}) / 2 (and -J_1 for nu = 0)."""
    order = as_order(order)
    if order.kind == "integer" and order.index == 0:
        return -bessel_j(BesselOrder.integer(1), x)
    return 0.5 * (bessel_j(order.shift(-1), x) - bessel_j(order.shift(1), x))


def bessel_j_array(order, x) -> np.ndarray:
    order = as_order(order)
    arr = np.asarray(x, dtype=float)
    out = np.array([bessel_j(order, v) for v in arr.ravel()])
    return out.reshape(arr.shape)


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise DomainError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def legendre_p(l: int, m: int, x: float) -> float:
    """Associated Legendre function P_l^m(x) with the Condon-Shortley phase."""
    if l < 0 or abs(m) > l:
        raise DomainError(f"need 0 <= |m| <= l, got l={l}, m={m}")
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [-1, 1], got {x}")
    if m < 0:
        mm = -m
        factor = (-1) ** mm * math.exp(math.lgamma(l - mm + 1) - math.lgamma(l + mm + 1))
        return factor * legendre_p(l, mm, x)
    pmm = 1.0
    if m > 0:
        somx2 = math.sqrt((1.0 - x) * (1.0 + x))
        fact = 1.0
        for _ in range(m):
            pmm *= -fact * somx2
            fact += 2.0
    if l == m:
        return pmm
    pm1 = x * (2 * m + 1) * pmm
    if l == m + 1:
        return pm1
    for ll in range(m + 2, l + 1):
        pmm, pm1 = pm1, ((2 * ll - 1) * x * pm1 - (ll + m - 1) * pmm) / (ll - m)
    return pm1


def int_r_j0(x: float) -> float:
    """Closed form of the integral of r J_0(r) over [0, x], namely x J_1(x)."""
    if not x >= 0:
        raise DomainError(f"int_r_j0 requires x >= 0, got {x}")
    return x * bessel_j(1, x)


# --- root finding -----------------------------------------------------------


def scan_brackets(
    f: Callable[[float], float], start: float, stop: float, step: float, count: int
) -> list[tuple[float, float]]:
    """First ``count`` sign-change brackets of ``f`` on a uniform grid."""
    brackets = []
    x0, f0 = start, f(start)
    while len(brackets) < count:
        if x0 >= stop:
            raise BracketError(
                f"found {len(brackets)} of {count} sign changes", window=(start, stop)
            )
        x1 = x0 + step
        f1 = f(x1)
        if f1 == 0.0:
            x1 += 1e-3 * step
            f1 = f(x1)
        if f0 * f1 < 0.0:
            brackets.append((x0, x1))
        x0, f0 = x1, f1
    return brackets


def refine_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    fprime: Callable[[float], float] | None = None,
    newton_iters: int = 5,
) -> float:
    """Bisect a certified bracket, then polish with at most ``newton_iters``
    Newton steps that are only accepted while they stay inside the bracket."""
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise BracketError("endpoints do not bracket a sign change", window=(lo, hi))
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm < 0.0) == (flo < 0.0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    x = lo if abs(flo) <= abs(fhi) else hi
    if fprime is not None:
        fx = f(x)
        for _ in range(newton_iters):
            d = fprime(x)
            if fx == 0.0 or d == 0.0:
                break
            nxt = x - fx / d
            if not lo <= nxt <= hi:
                break
            fn = f(nxt)
            if abs(fn) >= abs(fx):
                break
            x, fx = nxt, fn
    return x


@dataclass(frozen=True)
class BesselZero:
    order: BesselOrder
    index: int
    value: float
    residual: float
    bracket: tuple[float, float]


@lru_cache(maxsize=4096)
def _zero_cached(order: BesselOrder, j: int) -> BesselZero:
    nu = order.nu
    f = lambda t: bessel_j(order, t)  # noqa: E731
    start = nu if nu > 0 else 1e-8
    stop = start + (j + 0.5 * abs(nu) + 2.0) * math.pi
    lo, hi = scan_brackets(f, start, stop, math.pi / 8, j)[j - 1]
    value = refine_root(f, lo, hi, fprime=lambda t: bessel_jp(order, t))
    return BesselZero(order, j, value, abs(f(value)), (lo, hi))


def bessel_zero(order, j: int) -> BesselZero:
    """j-th positive zero of J_nu, located by a pi/8 scan and bisection."""
    if j < 1:
        raise DomainError(f"zero index must be >= 1, got {j}")
    return _zero_cached(as_order(order), int(j))


# --- quadrature -------------------------------------------------------------


@lru_cache(maxsize=32)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """n-point Gauss-Legendre nodes and weights on [-1, 1]."""
    return np.polynomial.legendre.leggauss(n)


def _gl(f, lo, hi, order):
    x, w = gauss_legendre(order)
    half = 0.5 * (hi - lo)
    return half * float(np.dot(w, f(lo + half * (x + 1.0))))


def adaptive_quad(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    *,
    breaks: Sequence[float] = (),
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
    order: int = 16,
    max_depth: int = 40,
) -> float:
    """Adaptive Gauss-Legendre quadrature of a vectorized integrand.

    The interval is first split at ``breaks`` (e.g. zeros of an oscillating
    integrand); each piece is bisected until two halves agree with the whole.
    """
    pts = sorted({lo, hi, *(b for b in breaks if lo < b < hi)})

    def adapt(a, b, whole, depth):
        m = 0.5 * (a + b)
        left, right = _gl(f, a, m, order), _gl(f, m, b, order)
        both = left + right
        if abs(both - whole) <= max(abs_tol, rel_tol * abs(both)) or depth >= max_depth:
            return both
        return adapt(a, m, left, depth + 1) + adapt(m, b, right, depth + 1)

    return sum(adapt(a, b, _gl(f, a, b, order), 0) for a, b in zip(pts[:-1], pts[1:]))
