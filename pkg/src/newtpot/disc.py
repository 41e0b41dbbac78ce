"""Closed-form eigen-system of the logarithmic potential operator on a disc.

For a disc of radius ``a`` the eigenvalues are ``lam = a**2 / mu**2`` with
eigenfunctions ``J_k(mu r / a) exp(i k phi)``.  For k >= 1 the roots ``mu``
solve an a-independent Bessel equation; for k = 0 they solve

    J0(mu) + w * log(a) * mu * J1(mu) = 0,

where w = 1 matches the operator with kernel -log|x - y| / (2 pi).  The
weight is exposed as ``log_weight``; w = 2 gives the function plotted by
:func:`psi_a`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BracketError, DomainError, UnsupportedRegimeError
from .specfun import (
    adaptive_quad,
    bessel_j,
    bessel_j_array,
    bessel_zero,
    refine_root,
    scan_brackets,
)

FIRST_ROOT_EPS = 1e-8
RESIDUAL_LIMIT = 1e-10
_TIE = 1e-14


@dataclass(frozen=True)
class TranscendentalRoot:
    value: float
    index: int
    equation: str  # "k0" (parameter = a) or "k" (parameter = k)
    parameter: float
    bracket: tuple[float, float]
    residual: float


@dataclass(frozen=True)
class DiscSpec:
    a: float
    k_max: int
    j_max: int

    def __post_init__(self):
        if not 0.0 < self.a <= 1.0:
            raise UnsupportedRegimeError(f"disc radius must satisfy 0 < a <= 1, got {self.a}")
        if self.k_max < 0 or self.j_max < 1:
            raise DomainError(f"need k_max >= 0 and j_max >= 1, got {self.k_max}, {self.j_max}")


@dataclass(frozen=True)
class DiscEigenpair:
    k: int
    j: int
    mu: TranscendentalRoot
    lam: float
    int_normalized: float


def k0_equation(a: float, x: float, log_weight: float = 1.0) -> float:
    return bessel_j(0, x) + log_weight * math.log(a) * x * bessel_j(1, x)


def psi_a(a: float, x: float) -> float:
    """J0(x) + 2 log(a) x J1(x), the curve family whose roots locate the
    radial modes (sampled by the ``psi-samples`` command)."""
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    return k0_equation(a, x, 2.0)


def kgeq1_equation(k: int, x: float) -> float:
    return k * bessel_j(k, x) + 0.5 * x * (bessel_j(k - 1, x) - bessel_j(k + 1, x))


def solve_mu_k0(a: float, j_max: int, log_weight: float = 1.0) -> list[TranscendentalRoot]:
    """Roots of the k = 0 equation, bracketed by the zeros of J0 and J1.

    The first root lies in (eps, alpha_{0,1}); the j-th (j >= 2) in
    (alpha_{1,j-1}, alpha_{0,j}).
    """
    if not a > 0:
        raise DomainError(f"a must be positive, got {a}")
    if a > 1.0:
        raise UnsupportedRegimeError(
            f"a = {a} > 1 flips the sign of log(a); the bracket analysis needs a <= 1"
        )
    if j_max < 1:
        raise DomainError(f"j_max must be >= 1, got {j_max}")
    c = log_weight * math.log(a)
    if c == 0.0:
        # J0(mu) = 0: the roots are the zeros of J0 themselves
        zeros = [bessel_zero(0, j) for j in range(1, j_max + 1)]
        return [
            TranscendentalRoot(z.value, z.index, "k0", a, z.bracket, z.residual) for z in zeros
        ]

    def f(x):
        return bessel_j(0, x) + c * x * bessel_j(1, x)

    def fp(x):
        return -bessel_j(1, x) + c * x * bessel_j(0, x)

    roots = []
    for j in range(1, j_max + 1):
        lo = FIRST_ROOT_EPS if j == 1 else bessel_zero(1, j - 1).value
        hi = bessel_zero(0, j).value
        if f(lo) * f(hi) >= 0.0:
            raise BracketError(f"no sign change for k=0 root {j}", window=(lo, hi))
        mu = refine_root(f, lo, hi, fprime=fp)
        roots.append(TranscendentalRoot(mu, j, "k0", a, (lo, hi), abs(f(mu))))
    return roots


@functools.lru_cache(maxsize=256)
def _kgeq1_roots(k: int, j_max: int) -> tuple[TranscendentalRoot, ...]:
    f = functools.partial(kgeq1_equation, k)
    start = 0.5 * k
    stop = start + (j_max + k + 2) * math.pi
    out = []
    for j, (lo, hi) in enumerate(scan_brackets(f, start, stop, math.pi / 8, j_max), start=1):
        mu = refine_root(f, lo, hi)
        out.append(TranscendentalRoot(mu, j, "k", float(k), (lo, hi), abs(f(mu))))
    return tuple(out)


def solve_mu_kgeq1(k: int, j_max: int) -> list[TranscendentalRoot]:
    """First ``j_max`` roots of k J_k + (mu/2)(J_{k-1} - J_{k+1}) = 0 (k >= 1)."""
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if j_max < 1:
        raise DomainError(f"j_max must be >= 1, got {j_max}")
    return list(_kgeq1_roots(int(k), int(j_max)))


def radial_norm_sq(mu: float) -> float:
    """Integral of J0(r)**2 r over [0, mu], split at the zeros of J0."""
    breaks = []
    j = 1
    while True:
        z = bessel_zero(0, j).value
        if z >= mu:
            break
        breaks.append(z)
        j += 1
    return adaptive_quad(
        lambda r: bessel_j_array(0, r) ** 2 * r, 0.0, mu, breaks=breaks, abs_tol=1e-14
    )


def disc_eigfun_integral(pair: DiscEigenpair, a: float) -> float:
    """Integral over the disc of u_{k,j}; zero unless k = 0."""
    if pair.k != 0:
        return 0.0
    mu = pair.mu.value
    return 2.0 * math.pi * a * a / mu * bessel_j(1, mu)


def disc_normalized_integral(pair: DiscEigenpair, a: float) -> float:
    """Integral of u_{k,j} / ||u_{k,j}||; zero unless k = 0."""
    if pair.k != 0:
        return 0.0
    mu = pair.mu.value
    return math.sqrt(2.0 * math.pi) * a * bessel_j(1, mu) / math.sqrt(radial_norm_sq(mu))


def _order(p: DiscEigenpair, q: DiscEigenpair) -> int:
    if abs(p.lam - q.lam) <= _TIE * max(p.lam, q.lam):
        return -1 if (p.k, p.j) < (q.k, q.j) else int((p.k, p.j) > (q.k, q.j))
    return -1 if p.lam > q.lam else 1


def disc_eigenvalues(spec: DiscSpec, log_weight: float = 1.0) -> list[DiscEigenpair]:
    """Eigenpairs for k = 0..k_max, j = 1..j_max, sorted by decreasing lambda."""
    a = spec.a
    pairs = []
    for root in solve_mu_k0(a, spec.j_max, log_weight):
        pair = DiscEigenpair(0, root.index, root, a * a / root.value**2, 0.0)
        pairs.append(
            DiscEigenpair(0, root.index, root, pair.lam, disc_normalized_integral(pair, a))
        )
    for k in range(1, spec.k_max + 1):
        for root in solve_mu_kgeq1(k, spec.j_max):
            pairs.append(DiscEigenpair(k, root.index, root, a * a / root.value**2, 0.0))
    return sorted(pairs, key=functools.cmp_to_key(_order))


def disc_modes(a: float, count: int, log_weight: float = 1.0) -> list[DiscEigenpair]:
    """The ``count`` largest eigenvalues with multiplicity (k >= 1 modes are
    doubly degenerate: cos and sin forms).

    The (k, j) grid is enlarged until every omitted mode is provably smaller:
    omitted roots exceed min(k_max, 3 j_max - 1).
    """
    if count < 1:
        raise DomainError(f"count must be >= 1, got {count}")
    size = int(2 * math.sqrt(count)) + 3
    while True:
        pairs = disc_eigenvalues(DiscSpec(a, size, size), log_weight)
        expanded = []
        for p in pairs:
            expanded.extend([p] if p.k == 0 else [p, p])
        last_mu = expanded[count - 1].mu.value if len(expanded) >= count else math.inf
        if last_mu < min(size, 3 * size - 1):
            return expanded[:count]
        size *= 2


def distinct_values(values, rel_tol: float = 1e-9) -> list[float]:
    out: list[float] = []
    for v in values:
        if not out or abs(v - out[-1]) > rel_tol * abs(out[-1]):
            out.append(v)
    return out


def disc_lambda_array(a: float, count: int, log_weight: float = 1.0) -> np.ndarray:
    return np.array([p.lam for p in disc_modes(a, count, log_weight)])
