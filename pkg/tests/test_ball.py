import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import special

from newtpot.ball import (
    ball_equation,
    ball_eigenvalues,
    ball_integral_parts,
    ball_normalized_integral,
    legendre_cos_integral,
    solve_mu_halfint,
)
from newtpot.errors import DomainError
from newtpot.specfun import legendre_p

from oracles import ball_sign_scan, gauss, jv, legendre_cos_exact, quad

# normalized integral / a**1.5 at a = 0.5, from scipy quadrature of the same chain
RATIO_L0_J1 = 2.625011995684171
RATIO_L1_J1 = 1.3438922504506083
A_BAND = (0.5, 0.1, 0.02)


def _oracle_ratio(l, j, a):
    d = 2 * l + 1
    mu = ball_sign_scan(d, j)[j - 1]
    up = a * a / mu
    r1 = quad(lambda s: jv(d + 0.5, s) * s * s, 0, up)
    r2 = quad(lambda s: jv(d + 0.5, s) ** 2 * s * s, 0, up)
    scale = 2 * math.pi * (mu / a) ** 3
    num = scale * r1 * float(legendre_cos_exact(d)) * math.pi
    return num / math.sqrt(scale * r2 * 2 / (2 * d + 1)) / a**1.5


def test_frozen_ratios_match_oracle():
    assert _oracle_ratio(0, 1, 0.5) == pytest.approx(RATIO_L0_J1, rel=1e-10)
    assert _oracle_ratio(1, 1, 0.5) == pytest.approx(RATIO_L1_J1, rel=1e-10)


# --- roots -------------------------------------------------------------------


@pytest.mark.parametrize("l", range(6))
def test_root_residuals(l):
    for mu in solve_mu_halfint(l, 6):
        assert abs(ball_equation(l, mu)) <= 1e-10


def test_l0_roots_match_sign_scan():
    ours = solve_mu_halfint(0, 6)
    assert ours == pytest.approx(ball_sign_scan(0, 6), abs=1e-9)


def test_l0_trigonometric_form():
    # J_{1/2}, J_{-1/2}, J_{3/2} in closed trigonometric form
    for x in (0.7, 2.0, 5.5, 11.0):
        c = math.sqrt(2 / (math.pi * x))
        j_half = c * math.sin(x)
        j_mhalf = c * math.cos(x)
        j_3half = c * (math.sin(x) / x - math.cos(x))
        assert ball_equation(0, x) == pytest.approx(j_half + 0.5 * x * (j_mhalf - j_3half), abs=1e-14)


@pytest.mark.parametrize("l", [1, 2, 3])
def test_higher_roots_match_sign_scan(l):
    assert solve_mu_halfint(l, 4) == pytest.approx(ball_sign_scan(l, 4), abs=1e-9)


@pytest.mark.parametrize("l", range(5))
def test_first_root_is_order_one(l):
    assert 0.1 < solve_mu_halfint(l, 1)[0] < 20


def test_roots_increase():
    for l in range(4):
        assert np.all(np.diff(solve_mu_halfint(l, 8)) > 0)


def test_root_errors():
    with pytest.raises(DomainError):
        solve_mu_halfint(-1, 2)
    with pytest.raises(DomainError):
        solve_mu_halfint(0, 0)


# --- eigenvalues -------------------------------------------------------------


def test_eigenvalues_over_a_squared_are_constant():
    ref = {(p.l, p.j): p.lam for p in ball_eigenvalues(1.0, 3, 4)}
    for a in (0.5, 0.1, 0.02, 1e-5):
        for p in ball_eigenvalues(a, 3, 4):
            assert abs(p.lam / a**2 - ref[(p.l, p.j)]) <= 1e-12 * ref[(p.l, p.j)]


@given(st.floats(1e-6, 10.0), st.integers(0, 3), st.integers(1, 4))
def test_eigenvalue_definition(a, l_max, j_max):
    pairs = ball_eigenvalues(a, l_max, j_max)
    assert len(pairs) == (l_max + 1) * j_max
    for p in pairs:
        assert p.lam * p.mu**2 == pytest.approx(a * a, rel=1e-15)
    lams = [p.lam for p in pairs]
    assert all(x >= y for x, y in zip(lams, lams[1:]))


def test_strictly_decreasing_in_j():
    for l in range(4):
        lams = [p.lam for p in sorted(ball_eigenvalues(0.3, l, 5), key=lambda p: p.j) if p.l == l]
        assert np.all(np.diff(lams) < 0)


def test_expand_m_multiplicity():
    pairs = ball_eigenvalues(0.2, 2, 2, expand_m=True)
    assert len(pairs) == sum(2 * l + 1 for l in range(3)) * 2
    assert all(abs(p.m) <= p.l for p in pairs)


def test_eigenvalue_errors():
    with pytest.raises(DomainError):
        ball_eigenvalues(0.0, 1, 1)


# --- angular integral --------------------------------------------------------


def test_even_degree_vanishes():
    for l in range(5):
        assert legendre_cos_integral(l, even=True).value == 0.0


def test_degree_one_is_half_pi():
    assert legendre_cos_integral(0).value == pytest.approx(math.pi / 2, abs=1e-15)
    assert gauss(lambda t: np.cos(t) ** 2, 0, math.pi) == pytest.approx(math.pi / 2, abs=1e-13)


@pytest.mark.parametrize("l", [0, 1, 2])
def test_odd_degrees_match_quadrature(l):
    d = 2 * l + 1
    ref = gauss(lambda t: np.polynomial.legendre.legval(np.cos(t), [0] * d + [1]) * np.cos(t), 0, math.pi)
    val = legendre_cos_integral(l)
    assert val.degree == d
    assert val.value == pytest.approx(ref, abs=1e-10)
    assert val.value == pytest.approx(float(legendre_cos_exact(d)) * math.pi, abs=1e-12)


def test_degree_three_exact():
    assert legendre_cos_integral(1).value == pytest.approx(3 * math.pi / 16, abs=1e-15)


def test_library_legendre_agrees_inside_integrand():
    ref = gauss(lambda t: np.array([legendre_p(5, 0, c) for c in np.cos(t)]) * np.cos(t), 0, math.pi)
    assert legendre_cos_integral(2).value == pytest.approx(ref, abs=1e-10)


@pytest.mark.parametrize("l", [10, 16, 25])
def test_large_degree_exact_rational(l):
    # beyond l = 15 the factorials overflow floats; the rational sum does not
    val = legendre_cos_integral(l).value
    assert math.isfinite(val)
    ref = gauss(lambda t: special.eval_legendre(2 * l + 1, np.cos(t)) * np.cos(t), 0, math.pi, n=200)
    assert val == pytest.approx(ref, rel=1e-10)


# --- normalized integral -----------------------------------------------------


def test_nonzero_m_and_even_degree_vanish():
    assert ball_normalized_integral(0, 1, 0.1, m=1) == 0.0
    assert ball_normalized_integral(1, 1, 0.1, m=-2) == 0.0
    assert ball_normalized_integral(1, 1, 0.1, even=True) == 0.0


@pytest.mark.parametrize("l,j", [(0, 1), (0, 2), (1, 1), (1, 2)])
def test_normalized_integral_matches_oracle(l, j):
    for a in A_BAND:
        assert ball_normalized_integral(l, j, a) / a**1.5 == pytest.approx(_oracle_ratio(l, j, a), rel=1e-9)


def test_three_halves_band():
    for a in A_BAND:
        r = abs(ball_normalized_integral(0, 1, a)) / a**1.5
        assert 0.95 * RATIO_L0_J1 <= r <= 1.05 * RATIO_L0_J1
        r = abs(ball_normalized_integral(1, 1, a)) / a**1.5
        assert 0.95 * RATIO_L1_J1 <= r <= 1.05 * RATIO_L1_J1


@given(st.floats(0.01, 0.5))
def test_ratio_a_independent(a):
    assert ball_normalized_integral(0, 1, a) / a**1.5 == pytest.approx(RATIO_L0_J1, rel=1e-4)


@pytest.mark.parametrize("l", [0, 1])
def test_numerator_and_norm_powers(l):
    num1, nrm1 = ball_integral_parts(l, 1, 1.0)
    for a in (0.1, 0.02):
        num, nrm = ball_integral_parts(l, 1, a)
        assert num / num1 == pytest.approx(a ** (6 + 4 * l), rel=0.1)
        assert nrm / nrm1 == pytest.approx(a ** (9 + 8 * l), rel=0.1)


def test_parts_errors():
    with pytest.raises(DomainError):
        ball_integral_parts(0, 1, -1.0)
    with pytest.raises(DomainError):
        ball_integral_parts(0, 0, 0.1)
