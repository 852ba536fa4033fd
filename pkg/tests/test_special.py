"""Special-function kernel vs independent oracles (stdlib lgamma, exact
rationals, finite differences, direct summation, brute quadrature)."""

import math
from fractions import Fraction

import numpy as np
import pytest

from cutofflab.errors import DomainError
from cutofflab.special import (JacobiParams, harmonic, jacobi_clenshaw, jacobi_deriv,
                               jacobi_eval, jacobi_norm_sq, log_gamma, zeta_even)
from cutofflab._gauss import graded_breakpoints, leggauss


def jacobi_weighted_integral(fn, alpha, beta, depth=22):
    """Brute-force int_{-1}^{1} fn(t) (1-t)^a (1+t)^b dt on panels graded at +-1."""
    breaks = graded_breakpoints(2.0, depth=depth) - 1.0
    gx, gw = leggauss(16)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        hw = (b - a) / 2
        t = (a + b) / 2 + hw * gx
        total += hw * float(gw @ (fn(t) * (1 - t) ** alpha * (1 + t) ** beta))
    return total


def test_log_gamma_values():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
    assert log_gamma(0.5) == pytest.approx(math.log(math.sqrt(math.pi)), rel=1e-14)
    assert log_gamma(10.0) == pytest.approx(math.log(362880.0), rel=1e-14)


def test_log_gamma_against_stdlib():
    for x in np.concatenate([np.linspace(0.05, 2, 40), np.linspace(2, 200, 60)]):
        assert log_gamma(float(x)) == pytest.approx(math.lgamma(float(x)), rel=1e-13,
                                                    abs=1e-13)


def test_log_gamma_recurrence():
    for x in np.arange(0.5, 51.0, 1.0):
        got = log_gamma(x + 1) - log_gamma(x)
        assert got == pytest.approx(math.log(x), rel=1e-12, abs=1e-12)


def test_log_gamma_domain():
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-3.2)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0),
                                        (2.5, 1.5), (3.0, 1.0)])
def test_jacobi_degree_zero_and_endpoint(alpha, beta):
    p = JacobiParams(alpha, beta)
    assert jacobi_eval(p, 0, 0.37) == 1.0
    for k in (1, 5, 50, 200, 500):
        closed = math.exp(log_gamma(k + alpha + 1) - log_gamma(k + 1.0)
                          - log_gamma(alpha + 1))
        assert jacobi_eval(p, k, 1.0) == pytest.approx(closed, rel=1e-10)


def test_jacobi_even_symmetric_at_zero():
    # P_{2k}^{(a,a)}(0) = (-1)^k 2^{-2k} Gamma(2k+a+1) / (k! Gamma(k+a+1))
    for a in (0.0, 0.5, 2.0):
        p = JacobiParams(a, a)
        for k in (1, 2, 4, 7):
            closed = (-1) ** k * math.exp(-2 * k * math.log(2)
                                          + log_gamma(2 * k + a + 1)
                                          - log_gamma(k + 1.0) - log_gamma(k + a + 1))
            assert jacobi_eval(p, 2 * k, 0.0) == pytest.approx(closed, rel=1e-12)


def test_jacobi_symmetry():
    rng = np.random.default_rng(7)
    for a in (0.0, 0.5, 3.0):
        p = JacobiParams(a, a)
        for k in range(1, 51):
            t = rng.uniform(-1, 1)
            left = jacobi_eval(p, k, -t)
            right = (-1) ** k * jacobi_eval(p, k, t)
            assert left == pytest.approx(right, rel=1e-10, abs=1e-10)


def test_forward_vs_clenshaw():
    rng = np.random.default_rng(11)
    p = JacobiParams(1.5, 0.5)
    t = rng.uniform(-1, 1, size=8)
    for k in (3, 25, 100, 200):
        coeffs = np.zeros(k + 1)
        coeffs[k] = 1.0
        fwd = jacobi_eval(p, k, t)
        back = jacobi_clenshaw(p, coeffs, t)
        np.testing.assert_allclose(back, fwd, rtol=1e-9, atol=1e-12)


def test_jacobi_deriv_degree_one_is_constant():
    for a, b in ((0.0, 0.0), (1.0, 0.5)):
        p = JacobiParams(a, b)
        for t in (-0.9, 0.0, 0.7):
            assert jacobi_deriv(p, 1, t) == pytest.approx((a + b + 2) / 2, rel=1e-14)


def test_jacobi_deriv_finite_difference():
    p = JacobiParams(0.5, 0.0)
    h = 1e-6
    fd = (jacobi_eval(p, 3, 0.3 + h) - jacobi_eval(p, 3, 0.3 - h)) / (2 * h)
    assert jacobi_deriv(p, 3, 0.3) == pytest.approx(fd, rel=1e-6)


def test_jacobi_deriv_one_sided_at_endpoints():
    p = JacobiParams(1.0, 0.5)
    h = 1e-6
    for t, sgn in ((1.0, -1), (-1.0, +1)):
        fd = sgn * (jacobi_eval(p, 2, t + sgn * h) - jacobi_eval(p, 2, t)) / h
        assert jacobi_deriv(p, 2, t) == pytest.approx(fd, rel=1e-5)


def test_jacobi_norm_values():
    assert jacobi_norm_sq(JacobiParams(0, 0), 0) == pytest.approx(2.0, rel=1e-14)
    assert jacobi_norm_sq(JacobiParams(0, 0), 1) == pytest.approx(2.0 / 3.0, rel=1e-14)
    # quadrature oracle for (alpha, beta) = (1, 0), k = 1
    p = JacobiParams(1.0, 0.0)
    quad = jacobi_weighted_integral(lambda t: jacobi_eval(p, 1, t) ** 2, 1.0, 0.0)
    assert jacobi_norm_sq(p, 1) == pytest.approx(quad, rel=1e-10)


def test_jacobi_orthogonality_by_quadrature():
    p = JacobiParams(0.5, 0.5)
    norms = [math.sqrt(jacobi_norm_sq(p, k)) for k in range(21)]
    for j in range(0, 21, 4):
        for k in range(j + 1, 21, 5):
            val = jacobi_weighted_integral(
                lambda t: jacobi_eval(p, j, t) * jacobi_eval(p, k, t), 0.5, 0.5)
            assert abs(val) / (norms[j] * norms[k]) < 1e-8


def test_zeta_even():
    assert zeta_even(1) == pytest.approx(math.pi ** 2 / 6, rel=1e-14)
    assert zeta_even(2) == pytest.approx(math.pi ** 4 / 90, rel=1e-14)
    for k in (10, 15, 16, 20):
        direct = sum(m ** (-2.0 * k) for m in range(1, 80))
        assert zeta_even(k) == pytest.approx(direct, rel=1e-13)


def test_harmonic():
    assert harmonic(0) == 0.0
    assert harmonic(1) == 1.0
    assert harmonic(4) == pytest.approx(float(Fraction(25, 12)), rel=1e-15)
    exact = sum(Fraction(1, j) for j in range(1, 101))
    assert harmonic(100) == pytest.approx(float(exact), rel=1e-15)
