"""Tail series, separation, spectral moments and intertwining identities."""

import math

import numpy as np
import pytest

from cutofflab.errors import ConvergenceError, DomainError, ThresholdError
from cutofflab.manifolds import Family, make_spec, total_volume_closed
from cutofflab.quadrature import moment_quadrature, radial_integral, volume_integral
from cutofflab.spectral import (link_eigenfunction, link_integral,
                                link_integral_closed, moment_spectral,
                                moment_threshold, phi_norm_sq, phi_value,
                                phi_deriv_r, separation_manifold, separation_torus,
                                spectral_term, tail_manifold, tail_torus_single,
                                torus_link_value)

S2 = make_spec(Family.SPHERE, 2)
S3 = make_spec(Family.SPHERE, 3)
CP4 = make_spec(Family.COMPLEX_PROJECTIVE, 4)
RP2 = make_spec(Family.REAL_PROJECTIVE, 2)


def brute_tail(spec, x, kmax=4000):
    from cutofflab.manifolds import eigenvalue, log_spectral_coeff
    return math.fsum((-1) ** (k + 1) * math.exp(log_spectral_coeff(spec, k)
                                                + eigenvalue(spec, k) * x)
                     for k in range(1, kmax))


def test_tail_sphere2_leading_term():
    res = tail_manifold(S2, 5.0)
    assert 0.999 <= res.value / (3 * math.exp(-10)) <= 1.001
    assert res.truncation_bound < 1e-10


def test_tail_decay_and_range():
    xs = np.linspace(0.05, 6.0, 30)
    vals = [tail_manifold(S3, float(x)).value for x in xs]
    assert all(0 <= v <= 1 for v in vals)
    assert all(b < a for a, b in zip(vals, vals[1:]))
    assert tail_manifold(S2, 50.0).value < 1e-10


def test_tail_single_term_dominance():
    for spec in (S2, CP4):
        term = spectral_term(spec, 1)
        x = 10.0 / -term.lambda_k
        assert tail_manifold(spec, x).value == pytest.approx(
            term.c_k * math.exp(term.lambda_k * x), rel=0.01)


def test_tail_matches_brute_summation():
    for x in (0.01, 0.1, 1.0):
        assert tail_manifold(S2, x, tol=1e-12).value == pytest.approx(
            min(1.0, brute_tail(S2, x)), rel=1e-9, abs=1e-12)


def test_tail_domain_and_convergence_errors():
    with pytest.raises(DomainError):
        tail_manifold(S2, 0.0)
    with pytest.raises(DomainError):
        tail_torus_single(-1.0)
    with pytest.raises(ConvergenceError):
        tail_manifold(S2, 1e-12)


def test_tail_torus_values():
    # direct-summation oracle, 4 terms suffice at x = 1
    oracle = math.fsum(2 * (-1) ** (k + 1) * math.exp(-math.pi ** 2 * k ** 2 / 2)
                       for k in range(1, 8))
    assert tail_torus_single(1.0).value == pytest.approx(oracle, rel=1e-13)
    assert tail_torus_single(1.0).value == pytest.approx(0.014383761361076754,
                                                         rel=1e-12)
    # at x = 0.01 the complement is below double resolution, so the value is
    # the representable upper end of the interval (0.999, 1]
    assert 0.999 < tail_torus_single(0.01).value <= 1.0
    assert tail_torus_single(100.0).value < 1e-10


def test_separation_torus():
    assert separation_torus(1, 0.7) == pytest.approx(tail_torus_single(0.7).value,
                                                     rel=1e-12)
    n = 10 ** 5
    t = 2 * math.log(n) / math.pi ** 2
    assert separation_torus(n, t) == pytest.approx(1 - math.exp(-2), abs=0.01)
    assert separation_torus(100, 50.0) < 1e-10


def test_separation_manifold_sphere50():
    n = 50
    t = math.log(n) / n
    assert separation_manifold(make_spec(Family.SPHERE, n), t) == pytest.approx(
        1 - math.exp(-1), abs=0.08)


def test_moment_spectral_vs_quadrature():
    assert moment_spectral(S2, 3) == pytest.approx(moment_quadrature(S2, 3), rel=1e-6)
    assert moment_spectral(CP4, 4) == pytest.approx(moment_quadrature(CP4, 4),
                                                    rel=1e-6)
    with pytest.raises(ThresholdError):
        moment_spectral(S2, 2)
    assert moment_threshold(S2) == 3


def test_moment_spectral_torus_factor():
    tor = make_spec(Family.TORUS, 1)
    assert moment_spectral(tor, 1) == pytest.approx(1 / 3, rel=1e-13)
    assert moment_spectral(tor, 2) == pytest.approx(moment_quadrature(tor, 2),
                                                    rel=1e-10)


def test_link_eigenfunction_values():
    # S^2, k=1, r=pi/2: phi = cos r, I'/I = sin r/(1-cos r) -> value 1/2
    assert link_eigenfunction(S2, 1, math.pi / 2) == pytest.approx(0.5, rel=1e-12)
    # entrance limit: Lambda phi_k(0+) = phi_k(0) = P_k(1)
    for spec, k in ((S2, 1), (S3, 2), (CP4, 3)):
        lim = link_eigenfunction(spec, k, 1e-6)
        assert lim == pytest.approx(phi_value(spec, k, 0.0), rel=1e-5)
    # absorbing limit: -> 0
    assert abs(link_eigenfunction(S3, 2, math.pi - 1e-6)) < 1e-4


def test_link_integral_closed_forms():
    assert link_integral(S2, 1) == pytest.approx(1.0, rel=1e-10)
    assert link_integral(S2, 2) == pytest.approx(-1 / 3, rel=1e-10)
    for spec in (S2, S3, CP4, RP2):
        for k in range(1, 7):
            assert link_integral(spec, k) == pytest.approx(
                link_integral_closed(spec, k), rel=1e-9)
    # phi_k(pi) I(pi) carries sign (-1)^k for the non-projective-R families
    for k in range(1, 7):
        lam = spectral_term(S3, k).lambda_k
        assert math.copysign(1, link_integral(S3, k) * lam) == (-1) ** k


def test_link_norm_identity():
    # ||Lambda phi_k||^2 = -(1/lambda_k) ||phi_k||^2; S^2 k=1 equals 1/3
    lam = spectral_term(S2, 1).lambda_k
    quad = volume_integral(S2, lambda r: phi_deriv_r(S2, 1, r) ** 2) / lam ** 2
    assert quad == pytest.approx(1 / 3, rel=1e-10)
    for spec in (S3, CP4, RP2):
        for k in range(1, 6):
            lam = spectral_term(spec, k).lambda_k
            quad = volume_integral(spec,
                                   lambda r, k=k: phi_deriv_r(spec, k, r) ** 2) / lam ** 2
            assert quad == pytest.approx(-phi_norm_sq(spec, k) / lam, rel=1e-8)


def test_link_cross_orthogonality():
    for j in range(1, 6):
        for k in range(j + 1, 7):
            lj = spectral_term(S3, j).lambda_k
            lk = spectral_term(S3, k).lambda_k
            val = volume_integral(
                S3, lambda r: phi_deriv_r(S3, j, r) * phi_deriv_r(S3, k, r)) / (lj * lk)
            scale = math.sqrt(phi_norm_sq(S3, j) / -lj) * math.sqrt(
                phi_norm_sq(S3, k) / -lk)
            assert abs(val) / scale < 1e-8


def test_torus_neumann_links():
    tor = make_spec(Family.TORUS, 1)
    for n in range(1, 5):
        for m in range(n, 5):
            val = radial_integral(tor, lambda r: torus_link_value(n, r)
                                  * torus_link_value(m, r) * r ** 2)
            want = 1 / (2 * n * m * math.pi ** 2) if n == m else 0.0
            assert val == pytest.approx(want, abs=1e-10)


def test_rp_uses_doubled_index():
    # phi_k on RP^n is an even Jacobi polynomial of cos(r/2): phi_k(pi) = P_2k(0)
    assert phi_value(RP2, 1, math.pi - 1e-14) == pytest.approx(-0.5, rel=1e-6)
    assert link_integral_closed(RP2, 1) == pytest.approx(
        -0.5 * total_volume_closed(RP2) / spectral_term(RP2, 1).lambda_k, rel=1e-12)
