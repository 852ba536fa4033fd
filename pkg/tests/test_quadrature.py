"""Green operators, iterated moments, torus coefficients and closed forms."""

import math
from fractions import Fraction

import numpy as np
import pytest

from cutofflab.errors import (AccuracyError, DomainError, GridMismatchError,
                              UnsupportedFamilyError)
from cutofflab.manifolds import Family, make_spec, _log_density_pinned
from cutofflab.quadrature import (default_grid, green_apply, green_value_at_zero,
                                  grid_function, kernel_value, mean_closed,
                                  moment_quadrature, radial_grid, torus_b_closed,
                                  torus_b_coeffs, torus_mgf, torus_mgf_series,
                                  unit_function, variance_closed)

S2 = make_spec(Family.SPHERE, 2)
S3 = make_spec(Family.SPHERE, 3)
TOR = make_spec(Family.TORUS, 1)


def test_grid_tiles_domain():
    g = radial_grid(math.pi)
    assert g.breaks[0] == 0.0 and g.breaks[-1] == pytest.approx(math.pi)
    assert np.all(np.diff(g.breaks) > 0)
    flat = g.flat_nodes
    assert flat[0] > 0 and flat[-1] < math.pi
    assert np.all(np.diff(flat) > 0)
    assert np.all(g.weights > 0)
    r = g.refined()
    assert r.n_panels == 2 * g.n_panels


def test_green_bessel_unit():
    # G[1](r) = (1 - r^2)/3 for the Bessel(3) factor (G doubles the half-rate form)
    g = unit_function(default_grid(TOR))
    out = green_apply(TOR, g)
    expect = (1 - out.grid.flat_nodes ** 2) / 3
    np.testing.assert_allclose(out.values, expect, rtol=1e-9, atol=1e-16)
    assert green_value_at_zero(TOR, g) == pytest.approx(1 / 3, rel=1e-13)


def test_green_zero_function():
    g = grid_function(default_grid(S2), lambda r: np.zeros_like(r))
    out = green_apply(S2, g)
    assert np.all(out.values == 0.0)


def test_green_sphere2_mean_at_origin():
    assert green_value_at_zero(S2, unit_function(default_grid(S2))) == \
        pytest.approx(1.0, rel=1e-12)


def test_green_positivity_and_absorption():
    rng = np.random.default_rng(2)
    grid = default_grid(S3)
    g = grid_function(grid, rng.uniform(0.0, 2.0, size=grid.size))
    out = green_apply(S3, g)
    assert np.all(out.values > -1e-11 * out.values.max())
    assert out.values[-1] < 1e-4  # vanishes toward the absorbing end


def test_green_grid_mismatch():
    with pytest.raises(GridMismatchError):
        green_apply(TOR, unit_function(default_grid(S2)))


def _kernel_oracle(spec, r, fn):
    """Direct quadrature of kernel_value(r, s) fn(s) w_in(s) ds on a fresh mesh.

    The kernel is continuous with a derivative kink at s = r, so the integral
    is split there; each side gets its own end-graded composite rule.
    """
    from cutofflab._gauss import graded_breakpoints, leggauss
    from cutofflab.manifolds import log_volume

    def w_in(s):
        if spec.family is Family.TORUS:
            return s ** 2  # kernel_value carries the factor 2
        return np.exp(2 * log_volume(spec, s) - _log_density_pinned(spec, s))

    gx, gw = leggauss(16)
    total = 0.0
    for lo, hi in ((0.0, r), (r, spec.diameter)):
        breaks = lo + graded_breakpoints(hi - lo, depth=16)
        for a, b in zip(breaks[:-1], breaks[1:]):
            hw = (b - a) / 2
            s = (a + b) / 2 + hw * gx
            kern = np.array([kernel_value(spec, r, float(x)) for x in s])
            total += hw * float(gw @ (kern * fn(s) * w_in(s)))
    return total


@pytest.mark.parametrize("spec", [S2, S3, TOR])
def test_green_matches_kernel_quadrature(spec):
    rng = np.random.default_rng(9)
    grid = default_grid(spec)
    flat = grid.flat_nodes
    fn = lambda s: 1.0 + 0.3 * np.sin(3 * s)
    out = green_apply(spec, grid_function(grid, fn))
    for idx in rng.choice(np.arange(24, grid.size - 24), size=5, replace=False):
        r = float(flat[idx])
        oracle = _kernel_oracle(spec, r, fn)
        assert out.values[idx] == pytest.approx(oracle, rel=1e-7)


def test_kernel_symmetry_and_closed_form():
    assert kernel_value(S2, 1.0, 2.0) == kernel_value(S2, 2.0, 1.0)
    closed = 1 / (1 - math.cos(2.0)) - 0.5
    assert kernel_value(S2, 1.0, 2.0) == pytest.approx(closed, rel=1e-12)
    near = kernel_value(S2, math.pi - 1e-9, math.pi - 1e-9)
    assert 0 <= near < 1e-8


def test_moment_examples():
    assert moment_quadrature(TOR, 1) == pytest.approx(1 / 3, rel=1e-10)
    assert moment_quadrature(S3, 1) == pytest.approx(0.75, rel=1e-10)
    assert moment_quadrature(S2, 2) == pytest.approx(math.pi ** 2 / 3 - 2, rel=1e-10)


def test_moment_order_range():
    with pytest.raises(ValueError):
        moment_quadrature(S2, 0)
    with pytest.raises(ValueError):
        moment_quadrature(S2, 21)


def test_moment_accuracy_guard_fires_beyond_supported_dimensions():
    # interior panels cannot resolve the S^28 boundary layers for deep
    # iterates; the refinement check must refuse rather than return junk
    with pytest.raises(AccuracyError):
        moment_quadrature(make_spec(Family.SPHERE, 28), 6)


@pytest.mark.parametrize("spec", [S2, make_spec(Family.SPHERE, 7),
                                  make_spec(Family.SPHERE, 12),
                                  make_spec(Family.REAL_PROJECTIVE, 5),
                                  make_spec(Family.COMPLEX_PROJECTIVE, 8),
                                  make_spec(Family.QUATERNIONIC_PROJECTIVE, 12),
                                  TOR])
def test_grid_convergence(spec):
    from cutofflab.quadrature import _iterated_moment, _refined_default
    for k in range(1, 5):
        coarse = _iterated_moment(spec, k, default_grid(spec))
        fine = _iterated_moment(spec, k, _refined_default(spec))
        assert abs(coarse / fine - 1) <= 1e-8


def test_moment_bound():
    for spec in (S2, S3, TOR):
        m1 = moment_quadrature(spec, 1)
        for k in range(2, 7):
            assert moment_quadrature(spec, k) <= math.factorial(k) * m1 ** k * (1 + 1e-12)


def test_mean_closed_values():
    assert mean_closed(S2) == 1.0
    assert mean_closed(make_spec(Family.SPHERE, 4)) == pytest.approx(11 / 18, rel=1e-14)
    assert mean_closed(make_spec(Family.COMPLEX_PROJECTIVE, 4)) == pytest.approx(0.75)
    for bad in (make_spec(Family.REAL_PROJECTIVE, 3), TOR):
        with pytest.raises(UnsupportedFamilyError):
            mean_closed(bad)


def test_variance_closed_values():
    assert variance_closed(S2) == pytest.approx(math.pi ** 2 / 3 - 3, rel=1e-13)
    assert variance_closed(S3) == pytest.approx(
        (math.pi ** 2 / 3 - 1.25 - 1.5) / 4, rel=1e-13)
    # delta = 50: the leading term pi^2/(6 d^2) is still ~10% off (the
    # 2 ln(d)/d^3 correction); the three-term expansion is tight
    s51 = make_spec(Family.SPHERE, 51)
    d = 50.0
    euler_gamma = 0.5772156649015329
    expansion = (math.pi ** 2 / 6 - 2 * math.log(d) / d + (1 - 2 * euler_gamma) / d) \
        / d ** 2
    assert variance_closed(s51) == pytest.approx(expansion, rel=1e-3)
    assert variance_closed(s51) == pytest.approx(math.pi ** 2 / (6 * d * d), rel=0.12)


def test_closed_forms_match_quadrature():
    for spec in (make_spec(Family.SPHERE, 4), make_spec(Family.COMPLEX_PROJECTIVE, 6)):
        m1 = moment_quadrature(spec, 1)
        assert m1 == pytest.approx(mean_closed(spec), rel=1e-6)
        var = moment_quadrature(spec, 2) - m1 ** 2
        assert var == pytest.approx(variance_closed(spec), rel=1e-5)


def test_torus_coeff_values():
    b = torus_b_coeffs(25).b
    assert b[0] == 1.0
    assert b[1] == pytest.approx(float(Fraction(1, 6)), rel=1e-15)
    assert b[2] == pytest.approx(float(Fraction(7, 360)), rel=1e-15)
    assert b[5] == pytest.approx(torus_b_closed(5), rel=1e-13)


def test_torus_coeff_recursion_identity():
    b = torus_b_coeffs(25).b
    for k in range(1, 26):
        acc = math.fsum(b[k - m] * (-1) ** m / math.factorial(2 * m + 1)
                        for m in range(0, k + 1))
        assert abs(acc) < 1e-17


def test_torus_coeff_ratio_monotone():
    b = torus_b_coeffs(20).b
    ratios = [b[k] * math.pi ** (2 * k) / 2 for k in range(1, 21)]
    assert all(r < 1 for r in ratios)
    assert all(y > x for x, y in zip(ratios, ratios[1:]))


def test_torus_mgf():
    assert torus_mgf(0.0) == 1.0
    assert torus_mgf(1.0) == pytest.approx(math.sqrt(2) / math.sin(math.sqrt(2)),
                                           rel=1e-14)
    assert torus_mgf_series(0.8) == pytest.approx(torus_mgf(0.8), rel=1e-10)
    with pytest.raises(DomainError):
        torus_mgf(math.pi ** 2 / 2)
    with pytest.raises(DomainError):
        torus_mgf(-0.1)
