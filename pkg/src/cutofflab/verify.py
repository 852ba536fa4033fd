"""Acceptance criteria: one callable per criterion, shared by CLI and tests.

Each criterion returns a CriterionResult with the measured worst value and
its threshold. `run_criteria` executes them in order and prints one line per
criterion; level "fast" covers the analytic criteria 1-9, "full" adds the
Monte Carlo pair 10-11 at production sizes (about three minutes).
"""

from __future__ import annotations

import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import mc, profiles, spectral
from ._gauss import graded_breakpoints, leggauss
from .manifolds import Family, make_spec
from .quadrature import (mean_closed, moment_quadrature, torus_b_closed,
                         torus_b_coeffs, torus_mgf, torus_mgf_series,
                         variance_closed, volume_integral)

__all__ = ["CriterionResult", "run_criteria", "CRITERIA"]

MC_SEED = 20260808
MC_PATHS = 100_000
MC_DT = 1e-4

MEAN_VAR_SPECS = ([(Family.SPHERE, n) for n in range(2, 11)]
                  + [(Family.COMPLEX_PROJECTIVE, n) for n in (4, 6, 8)]
                  + [(Family.QUATERNIONIC_PROJECTIVE, n) for n in (8, 12)])
SPECTRAL_SPECS = ([(Family.SPHERE, n) for n in range(2, 9)]
                  + [(Family.REAL_PROJECTIVE, n) for n in range(2, 9)]
                  + [(Family.COMPLEX_PROJECTIVE, n) for n in (4, 6, 8)]
                  + [(Family.QUATERNIONIC_PROJECTIVE, 8)])
LINK_SPECS = ((Family.SPHERE, 2), (Family.SPHERE, 3),
              (Family.COMPLEX_PROJECTIVE, 4), (Family.REAL_PROJECTIVE, 2))


@dataclass
class CriterionResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] {self.name}: measured {self.measured:.3e} "
                f"vs threshold {self.threshold:.3e} ({self.detail}) "
                f"[{self.seconds:.1f}s]")


def criterion_01_torus_coeffs() -> CriterionResult:
    b = torus_b_coeffs(25).b
    worst = max(abs(b[k] / torus_b_closed(k) - 1) for k in range(1, 26))
    return CriterionResult("1 torus b_k vs closed form", worst <= 1e-12, worst,
                           1e-12, "k = 1..25")


def criterion_02_torus_mgf() -> CriterionResult:
    worst = max(abs(torus_mgf_series(lam) / torus_mgf(lam) - 1)
                for lam in (0.2, 0.8, 1.2))
    return CriterionResult("2 torus mgf series vs closed form", worst <= 1e-10,
                           worst, 1e-10, "lambda in {0.2, 0.8, 1.2}")


def criterion_03_manifold_mean() -> CriterionResult:
    worst = 0.0
    for fam, n in MEAN_VAR_SPECS:
        spec = make_spec(fam, n)
        worst = max(worst, abs(moment_quadrature(spec, 1) / mean_closed(spec) - 1))
    return CriterionResult("3 quadrature mean vs harmonic closed form",
                           worst <= 1e-6, worst, 1e-6,
                           f"{len(MEAN_VAR_SPECS)} specs")


def criterion_04_manifold_variance() -> CriterionResult:
    worst = 0.0
    for fam, n in MEAN_VAR_SPECS:
        spec = make_spec(fam, n)
        var = moment_quadrature(spec, 2) - moment_quadrature(spec, 1) ** 2
        worst = max(worst, abs(var / variance_closed(spec) - 1))
    return CriterionResult("4 quadrature variance vs closed form",
                           worst <= 1e-5, worst, 1e-5,
                           f"{len(MEAN_VAR_SPECS)} specs")


def criterion_05_spectral_vs_quadrature() -> CriterionResult:
    worst = 0.0
    for fam, n in SPECTRAL_SPECS:
        spec = make_spec(fam, n)
        thr = spectral.moment_threshold(spec)
        for m in range(thr, thr + 3):
            q = moment_quadrature(spec, m)
            s = spectral.moment_spectral(spec, m)
            worst = max(worst, abs(q / s - 1))
    return CriterionResult("5 spectral vs quadrature moments", worst <= 1e-6,
                           worst, 1e-6, f"{len(SPECTRAL_SPECS)} specs, 3 orders each")


def tail_integral(spec, tol: float = 1e-9) -> float:
    """int_0^inf P[tau >= x] dx by graded composite quadrature."""
    lam1 = -spectral.spectral_term(spec, 1).lambda_k
    x_max = (math.log(spectral.spectral_term(spec, 1).c_k) + 40.0) / lam1
    breaks = graded_breakpoints(x_max, depth=12)
    gx, gw = leggauss(16)
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        hw = (b - a) / 2
        for xi, wi in zip(gx, gw):
            total += hw * wi * spectral.tail_manifold(spec, (a + b) / 2 + hw * xi,
                                                      tol).value
    return total


def criterion_06_tail_integral() -> CriterionResult:
    from .errors import ConvergenceError
    worst = 0.0
    detail = "S^2, S^3, P^4(C)"
    for fam, n in ((Family.SPHERE, 2), (Family.SPHERE, 3),
                   (Family.COMPLEX_PROJECTIVE, 4)):
        spec = make_spec(fam, n)
        try:
            worst = max(worst, abs(tail_integral(spec) / mean_closed(spec) - 1))
        except ConvergenceError as exc:
            worst = math.inf
            detail = f"series guard tripped: {exc}"
            break
    return CriterionResult("6 integral of tail vs mean", worst <= 1e-4, worst,
                           1e-4, detail)


def criterion_07_link_identities() -> CriterionResult:
    worst = 0.0
    for fam, n in LINK_SPECS:
        spec = make_spec(fam, n)
        for k in range(1, 11):
            lam = spectral.spectral_term(spec, k).lambda_k
            norm_quad = volume_integral(
                spec, lambda r, k=k: spectral.phi_deriv_r(spec, k, r) ** 2) / lam ** 2
            norm_closed = -spectral.phi_norm_sq(spec, k) / lam
            worst = max(worst, abs(norm_quad / norm_closed - 1))
            link_rel = abs(spectral.link_integral(spec, k)
                           / spectral.link_integral_closed(spec, k) - 1)
            worst = max(worst, link_rel)
    return CriterionResult("7 link norm and integral identities", worst <= 1e-7,
                           worst, 1e-7, "4 specs, k <= 10")


def criterion_08_torus_profile() -> CriterionResult:
    worst_gap = 0.0
    decreasing = True
    for c in (-0.5, 0.0, 1.0):
        lim = profiles.gumbel_profile(Family.TORUS, c)
        gaps = []
        for n in (10 ** 3, 10 ** 5):
            a_n, b_n = profiles.cutoff_time(Family.TORUS, n)
            gaps.append(abs(spectral.separation_torus(n, a_n + c * b_n) - lim))
        worst_gap = max(worst_gap, gaps[1])
        decreasing &= gaps[1] < gaps[0]
    ok = worst_gap <= 5e-3 and decreasing
    return CriterionResult("8 torus profile convergence", ok, worst_gap, 5e-3,
                           f"n = 1e5, gap decreasing from 1e3: {decreasing}")


def criterion_09_manifold_profiles() -> CriterionResult:
    worst_gap = 0.0
    decreasing = True
    for fam in (Family.SPHERE, Family.COMPLEX_PROJECTIVE):
        for c in (-1.0, 0.0, 1.0, 2.0):
            lim = profiles.gumbel_profile(fam, c)
            gaps = []
            for n in (50, 200):
                a_n, b_n = profiles.cutoff_time(fam, n)
                s = spectral.separation_manifold(make_spec(fam, n), a_n + c * b_n)
                gaps.append(abs(s - lim))
            worst_gap = max(worst_gap, gaps[1])
            decreasing &= gaps[1] < gaps[0]
    ok = worst_gap <= 0.08 and decreasing
    return CriterionResult("9 sphere/projective profile convergence", ok,
                           worst_gap, 0.08,
                           f"n = 200 vs 50, strictly decreasing: {decreasing}")


def _mc_runs(workers: int):
    cfg = mc.McConfig(n_paths=MC_PATHS, dt=MC_DT, seed=MC_SEED)
    bessel = mc.sim_bessel3_hitting(cfg, workers=workers)
    s3 = mc.sim_radius_hitting(make_spec(Family.SPHERE, 3), cfg, workers=workers)
    s2 = mc.sim_radius_hitting(make_spec(Family.SPHERE, 2), cfg, workers=workers)
    return bessel, s3, s2


def criterion_10_mc_vs_analytic(runs) -> CriterionResult:
    bessel, s3, s2 = runs
    checks = []
    for samp, target in ((bessel, 1.0 / 3.0), (s3, 0.75)):
        se = samp.samples.std(ddof=1) / math.sqrt(len(samp.samples))
        checks.append(abs(samp.samples.mean() - target) / (3 * se))
    ks_b = mc.ks_distance(bessel, lambda x: spectral.tail_torus_single(x).value,
                          np.linspace(0.05, 1.2, 20))
    s2_spec = make_spec(Family.SPHERE, 2)
    ks_s2 = mc.ks_distance(s2, lambda x: spectral.tail_manifold(s2_spec, x).value,
                           np.linspace(0.1, 3.0, 20))
    checks.extend([ks_b / 0.01, ks_s2 / 0.01])
    worst = max(checks)
    detail = (f"mean devs {checks[0]:.2f}, {checks[1]:.2f} of 3SE; "
              f"KS {ks_b:.4f}, {ks_s2:.4f}")
    return CriterionResult("10 Monte Carlo vs analytic", worst <= 1.0, worst, 1.0,
                           detail)


def criterion_11_determinism(runs, workers_alt: int) -> CriterionResult:
    rerun = _mc_runs(workers=workers_alt)
    same = all(np.array_equal(a.samples, b.samples) for a, b in zip(runs, rerun))
    return CriterionResult("11 bit-identical across worker counts", same,
                           0.0 if same else 1.0, 0.0,
                           f"workers 1 vs {workers_alt}, 3 sample sets")


CRITERIA = "criteria 1-9 analytic; 10-11 Monte Carlo"


def run_criteria(level: str = "fast", workers: int = 2, echo: bool = True
                 ) -> list[CriterionResult]:
    fns = [criterion_01_torus_coeffs, criterion_02_torus_mgf,
           criterion_03_manifold_mean, criterion_04_manifold_variance,
           criterion_05_spectral_vs_quadrature, criterion_06_tail_integral,
           criterion_07_link_identities, criterion_08_torus_profile,
           criterion_09_manifold_profiles]
    results = []
    for fn in fns:
        t0 = time.time()
        res = fn()
        res.seconds = time.time() - t0
        results.append(res)
        if echo:
            print(res.line(), file=sys.stderr)
    if level == "full":
        t0 = time.time()
        runs = _mc_runs(workers=1)
        res = criterion_10_mc_vs_analytic(runs)
        res.seconds = time.time() - t0
        results.append(res)
        if echo:
            print(res.line(), file=sys.stderr)
        t0 = time.time()
        res = criterion_11_determinism(runs, workers_alt=max(2, workers))
        res.seconds = time.time() - t0
        results.append(res)
        if echo:
            print(res.line(), file=sys.stderr)
    return results
