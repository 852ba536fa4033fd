"""Seeded Monte Carlo for the dual radius processes.

Euler-Maruyama with three guard rails:
  * step shrinking on the entrance half, |b| dt_i <= 0.1 sigma sqrt(dt_i),
    floored at (eps0 / 2 sigma)^2 so the escape from the boundary layer stays
    cheap (the layer contributes O(eps0^2) to the hitting time);
  * a reflecting floor just above 0 (hits are counted and reported);
  * a Brownian-bridge crossing test against the absorbing barrier each step,
    which removes the O(sqrt(dt)) first-passage bias of naive absorption.

Randomness is generated inside the compiled kernel by Philox4x64-10 with the
key (seed, path index) and the block counter as the step clock, so every path
is a pure function of (config, index): runs are bit-identical for any worker
count, block schedule or thread count. The generator is verified word-for-word
against numpy's Philox stream in the test suite.
"""

from __future__ import annotations

import hashlib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from numba import njit, prange

from .errors import ConfigError, UnsupportedFamilyError
from .manifolds import Family, ManifoldSpec, drift, drift_series_coeffs

__all__ = [
    "McConfig",
    "McSampleSet",
    "sim_bessel3_hitting",
    "sim_radius_hitting",
    "sim_torus_sst",
    "empirical_tail",
    "ks_distance",
]

log = logging.getLogger(__name__)

BLOCK = 50000
FLOOR = 1e-6
MAX_TIME = 1e4   # emergency stop; P[tau > 100] is already below 1e-80

_U64 = np.uint64
_M0 = _U64(0xD2E7470EE14C6C93)
_M1 = _U64(0xCA5A826395121157)
_W0 = _U64(0x9E3779B97F4A7C15)
_W1 = _U64(0xBB67AE8584CAA73B)
_MASK32 = _U64(0xFFFFFFFF)
_INV53 = 1.0 / 9007199254740992.0   # 2^-53


@dataclass(frozen=True)
class McConfig:
    n_paths: int
    dt: float = 1e-4
    eps0: float = 1e-4
    seed: int = 0
    drift_cap: float | None = None   # None: min(1e4, 5/dt)

    @property
    def effective_drift_cap(self) -> float:
        if self.drift_cap is None:
            return min(1e4, 5.0 / self.dt)
        return self.drift_cap

    def validate(self, domain_length: float) -> None:
        if self.n_paths < 1:
            raise ConfigError("n_paths must be positive")
        if not 0 < self.dt <= 1e-3:
            raise ConfigError("dt must satisfy 0 < dt <= 1e-3")
        if not 0 < self.eps0 < 0.01 * domain_length:
            raise ConfigError("eps0 must lie in (0, domain/100)")
        cap = self.effective_drift_cap
        if cap <= 0:
            raise ConfigError("drift_cap must be positive")
        if cap >= 10.0 / self.dt:
            raise ConfigError("drift_cap >= 10/dt: the cap would act far from the "
                              "boundaries")

    @property
    def config_hash(self) -> str:
        text = (f"{self.n_paths},{self.dt!r},{self.eps0!r},{self.seed},"
                f"{self.effective_drift_cap!r}")
        return hashlib.sha256(text.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class McSampleSet:
    samples: np.ndarray
    config_hash: str
    spec_tag: str
    floor_hits: int = 0

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.spec_tag}:{self.config_hash}\n")
            for v in self.samples:
                fh.write(f"{float(v)!r}\n")


class _BesselDrift:
    sigma = 1.0
    barrier = 1.0


class _RadiusDrift:
    """Fast drift of the dual ball radius: small-r series plus a linear table."""

    sigma = math.sqrt(2.0)
    barrier = math.pi
    _X_LO = 0.04
    _X0 = 0.03
    _CELLS = 20000

    def __init__(self, spec: ManifoldSpec):
        x1 = math.pi - 1e-6
        pts = np.linspace(self._X0, x1, self._CELLS + 1)
        vals = drift(spec, pts)
        slope = np.diff(vals) / np.diff(pts)
        self._c1 = slope
        self._c0 = vals[:-1] - slope * pts[:-1]
        self._inv_h = self._CELLS / (x1 - self._X0)
        self._np1, self._b1, self._b3 = drift_series_coeffs(spec)


@njit(cache=True)
def _umulhi(a, b):
    a0 = a & _MASK32
    a1 = a >> _U64(32)
    b0 = b & _MASK32
    b1 = b >> _U64(32)
    t = a1 * b0 + ((a0 * b0) >> _U64(32))
    w1 = (t & _MASK32) + a0 * b1
    return a1 * b1 + (t >> _U64(32)) + (w1 >> _U64(32))


@njit(cache=True)
def _philox_block(ctr0, k0, k1):
    """One Philox4x64-10 block; word-identical to numpy's Philox stream."""
    c0, c1, c2, c3 = ctr0, _U64(0), _U64(0), _U64(0)
    key0, key1 = k0, k1
    for _ in range(10):
        hi0 = _umulhi(_M0, c0)
        lo0 = _M0 * c0
        hi1 = _umulhi(_M1, c2)
        lo1 = _M1 * c2
        c0, c1, c2, c3 = hi1 ^ c1 ^ key0, lo1, hi0 ^ c3 ^ key1, lo0
        key0 += _W0
        key1 += _W1
    return c0, c1, c2, c3


@njit(parallel=True, cache=True)
def _path_kernel(k0s, k1s, tau, hits, dt, dt_floor, c_half, cap, mid, sigma,
                 barrier, floor, eps0, use_table, tc0, tc1, x0, inv_h, ncells,
                 np1, b1, b3, x_lo):
    """Run every path from eps0 to absorption.

    One Philox block yields a Box-Muller normal pair plus two bridge uniforms,
    i.e. exactly two steps. Paths write only their own slots, so the result is
    independent of scheduling.
    """
    sig2 = sigma * sigma
    two_pi = 2.0 * math.pi
    for i in prange(k0s.shape[0]):
        k0 = k0s[i]
        k1 = k1s[i]
        blk = _U64(0)
        xi = eps0
        ti = 0.0
        nfl = 0
        have_spare = False
        z = 0.0
        spare_z = 0.0
        u_br = 0.0
        spare_u = 0.0
        while True:
            if have_spare:
                z = spare_z
                u_br = spare_u
                have_spare = False
            else:
                blk += _U64(1)
                w0, w1, w2, w3 = _philox_block(blk, k0, k1)
                u1 = (float(w1 >> _U64(11)) + 1.0) * _INV53
                u2 = float(w2 >> _U64(11)) * _INV53
                rad = math.sqrt(-2.0 * math.log(u1))
                ang = two_pi * u2
                z = rad * math.cos(ang)
                spare_z = rad * math.sin(ang)
                u_br = float(w0 >> _U64(11)) * _INV53
                spare_u = float(w3 >> _U64(11)) * _INV53
                have_spare = True
            if not use_table:
                b = 1.0 / xi
            elif xi >= x_lo:
                pos = (xi - x0) * inv_h
                if pos < 0.0:
                    pos = 0.0
                elif pos > ncells - 1.0:
                    pos = ncells - 1.0
                idx = int(pos)
                b = tc0[idx] + tc1[idx] * xi
            else:
                b = np1 / xi + xi * (b1 + b3 * xi * xi)
            if b > cap:
                b = cap
            elif b < -cap:
                b = -cap
            if xi < mid:
                dti = c_half / (b * b)
                if dti > dt:
                    dti = dt
                elif dti < dt_floor:
                    dti = dt_floor
            else:
                dti = dt
            xn = xi + b * dti + sigma * math.sqrt(dti) * z
            if xn < floor:
                nfl += 1
                xn = 2.0 * floor - xn
            go = barrier - xi
            gn = barrier - xn
            if gn <= 0.0:
                frac = go / (xn - xi)
                if frac < 0.0:
                    frac = 0.0
                elif frac > 1.0:
                    frac = 1.0
                tau[i] = ti + dti * frac
                break
            if u_br < math.exp(-2.0 * go * gn / (sig2 * dti)):
                tau[i] = ti + 0.5 * dti
                break
            ti += dti
            xi = xn
            if ti > MAX_TIME:
                tau[i] = ti
                break
        hits[i] = nfl


def _run_block(drift_fn, cfg: McConfig, lo: int, hi: int, key_offset: int
               ) -> tuple[np.ndarray, int]:
    sigma, barrier = drift_fn.sigma, drift_fn.barrier
    dt_floor = min(cfg.dt, (cfg.eps0 / (2 * sigma)) ** 2)
    if isinstance(drift_fn, _RadiusDrift):
        table_args = (True, drift_fn._c0, drift_fn._c1, drift_fn._X0,
                      drift_fn._inv_h, float(drift_fn._CELLS), drift_fn._np1,
                      drift_fn._b1, drift_fn._b3, drift_fn._X_LO)
    else:
        empty = np.empty(0)
        table_args = (False, empty, empty, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0)
    m = hi - lo
    k0s = (np.uint64(key_offset + lo) + np.arange(m, dtype=np.uint64))
    k1s = np.full(m, np.uint64(cfg.seed & 0xFFFFFFFFFFFFFFFF))
    tau = np.empty(m)
    hits = np.zeros(m, np.int64)
    _path_kernel(k0s, k1s, tau, hits, cfg.dt, dt_floor, (0.1 * sigma) ** 2,
                 cfg.effective_drift_cap, barrier / 2, sigma, barrier, FLOOR,
                 cfg.eps0, *table_args)
    return tau, int(hits.sum())


def _simulate(drift_fn, cfg: McConfig, n_sims: int, key_offset: int = 0,
              workers: int = 1) -> tuple[np.ndarray, int]:
    blocks = [(lo, min(lo + BLOCK, n_sims)) for lo in range(0, n_sims, BLOCK)]
    out = np.empty(n_sims)
    hits = 0
    if workers <= 1 or len(blocks) == 1:
        for lo, hi in blocks:
            out[lo:hi], h = _run_block(drift_fn, cfg, lo, hi, key_offset)
            hits += h
    else:
        # block workers replace the kernel's internal parallelism; running
        # both oversubscribes the cores
        from numba import get_num_threads, set_num_threads
        old_threads = get_num_threads()
        set_num_threads(1)
        try:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                futs = {ex.submit(_run_block, drift_fn, cfg, lo, hi, key_offset):
                        (lo, hi) for lo, hi in blocks}
                for fut, (lo, hi) in futs.items():
                    out[lo:hi], h = fut.result()
                    hits += h
        finally:
            set_num_threads(old_threads)
    if hits:
        log.debug("reflecting floor touched %d times over %d paths", hits, n_sims)
    return out, hits


def sim_bessel3_hitting(cfg: McConfig, workers: int = 1) -> McSampleSet:
    """Hitting time of 1 by a Bessel(3) path started next to the origin."""
    cfg.validate(1.0)
    samples, hits = _simulate(_BesselDrift(), cfg, cfg.n_paths, workers=workers)
    return McSampleSet(samples=samples, config_hash=cfg.config_hash,
                       spec_tag="bessel3", floor_hits=hits)


def sim_radius_hitting(spec: ManifoldSpec, cfg: McConfig, workers: int = 1) -> McSampleSet:
    """Covering time: the dual ball radius run from eps0 until it hits pi."""
    if spec.family is Family.TORUS:
        raise UnsupportedFamilyError("use sim_bessel3_hitting / sim_torus_sst "
                                     "for the torus")
    cfg.validate(math.pi)
    samples, hits = _simulate(_RadiusDrift(spec), cfg, cfg.n_paths, workers=workers)
    return McSampleSet(samples=samples, config_hash=cfg.config_hash,
                       spec_tag=spec.label, floor_hits=hits)


def sim_torus_sst(n: int, cfg: McConfig, workers: int = 1) -> McSampleSet:
    """Strong stationary time of the n-torus: max of n iid Bessel(3) hittings.

    Streams n * n_paths underlying simulations in bounded slices; path index
    j*n + i belongs to coordinate i of sample j, so any slicing reproduces the
    same numbers.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    cfg.validate(1.0)
    drift_fn = _BesselDrift()
    samples = np.empty(cfg.n_paths)
    hits = 0
    group = max(1, 200_000 // n)
    for start in range(0, cfg.n_paths, group):
        stop = min(start + group, cfg.n_paths)
        flat, h = _simulate(drift_fn, cfg, (stop - start) * n,
                            key_offset=start * n, workers=workers)
        hits += h
        samples[start:stop] = flat.reshape(stop - start, n).max(axis=1)
    return McSampleSet(samples=samples, config_hash=cfg.config_hash,
                       spec_tag=f"torus-sst-n{n}", floor_hits=hits)


def empirical_tail(s: McSampleSet, x: float) -> float:
    """Fraction of samples >= x."""
    if x < 0:
        raise ValueError("need x >= 0")
    return float(np.count_nonzero(s.samples >= x)) / len(s.samples)


def ks_distance(s: McSampleSet, analytic_tail, grid) -> float:
    """max over the grid of |empirical tail - analytic tail|."""
    grid = list(grid)
    if not grid or sorted(grid) != grid:
        raise ValueError("grid must be nonempty and sorted")
    return max(abs(empirical_tail(s, x) - analytic_tail(x)) for x in grid)
