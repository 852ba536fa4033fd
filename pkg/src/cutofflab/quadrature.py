"""Green operators on [0, 1] (Bessel-3 factor) and [0, pi] (manifolds).

The operator G[g](r) = int_r^D w_out(t) int_0^t w_in(s) g(s) ds dt is applied
through its symmetric kernel k(r, s) = K(max(r, s)), where the scale integral
K(t) = int_t^D w_out has the closed form (I(D) - I(t)) / (I(t) I(D)). Writing
omega = K * w_in (a bounded function vanishing at both ends) gives

    G[g](r) = K(r) * int_0^r w_in g ds  +  int_r^D omega g ds,

so the only delicate object is the first integral near the absorbing end,
which is carried in signed log space. Iterating G at r = 0 yields the moments
of the covering time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ._gauss import (graded_breakpoints, leggauss, nodal_interp_matrix,
                     running_integral_matrix)
from .errors import AccuracyError, DomainError, GridMismatchError, UnsupportedFamilyError
from .manifolds import (Family, ManifoldSpec, _log_density_pinned, log_covolume,
                        log_volume, total_volume_closed)
from .special import harmonic, zeta_even

__all__ = [
    "RadialGrid",
    "GridFunction",
    "radial_grid",
    "default_grid",
    "grid_function",
    "unit_function",
    "green_apply",
    "green_value_at_zero",
    "moment_quadrature",
    "kernel_value",
    "mean_closed",
    "variance_closed",
    "TorusCoeffs",
    "torus_b_coeffs",
    "torus_mgf",
    "torus_mgf_series",
    "radial_integral",
    "volume_integral",
]

DEFAULT_DEPTH = 14
DEFAULT_ORDER = 24


@dataclass(frozen=True, eq=False)
class RadialGrid:
    """Composite Gauss-Legendre mesh on [0, domain_end], graded at both ends."""

    domain_end: float
    order: int
    breaks: np.ndarray       # (P+1,) panel boundaries
    nodes: np.ndarray        # (P, order) strictly interior
    weights: np.ndarray      # (P, order) physical quadrature weights
    half_widths: np.ndarray  # (P,)

    @property
    def n_panels(self) -> int:
        return self.nodes.shape[0]

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def flat_nodes(self) -> np.ndarray:
        return self.nodes.ravel()

    def refined(self) -> "RadialGrid":
        """Split every panel at its midpoint (panel-count doubling)."""
        mids = (self.breaks[:-1] + self.breaks[1:]) / 2
        breaks = np.sort(np.concatenate([self.breaks, mids]))
        return _grid_from_breaks(self.domain_end, breaks, self.order)


def _grid_from_breaks(domain_end: float, breaks: np.ndarray, order: int) -> RadialGrid:
    x, w = leggauss(order)
    a, b = breaks[:-1], breaks[1:]
    hw = (b - a) / 2
    nodes = (a + b)[:, None] / 2 + hw[:, None] * x[None, :]
    weights = hw[:, None] * w[None, :]
    for arr in (breaks, nodes, weights, hw):
        arr.setflags(write=False)
    return RadialGrid(domain_end=float(domain_end), order=order, breaks=breaks,
                      nodes=nodes, weights=weights, half_widths=hw)


def radial_grid(domain_end: float, depth: int = DEFAULT_DEPTH,
                order: int = DEFAULT_ORDER) -> RadialGrid:
    return _grid_from_breaks(domain_end, graded_breakpoints(domain_end, depth), order)


@lru_cache(maxsize=8)
def _default_grid_for_domain(domain_end: float) -> RadialGrid:
    return radial_grid(domain_end)


def default_grid(spec: ManifoldSpec) -> RadialGrid:
    return _default_grid_for_domain(spec.diameter)


@dataclass(frozen=True, eq=False)
class GridFunction:
    grid: RadialGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != (self.grid.size,):
            raise GridMismatchError("values must align with the grid nodes")


def grid_function(grid: RadialGrid, fn_or_values) -> GridFunction:
    if callable(fn_or_values):
        vals = np.asarray(fn_or_values(grid.flat_nodes), dtype=float)
    else:
        vals = np.asarray(fn_or_values, dtype=float)
    return GridFunction(grid=grid, values=vals)


def unit_function(grid: RadialGrid) -> GridFunction:
    return GridFunction(grid=grid, values=np.ones(grid.size))


@dataclass(frozen=True, eq=False)
class _GreenContext:
    grid: RadialGrid
    prefactor: float
    log_density: np.ndarray   # log w_in' building block: log I'(s) at nodes
    log_vol: np.ndarray       # log I at nodes
    log_scale: np.ndarray     # log K at nodes
    log_omega: np.ndarray     # log(K * w_in) at nodes
    last_panel_prefix: np.ndarray | None   # corrected prefix matrix, pi side
    start_panel_prefix: np.ndarray | None  # corrected prefix matrix, 0 side


def _end_panel_prefix_matrix(spec: ManifoldSpec, grid: RadialGrid) -> np.ndarray:
    """Rows L[j] with (L g)_j = K(r_j) int_{a}^{r_j} w_in(s) g(s) ds on the
    final panel [a, pi].

    The inner weight has a pole at pi, so the shared interpolant-antiderivative
    matrix is useless here; instead each target node gets a dedicated composite
    rule graded toward it, with the bounded combination K(r_j) w_in(s) evaluated
    in closed form. g enters through the panel's Legendre interpolant, making
    the whole correction one (order x order) matrix.
    """
    order = grid.order
    p = grid.n_panels - 1
    a = grid.breaks[p]
    hw = grid.half_widths[p]
    center = (grid.breaks[p] + grid.breaks[p + 1]) / 2
    nodes = grid.nodes[p]
    lip = math.log(total_volume_closed(spec))
    gx, gw = leggauss(16)
    rows = np.empty((order, order))
    for j, r in enumerate(nodes):
        span = r - a
        depth = max(8, int(math.ceil(math.log2(span / (math.pi - r)))) + 4)
        edges = r - span * 2.0 ** (-np.arange(depth + 1, dtype=float))
        edges = np.concatenate([edges, [r]])
        sub_hw = (edges[1:] - edges[:-1]) / 2
        s = ((edges[:-1] + edges[1:]) / 2)[:, None] + sub_hw[:, None] * gx[None, :]
        w = (sub_hw[:, None] * gw[None, :]).ravel()
        s = s.ravel()
        lk_j = log_covolume(spec, r) - log_volume(spec, r) - lip
        fac = w * np.exp(lk_j + 2 * log_volume(spec, s)
                         - _log_density_pinned(spec, s))
        rows[j] = fac @ nodal_interp_matrix(order, (s - center) / hw)
    return rows


def _start_panel_prefix_matrix(spec: ManifoldSpec, grid: RadialGrid) -> np.ndarray:
    """Rows L[j] with (L g)_j = K(r_j) int_0^{r_j} w_in(s) g(s) ds on the first
    panel [0, h].

    Mirror of the pi-side correction: the inner weight vanishes like s^(n+1),
    so the shared matrix's partial integrals at the leftmost nodes drown in
    cancellation noise that K(r_j) ~ I(r_j)^(-1) then amplifies. Dedicated
    rules graded toward 0 (truncated at 1e-10, a relative error < 1e-9 for
    any dimension) restore machine accuracy.
    """
    order = grid.order
    hw = grid.half_widths[0]
    center = (grid.breaks[0] + grid.breaks[1]) / 2
    nodes = grid.nodes[0]
    lip = math.log(total_volume_closed(spec))
    gx, gw = leggauss(16)
    rows = np.empty((order, order))
    for j, r in enumerate(nodes):
        depth = min(48, max(8, int(math.ceil(math.log2(r / 1e-10)))))
        edges = r * 2.0 ** (-np.arange(depth + 1, dtype=float))[::-1]
        sub_hw = (edges[1:] - edges[:-1]) / 2
        s = ((edges[:-1] + edges[1:]) / 2)[:, None] + sub_hw[:, None] * gx[None, :]
        w = (sub_hw[:, None] * gw[None, :]).ravel()
        s = s.ravel()
        lk_j = log_covolume(spec, r) - log_volume(spec, r) - lip
        fac = w * np.exp(lk_j + 2 * log_volume(spec, s)
                         - _log_density_pinned(spec, s))
        rows[j] = fac @ nodal_interp_matrix(order, (s - center) / hw)
    return rows


@lru_cache(maxsize=64)
def _green_context(spec: ManifoldSpec, grid: RadialGrid) -> _GreenContext:
    flat = grid.flat_nodes
    last = start = None
    if spec.family is Family.TORUS:
        # Bessel(3) factor on [0, 1]: I(s) = s, extra overall factor 2
        if abs(grid.domain_end - 1.0) > 1e-15:
            raise GridMismatchError("torus-factor grid must live on [0, 1]")
        ld = np.zeros_like(flat)
        li = np.log(flat)
        lj = np.log1p(-flat)
        lip = 0.0
        pre = 2.0
    else:
        if abs(grid.domain_end - math.pi) > 1e-15:
            raise GridMismatchError("manifold grid must live on [0, pi]")
        ld = _log_density_pinned(spec, flat)
        li = log_volume(spec, flat)
        lj = log_covolume(spec, flat)
        lip = math.log(total_volume_closed(spec))
        pre = 1.0
        if spec.family is not Family.REAL_PROJECTIVE:
            # inner weight unbounded at pi: the final panel needs its own rule
            last = _end_panel_prefix_matrix(spec, grid)
        start = _start_panel_prefix_matrix(spec, grid)
    lk = lj - li - lip
    lom = li + lj - lip - ld
    return _GreenContext(grid=grid, prefactor=pre, log_density=ld, log_vol=li,
                         log_scale=lk, log_omega=lom, last_panel_prefix=last,
                         start_panel_prefix=start)


def _signed_logaddexp(l1, s1, l2, s2):
    """Combine two signed log-magnitude values; returns (log|.|, sign)."""
    if l1 == -math.inf:
        return l2, s2
    m = np.maximum(l1, l2)
    acc = s1 * np.exp(l1 - m) + s2 * np.exp(l2 - m)
    with np.errstate(divide="ignore"):
        out_l = np.where(acc == 0.0, -np.inf, m + np.log(np.abs(acc)))
    return out_l, np.sign(acc) + (acc == 0.0)


def _apply(ctx: _GreenContext, values: np.ndarray) -> tuple[np.ndarray, float]:
    """Return (G[g] at nodes, G[g](0))."""
    grid = ctx.grid
    P, M = grid.nodes.shape
    kmat = running_integral_matrix(grid.order)
    g = values.reshape(P, M)

    # benign suffix part: D(r) = int_r^D omega * g
    y = np.exp(ctx.log_omega).reshape(P, M) * g
    within = (y @ kmat.T) * grid.half_widths[:, None]
    seg = (grid.weights.reshape(P, M) * y).sum(axis=1)
    suffix_after = np.concatenate([np.cumsum(seg[::-1])[::-1][1:], [0.0]])
    dpart = seg[:, None] - within + suffix_after[:, None]
    at_zero = ctx.prefactor * float(seg.sum())

    # prefix part: K(r) * int_0^r w_in * g, accumulated in signed log space
    lwin = (2 * ctx.log_vol - ctx.log_density).reshape(P, M)
    with np.errstate(divide="ignore"):
        la = lwin + np.log(np.abs(g))
    sg = np.where(g >= 0, 1.0, -1.0)
    lk = ctx.log_scale.reshape(P, M)
    term1 = np.zeros((P, M))
    lpref, spref = -math.inf, 1.0
    for p in range(P):
        if p == P - 1 and ctx.last_panel_prefix is not None:
            # pole-side panel: dedicated sub-rules instead of the interpolant
            term1[p] = ctx.last_panel_prefix @ g[p]
            if lpref != -math.inf:
                term1[p] += spref * np.exp(lk[p] + lpref)
            break
        m_p = float(np.max(la[p]))
        if m_p == -math.inf:
            if lpref != -math.inf:
                term1[p] = spref * np.exp(lk[p] + lpref)
            continue
        h = sg[p] * np.exp(la[p] - m_p)
        if p == 0 and ctx.start_panel_prefix is not None:
            term1[p] = ctx.start_panel_prefix @ g[p]
        else:
            part = grid.half_widths[p] * (kmat @ h)
            with np.errstate(divide="ignore"):
                lpart = m_p + np.log(np.abs(part))
            lc, sc = _signed_logaddexp(lpref, spref, lpart,
                                       np.where(part >= 0, 1.0, -1.0))
            term1[p] = sc * np.exp(lk[p] + lc)
        tot = float(grid.weights[p] @ h)
        ltot = m_p + math.log(abs(tot)) if tot != 0.0 else -math.inf
        lpref, spref = _signed_logaddexp(lpref, spref, ltot, 1.0 if tot >= 0 else -1.0)
        lpref, spref = float(lpref), float(spref)
    return ctx.prefactor * (term1 + dpart).ravel(), at_zero


def green_apply(spec: ManifoldSpec, g: GridFunction) -> GridFunction:
    """G[g] sampled on g's grid; vanishes at the absorbing endpoint."""
    _check_domain(spec, g.grid)
    ctx = _green_context(spec, g.grid)
    vals, _ = _apply(ctx, g.values)
    return GridFunction(grid=g.grid, values=vals)


def green_value_at_zero(spec: ManifoldSpec, g: GridFunction) -> float:
    """G[g](0) = int_0^D omega * g (the entrance-boundary value)."""
    _check_domain(spec, g.grid)
    ctx = _green_context(spec, g.grid)
    _, at_zero = _apply(ctx, g.values)
    return at_zero


def _check_domain(spec: ManifoldSpec, grid: RadialGrid) -> None:
    want = 1.0 if spec.family is Family.TORUS else math.pi
    if abs(grid.domain_end - want) > 1e-15:
        raise GridMismatchError(
            f"grid covers [0, {grid.domain_end}], expected [0, {want}] for {spec.label}")


def _iterated_moment(spec: ManifoldSpec, k: int, grid: RadialGrid) -> float:
    ctx = _green_context(spec, grid)
    vals = np.ones(grid.size)
    at_zero = 0.0
    for _ in range(k):
        vals, at_zero = _apply(ctx, vals)
    return math.factorial(k) * at_zero


def moment_quadrature(spec: ManifoldSpec, k: int, rtol: float = 5e-7) -> float:
    """E[tau^k] by k iterated Green applications evaluated at the origin.

    Runs on the default grid and its panel-doubled refinement; disagreement
    beyond rtol raises AccuracyError. Documented range: 1 <= k <= 20.
    """
    if not 1 <= k <= 20:
        raise ValueError("moment order must satisfy 1 <= k <= 20")
    base = default_grid(spec)
    coarse = _iterated_moment(spec, k, base)
    fine = _iterated_moment(spec, k, _refined_default(spec))
    if abs(coarse - fine) > rtol * max(abs(fine), 1e-300):
        raise AccuracyError(
            f"grid refinement moved E[tau^{k}] of {spec.label} by "
            f"{abs(coarse / fine - 1):.2e} (> {rtol:.1e})")
    return fine


@lru_cache(maxsize=8)
def _refined_default_for_domain(domain_end: float) -> RadialGrid:
    return _default_grid_for_domain(domain_end).refined()


def _refined_default(spec: ManifoldSpec) -> RadialGrid:
    return _refined_default_for_domain(spec.diameter)


def kernel_value(spec: ManifoldSpec, r: float, s: float) -> float:
    """Symmetric Green kernel k(r, s), a function of max(r, s) only."""
    m = max(r, s)
    if spec.family is Family.TORUS:
        if not 0 < min(r, s) <= m < 1:
            raise DomainError("torus kernel needs 0 < r, s < 1")
        return 2.0 * (1.0 / m - 1.0)
    if not 0 < min(r, s) <= m < math.pi:
        raise DomainError("kernel needs 0 < r, s < pi")
    return math.exp(log_covolume(spec, m) - log_volume(spec, m)
                    - math.log(total_volume_closed(spec)))


def mean_closed(spec: ManifoldSpec) -> float:
    """E[tau] = H_delta / delta (spheres and C/H projective spaces)."""
    _require_closed_family(spec)
    d = _integer_delta(spec)
    return harmonic(d) / d


def variance_closed(spec: ManifoldSpec) -> float:
    """Var[tau] = (pi^2/3 - sum 1/k^2 - (2/delta) H_delta) / delta^2."""
    _require_closed_family(spec)
    d = _integer_delta(spec)
    sq = math.fsum(1.0 / (j * j) for j in range(1, d + 1))
    return (math.pi ** 2 / 3 - sq - 2 * harmonic(d) / d) / d ** 2


def _require_closed_family(spec: ManifoldSpec) -> None:
    if spec.family not in (Family.SPHERE, Family.COMPLEX_PROJECTIVE,
                           Family.QUATERNIONIC_PROJECTIVE):
        raise UnsupportedFamilyError(
            f"closed-form moments are not available for {spec.label}")


def _integer_delta(spec: ManifoldSpec) -> int:
    d = round(spec.delta)
    if d < 1 or abs(d - spec.delta) > 1e-12:
        raise UnsupportedFamilyError(f"delta = {spec.delta} is not a positive integer")
    return d


@dataclass(frozen=True)
class TorusCoeffs:
    """Coefficients b_k of z/sin(z) = sum b_k z^(2k); b_k = moments/(k! 2^k)."""

    b: np.ndarray

    def __len__(self) -> int:
        return len(self.b)


def torus_b_coeffs(k_max: int) -> TorusCoeffs:
    """b_0..b_k_max by the convolution recursion; exact rationals through k = 12."""
    if not 1 <= k_max <= 30:
        raise ValueError("k_max must be in 1..30")
    exact: list[Fraction] = [Fraction(1)]
    for k in range(1, min(k_max, 12) + 1):
        acc = Fraction(0)
        for m in range(1, k + 1):
            acc += exact[k - m] * Fraction((-1) ** m, math.factorial(2 * m + 1))
        exact.append(-acc)
    vals = [float(x) for x in exact]
    for k in range(len(vals), k_max + 1):
        acc = 0.0
        for m in range(1, k + 1):
            acc += vals[k - m] * (-1) ** m / math.factorial(2 * m + 1)
        vals.append(-acc)
    return TorusCoeffs(b=np.array(vals))


def torus_b_closed(k: int) -> float:
    """Closed form 2 pi^(-2k) (1 - 2^(1-2k)) zeta(2k), k >= 1 (oracle for b_k)."""
    if k < 1:
        raise ValueError("need k >= 1")
    return 2.0 * math.pi ** (-2 * k) * (1 - 2.0 ** (1 - 2 * k)) * zeta_even(k)


def torus_mgf(lam: float) -> float:
    """E[exp(lam * tau)] = sqrt(2 lam)/sin(sqrt(2 lam)) on [0, pi^2/2)."""
    if lam < 0 or lam >= math.pi ** 2 / 2:
        raise DomainError("moment generating function defined for 0 <= lam < pi^2/2")
    if lam == 0.0:
        return 1.0
    z = math.sqrt(2 * lam)
    return z / math.sin(z)


def torus_mgf_series(lam: float, k_max: int = 30) -> float:
    """Power-series cross-check: sum_k (2 lam)^k b_k."""
    if lam < 0 or lam >= math.pi ** 2 / 2:
        raise DomainError("moment generating function defined for 0 <= lam < pi^2/2")
    b = torus_b_coeffs(k_max).b
    return math.fsum(b[k] * (2 * lam) ** k for k in range(k_max + 1))


def radial_integral(spec: ManifoldSpec, fn) -> float:
    """int_0^D fn(r) dr on the default graded mesh (plain dr measure)."""
    grid = default_grid(spec)
    vals = np.asarray(fn(grid.flat_nodes), dtype=float)
    return float(grid.weights.ravel() @ vals)


def volume_integral(spec: ManifoldSpec, fn) -> float:
    """int_0^pi fn(r) I'(r) dr under the pinned normalization."""
    grid = default_grid(spec)
    flat = grid.flat_nodes
    w = grid.weights.ravel() * np.exp(_log_density_pinned(spec, flat))
    return float(w @ np.asarray(fn(flat), dtype=float))
