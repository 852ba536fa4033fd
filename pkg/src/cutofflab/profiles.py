"""Limiting cutoff profiles, cutoff times/windows and convergence tables.

The centered covering times converge to Gumbel laws, so the separation
profile approaches a double exponential: 1 - exp(-2 e^{-pi^2 c / 2}) for the
torus, 1 - exp(-e^{-c/a}/a) with a = 1 for spheres and a = 2 for all three
projective families. Exact finite-n values come from the spectral tails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError
from .manifolds import Family, make_spec
from .spectral import separation_manifold, separation_torus

__all__ = [
    "ProfileRow",
    "WindowPoint",
    "gumbel_profile",
    "cutoff_time",
    "profile_table",
    "window_optimality_check",
    "exact_separation",
]


@dataclass(frozen=True)
class ProfileRow:
    n: int
    c: float
    t: float
    s_exact: float
    s_limit: float
    gap: float
    valid: bool = True


@dataclass(frozen=True)
class WindowPoint:
    r: float
    s_plus: float
    s_minus: float


def gumbel_profile(family: Family | str, c: float) -> float:
    """Limiting separation profile at window position c."""
    family = Family(family)
    if family is Family.TORUS:
        return -math.expm1(-2.0 * math.exp(-math.pi ** 2 * c / 2))
    a = 1.0 if family is Family.SPHERE else 2.0
    return -math.expm1(-math.exp(-c / a) / a)


def cutoff_time(family: Family | str, n: int) -> tuple[float, float]:
    """(cutoff time a_n, window b_n) for dimension n >= 2."""
    family = Family(family)
    if n < 2:
        raise ValueError("cutoff asymptotics need n >= 2")
    if family is Family.TORUS:
        return 2.0 * math.log(n) / math.pi ** 2, 1.0
    if family is Family.SPHERE:
        return math.log(n) / n, 1.0 / n
    return 2.0 * math.log(n) / n, 1.0 / n


def exact_separation(family: Family | str, n: int, t: float, tol: float = 1e-10) -> float:
    """Finite-n separation at absolute time t (spectral series)."""
    family = Family(family)
    if family is Family.TORUS:
        return separation_torus(n, t)
    return separation_manifold(make_spec(family, n), t, tol)


def profile_table(family: Family | str, n_list, c_grid, tol: float = 1e-10) -> list[ProfileRow]:
    """One row per (n, c), ordered; rows with t <= 0 or failed series are flagged."""
    family = Family(family)
    rows: list[ProfileRow] = []
    for n in sorted(n_list):
        a_n, b_n = cutoff_time(family, n)
        for c in sorted(c_grid):
            t = a_n + c * b_n
            s_lim = gumbel_profile(family, c)
            if t <= 0:
                rows.append(ProfileRow(n=n, c=c, t=t, s_exact=math.nan,
                                       s_limit=s_lim, gap=math.nan, valid=False))
                continue
            try:
                s = exact_separation(family, n, t, tol)
            except ConvergenceError:
                rows.append(ProfileRow(n=n, c=c, t=t, s_exact=math.nan,
                                       s_limit=s_lim, gap=math.nan, valid=False))
                continue
            rows.append(ProfileRow(n=n, c=c, t=t, s_exact=s, s_limit=s_lim,
                                   gap=abs(s - s_lim)))
    return rows


def window_optimality_check(family: Family | str, n: int, r_list,
                            tol: float = 1e-10) -> list[WindowPoint]:
    """Separation at a_n +- r b_n; stays strictly inside (0, 1) for optimal windows."""
    family = Family(family)
    a_n, b_n = cutoff_time(family, n)
    out: list[WindowPoint] = []
    for r in r_list:
        if r < 0:
            raise ValueError("window multiples must be nonnegative")
        if a_n - r * b_n <= 0:
            raise ValueError(f"a_n - r b_n <= 0 at r = {r}; no finite-n value there")
        out.append(WindowPoint(
            r=r,
            s_plus=exact_separation(family, n, a_n + r * b_n, tol),
            s_minus=exact_separation(family, n, a_n - r * b_n, tol)))
    return out
