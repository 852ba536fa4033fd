#!/usr/bin/env python3
"""Monte Carlo of the dual radius processes against the analytic laws.

Simulates the Bessel(3) covering time of one torus coordinate, the dual ball
radius on S^2 and S^3, and the torus strong stationary time (max of n iid
coordinates), then compares empirical statistics with the exact series and
closed forms. Sizes here are modest so the script runs in under a minute;
the acceptance suite repeats this at 10^5 paths and dt = 1e-4.
"""

import math

import numpy as np

from cutofflab import (McConfig, empirical_tail, ks_distance, make_spec,
                       mean_closed, separation_torus, sim_bessel3_hitting,
                       sim_radius_hitting, sim_torus_sst, tail_manifold,
                       tail_torus_single, variance_closed)

cfg = McConfig(n_paths=20000, dt=2e-4, seed=42)

print("=== Bessel(3) covering time of one coordinate ===")
out = sim_bessel3_hitting(cfg, workers=2)
s = out.samples
se = s.std(ddof=1) / math.sqrt(len(s))
print(f"paths {len(s)}, floor touches {out.floor_hits}")
print(f"mean {s.mean():.5f} vs 1/3,  deviation {(s.mean() - 1/3)/se:+.2f} SE")
ks = ks_distance(out, lambda x: tail_torus_single(x).value,
                 np.linspace(0.05, 1.2, 20))
print(f"Kolmogorov distance to the theta-like series: {ks:.4f}")

for n in (2, 3):
    spec = make_spec("sphere", n)
    out = sim_radius_hitting(spec, cfg, workers=2)
    s = out.samples
    se = s.std(ddof=1) / math.sqrt(len(s))
    print(f"\n=== dual radius on {spec.label} ===")
    print(f"mean {s.mean():.5f} vs {mean_closed(spec):.5f}, "
          f"deviation {(s.mean() - mean_closed(spec))/se:+.2f} SE")
    print(f"variance {s.var(ddof=1):.5f} vs {variance_closed(spec):.5f}")
    for x in (0.5, 1.0, 2.0):
        print(f"P[tau >= {x}]: empirical {empirical_tail(out, x):.5f} "
              f"series {tail_manifold(spec, x).value:.5f}")

print("\n=== torus strong stationary time, n = 500 coordinates ===")
n = 500
sst = sim_torus_sst(n, McConfig(n_paths=400, dt=1e-3, seed=7), workers=2)
t_cut = 2 * math.log(n) / math.pi ** 2
print(f"cutoff time 2 ln(n)/pi^2 = {t_cut:.4f}")
print(f"empirical P[max > t_cut] = {empirical_tail(sst, t_cut):.4f} "
      f"vs separation {separation_torus(n, t_cut):.4f}")
centered = sst.samples - t_cut
gum_mean = (2 * math.log(2) + 2 * 0.5772156649015329) / math.pi ** 2
print(f"centred mean {centered.mean():.4f} vs Gumbel mean {gum_mean:.4f}")
