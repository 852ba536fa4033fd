#!/usr/bin/env python3
"""Separation profiles on spheres and projective spaces.

The covering time of the dual ball has an alternating eigenvalue series for
its tail, which at times ln(n)/n + c/n (spheres) or 2 ln(n)/n + c/n
(projective spaces) collapses onto a double-exponential limit profile:
1 - exp(-e^{-c/a}/a), a = 1 or 2. The tables below show the finite-n
separation marching toward that limit as n grows, and the window check shows
the profile staying strictly inside (0, 1) at a_n +- r/n.
"""

from cutofflab import gumbel_profile, profile_table, window_optimality_check

for family, dims, tag in (("sphere", (25, 50, 100, 200), "spheres S^n"),
                          ("cp", (16, 50, 100, 200), "complex projective P^n(C)")):
    print(f"=== {tag} ===")
    cs = [-1.0, 0.0, 1.0, 2.0]
    rows = profile_table(family, dims, cs)
    by_c = {c: {} for c in cs}
    for r in rows:
        by_c[r.c][r.n] = r
    print(f"{'c':>5} " + " ".join(f"{'n=' + str(n):>10}" for n in dims)
          + f" {'limit':>10} {'gap@max n':>10}")
    for c in cs:
        cells = " ".join(f"{by_c[c][n].s_exact:10.6f}" for n in dims)
        lim = gumbel_profile(family, c)
        print(f"{c:>5.1f} {cells} {lim:10.6f} {by_c[c][dims[-1]].gap:10.2e}")
    print()

print("=== window optimality: sphere n = 200, s(a_n +- r b_n) ===")
for pt in window_optimality_check("sphere", 200, [0.5, 1.0, 2.0, 3.0]):
    print(f"r={pt.r:3.1f}: s(a+rb)={pt.s_plus:.6f}  s(a-rb)={pt.s_minus:.6f}")
print("both branches stay strictly inside (0, 1): the 1/n window is sharp")
