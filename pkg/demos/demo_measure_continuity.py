"""Continuity diagnostics for the representing measures.

The squared modulus of the kernel on the imaginary axis is the squared
Fourier-Stieltjes transform of a probability measure; ball averages that
decay to zero certify that the measure has no atoms.  An atom (the
trivial multiplicity) keeps the average pinned at the ball-volume
constant, while positive multiplicities drive it down at a rate that is
known in closed form on the line.

Run:  python demos/demo_measure_continuity.py   (about half a minute)
"""

from dunkl import (chamber_interior_point, continuity_slope, generate_group,
                   make_root_system, rank1_measure_cdf, wiener_scan)

print("=== atom signature: trivial multiplicity on the line ===")
rs0 = make_root_system("Z2", 1, [0.0])
g0 = generate_group(rs0)
scan = wiener_scan(rs0, g0, [1.0], [4.0, 8.0, 16.0, 32.0])
for n, avg in scan.rows():
    print(f"   n = {n:5.0f}: average = {avg:.12f}")
print("   constant average: the measure is a point mass")

print("\n=== decay rates on the line: -min(1, 2k) ===")
for k, expected in [(0.25, -0.5), (2.0, -1.0)]:
    rs = make_root_system("Z2", 1, [k])
    g = generate_group(rs)
    scan = wiener_scan(rs, g, [1.0], [32.0, 64.0, 128.0, 256.0, 512.0])
    slope = continuity_slope(scan)
    print(f"   k = {k}: fitted log-log slope {slope:+.4f}  (expected about {expected})")

print("\n=== dihedral group I2(4), k = (1,1) ===")
rs4 = make_root_system("I2", 4, [1.0, 1.0])
g4 = generate_group(rs4)
scan = wiener_scan(rs4, g4, chamber_interior_point(rs4) * 1.1, [4.0, 8.0, 16.0, 32.0])
for n, avg in scan.rows():
    print(f"   n = {n:5.0f}: average = {avg:.8f}")
print(f"   fitted slope {continuity_slope(scan):+.3f}: strictly decreasing, "
      "so the measure is continuous")

print("\n=== the rank-one measure itself ===")
print("distribution function at k = 1, x = 1:")
for u in (-1.0, -0.5, 0.0, 0.5, 1.0):
    print(f"   F({u:+.1f}) = {rank1_measure_cdf(1.0, 1.0, u):.6f}")
