"""Right-half-plane limits and the short-time Gaussian behavior of the
heat kernel.

The normalized kernel combination converges to the same constant along
every ray into the right half plane; specializing to the real axis gives
the statement that, after weight normalization, the deformed heat kernel
looks like the free Gaussian for short times.

Run:  python demos/demo_half_plane_and_heat.py
"""

import numpy as np

from dunkl import (HeatQuery, chamber_interior_point, complex_ray_limit,
                   free_heat_kernel, generate_group, heat_kernel,
                   make_root_system, shorttime_ratio_detail)

print("=== angle sweep of the half-plane limit ===")
for family, param, mult in [("Z2", 1, [1.0]), ("I2", 3, [1.0])]:
    rs = make_root_system(family, param, mult)
    group = generate_group(rs)
    x = chamber_interior_point(rs)
    label = f"{family}^{param}" if family == "Z2" else f"{family}({param})"
    print(f"{label}:")
    for theta in (0.0, np.pi / 4, np.pi / 2):
        val = complex_ray_limit(group, rs, x, x, theta, 1e3)
        print(f"   theta = {theta:6.4f}: {val:+.8f}")

print("\n=== heat kernel values ===")
rs = make_root_system("Z2", 1, [1.0])
group = generate_group(rs)
q = HeatQuery(0.5, [1.0], [1.0])
print(f"rank one, k=1, t=0.5, x=y=1: {heat_kernel(rs, group, q):.12g}")
print(f"free Gaussian at same point: {free_heat_kernel(1, q.t, q.x, q.y):.12g}")

print("\n=== normalized short-time ratio marches to 1 ===")
for family, param, mult in [("Z2", 1, [1.0]), ("I2", 4, [1.0, 1.0])]:
    rs = make_root_system(family, param, mult)
    group = generate_group(rs)
    x = chamber_interior_point(rs)
    label = f"{family}^{param}" if family == "Z2" else f"{family}({param})"
    print(f"{label}:")
    for t, ratio, path in shorttime_ratio_detail(rs, group, x, x,
                                                 [1e-1, 1e-2, 1e-3, 1e-4]):
        print(f"   t = {t:7.4g}: ratio = {ratio:.6f}   [{path}]")
