"""Walk through the geometric substrate: roots, groups, chambers, weights.

Run:  python demos/demo_groups_and_weights.py
"""

import numpy as np

from dunkl import (chamber_interior_point, chamber_test, gamma_index,
                   generate_group, make_root_system, mehta_constant, weight)

for family, param, mult in [("Z2", 1, [1.0]), ("Z2", 3, [0.5, 1.0, 0.0]),
                            ("I2", 3, [1.0]), ("I2", 4, [1.0, 1.0]),
                            ("I2", 5, [0.7])]:
    rs = make_root_system(family, param, mult)
    group = generate_group(rs)
    label = f"{family}^{param}" if family == "Z2" else f"{family}({param})"
    print(f"\n=== {label}, multiplicities {mult} ===")
    print(f"positive roots ({len(rs.positive_roots)}):")
    for root, orbit in zip(rs.positive_roots, rs.orbit_ids):
        print(f"   {np.round(root, 6)}   orbit {orbit}")
    print(f"group order |G| = {group.order}")
    print(f"index gamma     = {gamma_index(rs)}")
    print(f"Mehta constant  = {mehta_constant(rs):.12g}")

    c = chamber_interior_point(rs)
    print(f"chamber point   = {np.round(c, 6)}  "
          f"(inside C: {chamber_test(rs, c)}, inside C_0.2: {chamber_test(rs, c, 0.2)})")
    x = 1.7 * c
    print(f"weight at {np.round(x, 4)}: {weight(rs, x):.8g}")
    lam = 2.0
    print(f"homogeneity check: w(2x)/w(x) = {weight(rs, lam * x) / weight(rs, x):.8g}"
          f" vs 2^(2 gamma) = {lam ** (2 * gamma_index(rs)):.8g}")
