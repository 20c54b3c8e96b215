import numpy as np
import pytest

from dunkl import (BentCurve, ExtractOptions, Ray, chamber_interior_point,
                   extract_v, generate_group, make_root_system)


def build(family, param, mult):
    rs = make_root_system(family, param, mult)
    return rs, generate_group(rs)


@pytest.fixture(scope="session")
def z2_1_k1():
    return build("Z2", 1, [1.0])


@pytest.fixture(scope="session")
def i2_4_k11():
    return build("I2", 4, [1.0, 1.0])


@pytest.fixture(scope="session")
def i2_4_limit_runs(i2_4_k11):
    """Three independent limit extractions on I2(4), k=(1,1): a ray, a bent
    curve, and a second parameter point.  Shared by the symmetry,
    curve-independence, and identity-component acceptance checks."""
    rs, group = i2_4_k11
    y = chamber_interior_point(rs)
    x = np.array([np.cos(np.pi / 10), np.sin(np.pi / 10)])
    y2 = np.array([np.cos(np.pi / 5.5), np.sin(np.pi / 5.5)]) * 1.3
    bent = BentCurve(waypoints=[3.0 * x,
                                8.0 * np.array([np.cos(np.pi / 6.5), np.sin(np.pi / 6.5)]),
                                20.0 * y])
    opts = ExtractOptions(T=8e3, tol=1e-10)
    runs = {
        "ray": extract_v(Ray(x), group, rs, y, opts),
        "bent": extract_v(bent, group, rs, y, opts),
        "ray_y2": extract_v(Ray(x), group, rs, y2, opts),
    }
    return rs, group, runs
