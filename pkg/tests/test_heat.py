import math

import numpy as np
import pytest
from scipy import integrate

from dunkl import (ConfigError, HeatQuery, chamber_interior_point,
                   continuity_slope, free_heat_kernel, generate_group,
                   heat_kernel, make_root_system, mehta_constant,
                   product_decomposition_check, rank1_kernel,
                   rank1_measure_cdf, shorttime_ratio, shorttime_ratio_detail,
                   weight, wiener_average, wiener_scan)
from dunkl.heat import WienerScan


def test_heat_gaussian_reduction():
    rs = make_root_system("Z2", 2, [0.0, 0.0])
    group = generate_group(rs)
    q = HeatQuery(0.37, [0.5, 0.2], [1.0, 0.4])
    assert heat_kernel(rs, group, q) == pytest.approx(
        free_heat_kernel(2, q.t, q.x, q.y), rel=1e-12)


def test_heat_symmetry_and_invariance(i2_4_k11):
    rs, group = i2_4_k11
    x = chamber_interior_point(rs) * 0.9
    y = np.array([np.cos(np.pi / 5.5), np.sin(np.pi / 5.5)]) * 1.2
    a = heat_kernel(rs, group, HeatQuery(0.8, x, y))
    b = heat_kernel(rs, group, HeatQuery(0.8, y, x))
    assert a == pytest.approx(b, rel=1e-11)
    for g in group.elements[:4]:
        c = heat_kernel(rs, group, HeatQuery(0.8, g @ x, g @ y))
        assert c == pytest.approx(a, rel=1e-10)


def test_heat_rank_one_closed_form(z2_1_k1):
    rs, group = z2_1_k1
    t = 0.5
    val = heat_kernel(rs, group, HeatQuery(t, [1.0], [1.0]))
    ck = mehta_constant(rs)
    s = 1.0 / math.sqrt(2 * t)
    ref = (2 * t) ** (-1.5) / ck * math.exp(-2 / (4 * t)) * rank1_kernel(1.0, s, s).real
    assert val == pytest.approx(ref, rel=1e-12)


def test_heat_mass_rank_one(z2_1_k1):
    # int heat(t, x, y) w(y) dy = 1 over a generous truncation; the domain
    # keeps |x||y| / (2t) inside the series regime while the dropped
    # Gaussian tail is far below the tolerance
    rs, group = z2_1_k1
    t, x = 0.5, 0.8
    val, _ = integrate.quad(
        lambda y: heat_kernel(rs, group, HeatQuery(t, [x], [y])) * weight(rs, [y]),
        -8.0, 8.0, limit=200)
    assert val == pytest.approx(1.0, abs=1e-3)


def test_shorttime_ratio_trivial_multiplicity():
    rs = make_root_system("Z2", 2, [0.0, 0.0])
    group = generate_group(rs)
    ratios = shorttime_ratio(rs, group, [0.5, 0.2], [1.0, 0.4], [1e-1, 1e-3])
    for r in ratios:
        assert abs(r - 1.0) <= 1e-12


def test_shorttime_ratio_rank_one(z2_1_k1):
    rs, group = z2_1_k1
    rows = shorttime_ratio_detail(rs, group, [1.0], [1.0],
                                  [1e-1, 1e-2, 1e-3, 1e-4])
    ratios = [r for _, r, _ in rows]
    assert abs(ratios[-1] - 1.0) <= 0.05
    # monotone approach to 1 over the last three grid points
    assert abs(ratios[-1] - 1) < abs(ratios[-2] - 1) < abs(ratios[-3] - 1)
    assert rows[0][2] == "series" and rows[-1][2] == "ode"
    with pytest.raises(ConfigError):
        shorttime_ratio(rs, group, [1.0], [1.0], [0.1, -0.2])


def test_wiener_atom_signature():
    rs = make_root_system("Z2", 1, [0.0])
    group = generate_group(rs)
    scan = wiener_scan(rs, group, [0.7], [2.0, 4.0, 8.0, 16.0])
    for avg in scan.averages:
        assert avg == pytest.approx(2.0, abs=1e-12)
    assert abs(continuity_slope(scan)) < 1e-10


def test_wiener_rank_one_against_quadrature_oracle():
    rs = make_root_system("Z2", 1, [0.25])
    group = generate_group(rs)
    scan = wiener_scan(rs, group, [1.0], [4.0, 8.0])
    for n, avg in scan.rows():
        ref, _ = integrate.quad(lambda xi: abs(rank1_kernel(0.25, 1j, xi)) ** 2,
                                -n, n, limit=2000)
        assert avg == pytest.approx(ref / n, abs=1e-8)


def test_wiener_invariance_under_reflection():
    rs = make_root_system("Z2", 1, [0.6])
    group = generate_group(rs)
    a = wiener_average(rs, group, [1.3], 6.0)
    b = wiener_average(rs, group, [-1.3], 6.0)
    assert a == pytest.approx(b, rel=1e-10)
    with pytest.raises(ConfigError):
        wiener_average(rs, group, [0.0], 4.0)


def test_continuity_slope_validation():
    with pytest.raises(ConfigError):
        continuity_slope(WienerScan(np.array([1.0]), (1.0, 2.0), (0.5, 0.4)))
    with pytest.raises(ConfigError):
        continuity_slope(WienerScan(np.array([1.0]), (1., 2., 4., 8.),
                                    (0.5, 0.4, -0.1, 0.2)))


def test_product_decomposition():
    rs2 = make_root_system("Z2", 2, [1.0, 0.0])
    assert product_decomposition_check(rs2, [0.5, 0.8], [1.1, -0.3]) <= 1e-10
    rs0 = make_root_system("Z2", 2, [0.0, 0.0])
    assert product_decomposition_check(rs0, [0.5, 0.8], [1.1, -0.3]) <= 1e-12
    rs3 = make_root_system("Z2", 3, [1.0, 1.0, 0.0])
    assert product_decomposition_check(rs3, [0.5, 0.4, 0.8], [1.1, 0.2, -0.3]) <= 1e-10
    # residual tracks the series tolerance
    loose = product_decomposition_check(rs3, [0.9, 0.7, 0.8], [1.1, 0.9, -0.3],
                                        tol=1e-6)
    tight = product_decomposition_check(rs3, [0.9, 0.7, 0.8], [1.1, 0.9, -0.3],
                                        tol=1e-12)
    assert loose <= 2e-6 and tight <= 2e-12
    with pytest.raises(ConfigError):
        product_decomposition_check(make_root_system("I2", 4, [1, 0]), [1, 0.2], [1, 0.3])


def test_rank1_cdf():
    assert rank1_measure_cdf(1.0, 1.0, 1.0) == 1.0
    assert rank1_measure_cdf(1.0, 1.0, -1.0) == 0.0
    assert rank1_measure_cdf(1.0, 1.0, 0.0) == pytest.approx(0.25, abs=1e-12)
    # quadrature oracle at an asymmetric point
    k, u0 = 1.75, 0.3
    from dunkl import rank1_density
    ref, _ = integrate.quad(lambda u: rank1_density(k, 1.0, u), -1.0, u0, limit=400)
    assert rank1_measure_cdf(k, 1.0, u0) == pytest.approx(ref, abs=1e-9)
    # monotone in u
    vals = [rank1_measure_cdf(0.6, 1.0, u) for u in np.linspace(-1, 1, 41)]
    assert all(b >= a - 1e-13 for a, b in zip(vals, vals[1:]))
    with pytest.raises(ConfigError):
        rank1_measure_cdf(0.0, 1.0, 0.0)
