import json
import math

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from dunkl import (ConditionError, ExtractOptions, Ray, bound_probe,
                   chamber_interior_point, complex_ray_limit, extract_v,
                   field_F, generate_group, integrate_F, invariance_suite,
                   limit_constant_e, make_root_system, matrix_A,
                   matrix_A_tilde, rank1_kernel, rank1_v, unit_weight,
                   wintner_check)
from dunkl.asymptotics import phase_data

mp.mp.dps = 30


def _rank1_field_oracle(k, t, y):
    """Closed-form components for the sign-change group on the line."""
    amp = (t * abs(y)) ** k
    return np.array([amp * np.exp(-1j * t * y) * rank1_kernel(k, 1j * t, y),
                     amp * np.exp(1j * t * y) * rank1_kernel(k, 1j * t, -y)])


def test_field_trivial_multiplicity():
    rs = make_root_system("I2", 3, [0.0])
    group = generate_group(rs)
    x = chamber_interior_point(rs) * 1.3
    F = field_F(rs, group, x, chamber_interior_point(rs))
    assert np.max(np.abs(F - 1.0)) < 1e-11


def test_field_rank_one_oracle(z2_1_k1):
    rs, group = z2_1_k1
    for t in (1.0, 3.0):
        F = field_F(rs, group, [t], [1.0])
        ref = _rank1_field_oracle(1.0, t, 1.0)
        assert np.max(np.abs(F - ref)) < 1e-11


def test_field_transposition_symmetry(i2_4_k11):
    rs, group = i2_4_k11
    x = chamber_interior_point(rs)
    y = np.array([np.cos(np.pi / 5.2), np.sin(np.pi / 5.2)])
    t = 1.7
    Fx = field_F(rs, group, t * x, y)
    Fy = field_F(rs, group, t * y, x)
    assert np.max(np.abs(Fx - Fy[group.inverse_index])) < 1e-10


def test_matrix_A_structure(i2_4_k11):
    rs, group = i2_4_k11
    y = chamber_interior_point(rs)
    x = np.array([np.cos(np.pi / 9), np.sin(np.pi / 9)])
    ray = Ray(x)
    t = 5.0
    A = matrix_A(ray, group, rs, y, t)
    pd = phase_data(group, rs, y)
    # ray entries are (1/t) e^{-i t <a,x><a,gy>} at the reflected column
    expected = np.zeros_like(A)
    for r in range(4):
        for g in range(group.order):
            w = float(rs.positive_roots[r] @ x) * pd.ay[r, g]
            expected[g, pd.perm[r, g]] += (1.0 / t) * np.exp(-1j * t * w)
    assert np.max(np.abs(A - expected)) < 1e-13
    # row sparsity: at most |R+| distinct columns per row
    for g in range(group.order):
        cols = set(pd.perm[:, g])
        nz = np.nonzero(np.abs(A[g]) > 1e-15)[0]
        assert set(nz) <= cols


def test_matrix_A_zero_multiplicity():
    rs = make_root_system("I2", 4, [0.0, 0.0])
    group = generate_group(rs)
    ray = Ray(chamber_interior_point(rs))
    assert np.max(np.abs(matrix_A(ray, group, rs, chamber_interior_point(rs), 3.0))) == 0.0
    assert np.max(np.abs(matrix_A_tilde(ray, group, rs, chamber_interior_point(rs), 3.0))) == 0.0


def test_matrix_A_tilde_decay_and_quadrature(z2_1_k1):
    rs, group = z2_1_k1
    ray = Ray(np.array([1.0]))
    y = np.array([1.0])
    pd = phase_data(group, rs, y)
    # entrywise envelope 4 k / phi
    for t in (5.0, 50.0, 500.0):
        at = matrix_A_tilde(ray, group, rs, y, t)
        for r in range(1):
            for g in range(2):
                phi = t * math.sqrt(2) * abs(pd.ay[r, g])
                assert abs(at[g, pd.perm[r, g]]) <= 4.0 / phi + 1e-15
    # oscillatory quadrature cross-check: int_t^T A = Atilde(t) - Atilde(T)
    t_lo, t_hi = 6.0, 60.0
    diff = matrix_A_tilde(ray, group, rs, y, t_lo) - matrix_A_tilde(ray, group, rs, y, t_hi)
    for g, h in [(0, 1), (1, 0)]:
        re, _ = integrate.quad(
            lambda s: matrix_A(ray, group, rs, y, s)[g, h].real, t_lo, t_hi,
            limit=4000)
        im, _ = integrate.quad(
            lambda s: matrix_A(ray, group, rs, y, s)[g, h].imag, t_lo, t_hi,
            limit=4000)
        assert re + 1j * im == pytest.approx(diff[g, h], abs=1e-8)


def test_wintner_check(z2_1_k1, i2_4_k11):
    rs, group = z2_1_k1
    rep = wintner_check(Ray(np.array([1.0])), group, rs, np.array([1.0]), 4.0, 400.0)
    assert rep.cond1_ok and rep.cond2_ok
    assert rep.cond2_tail <= 0.1
    # norms of the closed-form tail decay along the samples
    assert rep.atilde_norms[-1][1] < rep.atilde_norms[0][1]

    # k = 0: everything vanishes
    rs0 = make_root_system("Z2", 1, [0.0])
    g0 = generate_group(rs0)
    rep0 = wintner_check(Ray(np.array([1.0])), g0, rs0, np.array([1.0]), 4.0, 400.0)
    assert rep0.cond2_integral == 0.0 and rep0.cond2_tail == 0.0

    # bent curve through prescribed chamber waypoints also certifies
    rs4b = make_root_system("I2", 4, [1.0, 1.0])
    g4b = generate_group(rs4b)
    from dunkl import BentCurve
    a = np.array([np.cos(np.pi / 10), np.sin(np.pi / 10)])
    b = np.array([np.cos(np.pi / 6), np.sin(np.pi / 6)])
    bent = BentCurve(waypoints=[3.0 * a, 8.0 * b, 18.0 * a])
    rep_b = wintner_check(bent, g4b, rs4b, chamber_interior_point(rs4b), 8.0, 500.0)
    assert rep_b.cond1_ok and rep_b.cond2_ok and rep_b.delta_certificate > 0.1

    # the envelope really bounds ||A Atilde|| pointwise
    rs4, g4 = i2_4_k11
    y = chamber_interior_point(rs4)
    ray = Ray(np.array([np.cos(np.pi / 9), np.sin(np.pi / 9)]))
    from dunkl import certify_admissible
    from dunkl.asymptotics import _envelope
    pd = phase_data(g4, rs4, y)
    delta = certify_admissible(ray, rs4, 8.0, 300.0)
    env, _ = _envelope(pd, ray, delta)
    for t in np.geomspace(8.0, 300.0, 25):
        prod = matrix_A(ray, g4, rs4, y, float(t)) @ matrix_A_tilde(ray, g4, rs4, y, float(t))
        exact = float(np.max(np.sum(np.abs(prod), axis=1)))
        assert exact <= env(float(t)) * (1 + 1e-12)


def test_integrate_constant_for_zero_multiplicity():
    rs = make_root_system("I2", 3, [0.0])
    group = generate_group(rs)
    d = chamber_interior_point(rs)
    F = integrate_F(Ray(d), group, rs, d, 4.0, 200.0, tol=1e-11)
    assert np.max(np.abs(F - 1.0)) < 1e-11


def test_integrate_rank_one_against_closed_form(z2_1_k1):
    rs, group = z2_1_k1
    F = integrate_F(Ray(np.array([1.0])), group, rs, np.array([1.0]), 8.0, 20.0,
                    tol=1e-11)
    ref = _rank1_field_oracle(1.0, 20.0, 1.0)
    assert np.max(np.abs(F - ref)) <= 1e-6


def test_extract_v_rank_one(z2_1_k1):
    rs, group = z2_1_k1
    rep = extract_v(Ray(np.array([1.0])), group, rs, np.array([1.0]),
                    T=1e3, tol=1e-10)
    ve, vs = rank1_v(1.0)
    assert abs(rep.v[0] - ve) < 1e-5
    assert abs(rep.v[1] - vs) < 1e-5
    assert rep.wintner.cond1_ok
    # report serializes to JSON
    doc = json.dumps(rep.to_json_dict())
    assert json.loads(doc)["T"] == 1e3


def test_extract_v_zero_multiplicity_exact():
    rs = make_root_system("I2", 3, [0.0])
    group = generate_group(rs)
    d = chamber_interior_point(rs)
    rep = extract_v(Ray(d), group, rs, d, T=300.0, tol=1e-11)
    assert np.max(np.abs(rep.v - 1.0)) < 1e-12


def test_extract_v_rescaling_invariance(z2_1_k1):
    rs, group = z2_1_k1
    r1 = extract_v(Ray(np.array([1.0])), group, rs, np.array([0.8]), T=1500.0)
    r2 = extract_v(Ray(np.array([1.0])), group, rs, np.array([1.6]), T=1500.0)
    assert np.max(np.abs(r1.v - r2.v)) < 1e-4


def test_acceleration_consistency(z2_1_k1):
    rs, group = z2_1_k1
    ray = Ray(np.array([1.0]))
    y = np.array([1.0])
    deltas = {}
    for T in (500.0, 2000.0):
        # first-order resolvent: the distance between raw endpoint and
        # accelerated value is controlled by the tail-integral norm
        rep1 = extract_v(ray, group, rs, y, T=T, second_order=False)
        atilde_norm = float(np.max(np.sum(np.abs(
            matrix_A_tilde(ray, group, rs, y, T)), axis=1)))
        assert rep1.acceleration_delta <= 1.5 * atilde_norm * float(np.max(np.abs(rep1.v))) + 1e-12
        rep = extract_v(ray, group, rs, y, T=T)
        deltas[T] = rep.acceleration_delta
    assert deltas[2000.0] < deltas[500.0]


def test_invariance_suite_smoke(z2_1_k1):
    rs, group = z2_1_k1
    rep = invariance_suite(group, rs, [np.array([0.9]), np.array([1.2])],
                           [Ray(np.array([1.0]))],
                           ExtractOptions(T=1500.0))
    assert rep.max_cross_discrepancy < 1e-4
    assert rep.max_inverse_asymmetry < 1e-6


def test_limit_constant_rank_one_matches_duplication():
    for k in (0.25, 0.5, 1.0, 2.0):
        rs = make_root_system("Z2", 1, [k])
        assert limit_constant_e(rs) == pytest.approx(rank1_v(k)[0], rel=1e-8)


def test_complex_ray_zero_multiplicity():
    rs = make_root_system("I2", 3, [0.0])
    group = generate_group(rs)
    d = chamber_interior_point(rs)
    for theta in (0.0, np.pi / 4, np.pi / 2):
        val = complex_ray_limit(group, rs, d, d, theta, 400.0)
        assert val == pytest.approx(1.0, abs=1e-9)


def test_complex_ray_rank_one_oracle(z2_1_k1):
    rs, group = z2_1_k1
    val = complex_ray_limit(group, rs, [1.0], [1.0], 0.0, 1e3)
    oracle = complex(mp.mpf(1000) ** 1 * mp.hyp1f1(1, 3, -2000))
    assert abs(val - oracle) < 1e-3
    with pytest.raises(ConditionError):
        complex_ray_limit(group, rs, [-1.0], [1.0], 0.0, 100.0)


def test_bound_probe(z2_1_k1):
    rs0 = make_root_system("Z2", 1, [0.0])
    g0 = generate_group(rs0)
    sup0 = bound_probe(g0, rs0, np.array([1.0]), 0.5, [1.0, 4.0, 16.0])
    assert sup0 == pytest.approx(1.0, abs=1e-9)

    rs, group = z2_1_k1
    grid = [0.5, 1.0, 2.0, 4.0, 16.0, 64.0]
    sup = bound_probe(group, rs, np.array([1.0]), 0.5, grid)
    # finite, and consistent with |v|^2 = 1 plus a bounded transient
    assert 1.0 - 1e-6 <= sup < 10.0

    rs4 = make_root_system("I2", 4, [1.0, 1.0])
    g4 = generate_group(rs4)
    sups = [bound_probe(g4, rs4, chamber_interior_point(rs4), d, [1.0, 4.0, 12.0])
            for d in (0.05, 0.25, 0.45)]
    assert sups[0] >= sups[1] >= sups[2]  # nested cones shrink the sup
