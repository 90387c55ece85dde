import math

import numpy as np
import pytest
from scipy import integrate

from reinforced_walk.continuum import (
    DENSITY_CSV_HEADER,
    density_rows,
    ilt,
    joint_density,
    laplace_joint,
    laplace_max,
    logcosh,
    max_density_ilt,
    monotone_region,
    p_series,
    q_auto,
    q_poisson,
    q_poisson_components,
    q_poisson_m1_three_sum,
    q_series,
    walker_density,
    walker_density_at_origin,
    walker_density_ilt,
)
from reinforced_walk.core import ConvergenceError, DomainError, NumericConfig


def b_for(gamma, t=1.0):
    return math.sqrt(gamma * math.pi * t / 2.0)


# ---------------------------------------------------------------- Laplace domain


def test_logcosh_large_argument():
    assert logcosh(1000.0) == pytest.approx(1000.0 - math.log(2.0))
    w = 3.0 + 40.0j
    assert np.exp(logcosh(w)) == pytest.approx(np.cosh(w))


def test_laplace_joint_value_at_y_equals_b():
    assert laplace_joint(0.5, 1.0, 1.0, 0) == pytest.approx(2.0 / math.cosh(1.0), rel=1e-14)
    assert laplace_joint(0.5, 1.2, 1.0, 0) == 0.0
    with pytest.raises(DomainError):
        laplace_joint(1.0, 0.0, 0.0, 0)


def test_laplace_no_overflow():
    # b sqrt(2s) = 400: cosh^2 overflows, the ratio 2/cosh(400) does not
    v = laplace_joint(8.0, 100.0, 100.0, 0)
    assert v > 0 and math.isfinite(v)
    assert math.log(v) == pytest.approx(math.log(4.0) - 400.0, rel=1e-12)


@pytest.mark.parametrize("delta", [0, 1.5, 4])
def test_laplace_y_integral(delta):
    s, b = 0.7, 1.3
    v, _ = integrate.quad(lambda y: laplace_joint(s, y, b, delta), 0, b, epsabs=1e-13)
    assert v == pytest.approx(laplace_max(s, b, delta), rel=1e-10)


@pytest.mark.parametrize("s", [0.1, 1.0, 10.0])
def test_laplace_normalization(s):
    v, _ = integrate.quad(lambda b: laplace_max(s, b, 4), 0, np.inf, epsabs=1e-13, limit=200)
    assert v == pytest.approx(1.0 / s, rel=1e-9)


# ---------------------------------------------------------------- ILT


def test_ilt_known_pairs():
    assert ilt(lambda s: 1 / s, 1.0) == pytest.approx(1.0, abs=1e-10)
    assert ilt(lambda s: 1 / s, 7.5) == pytest.approx(1.0, abs=1e-10)
    assert ilt(lambda s: np.exp(-np.sqrt(s)), 1.0) == pytest.approx(
        math.exp(-0.25) / (2 * math.sqrt(math.pi)), abs=1e-10
    )
    assert ilt(lambda s: s**-3, 1.0) == pytest.approx(0.5, abs=1e-10)


def test_ilt_rejects_bad_time():
    with pytest.raises(DomainError):
        ilt(lambda s: 1 / s, 0.0)


def test_ilt_flags_nonsmooth_transform():
    # e^{-s}/s is a unit step at t=1, which fixed Talbot cannot resolve there
    with pytest.raises(ConvergenceError):
        ilt(lambda s: np.exp(-s) / s, 1.0)


# ---------------------------------------------------------------- Q series


def test_q_series_large_gamma_example():
    # gamma = 4, delta = 0: b Q = 4 e^{-pi} (1 - 3 e^{-8 pi} + ...)
    b = b_for(4.0)
    v = q_series(1.0, b, 0)
    assert b * v.value == pytest.approx(4 * math.exp(-math.pi) * (1 - 3 * math.exp(-8 * math.pi)), rel=1e-13)
    assert v.method == "direct_series" and v.gamma == pytest.approx(4.0)
    assert v.tail_bound >= 0


def test_theta_duality_delta0():
    for g in np.linspace(0.2, 5.0, 25):
        b = b_for(g)
        assert q_series(1.0, b, 0).value == pytest.approx(q_poisson(1.0, b, 0).value, abs=1e-10)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_poisson_vs_series_on_overlap(m):
    # overlap region where both representations are well conditioned
    for g in (0.3, 0.6, 1.0, 1.5):
        b = b_for(g)
        a = q_series(1.0, b, 4 * m).value
        p = q_poisson(1.0, b, m).value
        assert abs(a - p) <= 1e-9 * max(1.0, abs(a))


def test_self_dual_point():
    b = b_for(1.0)
    assert abs(q_series(1.0, b, 0).value - q_poisson(1.0, b, 0).value) < 1e-12


def test_poisson_m0_closed_sum():
    g = 0.4
    b = b_for(g)
    s = sum((-1) ** j * (2 * j + 1) * math.exp(-math.pi * (2 * j + 1) ** 2 / (4 * g)) for j in range(20))
    # A(gamma) = (2/gamma^{3/2}) s and b Q = sqrt(gamma) A(gamma)
    assert b * q_poisson(1.0, b, 0).value == pytest.approx(math.sqrt(g) * 2 / g**1.5 * s, rel=1e-13)


@pytest.mark.parametrize("g", [0.2, 0.7, 1.8])
def test_three_sum_assembly(g):
    b = b_for(g)
    three = q_poisson_m1_three_sum(1.0, b)
    comp = q_poisson_components(1.0, b, 1)
    assert [comp[(0, 0)], comp[(1, 0)], comp[(1, 1)]] == pytest.approx(list(three), rel=1e-11, abs=1e-14)
    assert sum(three) == pytest.approx(b * q_poisson(1.0, b, 1).value, rel=1e-12)


def test_q_poisson_domain():
    with pytest.raises(DomainError):
        q_poisson(1.0, 1.0, 0.5)


def test_q_series_budget():
    with pytest.raises(ConvergenceError):
        q_series(1.0, b_for(0.05), 0, NumericConfig(max_terms=3))


def test_q_series_non_integer_matches_ilt():
    for g in (0.8, 2.0):
        b = b_for(g)
        assert q_series(1.0, b, 1.0).value == pytest.approx(max_density_ilt(1.0, b, 1.0), abs=1e-9)


@pytest.mark.parametrize(
    "gamma,delta,method",
    [(10, 0, "direct_series"), (0.05, 4, "poisson_series"), (0.05, 1, "ilt_oracle")],
)
def test_q_auto_policy(gamma, delta, method):
    assert q_auto(1.0, b_for(gamma), delta).method == method


@pytest.mark.parametrize("delta", [0, 4, 1])
def test_q_normalization(delta):
    v, _ = integrate.quad(lambda b: q_auto(1.0, b, delta).value, 1e-6, 12, epsabs=1e-11, limit=200, points=[1, 2])
    assert v == pytest.approx(1.0, abs=1e-7)


# ---------------------------------------------------------------- P_m


def test_p_series_m0_half_gaussian():
    for y in (0.1, 0.7, 2.0):
        assert p_series(1.3, y, 0).value == pytest.approx(math.sqrt(2 / (math.pi * 1.3)) * math.exp(-y * y / 2.6))


@pytest.mark.parametrize("m", [0, 1, 2, 5])
def test_p_at_origin(m):
    expect = math.sqrt(2 / math.pi) * 4**m * math.factorial(m) ** 2 / math.factorial(2 * m)
    assert p_series(1.0, 0.0, m).value == pytest.approx(expect, rel=1e-14)
    assert walker_density_at_origin(1.0, m) == pytest.approx(expect, rel=1e-14)


def test_p_series_vs_ilt_at_unit_ratio():
    v = p_series(1.0, 1.0, 1, fallback=False)
    assert v.method == "direct_series"
    assert v.value == pytest.approx(walker_density_ilt(1.0, 1.0, 4), abs=1e-8)


def test_p_series_small_y_uses_oracle():
    v = p_series(1.0, 0.05, 2)
    assert v.method == "ilt_oracle"
    assert v.value == pytest.approx(walker_density_at_origin(1.0, 2), rel=2e-3)
    with pytest.raises(ConvergenceError):
        p_series(1.0, 0.05, 2, fallback=False)


def test_p_series_printed_prefactor_loses_mass():
    m = 1
    f = lambda y: p_series(1.0, y, m, printed=True, fallback=False).value
    v, _ = integrate.quad(f, 0.3, 10)
    g = lambda y: p_series(1.0, y, m, fallback=False).value
    w, _ = integrate.quad(g, 0.3, 10)
    assert v / w == pytest.approx((2 + 2 * m) / (2 + 4 * m), rel=1e-10)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_p_normalization(m):
    f = lambda y: walker_density(1.0, y, 4 * m).value
    v = sum(integrate.quad(f, a, b, epsabs=1e-11)[0] for a, b in [(0, 0.3), (0.3, 1), (1, 3), (3, 10)])
    assert v == pytest.approx(1.0, abs=1e-7)


def test_p_monotone_in_series_region():
    t, m = 1.0, 2
    ys = [y for y in np.linspace(0.01, 3, 120) if monotone_region(t, y, m)]
    vals = [p_series(t, y, m, fallback=False).value for y in ys]
    assert all(b <= a for a, b in zip(vals, vals[1:]))


def test_p_series_real_m():
    # non-integer m still matches the inversion in the monotone region
    assert p_series(1.0, 1.0, 0.5).value == pytest.approx(walker_density_ilt(1.0, 1.0, 2.0), abs=1e-9)


# ---------------------------------------------------------------- joint density


def test_joint_zero_above_diagonal():
    assert joint_density(1.0, 1.5, 1.0, 0) == 0.0


@pytest.mark.parametrize("m", [0, 1, 2])
def test_joint_marginals(m):
    t, b, y = 1.2, 1.1, 0.9
    assert max_density_ilt(t, b, 4 * m, route="quadrature") == pytest.approx(q_auto(t, b, 4 * m).value, abs=1e-9)
    assert walker_density_ilt(t, y, 4 * m) == pytest.approx(p_series(t, y, m).value, abs=1e-9)


@pytest.mark.parametrize("delta", [0, 4])
def test_scaling_in_time(delta):
    # Q(c^2 t, c b) = Q(t, b) / c
    c = 1.7
    assert q_auto(c * c, c * 0.8, delta).value == pytest.approx(q_auto(1.0, 0.8, delta).value / c, rel=1e-11)


def test_density_rows_csv():
    rows = list(density_rows(1.0, 4, "Q", np.linspace(0.05, 3, 60)))
    assert len(rows) == 60
    assert {r[4] for r in rows} == {"poisson_series", "direct_series"}
    assert DENSITY_CSV_HEADER.split(",") == ["t", "delta", "coord", "value", "method", "terms", "tail_bound"]
    with pytest.raises(DomainError):
        list(density_rows(1.0, 0, "joint", [0.5]))
