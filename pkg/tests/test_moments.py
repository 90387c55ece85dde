import math

import numpy as np
import pytest
from scipy import integrate

from reinforced_walk.continuum import q_auto, walker_density
from reinforced_walk.core import DomainError
from reinforced_walk.moments import (
    CATALAN,
    acosh_maclaurin,
    max_dispersion,
    max_dispersion_exact,
    max_moment,
    max_moment_asymptotic,
    max_moment_laplace,
    second_moment_double_integral,
    walker_dispersion,
    walker_dispersion_exact,
    walker_mean,
    walker_mean_asymptotic,
    walker_mean_closed,
    walker_mean_integral,
    walker_moment_laplace,
    walker_second_moment,
)

G = CATALAN

# ---------------------------------------------------------------- maximum


@pytest.mark.parametrize(
    "k,m,expect",
    [
        (1, 0, math.sqrt(math.pi / 2)),
        (2, 0, 2 * G),
        (1, 1, math.sqrt(math.pi / 8)),
        (2, 1, G - 0.5),
        (1, 2, 0.46999280149331263),
        (2, 2, 0.22864086229958092),
    ],
)
def test_max_moment_values(k, m, expect):
    assert max_moment(k, 1.0, m).value == pytest.approx(expect, rel=1e-11)


@pytest.mark.parametrize("m", [0, 0.3, 1, 2.5, 50])
def test_max_moment_normalization_and_oracle(m):
    assert max_moment(0, 2.0, m).value == 1.0
    for k in (1, 2, 3):
        assert max_moment(k, 1.0, m).value == pytest.approx(max_moment_laplace(k, 1.0, m), rel=1e-10)


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("k", [1, 2])
def test_max_moment_matches_density(k, m):
    f = lambda b: b**k * q_auto(1.0, b, 4 * m).value
    v = sum(integrate.quad(f, a, c, epsabs=1e-12)[0] for a, c in [(1e-9, 0.5), (0.5, 1.5), (1.5, 4), (4, 12)])
    assert v == pytest.approx(max_moment(k, 1.0, m).value, abs=1e-6)


def test_max_moment_large_m():
    eb = max_moment(1, 1.0, 50).value
    assert abs(eb * math.sqrt(101) - 1) < 0.015
    # second-order term: coefficient 1/6
    assert eb == pytest.approx(max_moment_asymptotic(1, 1.0, 50).value, rel=2e-5)
    assert abs(eb - max_moment_asymptotic(1, 1.0, 50, printed=True).value) > 10 * abs(
        eb - max_moment_asymptotic(1, 1.0, 50).value
    )


def test_max_moment_asymptotic_forms():
    a = max_moment_asymptotic(1, 1.0, 3, printed=True).value
    assert a == pytest.approx(math.sqrt(1 / 7) * (1 + (5 / 24) * 1.5 / 7))
    assert max_moment_asymptotic(2, 1.0, 1e8).value * (2e8 + 1) == pytest.approx(1.0, rel=1e-7)


def test_max_moment_domain():
    with pytest.raises(DomainError):
        max_moment(-1, 1.0, 1)
    with pytest.raises(DomainError):
        max_moment(1, 0.0, 1)
    # the integral converges for every k, even when 4m + 2 <= k
    assert max_moment(5, 1.0, 0).value == pytest.approx(max_moment_laplace(5, 1.0, 0), rel=1e-10)


def test_max_dispersion():
    assert max_dispersion(0, printed=True) == pytest.approx(math.sqrt(5 / 24))
    assert max_dispersion(12, printed=True) == pytest.approx(math.sqrt(5 / 600))
    exact = max_dispersion_exact(50)
    assert exact == pytest.approx(max_dispersion(50), rel=0.01)
    assert abs(exact / max_dispersion(50, printed=True) - 1) > 0.05


def test_maclaurin_bound():
    z = np.linspace(1e-6, 0.1, 500)
    exact = np.log1p(z + np.sqrt(z * (2 + z)))  # acosh(1+z) without forming 1+z
    err = np.abs(exact - acosh_maclaurin(z))
    assert np.all(err <= 0.5 * (3 / 40) * z**2.5)
    # the third coefficient is 3/160: the remainder is fourth order in z
    assert np.all(err <= 1.2 * (5 / 896) * math.sqrt(2) * z**3.5 + 1e-15)


# ---------------------------------------------------------------- walker


def test_walker_mean_values():
    assert walker_mean(1.0, 1).value == pytest.approx(math.sqrt(2) * (2 / math.sqrt(math.pi) - math.sqrt(math.pi) / 2))
    assert walker_mean(1.0, 2).value == pytest.approx(0.2477209561677215, rel=1e-12)
    assert walker_mean(1.0, 0).value == pytest.approx(math.sqrt(2 / math.pi))


def test_walker_mean_printed_switch():
    assert walker_mean(1.0, 1, printed=True).value == pytest.approx((2 - math.pi / 2) / math.sqrt(2 * math.pi))
    assert walker_mean(1.0, 2, printed=True).value == pytest.approx((4 / 3 - 3 * math.pi / 8) * math.sqrt(2 / math.pi))


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6])
def test_closed_form_equals_integral(m):
    assert walker_mean_closed(1.0, m) == pytest.approx(walker_mean_integral(1.0, m), rel=1e-10)


@pytest.mark.parametrize("m", [0, 0.25, 1, 2, 3.5, 20])
def test_walker_moments_match_laplace_oracle(m):
    assert walker_mean(1.0, m).value == pytest.approx(walker_moment_laplace(1, 1.0, m), rel=1e-9)
    assert walker_second_moment(1.0, m).value == pytest.approx(walker_moment_laplace(2, 1.0, m), rel=1e-9)
    assert walker_moment_laplace(0, 1.0, m) == pytest.approx(1.0, rel=1e-10)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_walker_moments_match_density(m):
    pieces = [(0, 0.3), (0.3, 1), (1, 3), (3, 10)]
    for k, ref in ((1, walker_mean(1.0, m).value), (2, walker_second_moment(1.0, m).value)):
        f = lambda y: y**k * walker_density(1.0, y, 4 * m).value
        v = sum(integrate.quad(f, a, b, epsabs=1e-11)[0] for a, b in pieces)
        assert v == pytest.approx(ref, abs=1e-6)


def test_second_moment_values():
    assert walker_second_moment(1.0, 1).value == pytest.approx(2 * (1 - G), rel=1e-12)
    assert walker_second_moment(1.0, 2).value == pytest.approx(0.08543655080165909, rel=1e-10)
    assert walker_second_moment(1.0, 0).value == 1.0
    # the (2m+1) prefactor reproduces 3(1-G) at m = 1
    assert walker_second_moment(1.0, 1, printed=True).value == pytest.approx(3 * (1 - G), rel=1e-12)
    with pytest.raises(DomainError):
        walker_second_moment(1.0, 0, printed=True)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_reduced_integral_matches_double_integral(m):
    v = walker_second_moment(1.0, m).value
    assert v == pytest.approx(2 * m * 2 ** (2 * m + 1) * second_moment_double_integral(m), rel=1e-9)


def test_half_factorial_identity():
    for m in range(8):
        lhs = math.gamma(m + 0.5)
        rhs = math.factorial(2 * m) * math.sqrt(math.pi) / (4**m * math.factorial(m))
        assert lhs == pytest.approx(rhs, rel=1e-13)


def test_large_m_walker():
    m = 50
    assert walker_second_moment(1.0, m).value * 3 * 101 == pytest.approx(1.0, abs=0.03)
    assert walker_mean(1.0, m).value == pytest.approx(walker_mean_asymptotic(1.0, m).value, rel=0.01)
    assert walker_second_moment(1.0, m, method="asymptotic").value == pytest.approx(1 / 303)


def test_walker_dispersion():
    assert walker_dispersion(printed=True) == pytest.approx(2.0817, abs=1e-4)
    assert (1 / 3 - 1 / 16) / (1 / 16) == pytest.approx(13 / 3)
    exact = walker_dispersion_exact(20)
    assert exact == pytest.approx(walker_dispersion(), rel=0.02)
    assert abs(exact / walker_dispersion(printed=True) - 1) > 0.15


@pytest.mark.parametrize("c", [0.3, 1.7, 4.0])
def test_scaling_laws(c):
    t = 0.8
    for m in (0.5, 1, 2):
        assert max_moment(1, c * c * t, m).value / max_moment(1, t, m).value == pytest.approx(c, rel=1e-12)
        assert max_moment(2, c * c * t, m).value / max_moment(2, t, m).value == pytest.approx(c * c, rel=1e-12)
        assert walker_mean(c * c * t, m).value / walker_mean(t, m).value == pytest.approx(c, rel=1e-12)
        assert walker_second_moment(c * c * t, m).value / walker_second_moment(t, m).value == pytest.approx(
            c * c, rel=1e-12
        )
