import math
from fractions import Fraction

import pytest

from reinforced_walk.core import (
    DEFAULT_CONFIG,
    DomainError,
    NumericConfig,
    gamma_of,
    make_param,
)


def test_aliases():
    p = make_param(4)
    assert (p.m, p.n) == (1.0, 2.0)
    assert p.is_integer_m and p.is_integer_n
    assert p.int_m() == 1 and p.int_n() == 2
    assert p.exact == Fraction(4)


def test_non_integer_alias_raises():
    p = make_param(2)
    assert p.int_n() == 1
    with pytest.raises(DomainError):
        p.int_m()


def test_float_delta_keeps_decimal_value():
    assert make_param(0.1).exact == Fraction(1, 10)
    assert make_param(Fraction(1, 3)).exact == Fraction(1, 3)


@pytest.mark.parametrize("bad", [-1, -2.5, float("nan"), float("inf"), "x"])
def test_rejects_bad_delta(bad):
    with pytest.raises(DomainError):
        make_param(bad)


def test_step_probabilities_at_max():
    p = make_param(4)
    assert p.up_at_max == pytest.approx(1 / 6)
    assert p.up_at_max + p.down_at_max == pytest.approx(1.0)


def test_param_passthrough():
    p = make_param(3)
    assert make_param(p) is p


def test_gamma():
    g = gamma_of(2.0, 1.0)
    assert g.gamma == pytest.approx(1 / math.pi)
    assert g.b == 1.0
    # lattice reading: a^2/N = gamma pi / 2
    assert gamma_of(100, 10).gamma * math.pi / 2 == pytest.approx(1.0)


@pytest.mark.parametrize("t,b", [(0, 1), (1, 0), (-1, 1)])
def test_gamma_domain(t, b):
    with pytest.raises(DomainError):
        gamma_of(t, b)


def test_numeric_config_validation():
    assert DEFAULT_CONFIG.ilt_terms == 32
    with pytest.raises(DomainError):
        NumericConfig(ilt_terms=7)
    with pytest.raises(DomainError):
        NumericConfig(series_tol=0)
    with pytest.raises(DomainError):
        NumericConfig(max_terms=0)
