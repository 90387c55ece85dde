from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reinforced_walk.core import DomainError, SingularityError
from reinforced_walk.discrete import dp_evolve
from reinforced_walk.genfunc import (
    TruncatedSeries,
    coefficient_rows,
    gf_11,
    gf_diag,
    gf_double,
    gf_to_pmf,
    gf_to_pmfs,
    theta_series,
)


def test_theta_coefficients():
    # theta = lam/2 + lam^3/8 + lam^5/16 + 5 lam^7/128 + ...
    th = theta_series(7)
    assert th.coeffs == [0, Fraction(1, 2), 0, Fraction(1, 8), 0, Fraction(1, 16), 0, Fraction(5, 128)]
    lam = TruncatedSeries.monomial(1, 7)
    # theta solves lam theta^2 - 2 theta + lam = 0
    assert lam * th * th - th * 2 + lam == TruncatedSeries.constant(0, 7)


@pytest.mark.parametrize("delta", [0, 1, 4])
def test_gf_11(delta):
    g = gf_11(delta, 25)
    r = Fraction(1 + delta, 2 + delta)
    for n in range(13):
        assert g[2 * n + 1] == r**n
        assert g[2 * n] == 0


@pytest.mark.parametrize("delta", [0, Fraction(1, 2), 3])
def test_pmfs_match_dp(delta):
    pmfs = gf_to_pmfs(14, delta, exact=True)
    for N, pmf in enumerate(pmfs, start=1):
        assert np.array_equal(pmf.table, dp_evolve(N, delta, mode="exact").table)


def test_single_pmf_float():
    f = gf_to_pmf(30, 2.0, exact=False)
    d = dp_evolve(30, 2.0, mode="float64")
    assert np.max(np.abs(f.table - d.table)) < 1e-13


def test_diag_series_equals_dp_diagonal():
    K = 20
    s = gf_diag(3, 2, K)
    for N in range(1, K + 1):
        assert s[N] == dp_evolve(N, 2, mode="exact").p(3, 3)


def test_printed_variant_fails_consistency():
    with pytest.raises(SingularityError):
        gf_to_pmfs(6, 4, variant="printed")


def test_double_gf_coefficients():
    bs = gf_double(2, 0, 10)
    assert bs.coeff(3, 1) == dp_evolve(3, 0, mode="exact").p(1, 2)
    assert bs.coeff(3, 5) == 0


def test_coefficient_rows_cover_mass():
    rows = list(coefficient_rows(6, 1))
    total = {}
    for a, N, x, c in rows:
        total[N] = total.get(N, 0) + c
    assert all(v == 1 for v in total.values())


def test_series_errors():
    s = TruncatedSeries([0, 1], 4)
    with pytest.raises(SingularityError):
        s.reciprocal()
    with pytest.raises(DomainError):
        TruncatedSeries([1], -1)
    with pytest.raises(DomainError):
        s + TruncatedSeries([1], 3)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=9)


@settings(max_examples=40, deadline=None)
@given(a=st.lists(coeff, min_size=6, max_size=6), b=st.lists(coeff, min_size=6, max_size=6))
def test_series_ring_identities(a, b):
    A, B = TruncatedSeries(a), TruncatedSeries(b)
    assert A * B == B * A
    assert (A + B) - B == A
    if B[0] != 0:
        assert (A / B) * B == A


@settings(max_examples=30, deadline=None)
@given(a=st.lists(coeff, min_size=5, max_size=5))
def test_series_sqrt(a):
    A = TruncatedSeries([1] + a)
    r = A.sqrt()
    assert r * r == A


def test_float_series_mode():
    A = TruncatedSeries([1.0, 0.5, 0.25], exact=False)
    inv = A.reciprocal()
    np.testing.assert_allclose((A * inv).coeffs, [1.0, 0.0, 0.0], atol=1e-15)
