"""Acceptance criteria, one test and one printed PASS/FAIL line per criterion.

Run directly (``python3 tests/test_acceptance.py``) or under pytest; in both cases the
status lines go to the terminal. Criteria 6 and 10 compare with published constants
and fail where those constants disagree with the computed integrals.
"""

import pytest

from reinforced_walk import verify


def _report(result, capsys=None):
    if capsys is not None:
        with capsys.disabled():
            print("\n" + result.line())
    else:
        print(result.line())
    return result


def test_1_gf_equals_dp(capsys):
    assert _report(verify.check_gf_vs_dp(), capsys).passed


def test_2_known_coefficients(capsys):
    assert _report(verify.check_known_coefficients(), capsys).passed


def test_3_mc_vs_dp(capsys):
    assert _report(verify.check_mc_vs_dp(), capsys).passed


def test_4_series_duality(capsys):
    assert _report(verify.check_series_duality(), capsys).passed


def test_5_ilt_triangle(capsys):
    assert _report(verify.check_ilt_triangle(), capsys).passed


def test_6_published_values(capsys):
    assert _report(verify.check_published_values(), capsys).passed


def test_7_asymptotics(capsys):
    assert _report(verify.check_asymptotics(), capsys).passed


def test_8_normalizations(capsys):
    assert _report(verify.check_normalizations(), capsys).passed


def test_9_bridge(capsys):
    assert _report(verify.check_bridge(), capsys).passed


def test_10_bounds(capsys):
    assert _report(verify.check_bounds(), capsys).passed


if __name__ == "__main__":
    results = [_report(chk()) for chk in verify.ALL_CHECKS]
    print(f"{sum(r.passed for r in results)}/{len(results)} criteria pass")
