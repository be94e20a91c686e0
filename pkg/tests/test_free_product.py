import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from growthtight.free_product import (
    FreeProductWord,
    free_product_ball_count,
    free_product_growth_rate,
    free_product_table,
    gap_bound,
    gap_lower_bound,
    lambda_norm,
    reduce_blocks,
)
from growthtight.growth import BallTable, growth_rate, series_ball_table
from growthtight.models import CyclicFreeProduct, FreeAbelianGroup, FreeGroup
from growthtight.words import parse_word

W = parse_word
Z = CyclicFreeProduct((0, 1))
TRIVIAL = BallTable("trivial", (1,) * 40)


def test_lambda_norm_examples():
    assert lambda_norm(FreeProductWord((W("ab"),)), 7) == 2
    assert lambda_norm(FreeProductWord(((), ())), 5) == 5
    assert lambda_norm(FreeProductWord((W("aa"), W("AAA"))), 4) == 9
    assert lambda_norm(FreeProductWord((W("abAB"),)), 1, FreeAbelianGroup(2)) == 0


def test_interior_blocks_nonempty():
    with pytest.raises(ValueError):
        FreeProductWord((W("a"), (), W("a")))
    assert reduce_blocks(Z, [W("a"), (), W("a")]).blocks == (W("aa"),)


def test_ball_count_examples():
    zt = series_ball_table(Z, 30)
    assert free_product_ball_count(zt, 2, 2) == 6
    assert free_product_ball_count(zt, 9, 8) == zt.counts[8]  # separators unaffordable
    assert [free_product_ball_count(TRIVIAL, 3, r) for r in range(8)] == [1, 1, 1, 2, 2, 2, 2, 2]


@pytest.mark.parametrize("lam", [1, 2, 3, Fraction(5, 2), Fraction(4, 3)])
def test_ball_count_vs_exhaustive_generation(lam):
    zt = series_ball_table(Z, 12)
    for r in range(0, 9):
        assert free_product_ball_count(zt, lam, r) == oracles.free_product_words_Z(lam, r)


def test_table_monotone_in_radius():
    t = free_product_table(series_ball_table(CyclicFreeProduct((2, 0)), 20), 3, 20)
    assert all(a <= b for a, b in zip(t.counts, t.counts[1:]))


def test_growth_rate_examples():
    assert free_product_growth_rate(TRIVIAL, 1).omega == 0
    zt = series_ball_table(Z, 400)
    w1 = free_product_growth_rate(zt, 1).omega
    w3 = free_product_growth_rate(zt, 3).omega
    # F - 1 = 2z/(1-z), so z (F - 1) = 1 is 2z^2 + z - 1 = 0: z = 1/2
    assert w1 == pytest.approx(math.log(2), abs=1e-6)
    assert 0 < w3 <= w1


def test_series_root_vs_tail_slope():
    zt = series_ball_table(Z, 400)
    root = free_product_growth_rate(zt, 2).omega
    slope = growth_rate(free_product_table(zt, 2, 120)).omega
    assert abs(root - slope) < 0.02


def test_gap_bound_examples():
    assert gap_lower_bound(0.0, 1) == pytest.approx(0.25 * math.log(2), abs=1e-12)
    assert gap_lower_bound(math.log(2), 2) == pytest.approx(
        math.log(2) + math.log(1.25) / 8, abs=1e-12)
    assert gap_lower_bound(0.0, 1) == pytest.approx(0.17329, abs=1e-5)
    assert gap_lower_bound(math.log(2), 2) == pytest.approx(0.72104, abs=1e-5)


@given(st.floats(0, 3), st.integers(1, 400))
def test_gap_bound_formula_and_monotone(omega, lam):
    g = gap_bound(omega, lam)
    assert g.value == pytest.approx(oracles.gap_formula(omega, lam), rel=1e-12, abs=1e-15)
    assert gap_bound(omega, lam + 1).value <= g.value
    assert g.log_excess is None or g.log_excess < 0


def test_gap_bound_log_space_for_huge_lambda():
    g = gap_bound(math.log(2), 10**600)
    assert g.value == math.log(2)  # excess below float resolution
    assert g.loglog is not None and g.loglog > 7


def test_free_group_blocks_exact_root():
    # F - 1 = 4z/(1-3z) for F_2, so z^5 (F - 1) = 1 is 4 z^6 + 3 z - 1 = 0
    from scipy.optimize import brentq
    z = brentq(lambda z: 4 * z**6 + 3 * z - 1, 0.1, 1 / 3)
    est = free_product_growth_rate(series_ball_table(FreeGroup(2), 500), 5)
    # truncation only lowers the estimate; (3z)^500 is still ~0.07 here
    assert -math.log(z) - 1e-3 < est.omega <= -math.log(z) + 1e-12


def test_free_product_dominates_factor():
    for model, R in ((FreeGroup(2), 500), (FreeAbelianGroup(2), 200), (CyclicFreeProduct((2, 0)), 500)):
        t = series_ball_table(model, R)
        bar = growth_rate(t).omega
        assert free_product_growth_rate(t, 5).omega > bar - 0.02
