import math

import pytest

import oracles
from growthtight.errors import MemoryBudgetExceeded, WindowTooSmall
from growthtight.growth import (
    BallTable,
    ball_count,
    ball_elements,
    default_window,
    growth_rate,
    series_ball_table,
)
from growthtight.models import CyclicFreeProduct, FreeAbelianGroup, FreeGroup, quotient_model
from growthtight.words import parse_word, shortlex_key


def test_ball_count_examples():
    assert ball_count(FreeGroup(2), 2).counts == (1, 5, 17)
    assert ball_count(FreeAbelianGroup(2), 2).counts == (1, 5, 13)
    assert ball_count(CyclicFreeProduct((2, 0)), 2).counts == (1, 4, 10)


def test_bfs_against_oracles():
    assert list(ball_count(FreeGroup(2), 7).counts) == oracles.cumulative(
        oracles.reduced_word_spheres(2, 7))
    assert list(ball_count(FreeAbelianGroup(2), 8).counts) == oracles.lattice_ball(2, 8)
    assert list(ball_count(CyclicFreeProduct((2, 0)), 10).counts) == oracles.cumulative(
        oracles.z2_star_z_spheres(10))
    assert list(ball_count(FreeAbelianGroup(3), 4).counts) == oracles.lattice_ball(3, 4)


@pytest.mark.parametrize("model", [FreeGroup(2), FreeGroup(3), FreeAbelianGroup(2),
                                   FreeAbelianGroup(3), CyclicFreeProduct((2, 0)),
                                   CyclicFreeProduct((3, 0)), CyclicFreeProduct((2, 3)),
                                   CyclicFreeProduct((0, 1))])
def test_series_matches_bfs(model):
    assert series_ball_table(model, 7).counts == ball_count(model, 7).counts


def test_rewriting_quotient_bfs():
    model = quotient_model(2, [parse_word("abAB")])
    assert list(ball_count(model, 6).counts) == oracles.lattice_ball(2, 6)


def test_ball_elements_order():
    els = ball_elements(FreeGroup(2), 2)
    assert len(els) == 17
    assert els == sorted(els, key=shortlex_key)


def test_spheres_roundtrip():
    t = BallTable.from_spheres("x", [1, 4, 6, 12])
    assert t.counts == (1, 5, 11, 23) and t.spheres() == [1, 4, 6, 12]
    assert t.card(2.5) == 11 and t.radius_max == 3


def test_growth_rates():
    f2 = growth_rate(series_ball_table(FreeGroup(2), 12))
    assert abs(f2.omega - math.log(3)) < 0.05
    z2 = growth_rate(series_ball_table(FreeAbelianGroup(2), 50))
    assert z2.omega <= 0.05
    finite = growth_rate(BallTable("finite", (1, 4, 6, 6, 6, 6, 6)))
    assert finite.omega == 0
    assert default_window(series_ball_table(FreeGroup(2), 12)) == (8, 12)


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        growth_rate(BallTable("x", (1, 5)))


def test_memory_budget():
    with pytest.raises(MemoryBudgetExceeded) as exc:
        ball_count(FreeGroup(2), 12, max_elements=1000)
    assert exc.value.completed_radius < 12
