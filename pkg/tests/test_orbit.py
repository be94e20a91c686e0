from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from growthtight.errors import KappaTooSmall, NotHyperbolic
from growthtight.models import CyclicFreeProduct, FreeAbelianGroup
from growthtight.orbit import (
    OrbitContext,
    check_cells,
    check_kappa_exhaustive,
    check_separation_lemma,
    check_sign_flip,
    check_symmetric,
    check_symmetric_injective,
    check_symmetric_norm,
    check_twisted,
    decompose,
    displacement,
    eta_minimal_representative,
    kappa_insert,
    make_constants,
    ord_of,
    separates,
    stable_norm,
    sweep_separation,
    sweep_symmetric,
    sweep_twisted,
    symmetric_element,
    twisted,
    twisted_product,
    voronoi_index,
    voronoi_index_bruteforce,
)
from growthtight.words import free_reduce, inverse, parse_word, reduced_words

W = parse_word
reduced = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=25).map(lambda w: free_reduce(w))


@pytest.fixture(scope="module")
def ctx():
    return OrbitContext.create(W("b"))


@pytest.fixture(scope="module")
def consts(ctx):
    return make_constants(ctx)


def min_displacement(xi, radius=4):
    """min over vertices x of the ball of |x xi(x)| = |x^-1 xi x|."""
    return min(len(free_reduce(inverse(x) + xi + x))
               for n in range(radius + 1) for x in reduced_words(2, n))


@pytest.mark.parametrize("xi,L", [("ab", 2), ("abA", 1), ("b", 1), ("aabAB", 5), ("baaB", 2)])
def test_displacement(xi, L):
    assert displacement(W(xi)) == L == min_displacement(W(xi))


def test_identity_is_not_hyperbolic():
    with pytest.raises(NotHyperbolic):
        OrbitContext.create(W("aA"))


def test_stable_norm():
    s = stable_norm(OrbitContext.create(W("ab")), 10)
    assert s.estimate == 2 and s.upper == 2 and s.ok
    c = OrbitContext.create(W("abA"))
    assert [len(c.xi_power(k)) for k in range(1, 5)] == [3, 4, 5, 6]
    s = stable_norm(c, 200)
    assert s.estimate == Fraction(202, 200) and s.ok


def test_ord_numbering():
    assert [ord_of(i) for i in (-2, -1, 1, 2)] == [-2, -1, 0, 1]
    with pytest.raises(ValueError):
        ord_of(0)


def test_voronoi_examples(ctx):
    assert voronoi_index(ctx, W("a")) == 1
    assert voronoi_index(ctx, W("BBa")) == -2
    assert voronoi_index(ctx, W("b")) == 2


@settings(max_examples=300)
@given(reduced, st.sampled_from(["b", "ab", "aab", "abAB", "abA", "Bab"]))
def test_voronoi_fast_vs_distance_oracle(beta, xi):
    c = OrbitContext.create(W(xi))
    assert voronoi_index(c, beta) == oracles.orbit_index(c.xi, beta)
    assert voronoi_index(c, beta) == voronoi_index_bruteforce(c, beta)


def test_symmetric_examples(ctx, consts):
    assert symmetric_element(ctx, W("a")) == W("BBBa")
    assert symmetric_element(ctx, W("BBa")) == W("bbba")
    rep = check_symmetric_norm(ctx, consts, W("a"))
    assert rep.ok and rep.worst_slack == 8 - 3
    assert check_symmetric(ctx, consts, W("aba")).ok


def test_twisted_examples(ctx):
    tp = twisted(ctx, W("aBBBBB"), W("BBBBa"))
    assert tp.eps == 1 and tp.word == W("aBBBBBBBBBa")
    assert twisted_product(ctx, W("A"), W("a")) == W("ABBBa")


def test_separates_is_strict(ctx):
    assert separates(ctx, (1,), -1, 2)
    assert not separates(ctx, (1,), 1, 2)
    assert not separates(ctx, (1, -1), 1, 1)


def test_kappa_insert_examples(ctx):
    ins = kappa_insert(ctx, W("a"), 4)
    assert ins.word == W("bbbba") and ins.beta_sign == 1 and ins.ok
    ins = kappa_insert(ctx, W("BBa"), 4)
    assert ins.word == W("bbbbbbba") and ins.beta_sign == -1 and ins.ok
    with pytest.raises(KappaTooSmall):
        kappa_insert(ctx, W("a"), 3)
    assert decompose(ctx, W("ab"), W("a"), 4) in {(4, 1), (4, -1), (-4, 1), (-4, -1),
                                                   (-8, 1), (-8, -1)}


def test_separation_examples(ctx, consts):
    rep = check_separation_lemma(ctx, consts, W("bbbbba"), W("BBBBBa"))
    assert rep.hypotheses_met and rep.ok and rep.worst_slack == 12 - (6 + 6 - 4)
    assert not check_separation_lemma(ctx, consts, W("ab"), W("ab")).hypotheses_met


def test_constants_for_unit_translation(ctx, consts):
    assert consts.Delta_minus == 8 and consts.Delta_star == 12
    assert consts.lambda_threshold == 192
    assert consts.rho_threshold == 228
    assert consts.kappa_threshold == 88
    assert consts.lam == 210 and consts.rho == 270 and consts.kappa == 160
    assert consts.guaranteed


def test_scaled_constants_flag_hypotheses(ctx):
    c = make_constants(ctx, kappa=4, lam=36, rho=3, scaled=True)
    h = c.hypotheses()
    assert c.lambda_threshold == 4 + 24 + 8 and h["lambda"]
    assert not h["kappa"] and not h["rho"] and not c.guaranteed


@pytest.mark.parametrize("xi", ["b", "ab", "abA"])
def test_sweeps(xi):
    c = OrbitContext.create(W(xi))
    k = make_constants(c)
    for sweep in (sweep_symmetric, sweep_twisted, sweep_separation):
        rep = sweep(c, k, 300, 40, 11)
        assert rep.ok and rep.violations == 0


def test_sweeps_reproducible(ctx, consts):
    a = sweep_twisted(ctx, consts, 200, 30, 5)
    b = sweep_twisted(ctx, consts, 200, 30, 5)
    assert a == b


def test_cells_small(ctx):
    assert check_cells(ctx, 12, 6).ok
    assert check_cells(OrbitContext.create(W("abA")), 6, 6).ok


def test_symmetric_map_exhaustive(ctx):
    assert check_symmetric_injective(ctx, 6).ok
    assert check_sign_flip(ctx, 6).ok


def test_kappa_exhaustive_small(ctx):
    assert check_kappa_exhaustive(ctx, 3, kappas=(4, 5), alphas=2).ok


def test_eta_minimal_examples():
    Z = CyclicFreeProduct((0, 1))
    assert eta_minimal_representative(Z, (1, 1, 1)) == W("aaa")
    assert eta_minimal_representative(FreeAbelianGroup(2), W("ba")) == W("ab")
    assert eta_minimal_representative(Z, ()) == ()
