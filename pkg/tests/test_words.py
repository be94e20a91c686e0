from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from growthtight.words import (
    Generator,
    common_prefix_length,
    cyclic_reduce,
    format_word,
    free_reduce,
    inverse,
    is_freely_reduced,
    letters_of_rank,
    parse_word,
    power,
    reduced_words,
    shortlex_key,
)

letters = st.sampled_from([1, -1, 2, -2, 3, -3])
raw_words = st.lists(letters, max_size=30).map(tuple)


def W(s):
    return parse_word(s)


def test_parse_and_format():
    assert W("abAB") == (1, 2, -1, -2)
    assert W("a^3B^-2") == (1, 1, 1, 2, 2)
    assert W("e") == () and W("") == () and W("1") == ()
    assert format_word((1, -2)) == "aB"


def test_free_reduce_examples():
    assert free_reduce(W("aAb")) == W("b")
    assert free_reduce(()) == ()
    assert free_reduce(W("abBa")) == W("aa")


def test_inverse_examples():
    assert inverse(W("ab")) == W("BA")
    assert inverse(()) == ()
    assert inverse(inverse(W("aBa"))) == W("aBa")


def test_cyclic_reduce_examples():
    assert cyclic_reduce(W("abA")) == (W("b"), W("a"))
    assert cyclic_reduce(W("ab")) == (W("ab"), ())
    core, conj = cyclic_reduce(W("BabAb"))
    assert free_reduce(conj + core + inverse(conj)) == W("BabAb")


def test_shortlex_order_of_letters():
    assert sorted(letters_of_rank(2), key=lambda x: shortlex_key((x,))) == [1, -1, 2, -2]
    assert shortlex_key(W("b")) < shortlex_key(W("aa"))


def test_generator_roundtrip():
    for x in letters_of_rank(3):
        assert Generator.from_letter(x).letter == x
        assert Generator.from_letter(x).inverse().letter == -x


def test_reduced_words_match_recursive_count():
    spheres = oracles.reduced_word_spheres(2, 6)
    for n in range(7):
        ws = list(reduced_words(2, n))
        assert len(ws) == spheres[n] == len(set(ws))
        assert all(is_freely_reduced(w) for w in ws)


@given(raw_words)
def test_free_reduce_idempotent_and_matches_oracle(w):
    r = free_reduce(w)
    assert free_reduce(r) == r
    assert r == oracles.free_reduce(w)
    assert is_freely_reduced(r)


@given(raw_words)
def test_word_times_inverse_is_trivial(w):
    assert free_reduce(w + inverse(w)) == ()


@given(raw_words)
def test_cyclic_reduce_reconstructs(w):
    w = free_reduce(w)
    core, conj = cyclic_reduce(w)
    assert free_reduce(conj + core + inverse(conj)) == w
    assert not core or len(core) == 1 or core[0] != -core[-1]


@given(raw_words, st.integers(-5, 5))
def test_power_matches_repetition(w, k):
    base = w if k >= 0 else inverse(w)
    assert power(w, k) == free_reduce(base * abs(k))


@given(raw_words, raw_words)
def test_common_prefix(u, v):
    k = common_prefix_length(u, v)
    assert u[:k] == v[:k]
    assert k == min(len(u), len(v)) or u[k] != v[k]


@settings(max_examples=50)
@given(raw_words)
def test_parse_format_roundtrip(w):
    assert parse_word(format_word(w)) == w
