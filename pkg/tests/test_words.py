import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from edgeflow.words import (
    GeneratorRangeError,
    Word,
    WordSyntaxError,
    abelianization,
    format_word,
    free_reduce,
    parse_word,
    word_to_path,
)


def letters_strategy(d=3, max_size=30):
    return st.lists(
        st.tuples(st.sampled_from([1, -1]), st.integers(1, d)).map(lambda t: t[0] * t[1]),
        max_size=max_size,
    ).map(tuple)


def test_parse_basic():
    assert parse_word("x1 x2 X1 X2", 2).letters == (1, 2, -1, -2)
    assert parse_word("x1x2X1X2", 2).letters == (1, 2, -1, -2)


def test_parse_exponents():
    assert parse_word("x1^3 X2^2", 2).letters == (1, 1, 1, -2, -2)
    assert parse_word("x1^-2", 2).letters == (-1, -1)
    assert parse_word("X1^-1", 2).letters == (1,)


def test_parse_multidigit_index():
    assert parse_word("x12", 12).letters == (12,)


def test_parse_out_of_range():
    with pytest.raises(GeneratorRangeError):
        parse_word("x5", 3)
    with pytest.raises(GeneratorRangeError):
        parse_word("x0", 3)


def test_parse_syntax_errors_carry_offsets():
    with pytest.raises(WordSyntaxError) as err:
        parse_word("x1 y2", 2)
    assert err.value.offset == 3
    with pytest.raises(WordSyntaxError) as err:
        parse_word("x", 2)
    assert err.value.offset == 1
    with pytest.raises(WordSyntaxError) as err:
        parse_word("x1^0", 2)
    assert err.value.offset == 3
    with pytest.raises(WordSyntaxError) as err:
        parse_word("x1^", 2)
    assert err.value.offset == 3


def test_lamp_alias():
    w = parse_word("x1 a X1 A", 2, lamp_alias=True)
    assert w.letters == (1, 2, -1, -2)
    with pytest.raises(WordSyntaxError):
        parse_word("a", 2)


def test_format_runs():
    assert format_word(Word(2, (1, 1, 1, -2, -2))) == "x1^3 X2^2"
    assert format_word(Word(2, (1, -1))) == "x1 X1"
    assert format_word(Word(2, ())) == ""


@given(letters_strategy())
def test_round_trip_parse_format(letters):
    w = Word(3, letters)
    assert parse_word(format_word(w), 3) == w


def test_round_trip_on_thousand_random_words():
    rng = random.Random(5)
    for _ in range(1000):
        d = rng.randint(1, 9)
        letters = tuple(
            rng.choice([1, -1]) * rng.randint(1, d) for _ in range(rng.randint(0, 40))
        )
        w = Word(d, letters)
        text = format_word(w)
        assert parse_word(text, d) == w
        assert format_word(parse_word(text, d)) == text


# -- word to path ------------------------------------------------------------


def test_empty_word_is_trivial_path():
    p = word_to_path(Word(2, ()))
    assert p.steps == () and p.end() == (0, 0)


def test_path_endpoints_see_abelianization():
    a = word_to_path(parse_word("x1x2", 2))
    b = word_to_path(parse_word("x2x1", 2))
    assert a.end() == b.end() == (1, 1)
    assert word_to_path(parse_word("X1", 3)).end() == (-1, 0, 0)


@given(letters_strategy(d=4, max_size=40))
def test_endpoint_matches_letter_sum_oracle(letters):
    w = Word(4, letters)
    counts = [0] * 4
    for s in letters:
        counts[abs(s) - 1] += 1 if s > 0 else -1
    assert word_to_path(w).end() == tuple(counts)
    assert abelianization(w) == tuple(counts)


def test_abelian_equality_on_random_pairs():
    rng = random.Random(17)
    for _ in range(1000):
        d = rng.randint(1, 4)
        mk = lambda: Word(
            d, tuple(rng.choice([1, -1]) * rng.randint(1, d) for _ in range(rng.randint(0, 15)))
        )
        u, v = mk(), mk()
        assert (word_to_path(u).end() == word_to_path(v).end()) == (
            abelianization(u) == abelianization(v)
        )


# -- free reduction ----------------------------------------------------------


def test_free_reduce_examples():
    assert free_reduce(parse_word("x1 X1", 2)).letters == ()
    assert free_reduce(parse_word("x1 x2 X2 X1", 2)).letters == ()
    assert free_reduce(parse_word("x1 x2 X1", 2)).letters == (1, 2, -1)


@given(letters_strategy())
def test_free_reduce_idempotent_and_shorter(letters):
    w = Word(3, letters)
    r = free_reduce(w)
    assert len(r) <= len(w)
    assert free_reduce(r) == r
    for i in range(len(r) - 1):
        assert r.letters[i] != -r.letters[i + 1]


@given(letters_strategy())
def test_word_times_inverse_reduces_to_identity(letters):
    w = Word(3, letters)
    assert free_reduce(w * w.inverse()).letters == ()
