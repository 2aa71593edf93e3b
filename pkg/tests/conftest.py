import random

import pytest


@pytest.fixture
def rng():
    return random.Random(0xED6EF10)


def random_word_letters(rng, d, max_len):
    n = rng.randint(0, max_len)
    return tuple(rng.choice([1, -1]) * rng.randint(1, d) for _ in range(n))
