import numpy as np
import pytest

from qkdnet.helpers import bits
from qkdnet.helpers import bits_to_str
from qkdnet.helpers import digest
from qkdnet.helpers import fragment_count
from qkdnet.helpers import hamming_weight
from qkdnet.helpers import random_bits
from qkdnet.helpers import round_time


def test_bits():
    assert bits("1010").tolist() == [1, 0, 1, 0]
    assert bits([0, 1, 1]).dtype == np.uint8
    assert bits_to_str(bits("0110")) == "0110"


@pytest.mark.parametrize("value", ["10a", [0, 2], [[0, 1]]])
def test_invalid_bits(value):
    with pytest.raises(ValueError):
        bits(value)


def test_random_bits_are_reproducible():
    a = random_bits(np.random.default_rng(3), 1000)
    b = random_bits(np.random.default_rng(3), 1000)

    assert np.array_equal(a, b)
    assert 400 < hamming_weight(a) < 600


def test_digest():
    assert digest(bits("0101")) == digest(bits("0101"))
    assert digest(bits("0101")) != digest(bits("01010"))
    assert len(digest(bits("1"))) == 16


@pytest.mark.parametrize(
    "length, max_payload, expected",
    [(1, 8192, 1), (8192, 8192, 1), (8193, 8192, 2), (16384, 8192, 2), (0, 8192, 1)],
)
def test_fragment_count(length, max_payload, expected):
    assert fragment_count(length, max_payload) == expected


def test_round_time():
    assert round_time(0.1 + 0.2) == 0.3
