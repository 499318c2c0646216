import hashlib

from typing import Sequence
from typing import Union

import numpy as np

from .constants import TIME_PRECISION


BIT_DTYPE = np.uint8


def bits(value):  # type: (Union[str, Sequence[int], np.ndarray]) -> np.ndarray
    """
    Creates a bit array from a string of 0 and 1 characters
    or from a sequence of integers.

    >>> bits("1010")
    array([1, 0, 1, 0], dtype=uint8)
    """
    if isinstance(value, str):
        if value.strip("01"):
            raise ValueError('Invalid bit string "{}"'.format(value))

        return np.fromiter((c == "1" for c in value), dtype=BIT_DTYPE, count=len(value))

    array = np.asarray(value, dtype=BIT_DTYPE)
    if array.ndim != 1 or (array > 1).any():
        raise ValueError("Bit arrays are one-dimensional arrays of 0 and 1")

    return array


def bits_to_str(array):  # type: (np.ndarray) -> str
    return "".join("1" if b else "0" for b in array)


def random_bits(rng, n):  # type: (np.random.Generator, int) -> np.ndarray
    """
    Draws n independent uniform bits from the given generator.
    """
    return rng.integers(0, 2, size=n, dtype=BIT_DTYPE)


def hamming_weight(array):  # type: (np.ndarray) -> int
    return int(np.count_nonzero(array))


def digest(array, size=8):  # type: (np.ndarray, int) -> str
    """
    Short fingerprint of a bit array, used to refer to material
    in traces without writing the material itself.
    """
    h = hashlib.blake2b(digest_size=size)
    h.update(len(array).to_bytes(8, "big"))
    h.update(np.packbits(array).tobytes())

    return h.hexdigest()


def fragment_count(length, max_payload):  # type: (int, int) -> int
    return max(1, -(-length // max_payload))


def round_time(t):  # type: (float) -> float
    return round(t, TIME_PRECISION)
