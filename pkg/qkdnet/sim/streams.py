"""
Independent random streams derived from one root seed.

Every consumer draws from a stream named by a fixed label, so adding
a consumer never changes what the others see.
"""
import zlib

from typing import Dict

import numpy as np


KEY_MATERIAL = "key-material/{}"
SESSION_KEYS = "session-keys/{}"
ARRIVALS = "arrivals/{}"


def label_key(label):  # type: (str) -> int
    return zlib.crc32(label.encode("utf-8"))


class Streams(object):
    """
    >>> streams = Streams(42)
    >>> rng = streams.stream(KEY_MATERIAL.format("A-B"))
    """

    def __init__(self, seed):  # type: (int) -> None
        self._seed = int(seed)
        self._streams = {}  # type: Dict[str, np.random.Generator]

    @property
    def seed(self):  # type: () -> int
        return self._seed

    def stream(self, label):  # type: (str) -> np.random.Generator
        rng = self._streams.get(label)
        if rng is None:
            sequence = np.random.SeedSequence(self._seed, spawn_key=(label_key(label),))
            rng = np.random.default_rng(sequence)
            self._streams[label] = rng

        return rng

    def key_material(self, link_id):  # type: (str) -> np.random.Generator
        return self.stream(KEY_MATERIAL.format(link_id))

    def session_keys(self, circuit_id):  # type: (str) -> np.random.Generator
        return self.stream(SESSION_KEYS.format(circuit_id))

    def arrivals(self, demand_id):  # type: (str) -> np.random.Generator
        return self.stream(ARRIVALS.format(demand_id))
