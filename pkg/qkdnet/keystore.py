"""
Key stores buffer the local key material of a QBB link.

Both endpoints of a link hold synchronized copies of the same store;
the simulator models the pair as one logical object. The sending
endpoint consumes a block and the receiving endpoint claims the very
same block by its identifier.
"""
import hashlib
import logging

from collections import deque
from collections import namedtuple
from typing import Deque
from typing import Dict
from typing import List
from typing import Optional

import numpy as np

from .constants import DEFAULT_KEYSTORE_CAPACITY
from .exceptions import InsufficientKey
from .exceptions import UnknownBlock
from .helpers import random_bits


logger = logging.getLogger(__name__)

# Deposits are split so that consuming never unpacks huge chunks.
_CHUNK_BITS = 1 << 16


class KeyBlock(namedtuple("KeyBlock", "block_id bits link_id")):
    """
    Single-use local key material taken from a key store.
    """

    __slots__ = ()

    def __new__(cls, block_id, bits, link_id):  # type: (int, np.ndarray, str) -> KeyBlock
        if len(bits) == 0:
            raise ValueError("A key block holds at least one bit")

        return super(KeyBlock, cls).__new__(cls, block_id, bits, link_id)

    def __len__(self):  # type: () -> int
        return len(self.bits)

    def __repr__(self):  # type: () -> str
        return "KeyBlock({}, {} bits, {})".format(
            self.block_id, len(self.bits), self.link_id
        )


class _Chunk(object):

    __slots__ = ("packed", "size", "offset", "_bits")

    def __init__(self, packed, size):  # type: (np.ndarray, int) -> None
        self.packed = packed
        self.size = size
        self.offset = 0
        self._bits = None  # type: Optional[np.ndarray]

    @property
    def remaining(self):  # type: () -> int
        return self.size - self.offset

    def take(self, n):  # type: (int) -> np.ndarray
        # Only the chunk being consumed is held unpacked.
        if self._bits is None:
            self._bits = np.unpackbits(self.packed, count=self.size)

        part = self._bits[self.offset : self.offset + n]
        self.offset += len(part)

        return part


class KeyStore(object):
    """
    Bounded buffer of single-use key material for one QBB link.

    >>> store = KeyStore("A-B", capacity_bits=1000)
    >>> store.deposit(600, rng)
    600
    >>> block = store.consume(256)
    >>> store.available_bits
    344
    """

    def __init__(
        self, link_id, capacity_bits=DEFAULT_KEYSTORE_CAPACITY
    ):  # type: (str, int) -> None
        if int(capacity_bits) != capacity_bits or capacity_bits <= 0:
            raise ValueError(
                "Key store capacity must be a positive integer, got {}".format(
                    capacity_bits
                )
            )

        self._link_id = link_id
        self._capacity = int(capacity_bits)
        self._available = 0
        self._next_block_id = 0
        self._chunks = deque()  # type: Deque[_Chunk]
        self._unclaimed = {}  # type: Dict[int, KeyBlock]

        self._material = hashlib.blake2b(digest_size=16)

        self._deposited = 0
        self._discarded = 0
        self._consumed = 0

    @property
    def link_id(self):  # type: () -> str
        return self._link_id

    @property
    def capacity_bits(self):  # type: () -> int
        return self._capacity

    @property
    def available_bits(self):  # type: () -> int
        return self._available

    @property
    def next_block_id(self):  # type: () -> int
        return self._next_block_id

    @property
    def consumed_ids(self):  # type: () -> range
        """
        Identifiers already issued. Identifiers are handed out in
        increasing order so the issued set is always a prefix range.
        """
        return range(self._next_block_id)

    @property
    def total_deposited(self):  # type: () -> int
        return self._deposited

    @property
    def total_discarded(self):  # type: () -> int
        return self._discarded

    @property
    def total_consumed(self):  # type: () -> int
        return self._consumed

    def deposit(self, num_bits, rng):  # type: (int, np.random.Generator) -> int
        """
        Adds freshly generated key material.

        Bits beyond the capacity are discarded and counted.
        Returns the number of bits actually stored.
        """
        if num_bits < 0:
            raise ValueError("Cannot deposit a negative number of bits")

        num_bits = int(num_bits)
        accepted = min(num_bits, self._capacity - self._available)

        self._deposited += num_bits
        self._discarded += num_bits - accepted
        if accepted < num_bits:
            logger.debug(
                "%s: store full, %d bits discarded", self._link_id, num_bits - accepted
            )

        remaining = accepted
        while remaining:
            size = min(remaining, _CHUNK_BITS)
            self._chunks.append(_Chunk(np.packbits(random_bits(rng, size)), size))
            remaining -= size

        self._available += accepted

        return accepted

    def consume(self, num_bits):  # type: (int) -> KeyBlock
        """
        Takes exactly num_bits of key material as a fresh block.

        Nothing is consumed if the store cannot cover the whole request.
        """
        if num_bits <= 0:
            raise ValueError("Cannot consume {} bits".format(num_bits))

        if num_bits > self._available:
            raise InsufficientKey(self._link_id, self._available, num_bits)

        parts = []  # type: List[np.ndarray]
        needed = num_bits
        while needed:
            chunk = self._chunks[0]
            part = chunk.take(needed)
            parts.append(part)
            needed -= len(part)

            if not chunk.remaining:
                self._chunks.popleft()

        self._available -= num_bits
        self._consumed += num_bits

        block = KeyBlock(self._next_block_id, np.concatenate(parts), self._link_id)
        self._material.update(np.packbits(block.bits).tobytes())
        self._next_block_id += 1
        self._unclaimed[block.block_id] = block

        return block

    def claim(self, block_id):  # type: (int) -> KeyBlock
        """
        Hands the peer endpoint its copy of an issued block.

        A block can be claimed once.
        """
        try:
            return self._unclaimed.pop(block_id)
        except KeyError:
            raise UnknownBlock(block_id, self._link_id)

    def fill_fraction(self):  # type: () -> float
        return self._available / self._capacity

    def material_digest(self):  # type: () -> str
        """
        Fingerprint of all key material issued so far.
        """
        return self._material.hexdigest()

    def __repr__(self):  # type: () -> str
        return "KeyStore({}, {}/{} bits)".format(
            self._link_id, self._available, self._capacity
        )
