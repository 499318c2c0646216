from collections import namedtuple

import numpy as np


_Q3pFrame = namedtuple(
    "Q3pFrame",
    "frame_id "
    "circuit_id "
    "fragment_index "
    "fragment_count "
    "ciphertext "
    "auth_tag "
    "key_block_ref "
    "link_id "
    "encrypted",
)


class Q3pFrame(_Q3pFrame):
    """
    One fragment of a link-layer message.

    Control frames are authenticated only and carry their payload in clear.
    """

    __slots__ = ()

    def __new__(
        cls,
        frame_id,  # type: int
        circuit_id,  # type: str
        fragment_index,  # type: int
        fragment_count,  # type: int
        ciphertext,  # type: np.ndarray
        auth_tag,  # type: np.ndarray
        key_block_ref,  # type: int
        link_id,  # type: str
        encrypted=True,  # type: bool
    ):  # type: (...) -> Q3pFrame
        if not 0 <= fragment_index < fragment_count:
            raise ValueError(
                "Fragment index {} outside of message of {} fragments".format(
                    fragment_index, fragment_count
                )
            )

        return super(Q3pFrame, cls).__new__(
            cls,
            frame_id,
            circuit_id,
            fragment_index,
            fragment_count,
            ciphertext,
            auth_tag,
            key_block_ref,
            link_id,
            encrypted,
        )

    @property
    def payload_bits(self):  # type: () -> int
        return len(self.ciphertext)

    @property
    def key_bits(self):  # type: () -> int
        """
        Local key bits this frame consumed.
        """
        if self.encrypted:
            return len(self.ciphertext) + len(self.auth_tag)

        return len(self.auth_tag)

    def tampered(self, position=0):  # type: (int) -> Q3pFrame
        """
        Copy of the frame with one ciphertext bit flipped.
        """
        ciphertext = self.ciphertext.copy()
        ciphertext[position] ^= 1

        return self._replace(ciphertext=ciphertext)

    def __repr__(self):  # type: () -> str
        return "Q3pFrame({}, {}, {}/{}, {} bits, block {})".format(
            self.frame_id,
            self.circuit_id,
            self.fragment_index + 1,
            self.fragment_count,
            len(self.ciphertext),
            self.key_block_ref,
        )
