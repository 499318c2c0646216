import hashlib

import numpy as np

from .exceptions import LengthMismatch


def otp_encrypt(plaintext, key):  # type: (np.ndarray, np.ndarray) -> np.ndarray
    """
    One-time pad: XOR of the message with key material of equal length.

    Encryption and decryption are the same operation.
    """
    if len(plaintext) != len(key):
        raise LengthMismatch(len(plaintext), len(key))

    return np.bitwise_xor(plaintext, key)


def auth_tag(ciphertext, tag_key):  # type: (np.ndarray, np.ndarray) -> np.ndarray
    """
    Placeholder message authentication tag.

    The tag is as wide as the tag key and depends on every ciphertext
    bit, which is all the link layer needs: a fixed key cost per frame
    and detection of altered frames.
    """
    width = len(tag_key)
    if width % 8 or not 0 < width <= 512:
        raise ValueError(
            "Tag keys are a multiple of 8 bits, at most 512, got {}".format(width)
        )

    h = hashlib.blake2b(key=np.packbits(tag_key).tobytes(), digest_size=width // 8)
    h.update(len(ciphertext).to_bytes(8, "big"))
    h.update(np.packbits(ciphertext).tobytes())

    return np.unpackbits(np.frombuffer(h.digest(), dtype=np.uint8))
