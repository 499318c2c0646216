"""
Q3P message service between two adjacent QBB nodes.

One Channel handles one direction of the classical channel of a QBB
link: it fragments messages, pads every fragment with fresh local key,
authenticates it and keeps the flow-control window. The receiving side
verifies, decrypts and reassembles.
"""
import logging

from typing import List
from typing import Optional

import numpy as np

from qkdnet.constants import DEFAULT_AUTH_TAG_KEY_BITS
from qkdnet.constants import DEFAULT_CHANNEL_LATENCY
from qkdnet.constants import DEFAULT_FLOW_CONTROL_WINDOW
from qkdnet.constants import DEFAULT_MAX_FRAME_PAYLOAD_BITS
from qkdnet.exceptions import InsufficientKey
from qkdnet.helpers import fragment_count
from qkdnet.keystore import KeyBlock
from qkdnet.keystore import KeyStore

from .exceptions import AuthFailure
from .exceptions import OutOfOrderFrame
from .exceptions import WindowFull
from .frame import Q3pFrame
from .otp import auth_tag
from .otp import otp_encrypt


logger = logging.getLogger(__name__)


class ChannelState(object):
    def __init__(
        self, link_id, window, latency
    ):  # type: (str, int, float) -> None
        if window < 1:
            raise ValueError("Flow-control window must hold at least one frame")

        if latency < 0:
            raise ValueError("Channel latency cannot be negative")

        self.link_id = link_id
        self.window = window
        self.latency = latency
        self.in_flight = 0

    def __repr__(self):  # type: () -> str
        return "ChannelState({}, {}/{} in flight, {}s)".format(
            self.link_id, self.in_flight, self.window, self.latency
        )


class Reassembler(object):
    """
    Collects in-order fragments until a message is complete.
    """

    def __init__(self):  # type: () -> None
        self._parts = []  # type: List[np.ndarray]
        self._expected = 0
        self._aborted = False

    def abort(self):  # type: () -> None
        """
        Drops the partial message; its remaining fragments are skipped.
        """
        self._parts = []
        self._expected = 0
        self._aborted = True

    def add(self, frame, fragment):  # type: (Q3pFrame, np.ndarray) -> Optional[np.ndarray]
        if frame.fragment_index == 0:
            self._parts = []
            self._expected = 0
            self._aborted = False

        if self._aborted:
            return None

        if frame.fragment_index != self._expected:
            raise ValueError(
                "Fragment {} arrived while expecting {}".format(
                    frame.fragment_index, self._expected
                )
            )

        self._parts.append(fragment)
        self._expected += 1

        if self._expected < frame.fragment_count:
            return None

        message = np.concatenate(self._parts)
        self._parts = []
        self._expected = 0

        return message


class Channel(object):
    """
    One direction of the classical channel of a QBB link.

    >>> channel = Channel("A-B", "A", "B")
    >>> frames = channel.send_message("vc-1", payload, store)
    >>> for frame in frames:
    ...     message = channel.deliver(frame, store.claim(frame.key_block_ref))
    """

    def __init__(
        self,
        link_id,  # type: str
        sender,  # type: str
        receiver,  # type: str
        window=DEFAULT_FLOW_CONTROL_WINDOW,  # type: int
        latency=DEFAULT_CHANNEL_LATENCY,  # type: float
        max_frame_payload_bits=DEFAULT_MAX_FRAME_PAYLOAD_BITS,  # type: int
        auth_tag_key_bits=DEFAULT_AUTH_TAG_KEY_BITS,  # type: int
    ):  # type: (...) -> None
        if max_frame_payload_bits <= 0:
            raise ValueError("Frames must carry at least one payload bit")

        self._state = ChannelState(link_id, window, latency)
        self._sender = sender
        self._receiver = receiver
        self._max_payload = max_frame_payload_bits
        self._tag_bits = auth_tag_key_bits
        self._next_frame_id = 0
        self._expected_frame_id = 0
        self._reassembler = Reassembler()

        self.frames_sent = 0
        self.frames_received = 0
        self.auth_failures = 0

    @property
    def state(self):  # type: () -> ChannelState
        return self._state

    @property
    def link_id(self):  # type: () -> str
        return self._state.link_id

    @property
    def sender(self):  # type: () -> str
        return self._sender

    @property
    def receiver(self):  # type: () -> str
        return self._receiver

    @property
    def latency(self):  # type: () -> float
        return self._state.latency

    @property
    def max_frame_payload_bits(self):  # type: () -> int
        return self._max_payload

    @property
    def auth_tag_key_bits(self):  # type: () -> int
        return self._tag_bits

    def fragment_count(self, payload_bits):  # type: (int) -> int
        return fragment_count(payload_bits, self._max_payload)

    def key_cost(self, payload_bits, encrypt=True):  # type: (int, bool) -> int
        """
        Local key bits needed to send a message of the given size.
        """
        tags = self.fragment_count(payload_bits) * self._tag_bits
        if not encrypt:
            return tags

        return payload_bits + tags

    def can_send(self, frames):  # type: (int) -> bool
        state = self._state

        return state.in_flight + frames <= state.window

    def send_message(
        self, circuit_id, payload, store, encrypt=True, windowed=True
    ):  # type: (str, np.ndarray, KeyStore, bool, bool) -> List[Q3pFrame]
        """
        Splits a message into frames protected by fresh local key.

        Either every fragment is sent or nothing is consumed.
        """
        if not len(payload):
            raise ValueError("Cannot send an empty message")

        count = self.fragment_count(len(payload))
        if windowed and not self.can_send(count):
            raise WindowFull(self.link_id, self._state.in_flight, self._state.window, count)

        needed = self.key_cost(len(payload), encrypt=encrypt)
        if store.available_bits < needed:
            raise InsufficientKey(store.link_id, store.available_bits, needed)

        frames = []
        for index in range(count):
            fragment = payload[index * self._max_payload : (index + 1) * self._max_payload]
            pad_bits = len(fragment) if encrypt else 0
            block = store.consume(pad_bits + self._tag_bits)

            if encrypt:
                ciphertext = otp_encrypt(fragment, block.bits[:pad_bits])
            else:
                ciphertext = fragment.copy()

            frame = Q3pFrame(
                self._next_frame_id,
                circuit_id,
                index,
                count,
                ciphertext,
                auth_tag(ciphertext, block.bits[pad_bits:]),
                block.block_id,
                self.link_id,
                encrypted=encrypt,
            )
            self._next_frame_id += 1
            frames.append(frame)

        if windowed:
            self._state.in_flight += count

        self.frames_sent += count
        logger.debug(
            "%s: %s sent %d frame(s) for %s, %d key bits",
            self.link_id,
            self._sender,
            count,
            circuit_id,
            needed,
        )

        return frames

    def receive_frame(self, frame, key):  # type: (Q3pFrame, KeyBlock) -> np.ndarray
        """
        Verifies a frame and recovers its plaintext fragment.
        """
        if key.block_id != frame.key_block_ref:
            raise ValueError(
                "Frame {} was protected with block {}, got block {}".format(
                    frame.frame_id, frame.key_block_ref, key.block_id
                )
            )

        pad_bits = len(frame.ciphertext) if frame.encrypted else 0
        expected = auth_tag(frame.ciphertext, key.bits[pad_bits:])
        if not np.array_equal(expected, frame.auth_tag):
            self.auth_failures += 1
            logger.warning(
                "%s: authentication failure on frame %d", self.link_id, frame.frame_id
            )

            raise AuthFailure(frame.frame_id, self.link_id)

        if frame.encrypted:
            return otp_encrypt(frame.ciphertext, key.bits[:pad_bits])

        return frame.ciphertext.copy()

    def deliver(
        self, frame, key, windowed=True
    ):  # type: (Q3pFrame, KeyBlock, bool) -> Optional[np.ndarray]
        """
        Receiving end: verifies and reassembles, freeing window space.

        Returns the whole message once its last fragment is in.
        """
        if frame.frame_id != self._expected_frame_id:
            raise OutOfOrderFrame(frame.frame_id, self.link_id, self._expected_frame_id)

        self._expected_frame_id += 1
        if windowed:
            self._state.in_flight -= 1

        try:
            fragment = self.receive_frame(frame, key)
        except AuthFailure:
            self._reassembler.abort()

            raise

        self.frames_received += 1

        return self._reassembler.add(frame, fragment)

    def __repr__(self):  # type: () -> str
        return "Channel({}, {} -> {})".format(self.link_id, self._sender, self._receiver)
