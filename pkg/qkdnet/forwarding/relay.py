"""
Hop-by-hop relay of session keys.

On every link a session key travels one-time padded with local key of
that link. A relay node recovers the plaintext with the incoming
link's key and pads it again with fresh key of the outgoing link.
Between those two steps the plaintext only lives inside the node.
"""
import logging

from collections import namedtuple
from typing import Optional
from typing import Tuple

from qkdnet.exceptions import InsufficientKey
from qkdnet.keystore import KeyStore
from qkdnet.q3p import AuthFailure
from qkdnet.q3p import Channel
from qkdnet.q3p import WindowFull

from .circuit import KeyPacket
from .scheduler import PacketQueue


logger = logging.getLogger(__name__)


class Transit(namedtuple("Transit", "packet frames link_id sender receiver")):
    """
    A key packet on a link: its header and the frames carrying it.
    """

    __slots__ = ()

    @property
    def key_block_refs(self):  # type: () -> Tuple[int, ...]
        return tuple(frame.key_block_ref for frame in self.frames)


def seal(packet, channel, store):  # type: (KeyPacket, Channel, KeyStore) -> Transit
    """
    Sends a packet on a link, padding it with the link's local key.

    Raises InsufficientKey or WindowFull and consumes nothing when
    the packet cannot leave yet.
    """
    frames = channel.send_message(packet.circuit_id, packet.payload, store)

    return Transit(
        packet.header(), tuple(frames), channel.link_id, channel.sender, channel.receiver
    )


def open_transit(transit, channel, store):  # type: (Transit, Channel, KeyStore) -> KeyPacket
    """
    Receives a packet at the far end of a link and recovers its payload.

    Every frame's key block is claimed, even after an authentication
    failure, so that both ends stay in step.
    """
    message = None
    failure = None
    for frame in transit.frames:
        key = store.claim(frame.key_block_ref)
        try:
            message = channel.deliver(frame, key)
        except AuthFailure as e:
            failure = failure or e

    if failure is not None:
        raise failure

    if message is None:
        raise ValueError(
            "Incomplete packet {} on link {}".format(transit.packet, transit.link_id)
        )

    return transit.packet._replace(payload=message, hops=transit.packet.hops + 1)


def relay_hop(
    transit,  # type: Transit
    incoming,  # type: Channel
    incoming_store,  # type: KeyStore
    outgoing,  # type: Channel
    outgoing_store,  # type: KeyStore
    queue=None,  # type: Optional[PacketQueue]
    now=0.0,  # type: float
):  # type: (...) -> Optional[Transit]
    """
    Decrypts an arriving packet and re-encrypts it for the next link.

    When the next link cannot take the packet now it waits in the
    node's queue for that link, if one is given, and None is returned.
    Packets already waiting there go first.
    """
    packet = open_transit(transit, incoming, incoming_store)

    if queue is not None and len(queue):
        enqueue(queue, packet, outgoing, now)

        return None

    try:
        return seal(packet, outgoing, outgoing_store)
    except (InsufficientKey, WindowFull) as e:
        if queue is None:
            raise

        logger.debug("%s: %s waits on %s (%s)", queue.node, packet, queue.link_id, e)
        enqueue(queue, packet, outgoing, now)

        return None


def enqueue(queue, packet, channel, now=0.0):  # type: (PacketQueue, KeyPacket, Channel, float) -> None
    queue.push(
        packet,
        channel.key_cost(len(packet.payload)),
        frames=channel.fragment_count(len(packet.payload)),
        now=now,
    )
