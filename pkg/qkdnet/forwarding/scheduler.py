from collections import deque
from collections import namedtuple
from typing import Callable
from typing import Deque
from typing import Dict
from typing import Iterator
from typing import Optional
from typing import Union

from qkdnet.constants import PRIORITY_BEST_EFFORT
from qkdnet.constants import PRIORITY_GUARANTEED

from .circuit import KeyPacket


PRIORITIES = (PRIORITY_GUARANTEED, PRIORITY_BEST_EFFORT)


class QueuedPacket(namedtuple("QueuedPacket", "packet key_bits frames enqueued_at")):
    """
    A packet waiting for key material (or window space) on an outgoing link.

    key_bits is what sending it will consume from the outgoing store.
    """

    __slots__ = ()


class PacketQueue(object):
    """
    Departure buffer of one node towards one outgoing link,
    one FIFO per priority class.
    """

    def __init__(self, node, link_id):  # type: (str, str) -> None
        self.node = node
        self.link_id = link_id
        self._classes = {
            priority: deque() for priority in PRIORITIES
        }  # type: Dict[int, Deque[QueuedPacket]]

    def push(
        self, packet, key_bits, frames=1, now=0.0
    ):  # type: (KeyPacket, int, int, float) -> QueuedPacket
        entry = QueuedPacket(packet, key_bits, frames, now)
        self._classes[packet.priority].append(entry)

        return entry

    def head(self, priority):  # type: (int) -> Optional[QueuedPacket]
        packets = self._classes[priority]
        if not packets:
            return None

        return packets[0]

    def pop(self, priority):  # type: (int) -> QueuedPacket
        return self._classes[priority].popleft()

    def purge(self, circuit_id):  # type: (str) -> int
        """
        Drops every queued packet of a circuit. Returns how many.
        """
        removed = 0
        for priority, packets in self._classes.items():
            kept = deque(entry for entry in packets if entry.packet.circuit_id != circuit_id)
            removed += len(packets) - len(kept)
            self._classes[priority] = kept

        return removed

    def __iter__(self):  # type: () -> Iterator[QueuedPacket]
        for priority in PRIORITIES:
            for entry in self._classes[priority]:
                yield entry

    def __len__(self):  # type: () -> int
        return sum(len(packets) for packets in self._classes.values())

    def __repr__(self):  # type: () -> str
        return "PacketQueue({} -> {}, {} queued)".format(
            self.node, self.link_id, len(self)
        )


def schedule(
    queue, fits
):  # type: (PacketQueue, Union[int, Callable[[QueuedPacket], bool]]) -> Optional[QueuedPacket]
    """
    Removes and returns the next packet to transmit, if any.

    Guaranteed packets depart before best-effort ones and each class is
    FIFO. When the head of a class cannot be sent, a lower class head
    that can is sent instead. fits is either the key available on the
    outgoing store or a predicate on queued packets.
    """
    if isinstance(fits, int):
        available = fits
        fits = lambda entry: entry.key_bits <= available  # noqa: E731

    for priority in PRIORITIES:
        entry = queue.head(priority)
        if entry is not None and fits(entry):
            return queue.pop(priority)

    return None
