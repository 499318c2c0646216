import logging

from collections import OrderedDict
from collections import namedtuple
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Set
from typing import Tuple

import numpy as np

from .request import BEST_EFFORT
from .request import FORWARD_DESTINATION
from .request import BestEffort
from .request import PathRequest


logger = logging.getLogger(__name__)


ESTABLISHING = "establishing"
ACTIVE = "active"
REROUTING = "rerouting"
CLOSED = "closed"

CONFORMING = "conforming"
NON_CONFORMING = "non_conforming"

# Notification kinds
ESTABLISHED = "established"
REJECTED = "rejected"
REROUTED = "rerouted"
TEARDOWN = "teardown"


class TokenBucket(object):
    """
    Token bucket of rate lambda_k tokens per second and depth sigma_k.

    The bucket starts full.
    """

    def __init__(self, rate, depth, now=0.0):  # type: (float, float, float) -> None
        self.rate = rate
        self.depth = depth
        self.tokens = depth
        self.last_update = now

    def refill(self, now):  # type: (float) -> float
        if now > self.last_update:
            self.tokens = min(self.depth, self.tokens + self.rate * (now - self.last_update))
            self.last_update = now

        return self.tokens

    def take(self, now):  # type: (float) -> bool
        if self.refill(now) >= 1:
            self.tokens -= 1

            return True

        return False

    def __repr__(self):  # type: () -> str
        return "TokenBucket({}/s, {:.3f}/{})".format(self.rate, self.tokens, self.depth)


class KeyPacket(
    namedtuple(
        "KeyPacket", "circuit_id sequence payload priority epoch destination hops"
    )
):
    """
    A session key on its way from ingress to egress.

    The payload is only present while the packet sits inside a node;
    in transit it is replaced by the link-layer frames.
    """

    __slots__ = ()

    def header(self):  # type: () -> KeyPacket
        return self._replace(payload=None)

    def __repr__(self):  # type: () -> str
        return "KeyPacket({}#{}, epoch {})".format(
            self.circuit_id, self.sequence, self.epoch
        )


class Notification(namedtuple("Notification", "time node kind detail")):

    __slots__ = ()

    def as_dict(self):  # type: () -> dict
        return {
            "time": self.time,
            "node": self.node,
            "kind": self.kind,
            "detail": self.detail,
        }


class VirtualCircuit(object):
    """
    An ingress-to-egress key delivery path with its service class.

    The ingress side keeps every generated session key until the egress
    has delivered it, so that a rerouted circuit can send again from the
    only node allowed to hold the plaintext at that point.
    """

    def __init__(
        self,
        circuit_id,  # type: str
        request,  # type: PathRequest
        path,  # type: Sequence[str]
        links,  # type: Sequence[str]
        now=0.0,  # type: float
    ):  # type: (...) -> None
        self._circuit_id = circuit_id
        self._request = request
        self._path = tuple(path)
        self._links = tuple(links)
        self._check_path()

        self.state = ESTABLISHING
        self.epoch = 0

        self.reserved_rate = 0.0
        self.token_bucket = None  # type: Optional[TokenBucket]
        if request.service.kind == BEST_EFFORT:
            service = request.service  # type: BestEffort
            self.token_bucket = TokenBucket(service.lambda_k, service.sigma_k, now=now)

        self._next_sequence = 0
        self._outstanding = OrderedDict()  # type: Dict[int, KeyPacket]
        self._next_expected = 0
        self._reorder = {}  # type: Dict[int, KeyPacket]
        self._lost = set()  # type: Set[int]

        self.requested_at = now
        self.established_at = None  # type: Optional[float]
        self.closed_at = None  # type: Optional[float]
        self.teardown_reason = None  # type: Optional[str]
        self.notifications = []  # type: List[Notification]
        self.paths = [self._path]  # type: List[Tuple[str, ...]]

        self.emitted = 0
        self.delivered_packets = 0
        self.delivered_bits = 0
        self.drops = 0
        self.lost_packets = 0
        self.stale_drops = 0
        self.reroutes = 0
        self.max_qber = 0.0
        self.qber_alarms = 0

    @property
    def circuit_id(self):  # type: () -> str
        return self._circuit_id

    @property
    def request(self):  # type: () -> PathRequest
        return self._request

    @property
    def service(self):
        return self._request.service

    @property
    def key_block_length(self):  # type: () -> int
        return self._request.key_block_length

    @property
    def path(self):  # type: () -> Tuple[str, ...]
        return self._path

    @property
    def links(self):  # type: () -> Tuple[str, ...]
        return self._links

    @property
    def ingress(self):  # type: () -> str
        return self._request.ingress

    @property
    def egress(self):  # type: () -> str
        return self._request.dest_node

    @property
    def by_destination(self):  # type: () -> bool
        return self._request.forwarding == FORWARD_DESTINATION

    @property
    def is_active(self):  # type: () -> bool
        return self.state == ACTIVE

    @property
    def is_closed(self):  # type: () -> bool
        return self.state == CLOSED

    def uses_link(self, link_id):  # type: (str) -> bool
        return not self.by_destination and link_id in self._links

    def next_hop(self, node):  # type: (str) -> Tuple[str, str]
        """
        Next node and link after the given node on the circuit path.
        """
        index = self._path.index(node)

        return self._path[index + 1], self._links[index]

    def activate(self, now):  # type: (float) -> None
        if self.state == CLOSED:
            return

        self.state = ACTIVE
        kind = REROUTED
        if self.established_at is None:
            self.established_at = now
            kind = ESTABLISHED

        self.notify(now, self.ingress, kind, app=self._request.source_app)
        self.notify(now, self.egress, kind, port=self._request.dest_port)

        logger.info("Circuit %s active on %s", self._circuit_id, "-".join(self._path))

    def move(self, path, links):  # type: (Sequence[str], Sequence[str]) -> None
        """
        Puts the circuit on a new path. Packets of the previous epoch
        still on the old path are stale from now on.
        """
        self._path = tuple(path)
        self._links = tuple(links)
        self._check_path()

        self.epoch += 1
        self.reroutes += 1
        self.paths.append(self._path)

    def close(self, now, reason):  # type: (float, str) -> None
        self.state = CLOSED
        self.closed_at = now
        self.teardown_reason = reason
        self._outstanding.clear()
        self._reorder.clear()
        self._lost.clear()
        for node in (self.ingress, self.egress):
            self.notify(now, node, TEARDOWN, reason=reason)

        logger.info("Circuit %s closed: %s", self._circuit_id, reason)

    def notify(self, now, node, kind, **detail):  # type: (float, str, str, ...) -> None
        self.notifications.append(Notification(now, node, kind, detail))

    def new_packet(self, payload):  # type: (np.ndarray) -> KeyPacket
        if len(payload) != self.key_block_length:
            raise ValueError(
                "Session keys of circuit {} are {} bits long, got {}".format(
                    self._circuit_id, self.key_block_length, len(payload)
                )
            )

        packet = KeyPacket(
            self._circuit_id,
            self._next_sequence,
            payload,
            self.service.priority,
            self.epoch,
            self.egress,
            0,
        )
        self._next_sequence += 1
        self._outstanding[packet.sequence] = packet
        self.emitted += 1

        return packet

    def outstanding(self):  # type: () -> List[KeyPacket]
        """
        Undelivered packets, in sequence order, stamped with the current epoch.
        """
        return [
            packet._replace(epoch=self.epoch, hops=0)
            for packet in self._outstanding.values()
        ]

    def sent_payload(self, sequence):  # type: (int) -> Optional[np.ndarray]
        packet = self._outstanding.get(sequence)
        if packet is None:
            return None

        return packet.payload

    def accept(self, packet):  # type: (KeyPacket) -> List[KeyPacket]
        """
        Egress side: returns the packets now deliverable, in order.
        """
        if self._settled(packet.sequence):
            return []

        self._reorder[packet.sequence] = packet

        return self._release()

    def lose(self, sequence):  # type: (int) -> List[KeyPacket]
        """
        Gives up on a packet dropped for good. The egress stops waiting
        for it and returns the packets it was holding back.
        """
        if self.is_closed or self._settled(sequence):
            return []

        self._outstanding.pop(sequence, None)
        self._lost.add(sequence)
        self.lost_packets += 1

        return self._release()

    def _settled(self, sequence):  # type: (int) -> bool
        return (
            sequence < self._next_expected
            or sequence in self._reorder
            or sequence in self._lost
        )

    def _release(self):  # type: () -> List[KeyPacket]
        delivered = []
        while True:
            if self._next_expected in self._lost:
                self._lost.discard(self._next_expected)
                self._next_expected += 1

                continue

            if self._next_expected not in self._reorder:
                break

            ready = self._reorder.pop(self._next_expected)
            self._outstanding.pop(ready.sequence, None)
            delivered.append(ready)

            self._next_expected += 1
            self.delivered_packets += 1
            self.delivered_bits += len(ready.payload)

        return delivered

    def _check_path(self):  # type: () -> None
        if len(self._links) != len(self._path) - 1:
            raise ValueError("A path of n nodes needs n - 1 links")

        if self._path[0] != self.ingress or self._path[-1] != self.egress:
            raise ValueError(
                "Path {} does not join {} to {}".format(
                    self._path, self.ingress, self.egress
                )
            )

    def __repr__(self):  # type: () -> str
        return "VirtualCircuit({}, {}, {})".format(
            self._circuit_id, "-".join(self._path), self.state
        )


def police(circuit, now):  # type: (VirtualCircuit, float) -> str
    """
    Token-bucket policing of a best-effort circuit's packet arrivals.

    Non-conforming packets are dropped and counted on the circuit.
    """
    if circuit.token_bucket is None:
        raise ValueError("Circuit {} is not best effort".format(circuit.circuit_id))

    if circuit.token_bucket.take(now):
        return CONFORMING

    circuit.drops += 1

    return NON_CONFORMING
