"""
Call admission control for key delivery circuits.

Guaranteed-rate circuits reserve their rate, authentication overhead
included, on every link of their path. A link admits a reservation as
long as the sum of reservations stays within admission_factor times
its effective key rate. Best-effort circuits reserve nothing.
"""
import logging
import math

from collections import OrderedDict
from collections import namedtuple
from typing import Dict
from typing import Iterable
from typing import List
from typing import Mapping
from typing import Optional
from typing import Sequence
from typing import Union

from qkdnet.constants import DEFAULT_ADMISSION_FACTOR
from qkdnet.constants import DEFAULT_AUTH_TAG_KEY_BITS
from qkdnet.constants import DEFAULT_MAX_FRAME_PAYLOAD_BITS
from qkdnet.helpers import fragment_count
from qkdnet.routing import Route

from .circuit import REROUTING
from .circuit import VirtualCircuit
from .request import GUARANTEED
from .request import GuaranteedRate
from .request import PathRequest


logger = logging.getLogger(__name__)


NO_PATH = "no_path"
INSUFFICIENT_CAPACITY = "insufficient_capacity"


class Rejection(namedtuple("Rejection", "reason best_available")):
    """
    Refused request. best_available is the best guaranteed service
    the network could offer instead, if any.
    """

    __slots__ = ()

    def __new__(
        cls, reason, best_available=None
    ):  # type: (str, Optional[GuaranteedRate]) -> Rejection
        return super(Rejection, cls).__new__(cls, reason, best_available)

    def as_dict(self):  # type: () -> dict
        return {
            "reason": self.reason,
            "best_available": (
                self.best_available.as_dict() if self.best_available else None
            ),
        }


class Teardown(namedtuple("Teardown", "circuit_id reason")):

    __slots__ = ()


def auth_overhead_fraction(
    key_block_length,
    max_frame_payload_bits=DEFAULT_MAX_FRAME_PAYLOAD_BITS,
    auth_tag_key_bits=DEFAULT_AUTH_TAG_KEY_BITS,
):  # type: (int, int, int) -> float
    """
    Authentication key spent per payload bit when relaying one session key.

    >>> auth_overhead_fraction(8192)
    0.015625
    """
    tags = fragment_count(key_block_length, max_frame_payload_bits) * auth_tag_key_bits

    return tags / key_block_length


class ReservationLedger(object):
    """
    Reserved guaranteed rates per link, per circuit.
    """

    def __init__(self):  # type: () -> None
        self._links = {}  # type: Dict[str, Dict[str, float]]
        self._circuits = OrderedDict()  # type: Dict[str, List[str]]

    def install(self, circuit_id, links, rate):  # type: (str, Sequence[str], float) -> None
        if circuit_id in self._circuits:
            raise ValueError("Circuit {} already holds reservations".format(circuit_id))

        self._circuits[circuit_id] = list(links)
        for link_id in links:
            self._links.setdefault(link_id, OrderedDict())[circuit_id] = rate

    def release(self, circuit_id):  # type: (str) -> None
        for link_id in self._circuits.pop(circuit_id, ()):
            reservations = self._links[link_id]
            del reservations[circuit_id]
            if not reservations:
                del self._links[link_id]

    def reserved(self, link_id):  # type: (str) -> float
        return sum(self._links.get(link_id, {}).values())

    def circuits_on(self, link_id):  # type: (str) -> List[str]
        """
        Circuits holding a reservation on a link, oldest first.
        """
        return list(self._links.get(link_id, ()))

    def rate(self, circuit_id, link_id):  # type: (str, str) -> float
        return self._links[link_id][circuit_id]

    def links_of(self, circuit_id):  # type: (str) -> List[str]
        return list(self._circuits.get(circuit_id, ()))

    def __contains__(self, circuit_id):  # type: (str) -> bool
        return circuit_id in self._circuits

    def __len__(self):  # type: () -> int
        return len(self._circuits)


class Admission(object):
    """
    Admission decisions over a shared reservation ledger.

    Link rates come from the deciding node's link-state view and are
    passed in with every request.
    """

    def __init__(
        self,
        ledger=None,  # type: Optional[ReservationLedger]
        admission_factor=DEFAULT_ADMISSION_FACTOR,  # type: float
        max_frame_payload_bits=DEFAULT_MAX_FRAME_PAYLOAD_BITS,  # type: int
        auth_tag_key_bits=DEFAULT_AUTH_TAG_KEY_BITS,  # type: int
    ):  # type: (...) -> None
        if not 0 < admission_factor <= 1:
            raise ValueError(
                "Admission factor must be in (0, 1], got {}".format(admission_factor)
            )

        self.ledger = ledger if ledger is not None else ReservationLedger()
        self.admission_factor = admission_factor
        self.max_frame_payload_bits = max_frame_payload_bits
        self.auth_tag_key_bits = auth_tag_key_bits

    def overhead(self, key_block_length):  # type: (int) -> float
        return auth_overhead_fraction(
            key_block_length, self.max_frame_payload_bits, self.auth_tag_key_bits
        )

    def demanded_rate(self, request):  # type: (PathRequest) -> float
        """
        Local key rate a guaranteed request needs on every path link.
        """
        if request.service.kind != GUARANTEED:
            return 0.0

        return request.service.rate * (1 + self.overhead(request.key_block_length))

    def headroom(self, link_id, rates):  # type: (str, Mapping[str, float]) -> float
        return self.admission_factor * rates.get(link_id, 0.0) - self.ledger.reserved(
            link_id
        )

    def path_headroom(
        self, links, rates
    ):  # type: (Iterable[str], Mapping[str, float]) -> float
        return min(self.headroom(link_id, rates) for link_id in links)

    def establish_path(
        self,
        request,  # type: PathRequest
        routes,  # type: Sequence[Route]
        rates,  # type: Mapping[str, float]
        circuit_id,  # type: str
        now=0.0,  # type: float
        exclude=frozenset(),  # type: Iterable[str]
    ):  # type: (...) -> Union[VirtualCircuit, Rejection]
        """
        Admits a request on the first candidate route that can carry it.

        On success the returned circuit is still establishing and holds
        its reservations; the caller activates it once setup signaling
        has completed.
        """
        if request.ingress == request.dest_node:
            return VirtualCircuit(
                circuit_id, request, (request.ingress,), (), now=now
            )

        route = self._select(request, routes, rates, exclude)
        if isinstance(route, Rejection):
            logger.info(
                "Request %s from %s to %s rejected: %s",
                circuit_id,
                request.ingress,
                request.dest_node,
                route.reason,
            )

            return route

        circuit = VirtualCircuit(circuit_id, request, route.path, route.links, now=now)
        self._reserve(circuit)

        return circuit

    def reroute(
        self,
        circuit,  # type: VirtualCircuit
        failed_link,  # type: Optional[str]
        routes,  # type: Sequence[Route]
        rates,  # type: Mapping[str, float]
        now=0.0,  # type: float
    ):  # type: (...) -> Union[VirtualCircuit, Teardown]
        """
        Moves a circuit off a failed link, or tears it down.

        The circuit keeps its identity and sequence numbers; packets of
        the previous path become stale. Routes through the failed link
        are never considered. Without a failed link the circuit is set
        up again on the best admissible route.
        """
        if circuit.is_closed or circuit.by_destination or not circuit.links:
            return circuit

        if failed_link is not None and not circuit.uses_link(failed_link):
            return circuit

        exclude = () if failed_link is None else (failed_link,)

        circuit.state = REROUTING
        self.ledger.release(circuit.circuit_id)
        circuit.reserved_rate = 0.0

        route = self._select(circuit.request, routes, rates, exclude)
        if isinstance(route, Rejection):
            circuit.close(now, route.reason)

            return Teardown(circuit.circuit_id, route.reason)

        circuit.move(route.path, route.links)
        self._reserve(circuit)
        logger.info(
            "Circuit %s rerouted (failed link %s) onto %s",
            circuit.circuit_id,
            failed_link,
            "-".join(route.path),
        )

        return circuit

    def release(self, circuit):  # type: (VirtualCircuit) -> None
        self.ledger.release(circuit.circuit_id)
        circuit.reserved_rate = 0.0

    def violations(self, link_id, rates):  # type: (str, Mapping[str, float]) -> List[str]
        """
        Circuits to move off a link whose rate no longer covers its
        reservations, newest first, just enough to restore the bound.
        """
        excess = self.ledger.reserved(link_id) - self.admission_factor * rates.get(
            link_id, 0.0
        )
        victims = []
        for circuit_id in reversed(self.ledger.circuits_on(link_id)):
            if excess <= 1e-9:
                break

            victims.append(circuit_id)
            excess -= self.ledger.rate(circuit_id, link_id)

        return victims

    def _reserve(self, circuit):  # type: (VirtualCircuit) -> None
        rate = self.demanded_rate(circuit.request)
        if rate and circuit.links:
            self.ledger.install(circuit.circuit_id, circuit.links, rate)
            circuit.reserved_rate = rate

    def _select(
        self, request, routes, rates, exclude
    ):  # type: (PathRequest, Sequence[Route], Mapping[str, float], Iterable[str]) -> Union[Route, Rejection]
        exclude = frozenset(exclude)
        candidates = [
            route
            for route in routes
            if not exclude.intersection(route.links)
            and all(rates.get(link_id, 0.0) > 0 for link_id in route.links)
        ]
        if not candidates:
            return Rejection(NO_PATH)

        if request.service.kind != GUARANTEED:
            return candidates[0]

        demand = self.demanded_rate(request)
        for route in candidates:
            if self.path_headroom(route.links, rates) >= demand:
                return route

        return Rejection(
            INSUFFICIENT_CAPACITY, self.best_available(request, candidates, rates)
        )

    def best_available(
        self, request, routes, rates
    ):  # type: (PathRequest, Sequence[Route], Mapping[str, float]) -> Optional[GuaranteedRate]
        """
        Largest guaranteed contract, in the requested period, that one
        of the candidate routes would still admit.
        """
        headroom = max(self.path_headroom(route.links, rates) for route in routes)
        rate = headroom / (1 + self.overhead(request.key_block_length))
        bits = math.floor(rate * request.service.period)
        if bits <= 0:
            return None

        return GuaranteedRate(bits, request.service.period)


def reroute(
    circuit,  # type: VirtualCircuit
    failed_link,  # type: str
    admission,  # type: Admission
    routes,  # type: Sequence[Route]
    rates,  # type: Mapping[str, float]
    now=0.0,  # type: float
):  # type: (...) -> Union[VirtualCircuit, Teardown]
    return admission.reroute(circuit, failed_link, routes, rates, now=now)
