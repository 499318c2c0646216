"""
Data plane and control plane state of a simulated QKD network.

The network reacts to events handed over by the simulation loop; it
never schedules anything itself but asks the loop to call it back.
"""
import logging

from collections import OrderedDict
from typing import Dict
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np

from qkdnet.constants import CONTROL_CIRCUIT
from qkdnet.exceptions import InsufficientKey
from qkdnet.forwarding import CONFORMING
from qkdnet.forwarding import REROUTING
from qkdnet.forwarding import Admission
from qkdnet.forwarding import KeyPacket
from qkdnet.forwarding import PacketQueue
from qkdnet.forwarding import Rejection
from qkdnet.forwarding import Teardown
from qkdnet.forwarding import Transit
from qkdnet.forwarding import VirtualCircuit
from qkdnet.forwarding import open_transit
from qkdnet.forwarding import police
from qkdnet.forwarding import relay_hop
from qkdnet.forwarding import schedule
from qkdnet.forwarding import seal
from qkdnet.forwarding.circuit import REJECTED
from qkdnet.forwarding.relay import enqueue
from qkdnet.helpers import digest
from qkdnet.helpers import random_bits
from qkdnet.keystore import KeyStore
from qkdnet.link import effective_link_rate
from qkdnet.q3p import AuthFailure
from qkdnet.q3p import Channel
from qkdnet.q3p import WindowFull
from qkdnet.routing import DOWN
from qkdnet.routing import UP
from qkdnet.routing import CostWeights
from qkdnet.routing import LinkStateRecord
from qkdnet.routing import RoutingService

from .events import ACTIVATION
from .events import LINK_STATE_FLOOD
from .events import PACKET_ARRIVAL
from .events import STOP
from .metrics import REJECTION_REASONS
from .metrics import LinkCounters
from .metrics import Metrics
from .metrics import circuit_record
from .metrics import link_record
from .scenario import DemandSpec
from .scenario import Scenario
from .streams import Streams


logger = logging.getLogger(__name__)

STOPPED = "stopped"


class Network(object):
    def __init__(self, scenario, loop, sink):  # type: (Scenario, ..., ...) -> None
        self.scenario = scenario
        self.config = config = scenario.config
        self.streams = Streams(scenario.seed)
        self._loop = loop
        self._sink = sink

        self.node_ids = scenario.node_ids
        self.profiles = OrderedDict()
        self.endpoints = {}  # type: Dict[str, Tuple[str, str]]
        self.rates = {}  # type: Dict[str, float]
        self.status = {}  # type: Dict[str, str]
        self.stores = OrderedDict()  # type: Dict[str, KeyStore]
        self.counters = OrderedDict()  # type: Dict[str, LinkCounters]
        self.channels = OrderedDict()  # type: Dict[Tuple[str, str], Channel]
        self.queues = OrderedDict()  # type: Dict[Tuple[str, str], PacketQueue]
        self._carry = {}  # type: Dict[str, float]

        for link in scenario.links:
            link_id = link.link_id
            self.profiles[link_id] = link.profile
            self.endpoints[link_id] = link.endpoints
            self.rates[link_id] = effective_link_rate(link.profile, config.qber_penalty)
            self.status[link_id] = UP if self.rates[link_id] > 0 else DOWN
            self.stores[link_id] = KeyStore(link_id, link.capacity_bits)
            self.counters[link_id] = LinkCounters()
            self._carry[link_id] = 0.0

            if self.status[link_id] == DOWN:
                self.counters[link_id].down_since = 0.0

            if config.initial_fill_bits:
                self.stores[link_id].deposit(
                    config.initial_fill_bits, self.streams.key_material(link_id)
                )

            a, b = link.endpoints
            for sender, receiver in ((a, b), (b, a)):
                self.channels[(link_id, sender)] = Channel(
                    link_id,
                    sender,
                    receiver,
                    window=config.flow_control_window,
                    latency=config.channel_latency,
                    max_frame_payload_bits=config.max_frame_payload_bits,
                    auth_tag_key_bits=config.auth_tag_key_bits,
                )
                self.queues[(sender, link_id)] = PacketQueue(sender, link_id)

        self.admission = Admission(
            admission_factor=config.admission_factor,
            max_frame_payload_bits=config.max_frame_payload_bits,
            auth_tag_key_bits=config.auth_tag_key_bits,
        )
        self.routing = RoutingService(
            self.node_ids,
            [self.record(link_id) for link_id in self.profiles],
            weights=CostWeights(config.w_load, config.w_cap, config.r_ref),
            k_paths=config.k_paths,
            stubs=scenario.stubs,
        )

        self.circuits = OrderedDict()  # type: Dict[str, VirtualCircuit]
        self._demands = {}  # type: Dict[str, DemandSpec]
        self.rejections = []  # type: List[dict]
        self.teardowns = 0
        self.fidelity_violations = 0
        self.samples = []  # type: List[dict]

    @property
    def now(self):  # type: () -> float
        return self._loop.now

    def record(self, link_id):  # type: (str) -> LinkStateRecord
        return LinkStateRecord(
            link_id,
            self.endpoints[link_id],
            self.rates[link_id],
            fill_fraction=self.stores[link_id].fill_fraction(),
            reserved_rate=self.admission.ledger.reserved(link_id),
            status=self.status[link_id],
        )

    def view_rates(self, node):  # type: (str) -> Dict[str, float]
        return {
            link_id: record.usable_rate
            for link_id, record in self.routing.view(node).items()
        }

    # Key generation

    def keygen(self, dt):  # type: (float) -> None
        """
        Deposits the key generated by every Up link during dt seconds.

        Fractions of a bit carry over to the next tick.
        """
        for link_id, store in self.stores.items():
            if self.status[link_id] != UP:
                continue

            carry = self._carry[link_id] + self.rates[link_id] * dt
            generated = int(carry)
            self._carry[link_id] = carry - generated
            if generated:
                store.deposit(generated, self.streams.key_material(link_id))

        for node, link_id in self.queues:
            self.drain(node, link_id)

    # Circuits

    def demand(self, demand):  # type: (DemandSpec) -> None
        request = demand.request
        circuit_id = "vc-{}".format(demand.demand_id)

        routes = []
        if request.ingress != request.dest_node:
            routes = self.routing.table(request.ingress).routes(request.dest_node)

        result = self.admission.establish_path(
            request, routes, self.view_rates(request.ingress), circuit_id, now=self.now
        )
        if isinstance(result, Rejection):
            self._reject(demand, circuit_id, result)

            return

        circuit = result
        self.circuits[circuit_id] = circuit
        self._demands[circuit_id] = demand
        self._trace(
            "circuit_request",
            circuit=circuit_id,
            path=list(circuit.path),
            service=request.service.as_dict(),
            reserved_rate=circuit.reserved_rate,
        )

        if demand.stop is not None:
            self._loop.call_later(demand.stop - self.now, STOP, self.stop, circuit)

        self._signal(circuit)

    def _reject(self, demand, circuit_id, rejection):  # type: (DemandSpec, str, Rejection) -> None
        request = demand.request
        record = {
            "demand": demand.demand_id,
            "circuit": circuit_id,
            "time": self.now,
            "source": request.ingress,
            "dest": request.dest_node,
            "notification": {
                "node": request.ingress,
                "kind": REJECTED,
                "app": request.source_app,
            },
        }
        record.update(rejection.as_dict())
        self.rejections.append(record)
        self._trace("rejection", **record)

    def _signal(self, circuit):  # type: (VirtualCircuit) -> None
        """
        Sends the setup message along the path and the confirmation back,
        then activates the circuit.
        """
        if not circuit.links:
            self.activate(circuit, circuit.epoch)

            return

        delay = 0.0
        if self.config.setup_signaling:
            for link_id in circuit.links:
                self._charge_control(link_id, 2)

            delay = 2 * len(circuit.links) * self.config.channel_latency

        self._loop.call_later(delay, ACTIVATION, self.activate, circuit, circuit.epoch)

    def activate(self, circuit, epoch):  # type: (VirtualCircuit, int) -> None
        if circuit.is_closed or circuit.epoch != epoch:
            return

        if any(self.status[link_id] != UP for link_id in circuit.links):
            return

        first = circuit.established_at is None
        circuit.activate(self.now)
        self._trace(
            "activation",
            circuit=circuit.circuit_id,
            path=list(circuit.path),
            epoch=circuit.epoch,
        )

        if first:
            self._loop.start_traffic(circuit, self._demands[circuit.circuit_id])

            return

        for packet in circuit.outstanding():
            self._forward(circuit.ingress, packet, circuit)

    def stop(self, circuit):  # type: (VirtualCircuit) -> None
        if circuit.is_closed:
            return

        self.admission.release(circuit)
        circuit.close(self.now, STOPPED)
        self._purge(circuit)
        self._trace("teardown", circuit=circuit.circuit_id, reason=STOPPED)

    # Packets

    def emit(self, circuit):  # type: (VirtualCircuit) -> None
        """
        Generates a fresh session key at the ingress node.

        Keys emitted while the circuit is not active wait at the
        ingress and leave once it is.
        """
        if circuit.is_closed:
            return

        payload = random_bits(
            self.streams.session_keys(circuit.circuit_id), circuit.key_block_length
        )
        packet = circuit.new_packet(payload)

        if not circuit.links:
            self._deliver(circuit, packet)
        elif circuit.is_active:
            self._forward(circuit.ingress, packet, circuit)

    def app_request(self, circuit):  # type: (VirtualCircuit) -> None
        if circuit.is_closed:
            return

        if police(circuit, self.now) == CONFORMING:
            self.emit(circuit)
        else:
            self._trace("drop", circuit=circuit.circuit_id, reason="policed")

    def _next_hop(
        self, node, packet, circuit
    ):  # type: (str, KeyPacket, VirtualCircuit) -> Optional[Tuple[str, str]]
        if not circuit.by_destination:
            return circuit.next_hop(node)

        if packet.hops >= len(self.node_ids):
            return None

        route = self.routing.table(node).best(packet.destination)
        if route is None:
            return None

        return route.next_hop, route.link_id

    def _forward(self, node, packet, circuit):  # type: (str, KeyPacket, VirtualCircuit) -> None
        hop = self._next_hop(node, packet, circuit)
        if hop is None:
            self._drop(circuit, packet, "no_route")

            return

        _, link_id = hop
        queue = self.queues[(node, link_id)]
        channel = self.channels[(link_id, node)]
        if self.status[link_id] == UP and not len(queue):
            try:
                self._transmit(seal(packet, channel, self.stores[link_id]))

                return
            except (InsufficientKey, WindowFull):
                pass

        enqueue(queue, packet, channel, self.now)

    def drain(self, node, link_id):  # type: (str, str) -> None
        """
        Sends queued packets while the link has key and window space.
        """
        if self.status[link_id] != UP:
            return

        queue = self.queues[(node, link_id)]
        if not len(queue):
            return

        channel = self.channels[(link_id, node)]
        store = self.stores[link_id]

        def fits(entry):
            return entry.key_bits <= store.available_bits and channel.can_send(
                entry.frames
            )

        while True:
            entry = schedule(queue, fits)
            if entry is None:
                break

            self._transmit(seal(entry.packet, channel, store))

    def _transmit(self, transit):  # type: (Transit) -> None
        counters = self.counters[transit.link_id]
        frames = transit.frames
        counters.payload_key_bits += sum(len(frame.ciphertext) for frame in frames)
        counters.auth_key_bits += len(frames) * self.config.auth_tag_key_bits
        counters.frames += len(frames)

        if self.config.check_invariants and transit.packet.payload is not None:
            raise AssertionError("Plaintext attached to a packet in transit")

        if self._sink.wants("frame"):
            for frame in frames:
                self._trace(
                    "frame",
                    link=transit.link_id,
                    sender=transit.sender,
                    receiver=transit.receiver,
                    frame_id=frame.frame_id,
                    key_block=frame.key_block_ref,
                    circuit=frame.circuit_id,
                    sequence=transit.packet.sequence,
                    epoch=transit.packet.epoch,
                    ciphertext=digest(frame.ciphertext),
                )

        channel = self.channels[(transit.link_id, transit.sender)]
        self._loop.call_later(channel.latency, PACKET_ARRIVAL, self.arrive, transit)

    def arrive(self, transit):  # type: (Transit) -> None
        link_id = transit.link_id
        incoming = self.channels[(link_id, transit.sender)]
        store = self.stores[link_id]
        header = transit.packet
        circuit = self.circuits[header.circuit_id]
        receiver = transit.receiver

        stale = circuit.is_closed or header.epoch != circuit.epoch
        hop = None
        if not stale and receiver != circuit.egress:
            hop = self._next_hop(receiver, header, circuit)

        if stale or hop is None:
            try:
                packet = open_transit(transit, incoming, store)
            except AuthFailure:
                self._drop(circuit, header, "auth_failure", lost=not stale)
                packet = None

            self.drain(transit.sender, link_id)

            if packet is None:
                return

            if stale:
                circuit.stale_drops += 1
                self._trace(
                    "drop", circuit=circuit.circuit_id, sequence=header.sequence, reason="stale"
                )
            elif receiver == circuit.egress:
                self._deliver(circuit, packet)
            else:
                self._drop(circuit, header, "no_route")

            return

        _, out_link = hop
        outgoing = self.channels[(out_link, receiver)]
        queue = self.queues[(receiver, out_link)]
        forwarded = None
        try:
            if self.status[out_link] == UP:
                forwarded = relay_hop(
                    transit,
                    incoming,
                    store,
                    outgoing,
                    self.stores[out_link],
                    queue=queue,
                    now=self.now,
                )
            else:
                enqueue(queue, open_transit(transit, incoming, store), outgoing, self.now)
        except AuthFailure:
            self._drop(circuit, header, "auth_failure")

        if forwarded is not None:
            self._transmit(forwarded)
        else:
            self.drain(receiver, out_link)

        self.drain(transit.sender, link_id)

    def _deliver(self, circuit, packet):  # type: (VirtualCircuit, KeyPacket) -> None
        sent = circuit.sent_payload(packet.sequence)
        if sent is not None and not np.array_equal(sent, packet.payload):
            self.fidelity_violations += 1
            logger.error(
                "Circuit %s delivered a corrupted key #%d", circuit.circuit_id, packet.sequence
            )
            if self.config.check_invariants:
                raise AssertionError(
                    "Delivered key differs from the generated one on {}".format(
                        circuit.circuit_id
                    )
                )

        self._hand_over(circuit, circuit.accept(packet))

    def _hand_over(self, circuit, packets):  # type: (VirtualCircuit, List[KeyPacket]) -> None
        for delivered in packets:
            self._trace(
                "delivery",
                circuit=circuit.circuit_id,
                sequence=delivered.sequence,
                key=digest(delivered.payload),
            )

    def _drop(
        self, circuit, packet, reason, lost=True
    ):  # type: (VirtualCircuit, KeyPacket, str, bool) -> None
        circuit.drops += 1
        logger.debug("%s: packet #%d dropped (%s)", circuit.circuit_id, packet.sequence, reason)
        self._trace("drop", circuit=circuit.circuit_id, sequence=packet.sequence, reason=reason)
        # Older epochs are sent again by the ingress.
        if lost:
            self._hand_over(circuit, circuit.lose(packet.sequence))

    def _purge(self, circuit):  # type: (VirtualCircuit) -> None
        circuit.stale_drops += sum(
            queue.purge(circuit.circuit_id) for queue in self.queues.values()
        )

    # Link events

    def inject_attack(self, link_id, qber):  # type: (str, float) -> LinkStateRecord
        return self._change_link(link_id, "attack", qber=qber)

    def restore(self, link_id):  # type: (str) -> LinkStateRecord
        return self._change_link(link_id, "restore", qber=0.0)

    def set_channels(self, link_id, count):  # type: (str, int) -> LinkStateRecord
        return self._change_link(link_id, "channel_change", num_quantum_channels=count)

    def _change_link(self, link_id, kind, **changes):  # type: (str, str, ...) -> LinkStateRecord
        """
        Applies a physical change to a link. Both endpoints notice it
        at once; the rest of the network learns it from the flood.
        """
        profile = self.profiles[link_id].replace(**changes)
        self.profiles[link_id] = profile
        previous = self.status[link_id]
        rate = effective_link_rate(profile, self.config.qber_penalty)
        status = UP if rate > 0 else DOWN
        self.rates[link_id] = rate
        self.status[link_id] = status
        counters = self.counters[link_id]

        affected = [
            circuit
            for circuit in self.circuits.values()
            if not circuit.is_closed and link_id in circuit.links
        ]
        for circuit in affected:
            circuit.max_qber = max(circuit.max_qber, profile.qber)
            if not profile.secure:
                circuit.qber_alarms += 1

        if not profile.secure:
            counters.qber_alarms += 1

        if status == DOWN and previous == UP:
            # Raw key not yet distilled is lost.
            self._carry[link_id] = 0.0
            counters.down_since = self.now
            for circuit in affected:
                if circuit.uses_link(link_id):
                    circuit.state = REROUTING
        elif status == UP and previous == DOWN:
            counters.downtime += self.now - counters.down_since
            counters.down_since = None

        logger.info(
            "Link %s: %s, qber %.3f, %d channel(s), %s",
            link_id,
            kind,
            profile.qber,
            profile.num_quantum_channels,
            status,
        )
        self._trace(
            kind,
            link=link_id,
            qber=profile.qber,
            num_quantum_channels=profile.num_quantum_channels,
            effective_rate=rate,
            status=status,
        )

        if status == UP:
            for node in self.endpoints[link_id]:
                self.drain(node, link_id)

        self._loop.call_later(
            self.config.flood_delay, LINK_STATE_FLOOD, self.flood, link_id
        )

        return self.record(link_id)

    def flood(self, link_id):  # type: (str) -> None
        """
        Delivers a link's new state to every node, then moves the
        circuits that can no longer stay where they are.
        """
        record = self.record(link_id)
        changed = self.routing.handle_link_event(record)
        self._charge_flood()
        self._trace(
            "link_state_flood",
            link=link_id,
            status=record.status,
            effective_rate=record.effective_rate,
            routes_changed=changed,
        )

        circuits = [c for c in self.circuits.values() if c.uses_link(link_id)]
        if record.status == DOWN:
            for circuit in circuits:
                self._reroute(circuit, link_id)

            return

        for circuit in circuits:
            if circuit.state == REROUTING and all(
                self.status[other] == UP for other in circuit.links
            ):
                self._reroute(circuit, None)

        for circuit_id in self.admission.violations(link_id, self.rates):
            self._reroute(self.circuits[circuit_id], link_id)

    def advertise(self):  # type: () -> None
        """
        Periodic refresh of every link's state in every node's view.
        """
        self.routing.advertise(self.record(link_id) for link_id in self.profiles)
        self._charge_flood()

    def _reroute(self, circuit, failed_link):  # type: (VirtualCircuit, Optional[str]) -> None
        if circuit.is_closed:
            return

        epoch = circuit.epoch
        result = self.admission.reroute(
            circuit,
            failed_link,
            self.routing.table(circuit.ingress).routes(circuit.egress),
            self.view_rates(circuit.ingress),
            now=self.now,
        )
        if isinstance(result, Teardown):
            self.teardowns += 1
            self._purge(circuit)
            self._trace("teardown", circuit=circuit.circuit_id, reason=result.reason)

            return

        if circuit.epoch == epoch:
            return

        self._purge(circuit)
        self._trace(
            "reroute",
            circuit=circuit.circuit_id,
            failed_link=failed_link,
            path=list(circuit.path),
            epoch=circuit.epoch,
        )
        self._signal(circuit)

    # Control plane key usage

    def _charge_control(self, link_id, frames):  # type: (str, int) -> None
        """
        Pays the authentication key of control frames on a link.

        Control traffic is never blocked; unpaid key is counted.
        """
        tag = self.config.auth_tag_key_bits
        store = self.stores[link_id]
        counters = self.counters[link_id]
        for _ in range(frames):
            try:
                block = store.consume(tag)
            except InsufficientKey:
                counters.control_key_shortfall += tag
                continue

            store.claim(block.block_id)
            counters.control_key_bits += tag
            counters.control_frames += 1
            self._trace(
                "frame", link=link_id, key_block=block.block_id, circuit=CONTROL_CIRCUIT
            )

    def _charge_flood(self):  # type: () -> None
        for link_id in self.profiles:
            if self.status[link_id] == UP:
                self._charge_control(link_id, 1)

    # Observation

    def sample(self):  # type: () -> None
        self.samples.append(
            {
                "t": self._loop.current.time,
                "links": {
                    link_id: {
                        "available_bits": store.available_bits,
                        "status": self.status[link_id],
                        "effective_rate": self.rates[link_id],
                    }
                    for link_id, store in self.stores.items()
                },
                "circuits": {
                    circuit_id: {
                        "state": circuit.state,
                        "delivered_bits": circuit.delivered_bits,
                    }
                    for circuit_id, circuit in self.circuits.items()
                },
            }
        )

    def snapshot_routing(self):  # type: () -> None
        self._trace("routing_snapshot", tables=self.routing.snapshot())

    def check_invariants(self):  # type: () -> None
        for link_id, store in self.stores.items():
            counters = self.counters[link_id]
            balance = store.total_deposited - store.total_discarded - store.total_consumed
            if balance != store.available_bits:
                raise AssertionError("Key conservation broken on {}".format(link_id))

            spent = (
                counters.payload_key_bits
                + counters.auth_key_bits
                + counters.control_key_bits
            )
            if spent != store.total_consumed:
                raise AssertionError("Unaccounted key consumption on {}".format(link_id))

    def metrics(self, end, events):  # type: (float, Dict[str, int]) -> Metrics
        links = OrderedDict()
        for link_id, store in self.stores.items():
            a, b = self.endpoints[link_id]
            links[link_id] = link_record(
                link_id,
                store,
                self.counters[link_id],
                (self.channels[(link_id, a)], self.channels[(link_id, b)]),
                self.profiles[link_id],
                self.rates[link_id],
                self.status[link_id],
                end,
            )

        circuits = OrderedDict(
            (circuit_id, circuit_record(circuit, end))
            for circuit_id, circuit in self.circuits.items()
        )

        rejections = OrderedDict((reason, 0) for reason in REJECTION_REASONS)
        for rejection in self.rejections:
            rejections[rejection["reason"]] += 1

        totals = {
            name: sum(record[name] for record in links.values())
            for name in (
                "generated_bits",
                "consumed_bits",
                "payload_key_bits",
                "auth_key_bits",
                "control_key_bits",
                "control_key_shortfall",
            )
        }
        network = {
            "duration": end,
            "seed": self.scenario.seed,
            "rejections": rejections,
            "rejected_requests": self.rejections,
            "circuits_established": sum(
                1 for c in self.circuits.values() if c.established_at is not None
            ),
            "teardowns": self.teardowns,
            "delivered_bits": sum(c.delivered_bits for c in self.circuits.values()),
            "drops": sum(c.drops for c in self.circuits.values()),
            "stale_drops": sum(c.stale_drops for c in self.circuits.values()),
            "fidelity_violations": self.fidelity_violations,
            "routing_recomputations": self.routing.recomputations,
            "events": dict(sorted(events.items())),
        }
        network.update(totals)

        return Metrics(links, circuits, network, self.samples)

    def _trace(self, kind, **fields):  # type: (str, ...) -> None
        self._sink.emit(self._loop.current, kind, **fields)
