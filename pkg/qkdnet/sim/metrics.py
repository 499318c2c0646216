"""
Run metrics. Every counter is present in the output even when zero,
so that metrics documents of different runs share one layout.
"""
import json

from typing import Any
from typing import Dict
from typing import List

from qkdnet.constants import TIME_PRECISION
from qkdnet.forwarding import INSUFFICIENT_CAPACITY
from qkdnet.forwarding import NO_PATH


REJECTION_REASONS = (NO_PATH, INSUFFICIENT_CAPACITY)


def _round(value):  # type: (float) -> float
    return round(float(value), TIME_PRECISION)


class LinkCounters(object):
    """
    Key usage of one link beyond what its key store counts itself.
    """

    __slots__ = (
        "payload_key_bits",
        "auth_key_bits",
        "control_key_bits",
        "control_key_shortfall",
        "frames",
        "control_frames",
        "downtime",
        "down_since",
        "qber_alarms",
    )

    def __init__(self):  # type: () -> None
        self.payload_key_bits = 0
        self.auth_key_bits = 0
        self.control_key_bits = 0
        self.control_key_shortfall = 0
        self.frames = 0
        self.control_frames = 0
        self.downtime = 0.0
        self.down_since = None
        self.qber_alarms = 0


class Metrics(object):
    def __init__(
        self, links, circuits, network, samples
    ):  # type: (Dict[str, dict], Dict[str, dict], Dict[str, Any], List[dict]) -> None
        self.links = links
        self.circuits = circuits
        self.network = network
        self.samples = samples

    def as_dict(self):  # type: () -> dict
        return {
            "links": self.links,
            "circuits": self.circuits,
            "network": self.network,
            "samples": self.samples,
        }

    def to_json(self):  # type: () -> str
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def link(self, link_id):  # type: (str) -> dict
        return self.links[link_id]

    def circuit(self, circuit_id):  # type: (str) -> dict
        return self.circuits[circuit_id]

    def __repr__(self):  # type: () -> str
        return "Metrics({} links, {} circuits)".format(
            len(self.links), len(self.circuits)
        )


def link_record(link_id, store, counters, channels, profile, rate, status, end):
    downtime = counters.downtime
    if counters.down_since is not None:
        downtime += end - counters.down_since

    return {
        "generated_bits": store.total_deposited,
        "discarded_bits": store.total_discarded,
        "consumed_bits": store.total_consumed,
        "available_bits": store.available_bits,
        "capacity_bits": store.capacity_bits,
        "payload_key_bits": counters.payload_key_bits,
        "auth_key_bits": counters.auth_key_bits,
        "control_key_bits": counters.control_key_bits,
        "control_key_shortfall": counters.control_key_shortfall,
        "frames": counters.frames,
        "control_frames": counters.control_frames,
        "auth_failures": sum(channel.auth_failures for channel in channels),
        "downtime": _round(downtime),
        "effective_rate": _round(rate),
        "qber": _round(profile.qber),
        "qber_alarms": counters.qber_alarms,
        "num_quantum_channels": profile.num_quantum_channels,
        "status": status,
        "blocks_issued": store.next_block_id,
        "material_digest": store.material_digest(),
    }


def circuit_record(circuit, end):  # type: (Any, float) -> dict
    service = circuit.service
    if service.kind == "guaranteed":
        contracted = service.rate
    else:
        contracted = service.lambda_k * circuit.key_block_length

    established = circuit.established_at
    delivered_rate = 0.0
    latency = None
    if established is not None:
        closed = circuit.closed_at if circuit.closed_at is not None else end
        if closed > established:
            delivered_rate = circuit.delivered_bits / (closed - established)

        latency = _round(established - circuit.requested_at)

    return {
        "path": list(circuit.path),
        "paths": [list(path) for path in circuit.paths],
        "service": service.as_dict(),
        "forwarding": circuit.request.forwarding,
        "key_block_length": circuit.key_block_length,
        "state": circuit.state,
        "requested_at": _round(circuit.requested_at),
        "established_at": None if established is None else _round(established),
        "establishment_latency": latency,
        "closed_at": None if circuit.closed_at is None else _round(circuit.closed_at),
        "contracted_rate": _round(contracted),
        "reserved_rate": _round(circuit.reserved_rate),
        "emitted_packets": circuit.emitted,
        "delivered_packets": circuit.delivered_packets,
        "delivered_bits": circuit.delivered_bits,
        "delivered_rate": _round(delivered_rate),
        "drops": circuit.drops,
        "lost_packets": circuit.lost_packets,
        "stale_drops": circuit.stale_drops,
        "reroutes": circuit.reroutes,
        "teardown_reason": circuit.teardown_reason,
        "max_qber": _round(circuit.max_qber),
        "qber_alarms": circuit.qber_alarms,
        "notifications": [
            dict(n.as_dict(), time=_round(n.time)) for n in circuit.notifications
        ],
    }
