"""
Scenario documents: topology, demands, attacks and tunables of a run.
"""
import json
import logging

from collections import namedtuple
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

from qkdnet.config import Config
from qkdnet.exceptions import InvalidLinkProfile
from qkdnet.forwarding import FORWARD_CIRCUIT
from qkdnet.forwarding import BestEffort
from qkdnet.forwarding import GuaranteedRate
from qkdnet.forwarding import PathRequest
from qkdnet.link import LinkProfile

from .exceptions import ValidationError
from .schema import validate_document


logger = logging.getLogger(__name__)


QBB = "qbb"
QAN = "qan"

# Attack kinds
EAVESDROP = "eavesdrop"
RESTORE = "restore"
CHANNELS = "channels"

POISSON = "poisson"
PERIODIC = "periodic"
BURST = "burst"


class NodeSpec(namedtuple("NodeSpec", "node_id kind")):

    __slots__ = ()

    @property
    def is_stub(self):  # type: () -> bool
        return self.kind == QAN


class LinkSpec(namedtuple("LinkSpec", "link_id endpoints profile capacity_bits")):

    __slots__ = ()


class DemandSpec(namedtuple("DemandSpec", "demand_id time request traffic stop")):
    """
    A timed path request. traffic drives session-key requests of
    best-effort demands; guaranteed demands are paced by their contract.
    """

    __slots__ = ()


class AttackSpec(namedtuple("AttackSpec", "time link_id kind value")):

    __slots__ = ()


class Scenario(object):
    def __init__(
        self,
        duration,  # type: float
        seed,  # type: int
        nodes,  # type: List[NodeSpec]
        links,  # type: List[LinkSpec]
        demands,  # type: List[DemandSpec]
        attacks,  # type: List[AttackSpec]
        config,  # type: Config
        document=None,  # type: Optional[dict]
        warnings=None,  # type: Optional[List[str]]
    ):  # type: (...) -> None
        self.duration = duration
        self.seed = seed
        self.nodes = nodes
        self.links = links
        self.demands = demands
        self.attacks = attacks
        self.config = config
        self.document = document
        self.warnings = warnings or []

    @property
    def node_ids(self):  # type: () -> List[str]
        return [node.node_id for node in self.nodes]

    @property
    def stubs(self):  # type: () -> frozenset
        return frozenset(node.node_id for node in self.nodes if node.is_stub)

    def link(self, link_id):  # type: (str) -> LinkSpec
        for link in self.links:
            if link.link_id == link_id:
                return link

        raise KeyError(link_id)

    def with_seed(self, seed):  # type: (int) -> Scenario
        return Scenario(
            self.duration,
            seed,
            self.nodes,
            self.links,
            self.demands,
            self.attacks,
            self.config,
            document=self.document,
            warnings=self.warnings,
        )

    def __repr__(self):  # type: () -> str
        return "Scenario({} nodes, {} links, {} demands, {}s)".format(
            len(self.nodes), len(self.links), len(self.demands), self.duration
        )


def load(path):  # type: (str) -> Scenario
    """
    Reads and validates a scenario file.

    I/O errors propagate unchanged.
    """
    with open(path, encoding="utf-8") as f:
        text = f.read()

    try:
        document = json.loads(text)
    except ValueError as e:
        raise ValidationError("", "not a JSON document ({})".format(e))

    return from_dict(document)


def from_dict(document):  # type: (Dict[str, Any]) -> Scenario
    validate_document(document)

    duration = float(document["duration"])
    config = _config(document.get("config", {}))

    nodes = _nodes(document["topology"]["nodes"])
    links, warnings = _links(document["topology"]["links"], nodes, config)
    _check_stubs(nodes, links)

    known = {node.node_id for node in nodes}
    demands = _demands(document.get("demands", []), known, duration, config)
    attacks = _attacks(document.get("attacks", []), {link.link_id for link in links}, duration)

    for warning in warnings:
        logger.warning(warning)

    return Scenario(
        duration,
        int(document.get("seed", 0)),
        nodes,
        links,
        demands,
        attacks,
        config,
        document=document,
        warnings=warnings,
    )


def _config(values):  # type: (dict) -> Config
    try:
        return Config.from_dict(values)
    except (TypeError, ValueError) as e:
        name = str(e).split(" ", 1)[0]
        path = "config.{}".format(name) if name in values else "config"

        raise ValidationError(path, str(e))


def _nodes(items):  # type: (List[dict]) -> List[NodeSpec]
    nodes = []
    seen = set()
    for i, item in enumerate(items):
        if item["id"] in seen:
            raise ValidationError(
                "topology.nodes[{}].id".format(i), 'duplicate node id "{}"'.format(item["id"])
            )

        seen.add(item["id"])
        nodes.append(NodeSpec(item["id"], item.get("kind", QBB)))

    return nodes


def _links(items, nodes, config):  # type: (List[dict], List[NodeSpec], Config) -> tuple
    known = {node.node_id for node in nodes}
    links = []
    warnings = []
    seen = set()
    pairs = {}
    for i, item in enumerate(items):
        path = "topology.links[{}]".format(i)
        if item["id"] in seen:
            raise ValidationError(
                path + ".id", 'duplicate link id "{}"'.format(item["id"])
            )

        seen.add(item["id"])
        for j, endpoint in enumerate(item["endpoints"]):
            if endpoint not in known:
                raise ValidationError(
                    "{}.endpoints[{}]".format(path, j),
                    'unknown node "{}"'.format(endpoint),
                )

        a, b = item["endpoints"]
        if a == b:
            raise ValidationError(path + ".endpoints", "a link joins two distinct nodes")

        pair = frozenset((a, b))
        if pair in pairs:
            raise ValidationError(
                path + ".endpoints",
                "{} and {} are already joined by link {}".format(a, b, pairs[pair]),
            )

        pairs[pair] = item["id"]

        try:
            profile = LinkProfile(
                item["r0"],
                item["lambda_qkd"],
                item["d_max"],
                item["length"],
                num_quantum_channels=item.get("num_quantum_channels", 1),
                qber=item.get("qber", 0.0),
                qber_threshold=item.get("qber_threshold", config.qber_threshold),
            )
        except InvalidLinkProfile as e:
            raise ValidationError(path, str(e))

        if not profile.in_range:
            warnings.append(
                "{}: length {} km exceeds d_max {} km, link {} generates no key".format(
                    path, profile.length, profile.d_max, item["id"]
                )
            )

        capacity = item.get("capacity_bits", config.keystore_capacity)
        if config.initial_fill_bits > capacity:
            raise ValidationError(
                path + ".capacity_bits", "smaller than config.initial_fill_bits"
            )

        links.append(LinkSpec(item["id"], (a, b), profile, capacity))

    return links, warnings


def _check_stubs(nodes, links):  # type: (List[NodeSpec], List[LinkSpec]) -> None
    kinds = {node.node_id: node.kind for node in nodes}
    for i, node in enumerate(nodes):
        if not node.is_stub:
            continue

        attached = [link for link in links if node.node_id in link.endpoints]
        if len(attached) != 1:
            raise ValidationError(
                "topology.nodes[{}]".format(i),
                "access node {} needs exactly one link, has {}".format(
                    node.node_id, len(attached)
                ),
            )

        a, b = attached[0].endpoints
        other = b if a == node.node_id else a
        if kinds[other] != QBB:
            raise ValidationError(
                "topology.nodes[{}]".format(i),
                "access node {} must attach to a backbone node".format(node.node_id),
            )


def _service(item):  # type: (dict) -> Any
    if item["class"] == "guaranteed":
        return GuaranteedRate(item["bits_per_period"], item["period"])

    return BestEffort(item["lambda_k"], item["sigma_k"])


def _demands(
    items, known, duration, config
):  # type: (List[dict], set, float, Config) -> List[DemandSpec]
    # A session key has to fit in the flow-control window in one go.
    longest = config.flow_control_window * config.max_frame_payload_bits
    demands = []
    seen = set()
    for i, item in enumerate(items):
        path = "demands[{}]".format(i)
        demand_id = item.get("id", "d{}".format(i))
        if demand_id in seen:
            raise ValidationError(path + ".id", 'duplicate demand id "{}"'.format(demand_id))

        seen.add(demand_id)
        for field in ("source", "dest"):
            if item[field] not in known:
                raise ValidationError(
                    "{}.{}".format(path, field), 'unknown node "{}"'.format(item[field])
                )

        _check_time(path + ".time", item["time"], duration)
        stop = item.get("stop")
        if stop is not None:
            _check_time(path + ".stop", stop, duration)
            if stop < item["time"]:
                raise ValidationError(path + ".stop", "a demand cannot stop before it starts")

        traffic = item.get("traffic")
        if traffic is not None and traffic["kind"] == BURST:
            for j, t in enumerate(traffic["times"]):
                _check_time("{}.traffic.times[{}]".format(path, j), t, duration)

        if item["key_block_length"] > longest:
            raise ValidationError(
                path + ".key_block_length",
                "{} bits need more frames than the flow-control window allows ({} bits)".format(
                    item["key_block_length"], longest
                ),
            )

        try:
            request = PathRequest(
                item.get("app", "app-{}".format(demand_id)),
                item["source"],
                item["dest"],
                item["port"],
                _service(item["service"]),
                item["key_block_length"],
                forwarding=item.get("forwarding", FORWARD_CIRCUIT),
            )
        except ValueError as e:
            field = "forwarding" if "forwarding" in str(e) else "service"

            raise ValidationError("{}.{}".format(path, field), str(e))

        demands.append(DemandSpec(demand_id, float(item["time"]), request, traffic, stop))

    return demands


def _attacks(items, known, duration):  # type: (List[dict], set, float) -> List[AttackSpec]
    attacks = []
    for i, item in enumerate(items):
        path = "attacks[{}]".format(i)
        if item["link"] not in known:
            raise ValidationError(path + ".link", 'unknown link "{}"'.format(item["link"]))

        _check_time(path + ".time", item["time"], duration)

        if "qber" in item:
            kind, value = EAVESDROP, float(item["qber"])
        elif "restore" in item:
            kind, value = RESTORE, 0.0
        else:
            kind, value = CHANNELS, int(item["num_quantum_channels"])

        attacks.append(AttackSpec(float(item["time"]), item["link"], kind, value))

    return attacks


def _check_time(path, t, duration):  # type: (str, float, float) -> None
    if not 0 <= t <= duration:
        raise ValidationError(path, "time {} is outside [0, {}]".format(t, duration))
