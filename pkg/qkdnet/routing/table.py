"""
Route computation over a node's link-state view.

Every node computes, for every destination, the minimum-cost path and
further link-disjoint candidates used as alternates by admission and
rerouting. Among equal-cost paths the lexicographically smallest
node-id sequence wins.
"""
import math

from collections import namedtuple
from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Optional
from typing import Sequence

import networkx as nx

from qkdnet.constants import DEFAULT_K_PATHS

from .cost import CostWeights
from .cost import link_cost
from .link_state import LinkStateRecord


_TIE_REL_TOL = 1e-9
_TIE_ABS_TOL = 1e-12


class Route(namedtuple("Route", "destination next_hop link_id path links cost")):

    __slots__ = ()

    @property
    def hops(self):  # type: () -> int
        return len(self.links)

    def as_dict(self):  # type: () -> dict
        return {
            "next_hop": self.next_hop,
            "link": self.link_id,
            "path": list(self.path),
            "cost": self.cost,
        }


class RoutingTable(object):
    """
    Candidate routes of one node, per destination, in ascending cost.
    """

    def __init__(self, source, version=0):  # type: (str, int) -> None
        self._source = source
        self._version = version
        self._entries = {}  # type: Dict[str, List[Route]]

    @property
    def source(self):  # type: () -> str
        return self._source

    @property
    def version(self):  # type: () -> int
        return self._version

    @property
    def destinations(self):  # type: () -> List[str]
        return sorted(self._entries)

    def add(self, destination, routes):  # type: (str, Sequence[Route]) -> None
        self._entries[destination] = list(routes)

    def routes(self, destination):  # type: (str) -> List[Route]
        return list(self._entries.get(destination, ()))

    def best(self, destination):  # type: (str) -> Optional[Route]
        routes = self._entries.get(destination)
        if not routes:
            return None

        return routes[0]

    def next_hop(self, destination):  # type: (str) -> Optional[str]
        route = self.best(destination)
        if route is None:
            return None

        return route.next_hop

    def same_routes(self, other):  # type: (RoutingTable) -> bool
        return self._source == other._source and self._entries == other._entries

    def snapshot(self):  # type: () -> dict
        return {
            destination: [route.as_dict() for route in self._entries[destination]]
            for destination in self.destinations
        }

    def __contains__(self, destination):  # type: (str) -> bool
        return destination in self._entries

    def __len__(self):  # type: () -> int
        return len(self._entries)

    def __repr__(self):  # type: () -> str
        return "RoutingTable({}, v{}, {} destinations)".format(
            self._source, self._version, len(self._entries)
        )


def tied(a, b):  # type: (float, float) -> bool
    return math.isclose(a, b, rel_tol=_TIE_REL_TOL, abs_tol=_TIE_ABS_TOL)


def path_cost(graph, path):  # type: (nx.Graph, Sequence[str]) -> float
    return sum(graph[u][v]["cost"] for u, v in zip(path, path[1:]))


def build_graph(
    records, weights=None
):  # type: (Iterable[LinkStateRecord], Optional[CostWeights]) -> nx.Graph
    """
    Graph of usable links weighted by their routing cost.

    Every endpoint is a node, even when none of its links is usable.
    """
    graph = nx.Graph()
    for record in records:
        a, b = record.endpoints
        graph.add_nodes_from((a, b))

        cost = link_cost(record, weights)
        if cost is None:
            continue

        graph.add_edge(a, b, cost=cost, link_id=record.link_id)

    return graph


def best_path(graph, source, destination):  # type: (nx.Graph, str, str) -> Optional[List[str]]
    """
    Minimum-cost path, ties broken by the smallest node-id sequence.
    """
    if source not in graph or destination not in graph:
        return None

    best = None
    best_cost = None
    try:
        for path in nx.shortest_simple_paths(graph, source, destination, weight="cost"):
            cost = path_cost(graph, path)
            if best is None:
                best, best_cost = path, cost
                continue

            if not tied(cost, best_cost):
                break

            if path < best:
                best = path
    except nx.NetworkXNoPath:
        return None

    return best


def _route(graph, destination, path):  # type: (nx.Graph, str, List[str]) -> Route
    links = tuple(graph[u][v]["link_id"] for u, v in zip(path, path[1:]))

    return Route(
        destination, path[1], links[0], tuple(path), links, path_cost(graph, path)
    )


def disjoint_routes(
    graph, source, destination, k_paths
):  # type: (nx.Graph, str, str, int) -> List[Route]
    remaining = graph.copy()
    routes = []
    for _ in range(k_paths):
        path = best_path(remaining, source, destination)
        if path is None:
            break

        routes.append(_route(graph, destination, path))
        remaining.remove_edges_from(zip(path, path[1:]))

    return routes


def compute_routes(
    records,  # type: Iterable[LinkStateRecord]
    source,  # type: str
    weights=None,  # type: Optional[CostWeights]
    k_paths=DEFAULT_K_PATHS,  # type: int
    stubs=frozenset(),  # type: FrozenSet[str]
    version=0,  # type: int
):  # type: (...) -> RoutingTable
    """
    Computes the routing table of a node from its view of the network.

    Stub nodes (access nodes) are never used for transit: they only
    appear as the source or the destination of a path.
    """
    if k_paths < 1:
        raise ValueError("At least one candidate path is needed")

    graph = build_graph(records, weights)
    graph.add_node(source)

    transit = graph.copy()
    transit.remove_nodes_from([n for n in stubs if n != source])

    table = RoutingTable(source, version=version)
    for destination in sorted(graph.nodes):
        if destination == source:
            continue

        if destination in stubs:
            routes = _stub_routes(graph, transit, source, destination)
        else:
            routes = disjoint_routes(transit, source, destination, k_paths)

        if routes:
            table.add(destination, routes)

    return table


def _stub_routes(
    graph, transit, source, destination
):  # type: (nx.Graph, nx.Graph, str, str) -> List[Route]
    routes = []
    for attachment in sorted(graph.neighbors(destination)):
        if attachment == source:
            routes.append(_route(graph, destination, [source, destination]))
            continue

        path = best_path(transit, source, attachment)
        if path is not None:
            routes.append(_route(graph, destination, path + [destination]))

    routes.sort(key=lambda route: (route.cost, route.path))

    return routes[:1]
