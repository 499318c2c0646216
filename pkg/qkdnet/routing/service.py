import logging

from typing import Dict
from typing import FrozenSet
from typing import Iterable
from typing import List
from typing import Optional

from qkdnet.constants import DEFAULT_K_PATHS

from .cost import CostWeights
from .link_state import LinkStateRecord
from .table import RoutingTable
from .table import compute_routes


logger = logging.getLogger(__name__)


class RoutingService(object):
    """
    Link-state routing for every node of the network.

    Each node keeps its own view of the link states and recomputes its
    table whenever an advertisement changes that view.
    """

    def __init__(
        self,
        nodes,  # type: Iterable[str]
        records,  # type: Iterable[LinkStateRecord]
        weights=None,  # type: Optional[CostWeights]
        k_paths=DEFAULT_K_PATHS,  # type: int
        stubs=frozenset(),  # type: FrozenSet[str]
    ):  # type: (...) -> None
        self._weights = weights or CostWeights()
        self._k_paths = k_paths
        self._stubs = frozenset(stubs)
        self._nodes = sorted(nodes)

        records = list(records)
        self._views = {
            node: {record.link_id: record for record in records}
            for node in self._nodes
        }  # type: Dict[str, Dict[str, LinkStateRecord]]
        self._tables = {}  # type: Dict[str, RoutingTable]
        self.recomputations = 0

        for node in self._nodes:
            self._recompute(node)

    @property
    def nodes(self):  # type: () -> List[str]
        return list(self._nodes)

    @property
    def stubs(self):  # type: () -> FrozenSet[str]
        return self._stubs

    def view(self, node):  # type: (str) -> Dict[str, LinkStateRecord]
        return dict(self._views[node])

    def record(self, node, link_id):  # type: (str, str) -> LinkStateRecord
        return self._views[node][link_id]

    def table(self, node):  # type: (str) -> RoutingTable
        return self._tables[node]

    def handle_link_event(
        self, record, nodes=None
    ):  # type: (LinkStateRecord, Optional[Iterable[str]]) -> List[str]
        """
        Installs an advertised link state in the views of the given
        nodes (all nodes by default) and recomputes their tables.

        Returns the nodes whose routes changed.
        """
        changed = self.advertise([record], nodes)
        if changed:
            logger.info(
                "Link %s is %s, routes changed at %d node(s)",
                record.link_id,
                record.status,
                len(changed),
            )

        return changed

    def advertise(
        self, records, nodes=None
    ):  # type: (Iterable[LinkStateRecord], Optional[Iterable[str]]) -> List[str]
        """
        Installs a batch of link states, recomputing each node at most once.
        """
        if nodes is None:
            nodes = self._nodes

        records = list(records)
        changed = []
        for node in nodes:
            view = self._views[node]
            dirty = False
            for record in records:
                if record.link_id not in view:
                    raise KeyError("Unknown link {}".format(record.link_id))

                if view[record.link_id] != record:
                    view[record.link_id] = record
                    dirty = True

            if not dirty:
                continue

            previous = self._tables[node]
            table = self._recompute(node)
            if not table.same_routes(previous):
                changed.append(node)

        return changed

    def converged(self):  # type: () -> bool
        """
        Whether every node holds the same view of the network.
        """
        views = [self._views[node] for node in self._nodes]

        return all(view == views[0] for view in views[1:])

    def snapshot(self):  # type: () -> dict
        return {node: self._tables[node].snapshot() for node in self._nodes}

    def _recompute(self, node):  # type: (str) -> RoutingTable
        previous = self._tables.get(node)
        version = previous.version + 1 if previous is not None else 0

        table = compute_routes(
            self._views[node].values(),
            node,
            weights=self._weights,
            k_paths=self._k_paths,
            stubs=self._stubs,
            version=version,
        )
        self._tables[node] = table
        self.recomputations += 1

        return table
