import itertools

import networkx as nx
import numpy as np
import pytest

from qkdnet.routing import DOWN
from qkdnet.routing import CostWeights
from qkdnet.routing import LinkStateRecord
from qkdnet.routing import best_path
from qkdnet.routing import compute_routes
from qkdnet.routing import link_cost
from qkdnet.routing.table import build_graph
from qkdnet.routing.table import tied


def record(a, b, rate=20000, **kwargs):
    return LinkStateRecord("{}-{}".format(a, b), (a, b), rate, **kwargs)


def square():
    return [record("A", "B"), record("B", "C"), record("C", "D"), record("D", "A")]


def test_equal_costs_prefer_smallest_sequence():
    table = compute_routes(square(), "A")

    assert table.best("C").path == ("A", "B", "C")
    assert table.next_hop("C") == "B"
    assert table.best("C").links == ("A-B", "B-C")


def test_alternates_are_link_disjoint():
    routes = compute_routes(square(), "A", k_paths=2).routes("C")

    assert [route.path for route in routes] == [("A", "B", "C"), ("A", "D", "C")]
    assert not set(routes[0].links) & set(routes[1].links)


def test_cost_steers_around_slow_links():
    records = [
        record("A", "B", rate=1000),
        record("B", "C"),
        record("C", "D"),
        record("D", "A"),
    ]

    assert compute_routes(records, "A").best("B").path == ("A", "D", "C", "B")


def test_down_links_are_ignored():
    records = square()
    records[0] = record("A", "B", status=DOWN)
    table = compute_routes(records, "A", k_paths=2)

    assert table.best("B").path == ("A", "D", "C", "B")
    assert len(table.routes("B")) == 1


def test_unreachable_destination():
    records = [record("A", "B"), record("C", "D")]
    table = compute_routes(records, "A")

    assert "B" in table
    assert "C" not in table
    assert table.best("C") is None
    assert table.next_hop("D") is None


def test_stubs_are_never_transit():
    records = [
        record("A", "B"),
        record("B", "C", rate=500),
        record("A", "S"),
        record("S", "C"),
    ]
    table = compute_routes(records, "A", stubs=frozenset(["S"]))

    assert table.best("C").path == ("A", "B", "C")
    assert table.best("S").path == ("A", "S")


def test_stub_source():
    records = [record("S", "A"), record("A", "B")]
    table = compute_routes(records, "S", stubs=frozenset(["S"]))

    assert table.best("B").path == ("S", "A", "B")


def test_invalid_k_paths():
    with pytest.raises(ValueError):
        compute_routes(square(), "A", k_paths=0)


def test_snapshot():
    snapshot = compute_routes(square(), "A", k_paths=1).snapshot()

    assert sorted(snapshot) == ["B", "C", "D"]
    assert snapshot["C"][0]["path"] == ["A", "B", "C"]
    assert snapshot["C"][0]["link"] == "A-B"


def random_records(rng, n, p, hop_count):
    graph = nx.gnp_random_graph(n, p, seed=int(rng.integers(2 ** 31)))
    records = []
    for u, v in sorted(graph.edges):
        rate = 1000.0 if hop_count else float(rng.uniform(1000, 200000))
        fill = 0.0 if hop_count else float(rng.uniform(0, 1))
        records.append(record("n{}".format(u), "n{}".format(v), rate=rate, fill_fraction=fill))

    nodes = ["n{}".format(i) for i in range(n)]

    return nodes, records


def exhaustive_best(records, weights, source, destination):
    graph = nx.Graph()
    for r in records:
        graph.add_edge(*r.endpoints, cost=link_cost(r, weights))

    if source not in graph or destination not in graph:
        return None

    paths = list(nx.all_simple_paths(graph, source, destination))
    if not paths:
        return None

    def cost(path):
        return sum(graph[u][v]["cost"] for u, v in zip(path, path[1:]))

    minimum = min(cost(path) for path in paths)

    return tuple(min(path for path in paths if tied(cost(path), minimum)))


@pytest.mark.parametrize("hop_count", [False, True])
def test_matches_exhaustive_enumeration(hop_count):
    rng = np.random.default_rng(2024)
    weights = CostWeights(w_load=0, w_cap=0) if hop_count else CostWeights()

    for _ in range(50):
        n = int(rng.integers(3, 9))
        nodes, records = random_records(rng, n, 0.5, hop_count)
        for source, destination in itertools.permutations(nodes, 2):
            table = compute_routes(records, source, weights=weights, k_paths=1)
            expected = exhaustive_best(records, weights, source, destination)
            route = table.best(destination)

            if expected is None:
                assert route is None
            else:
                assert route.path == expected


@pytest.mark.parametrize("factor", [0.001, 3.0, 1000.0])
def test_scaling_every_cost_keeps_the_best_path(factor):
    rng = np.random.default_rng(7)

    for _ in range(20):
        nodes, records = random_records(rng, int(rng.integers(3, 9)), 0.5, False)
        graph = build_graph(records)
        scaled = graph.copy()
        for u, v in scaled.edges:
            scaled[u][v]["cost"] = graph[u][v]["cost"] * factor

        for source, destination in itertools.permutations(nodes, 2):
            assert best_path(scaled, source, destination) == best_path(
                graph, source, destination
            )
