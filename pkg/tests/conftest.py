import copy
import json
import logging
import os

import numpy as np
import pytest


FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(autouse=True)
def setup():
    logging.getLogger("qkdnet").setLevel(logging.WARNING)

    yield


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def fixture_path(name):
    return os.path.join(FIXTURES, name)


def load_fixture(name):
    with open(fixture_path(name), encoding="utf-8") as f:
        return json.load(f)


def write_scenario(tmpdir, document, name="scenario.json"):
    path = tmpdir.join(name)
    path.write(json.dumps(document))

    return str(path)


def link(link_id, a, b, r0=200000, length=0.0, lambda_qkd=15.0, d_max=120.0, **kwargs):
    item = {
        "id": link_id,
        "endpoints": [a, b],
        "r0": r0,
        "lambda_qkd": lambda_qkd,
        "d_max": d_max,
        "length": length,
    }
    item.update(kwargs)

    return item


def guaranteed(source, dest, rate=128000, key_block_length=1024, time=0.0, **kwargs):
    item = {
        "time": time,
        "source": source,
        "dest": dest,
        "port": 5000,
        "key_block_length": key_block_length,
        "service": {"class": "guaranteed", "bits_per_period": rate, "period": 1.0},
    }
    item.update(kwargs)

    return item


def best_effort(source, dest, lambda_k=10.0, sigma_k=3.0, key_block_length=256, time=0.0, **kwargs):
    item = {
        "time": time,
        "source": source,
        "dest": dest,
        "port": 6000,
        "key_block_length": key_block_length,
        "service": {"class": "best_effort", "lambda_k": lambda_k, "sigma_k": sigma_k},
    }
    item.update(kwargs)

    return item


def scenario_document(nodes, links, demands=(), attacks=(), duration=10.0, seed=0, **config):
    document = {
        "duration": duration,
        "seed": seed,
        "topology": {"nodes": [{"id": node} for node in nodes], "links": list(links)},
        "demands": list(demands),
        "attacks": list(attacks),
    }
    if config:
        document["config"] = config

    return copy.deepcopy(document)


def two_nodes(demands=(), rate=200000, **config):
    config.setdefault("initial_fill_bits", 100000)

    return scenario_document(
        ["A", "B"], [link("A-B", "A", "B", r0=rate)], demands, **config
    )


def chain(demands=(), attacks=(), **config):
    """
    A - B - C - D, every link at 200 kbit/s.
    """
    config.setdefault("initial_fill_bits", 100000)

    return scenario_document(
        ["A", "B", "C", "D"],
        [link("A-B", "A", "B"), link("B-C", "B", "C"), link("C-D", "C", "D")],
        demands,
        attacks,
        **config
    )


def square(demands=(), attacks=(), **config):
    """
    A - B - C - D - A, every link at 200 kbit/s.
    """
    config.setdefault("initial_fill_bits", 100000)

    return scenario_document(
        ["A", "B", "C", "D"],
        [
            link("A-B", "A", "B"),
            link("B-C", "B", "C"),
            link("C-D", "C", "D"),
            link("D-A", "D", "A"),
        ],
        demands,
        attacks,
        **config
    )
