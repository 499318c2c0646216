from qkdnet.forwarding import BestEffort
from qkdnet.forwarding import GuaranteedRate
from qkdnet.forwarding import PathRequest
from qkdnet.routing import Route


def route(*path, **kwargs):
    links = tuple("{}-{}".format(a, b) for a, b in zip(path, path[1:]))

    return Route(path[-1], path[1], links[0], tuple(path), links, kwargs.get("cost", float(len(links))))


def guaranteed_request(source="A", dest="C", bits=128000, period=1.0, key_block_length=8192):
    return PathRequest(
        "app", source, dest, 5000, GuaranteedRate(bits, period), key_block_length
    )


def best_effort_request(source="A", dest="C", lambda_k=10, sigma_k=5, key_block_length=256, **kwargs):
    return PathRequest(
        "app", source, dest, 6000, BestEffort(lambda_k, sigma_k), key_block_length, **kwargs
    )
