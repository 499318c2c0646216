import pytest

from qkdnet.forwarding import CONFORMING
from qkdnet.forwarding import NON_CONFORMING
from qkdnet.forwarding import TokenBucket
from qkdnet.forwarding import VirtualCircuit
from qkdnet.forwarding import police

from .helpers import best_effort_request
from .helpers import guaranteed_request


def circuit(request):
    return VirtualCircuit("vc-1", request, ("A", "B", "C"), ("A-B", "B-C"))


def test_burst_then_refill():
    vc = circuit(best_effort_request(lambda_k=10, sigma_k=5))

    assert [police(vc, 0.0) for _ in range(5)] == [CONFORMING] * 5
    assert police(vc, 0.0) == NON_CONFORMING
    assert police(vc, 0.1) == CONFORMING
    assert police(vc, 0.1) == NON_CONFORMING
    assert vc.drops == 2


def test_sixth_packet_after_refill():
    vc = circuit(best_effort_request(lambda_k=10, sigma_k=5))
    for _ in range(5):
        police(vc, 0.0)

    assert police(vc, 0.1) == CONFORMING


def test_steady_rate_conforms():
    vc = circuit(best_effort_request(lambda_k=8, sigma_k=1))

    results = [police(vc, i * 0.125) for i in range(50)]

    assert results == [CONFORMING] * 50


def test_bucket_never_exceeds_depth():
    bucket = TokenBucket(10, 5)

    assert bucket.refill(100.0) == 5


def test_guaranteed_circuits_are_not_policed():
    vc = circuit(guaranteed_request())

    assert vc.token_bucket is None
    with pytest.raises(ValueError):
        police(vc, 0.0)
