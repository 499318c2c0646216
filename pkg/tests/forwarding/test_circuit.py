import numpy as np
import pytest

from qkdnet.forwarding import ACTIVE
from qkdnet.forwarding import CLOSED
from qkdnet.forwarding import ESTABLISHED
from qkdnet.forwarding import REROUTED
from qkdnet.forwarding import TEARDOWN
from qkdnet.forwarding import VirtualCircuit

from .helpers import best_effort_request
from .helpers import guaranteed_request


def circuit(request=None):
    return VirtualCircuit(
        "vc-1", request or guaranteed_request(key_block_length=8), ("A", "B", "C"), ("A-B", "B-C")
    )


def payload(value):
    return np.array([int(c) for c in "{:08b}".format(value)], dtype=np.uint8)


def test_path_must_join_ingress_and_egress():
    with pytest.raises(ValueError):
        VirtualCircuit("vc-1", guaranteed_request(), ("A", "B"), ("A-B",))

    with pytest.raises(ValueError):
        VirtualCircuit("vc-1", guaranteed_request(), ("A", "B", "C"), ("A-B",))


def test_next_hop():
    vc = circuit()

    assert vc.next_hop("A") == ("B", "A-B")
    assert vc.next_hop("B") == ("C", "B-C")
    assert vc.uses_link("B-C")
    assert not vc.uses_link("C-D")


def test_packets():
    vc = circuit()
    packet = vc.new_packet(payload(3))

    assert packet.sequence == 0
    assert packet.epoch == 0
    assert packet.destination == "C"
    assert packet.priority == 0
    assert vc.emitted == 1
    assert np.array_equal(vc.sent_payload(0), payload(3))

    with pytest.raises(ValueError):
        vc.new_packet(np.zeros(16, dtype=np.uint8))


def test_in_order_delivery_without_duplicates():
    vc = circuit()
    packets = [vc.new_packet(payload(i)) for i in range(4)]

    assert vc.accept(packets[1]) == []
    assert vc.accept(packets[2]) == []
    assert [p.sequence for p in vc.accept(packets[0])] == [0, 1, 2]
    assert vc.accept(packets[1]) == []
    assert [p.sequence for p in vc.accept(packets[3])] == [3]

    assert vc.delivered_packets == 4
    assert vc.delivered_bits == 32
    assert vc.outstanding() == []


def test_move_restamps_outstanding_packets():
    vc = circuit()
    first = vc.new_packet(payload(1))
    vc.new_packet(payload(2))
    vc.accept(first)

    vc.move(("A", "D", "C"), ("A-D", "D-C"))
    outstanding = vc.outstanding()

    assert vc.epoch == 1
    assert vc.reroutes == 1
    assert [p.sequence for p in outstanding] == [1]
    assert outstanding[0].epoch == 1
    assert outstanding[0].hops == 0


def test_lifecycle_notifications():
    vc = circuit()
    vc.activate(1.0)
    vc.move(("A", "D", "C"), ("A-D", "D-C"))
    vc.activate(2.0)
    vc.close(3.0, "stopped")

    assert vc.state == CLOSED
    assert vc.established_at == 1.0
    assert [(n.node, n.kind) for n in vc.notifications] == [
        ("A", ESTABLISHED),
        ("C", ESTABLISHED),
        ("A", REROUTED),
        ("C", REROUTED),
        ("A", TEARDOWN),
        ("C", TEARDOWN),
    ]
    assert vc.notifications[0].detail == {"app": "app"}
    assert vc.notifications[1].detail == {"port": 5000}
    assert vc.notifications[-1].as_dict()["detail"] == {"reason": "stopped"}


def test_closed_circuits_stay_closed():
    vc = circuit()
    vc.close(1.0, "stopped")
    vc.activate(2.0)

    assert vc.state == CLOSED
    assert vc.established_at is None


def test_activation():
    vc = circuit(best_effort_request(key_block_length=8))
    vc.activate(0.5)

    assert vc.state == ACTIVE
    assert vc.is_active


def test_lost_packets_do_not_stall_delivery():
    vc = circuit()
    packets = [vc.new_packet(payload(i)) for i in range(4)]

    assert vc.accept(packets[2]) == []
    assert [p.sequence for p in vc.accept(packets[0])] == [0]
    assert [p.sequence for p in vc.lose(1)] == [2]
    assert [p.sequence for p in vc.accept(packets[3])] == [3]

    assert vc.lost_packets == 1
    assert vc.delivered_packets == 3
    assert vc.sent_payload(1) is None
    assert vc.outstanding() == []


def test_lost_packets_are_not_sent_again():
    vc = circuit()
    for i in range(3):
        vc.new_packet(payload(i))

    assert vc.lose(1) == []
    vc.move(("A", "D", "C"), ("A-D", "D-C"))

    assert [p.sequence for p in vc.outstanding()] == [0, 2]
    assert [p.sequence for p in vc.accept(vc.outstanding()[0])] == [0]


@pytest.mark.parametrize("sequence", [0, 1])
def test_losing_a_settled_sequence_changes_nothing(sequence):
    vc = circuit()
    packets = [vc.new_packet(payload(i)) for i in range(2)]
    vc.accept(packets[0])
    vc.lose(1)

    assert vc.lose(sequence) == []
    assert vc.accept(packets[sequence]) == []
    assert vc.lost_packets == 1
    assert vc.delivered_packets == 1


def test_closed_circuits_lose_nothing():
    vc = circuit()
    vc.new_packet(payload(1))
    vc.close(1.0, "stopped")

    assert vc.lose(0) == []
    assert vc.lost_packets == 0
