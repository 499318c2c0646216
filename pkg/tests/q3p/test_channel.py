import numpy as np
import pytest

from qkdnet.exceptions import InsufficientKey
from qkdnet.keystore import KeyStore
from qkdnet.q3p import AuthFailure
from qkdnet.q3p import Channel
from qkdnet.q3p import OutOfOrderFrame
from qkdnet.q3p import WindowFull


@pytest.fixture
def store(rng):
    store = KeyStore("A-B", capacity_bits=10 ** 6)
    store.deposit(100000, rng)

    return store


def payload(rng, n):
    return rng.integers(0, 2, size=n, dtype=np.uint8)


def transfer(channel, frames, store):
    message = None
    for frame in frames:
        message = channel.deliver(frame, store.claim(frame.key_block_ref))

    return message


def test_single_frame(rng, store):
    channel = Channel("A-B", "A", "B")
    message = payload(rng, 1024)

    frames = channel.send_message("vc-1", message, store)

    assert len(frames) == 1
    assert frames[0].key_bits == 1024 + 128
    assert store.total_consumed == 1152
    assert not np.array_equal(frames[0].ciphertext, message)
    assert np.array_equal(transfer(channel, frames, store), message)


def test_fragmentation(rng, store):
    channel = Channel("A-B", "A", "B", max_frame_payload_bits=8192)
    message = payload(rng, 20000)

    frames = channel.send_message("vc-1", message, store)

    assert [f.fragment_index for f in frames] == [0, 1, 2]
    assert [f.payload_bits for f in frames] == [8192, 8192, 3616]
    assert channel.key_cost(20000) == 20000 + 3 * 128
    assert store.total_consumed == 20000 + 3 * 128
    assert [f.frame_id for f in frames] == [0, 1, 2]
    assert np.array_equal(transfer(channel, frames, store), message)


def test_control_frames_are_not_encrypted(rng, store):
    channel = Channel("A-B", "A", "B")
    message = payload(rng, 256)

    frames = channel.send_message("control", message, store, encrypt=False)

    assert np.array_equal(frames[0].ciphertext, message)
    assert frames[0].key_bits == 128
    assert store.total_consumed == 128
    assert np.array_equal(transfer(channel, frames, store), message)


def test_insufficient_key_consumes_nothing(rng):
    store = KeyStore("A-B", capacity_bits=10 ** 6)
    store.deposit(1100, rng)
    channel = Channel("A-B", "A", "B")

    with pytest.raises(InsufficientKey):
        channel.send_message("vc-1", payload(rng, 1024), store)

    assert store.available_bits == 1100
    assert channel.frames_sent == 0


def test_window(rng, store):
    channel = Channel("A-B", "A", "B", window=2)
    first = channel.send_message("vc-1", payload(rng, 64), store)
    channel.send_message("vc-1", payload(rng, 64), store)

    assert not channel.can_send(1)
    with pytest.raises(WindowFull):
        channel.send_message("vc-1", payload(rng, 64), store)

    transfer(channel, first, store)

    assert channel.can_send(1)


def test_window_refuses_messages_larger_than_the_window(rng, store):
    channel = Channel("A-B", "A", "B", window=2, max_frame_payload_bits=8)

    with pytest.raises(WindowFull):
        channel.send_message("vc-1", payload(rng, 32), store)

    assert channel.state.in_flight == 0
    assert store.total_consumed == 0

    frames = channel.send_message("vc-1", payload(rng, 16), store)

    assert len(frames) == 2
    assert channel.state.in_flight == 2


def test_frames_in_flight_never_exceed_the_window(rng, store):
    channel = Channel("A-B", "A", "B", window=4, max_frame_payload_bits=64)
    pending = []
    for size in rng.integers(1, 257, size=100):
        if channel.can_send(channel.fragment_count(int(size))):
            pending.extend(channel.send_message("vc-1", payload(rng, int(size)), store))
        elif pending:
            frame = pending.pop(0)
            channel.deliver(frame, store.claim(frame.key_block_ref))

        assert 0 <= channel.state.in_flight <= channel.state.window
        assert channel.state.in_flight == len(pending)


def test_tampered_frame(rng, store):
    channel = Channel("A-B", "A", "B")
    frames = channel.send_message("vc-1", payload(rng, 256), store)
    frame = frames[0].tampered(3)

    with pytest.raises(AuthFailure):
        channel.deliver(frame, store.claim(frame.key_block_ref))

    assert channel.auth_failures == 1
    assert channel.state.in_flight == 0


def test_out_of_order(rng, store):
    channel = Channel("A-B", "A", "B")
    frames = channel.send_message("vc-1", payload(rng, 20000), store)

    with pytest.raises(OutOfOrderFrame):
        channel.deliver(frames[1], store.claim(frames[1].key_block_ref))


def test_wrong_block(rng, store):
    channel = Channel("A-B", "A", "B")
    frames = channel.send_message("vc-1", payload(rng, 64), store)
    other = store.consume(64 + 128)

    with pytest.raises(ValueError):
        channel.receive_frame(frames[0], other)


def test_empty_message(store):
    with pytest.raises(ValueError):
        Channel("A-B", "A", "B").send_message("vc-1", np.zeros(0, dtype=np.uint8), store)


def test_every_frame_uses_its_own_block(rng, store):
    channel = Channel("A-B", "A", "B", max_frame_payload_bits=256)
    frames = channel.send_message("vc-1", payload(rng, 1000), store)
    frames += channel.send_message("vc-2", payload(rng, 1000), store)

    refs = [frame.key_block_ref for frame in frames]

    assert len(set(refs)) == len(refs) == 8


def test_random_messages_arrive_unchanged():
    rng = np.random.default_rng(1000)
    store = KeyStore("A-B", capacity_bits=2 * 10 ** 6)
    store.deposit(10 ** 6, rng)
    channel = Channel("A-B", "A", "B", max_frame_payload_bits=256)

    for _ in range(1000):
        message = payload(rng, int(rng.integers(1, 601)))
        frames = channel.send_message("vc-1", message, store)

        assert len(frames) == channel.fragment_count(len(message))
        assert np.array_equal(transfer(channel, frames, store), message)
        assert channel.state.in_flight == 0

    assert store.total_consumed + store.available_bits == 10 ** 6
