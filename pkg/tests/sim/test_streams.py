import numpy as np

from qkdnet.sim import Streams


def test_streams_are_reproducible():
    a = Streams(42).key_material("A-B").integers(0, 2 ** 32, size=8)
    b = Streams(42).key_material("A-B").integers(0, 2 ** 32, size=8)

    assert np.array_equal(a, b)


def test_streams_are_independent():
    streams = Streams(42)

    a = streams.key_material("A-B").integers(0, 2 ** 32, size=8)
    b = streams.key_material("B-C").integers(0, 2 ** 32, size=8)
    c = streams.session_keys("A-B").integers(0, 2 ** 32, size=8)

    assert not np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_new_consumers_do_not_shift_others():
    alone = Streams(42)
    shared = Streams(42)
    shared.arrivals("d0").random(100)

    assert np.array_equal(
        alone.key_material("A-B").random(4), shared.key_material("A-B").random(4)
    )


def test_seeds_differ():
    a = Streams(1).key_material("A-B").random(4)
    b = Streams(2).key_material("A-B").random(4)

    assert not np.array_equal(a, b)


def test_streams_are_cached():
    streams = Streams(0)

    assert streams.stream("x") is streams.stream("x")
