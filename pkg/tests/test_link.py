import math

import pytest

from qkdnet.exceptions import InvalidLinkProfile
from qkdnet.link import LinkProfile
from qkdnet.link import effective_link_rate
from qkdnet.link import single_channel_rate


def profile(**kwargs):
    values = dict(r0=100000, lambda_qkd=15, d_max=120, length=15)
    values.update(kwargs)

    return LinkProfile(**values)


def test_rate_decays_with_length():
    assert single_channel_rate(profile(length=0)) == 100000
    assert single_channel_rate(profile()) == pytest.approx(100000 * math.exp(-1))
    assert single_channel_rate(profile(length=30)) == pytest.approx(
        100000 * math.exp(-2)
    )


def test_rate_at_d_max():
    assert single_channel_rate(profile(length=120)) == pytest.approx(
        100000 * math.exp(-8)
    )


def test_no_rate_beyond_d_max():
    p = profile(length=120.5)

    assert not p.in_range
    assert single_channel_rate(p) == 0
    assert effective_link_rate(p) == 0


@pytest.mark.parametrize("channels", [1, 2, 5])
def test_channels_add_up(channels):
    assert effective_link_rate(profile(num_quantum_channels=channels)) == pytest.approx(
        channels * 100000 * math.exp(-1)
    )


@pytest.mark.parametrize(
    "qber, expected",
    [(0.0, True), (0.05, True), (0.1099, True), (0.11, False), (0.3, False)],
)
def test_threshold_is_a_step(qber, expected):
    p = profile(qber=qber)

    assert p.secure is expected
    assert (effective_link_rate(p) > 0) is expected


def test_qber_penalty():
    p = profile(qber=0.055)

    assert effective_link_rate(p) == pytest.approx(100000 * math.exp(-1))
    assert effective_link_rate(p, qber_penalty=True) == pytest.approx(
        0.5 * 100000 * math.exp(-1)
    )
    assert effective_link_rate(profile(qber=0.2), qber_penalty=True) == 0


def test_custom_threshold():
    p = profile(qber=0.15, qber_threshold=0.2)

    assert p.secure
    assert effective_link_rate(p) > 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"r0": 0},
        {"r0": -1},
        {"lambda_qkd": 0},
        {"d_max": 0},
        {"length": -1},
        {"num_quantum_channels": 0},
        {"num_quantum_channels": 1.5},
        {"qber": -0.1},
        {"qber": 0.6},
        {"qber_threshold": 0},
        {"qber_threshold": 0.5},
    ],
)
def test_invalid_profiles(kwargs):
    with pytest.raises(InvalidLinkProfile):
        profile(**kwargs)


def test_replace_validates():
    p = profile()

    assert p.replace(qber=0.2).qber == 0.2
    assert p.qber == 0

    with pytest.raises(InvalidLinkProfile):
        p.replace(num_quantum_channels=0)


def test_invalid_profile_is_a_value_error():
    with pytest.raises(ValueError):
        profile(r0=0)
