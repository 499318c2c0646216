"""
Secret-key generation rates of QBB links.

A QBB link bundles one or more quantum channels with a classical
channel. Each quantum channel yields secret bits at a rate decaying
exponentially with the link length, up to a maximum distance beyond
which no key can be produced at all.
"""
import math

from collections import namedtuple

from .constants import DEFAULT_QBER_THRESHOLD
from .constants import MAX_QBER
from .exceptions import InvalidLinkProfile


_LinkProfile = namedtuple(
    "LinkProfile",
    "r0 "
    "lambda_qkd "
    "d_max "
    "length "
    "num_quantum_channels "
    "qber "
    "qber_threshold",
)


class LinkProfile(_LinkProfile):
    """
    Physical model of a QBB link.

    >>> from qkdnet.link import LinkProfile
    >>> profile = LinkProfile(r0=100000, lambda_qkd=15, d_max=120, length=15)
    """

    __slots__ = ()

    def __new__(
        cls,
        r0,  # type: float
        lambda_qkd,  # type: float
        d_max,  # type: float
        length,  # type: float
        num_quantum_channels=1,  # type: int
        qber=0.0,  # type: float
        qber_threshold=DEFAULT_QBER_THRESHOLD,  # type: float
    ):  # type: (...) -> LinkProfile
        if not r0 > 0:
            raise InvalidLinkProfile("r0 must be positive, got {}".format(r0))

        if not lambda_qkd > 0:
            raise InvalidLinkProfile(
                "lambda_qkd must be positive, got {}".format(lambda_qkd)
            )

        if not d_max > 0:
            raise InvalidLinkProfile("d_max must be positive, got {}".format(d_max))

        if length < 0:
            raise InvalidLinkProfile("length must not be negative, got {}".format(length))

        if int(num_quantum_channels) != num_quantum_channels or num_quantum_channels < 1:
            raise InvalidLinkProfile(
                "num_quantum_channels must be an integer >= 1, got {}".format(
                    num_quantum_channels
                )
            )

        if not 0 <= qber <= MAX_QBER:
            raise InvalidLinkProfile("qber must be in [0, 0.5], got {}".format(qber))

        if not 0 < qber_threshold < MAX_QBER:
            raise InvalidLinkProfile(
                "qber_threshold must be in (0, 0.5), got {}".format(qber_threshold)
            )

        return super(LinkProfile, cls).__new__(
            cls,
            float(r0),
            float(lambda_qkd),
            float(d_max),
            float(length),
            int(num_quantum_channels),
            float(qber),
            float(qber_threshold),
        )

    @property
    def secure(self):  # type: () -> bool
        return self.qber < self.qber_threshold

    @property
    def in_range(self):  # type: () -> bool
        return self.length <= self.d_max

    def replace(self, **kwargs):  # type: (...) -> LinkProfile
        """
        Returns a validated copy with the given fields changed.
        """
        values = self._asdict()
        values.update(kwargs)

        return LinkProfile(**values)


def single_channel_rate(profile):  # type: (LinkProfile) -> float
    """
    Secret bits per second produced by one quantum channel.

    R(l) = R0 * exp(-l / lambda_qkd) up to d_max, zero beyond.
    """
    if not profile.in_range:
        return 0.0

    return profile.r0 * math.exp(-profile.length / profile.lambda_qkd)


def effective_link_rate(profile, qber_penalty=False):  # type: (LinkProfile, bool) -> float
    """
    Secret bits per second produced by the whole link.

    All quantum channels contribute equally. At or above the QBER
    threshold raw key is discarded and the link yields nothing.

    With qber_penalty enabled, the rate below threshold is scaled by
    1 - qber / qber_threshold instead of being a pure step.
    """
    if not profile.secure:
        return 0.0

    rate = profile.num_quantum_channels * single_channel_rate(profile)
    if qber_penalty:
        rate *= 1.0 - profile.qber / profile.qber_threshold

    return rate
