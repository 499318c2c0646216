from collections import namedtuple
from typing import Union

from qkdnet.constants import PRIORITY_BEST_EFFORT
from qkdnet.constants import PRIORITY_GUARANTEED


BEST_EFFORT = "best_effort"
GUARANTEED = "guaranteed"

FORWARD_CIRCUIT = "circuit"
FORWARD_DESTINATION = "destination"
FORWARDING_MODES = (FORWARD_CIRCUIT, FORWARD_DESTINATION)


class BestEffort(namedtuple("BestEffort", "lambda_k sigma_k")):
    """
    Rate and burst bounded service without any guarantee.

    lambda_k is the average key-packet rate (packets per second),
    sigma_k the burst size (packets).
    """

    __slots__ = ()

    kind = BEST_EFFORT
    priority = PRIORITY_BEST_EFFORT

    def __new__(cls, lambda_k, sigma_k):  # type: (float, float) -> BestEffort
        if not lambda_k > 0:
            raise ValueError("lambda_k must be positive, got {}".format(lambda_k))

        if sigma_k < 1:
            raise ValueError("sigma_k must be at least 1, got {}".format(sigma_k))

        return super(BestEffort, cls).__new__(cls, float(lambda_k), float(sigma_k))

    def as_dict(self):  # type: () -> dict
        return {"class": self.kind, "lambda_k": self.lambda_k, "sigma_k": self.sigma_k}


class GuaranteedRate(namedtuple("GuaranteedRate", "bits_per_period period")):
    """
    A contract for a given amount of key material every period.
    """

    __slots__ = ()

    kind = GUARANTEED
    priority = PRIORITY_GUARANTEED

    def __new__(cls, bits_per_period, period):  # type: (int, float) -> GuaranteedRate
        if not bits_per_period > 0:
            raise ValueError(
                "bits_per_period must be positive, got {}".format(bits_per_period)
            )

        if not period > 0:
            raise ValueError("period must be positive, got {}".format(period))

        return super(GuaranteedRate, cls).__new__(cls, bits_per_period, float(period))

    @property
    def rate(self):  # type: () -> float
        """
        Contracted session-key rate in bits per second.
        """
        return self.bits_per_period / self.period

    def as_dict(self):  # type: () -> dict
        return {
            "class": self.kind,
            "bits_per_period": self.bits_per_period,
            "period": self.period,
        }


ServiceClass = Union[BestEffort, GuaranteedRate]


_PathRequest = namedtuple(
    "PathRequest",
    "source_app ingress dest_node dest_port service key_block_length forwarding",
)


class PathRequest(_PathRequest):
    """
    An application's demand for session keys towards a remote application.
    """

    __slots__ = ()

    def __new__(
        cls,
        source_app,  # type: str
        ingress,  # type: str
        dest_node,  # type: str
        dest_port,  # type: int
        service,  # type: ServiceClass
        key_block_length,  # type: int
        forwarding=FORWARD_CIRCUIT,  # type: str
    ):  # type: (...) -> PathRequest
        if int(key_block_length) != key_block_length or key_block_length <= 0:
            raise ValueError(
                "key_block_length must be a positive integer, got {}".format(
                    key_block_length
                )
            )

        if forwarding not in FORWARDING_MODES:
            raise ValueError('Unknown forwarding mode "{}"'.format(forwarding))

        if forwarding == FORWARD_DESTINATION and service.kind != BEST_EFFORT:
            raise ValueError("Destination-address forwarding is best effort only")

        return super(PathRequest, cls).__new__(
            cls,
            source_app,
            ingress,
            dest_node,
            dest_port,
            service,
            int(key_block_length),
            forwarding,
        )
