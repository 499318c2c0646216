from collections import OrderedDict
from collections import namedtuple
from typing import Any
from typing import Mapping

from .constants import DEFAULT_ADMISSION_FACTOR
from .constants import DEFAULT_ADVERTISE_INTERVAL
from .constants import DEFAULT_AUTH_TAG_KEY_BITS
from .constants import DEFAULT_CHANNEL_LATENCY
from .constants import DEFAULT_FLOOD_DELAY
from .constants import DEFAULT_FLOW_CONTROL_WINDOW
from .constants import DEFAULT_INITIAL_FILL_BITS
from .constants import DEFAULT_K_PATHS
from .constants import DEFAULT_KEYGEN_TICK
from .constants import DEFAULT_KEYSTORE_CAPACITY
from .constants import DEFAULT_MAX_FRAME_PAYLOAD_BITS
from .constants import DEFAULT_QBER_THRESHOLD
from .constants import DEFAULT_R_REF
from .constants import DEFAULT_ROUTING_SNAPSHOT_INTERVAL
from .constants import DEFAULT_SAMPLE_INTERVAL
from .constants import DEFAULT_W_CAP
from .constants import DEFAULT_W_LOAD
from .constants import MAX_AUTH_TAG_KEY_BITS
from .constants import MAX_QBER
from .constants import MIN_AUTH_TAG_KEY_BITS


DEFAULTS = OrderedDict(
    [
        ("keygen_tick", DEFAULT_KEYGEN_TICK),
        ("auth_tag_key_bits", DEFAULT_AUTH_TAG_KEY_BITS),
        ("max_frame_payload_bits", DEFAULT_MAX_FRAME_PAYLOAD_BITS),
        ("flow_control_window", DEFAULT_FLOW_CONTROL_WINDOW),
        ("channel_latency", DEFAULT_CHANNEL_LATENCY),
        ("admission_factor", DEFAULT_ADMISSION_FACTOR),
        ("w_load", DEFAULT_W_LOAD),
        ("w_cap", DEFAULT_W_CAP),
        ("r_ref", DEFAULT_R_REF),
        ("k_paths", DEFAULT_K_PATHS),
        ("flood_delay", DEFAULT_FLOOD_DELAY),
        ("advertise_interval", DEFAULT_ADVERTISE_INTERVAL),
        ("sample_interval", DEFAULT_SAMPLE_INTERVAL),
        ("routing_snapshot_interval", DEFAULT_ROUTING_SNAPSHOT_INTERVAL),
        ("keystore_capacity", DEFAULT_KEYSTORE_CAPACITY),
        ("initial_fill_bits", DEFAULT_INITIAL_FILL_BITS),
        ("qber_threshold", DEFAULT_QBER_THRESHOLD),
        ("qber_penalty", False),
        ("setup_signaling", True),
        ("check_invariants", False),
    ]
)

_INTEGERS = frozenset(
    [
        "auth_tag_key_bits",
        "max_frame_payload_bits",
        "flow_control_window",
        "k_paths",
        "keystore_capacity",
        "initial_fill_bits",
    ]
)
_FLAGS = frozenset(["qber_penalty", "setup_signaling", "check_invariants"])


def value_type(name):  # type: (str) -> str
    """
    JSON type of a tunable.

    >>> value_type("k_paths")
    'integer'
    """
    if name in _FLAGS:
        return "boolean"

    if name in _INTEGERS:
        return "integer"

    return "number"


class Config(namedtuple("Config", list(DEFAULTS))):
    """
    Every tunable of a simulation run.

    >>> Config(keygen_tick=0.001).auth_tag_key_bits
    128
    """

    __slots__ = ()

    def __new__(cls, **values):  # type: (**Any) -> Config
        unknown = sorted(set(values) - set(DEFAULTS))
        if unknown:
            raise KeyError(unknown[0])

        merged = OrderedDict(DEFAULTS)
        merged.update(values)
        for name in _INTEGERS:
            if int(merged[name]) != merged[name]:
                raise ValueError("{} must be an integer".format(name))

            merged[name] = int(merged[name])

        config = super(Config, cls).__new__(cls, **merged)
        config._check()

        return config

    @classmethod
    def from_dict(cls, values):  # type: (Mapping[str, Any]) -> Config
        return cls(**dict(values or {}))

    def as_dict(self):  # type: () -> dict
        return dict(self._asdict())

    def _check(self):  # type: () -> None
        tag = self.auth_tag_key_bits
        if tag % 8 or not MIN_AUTH_TAG_KEY_BITS <= tag <= MAX_AUTH_TAG_KEY_BITS:
            raise ValueError(
                "auth_tag_key_bits must be a multiple of 8 in [{}, {}], got {}".format(
                    MIN_AUTH_TAG_KEY_BITS, MAX_AUTH_TAG_KEY_BITS, tag
                )
            )

        for name in ("keygen_tick", "max_frame_payload_bits", "flow_control_window"):
            if not getattr(self, name) > 0:
                raise ValueError("{} must be positive".format(name))

        if not 0 < self.admission_factor <= 1:
            raise ValueError("admission_factor must be in (0, 1]")

        if self.k_paths < 1:
            raise ValueError("k_paths must be at least 1")

        if self.keystore_capacity < 1:
            raise ValueError("keystore_capacity must be positive")

        if not 0 <= self.initial_fill_bits <= self.keystore_capacity:
            raise ValueError("initial_fill_bits must fit in the key store")

        if not 0 < self.qber_threshold < MAX_QBER:
            raise ValueError("qber_threshold must be in (0, 0.5)")

        for name in (
            "channel_latency",
            "w_load",
            "w_cap",
            "flood_delay",
            "advertise_interval",
            "sample_interval",
            "routing_snapshot_interval",
        ):
            if getattr(self, name) < 0:
                raise ValueError("{} cannot be negative".format(name))

        if not self.r_ref > 0:
            raise ValueError("r_ref must be positive")

        for name in _FLAGS:
            if not isinstance(getattr(self, name), bool):
                raise ValueError("{} must be true or false".format(name))
