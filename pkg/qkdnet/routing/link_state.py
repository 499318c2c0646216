from collections import namedtuple
from typing import Tuple


UP = "up"
DOWN = "down"
STATUSES = (UP, DOWN)


_LinkStateRecord = namedtuple(
    "LinkStateRecord",
    "link_id endpoints effective_rate fill_fraction reserved_rate status",
)


class LinkStateRecord(_LinkStateRecord):
    """
    Advertised state of one QBB link, as seen in a node's view.
    """

    __slots__ = ()

    def __new__(
        cls,
        link_id,  # type: str
        endpoints,  # type: Tuple[str, str]
        effective_rate,  # type: float
        fill_fraction=0.0,  # type: float
        reserved_rate=0.0,  # type: float
        status=UP,  # type: str
    ):  # type: (...) -> LinkStateRecord
        if status not in STATUSES:
            raise ValueError('Invalid link status "{}"'.format(status))

        if not 0.0 <= fill_fraction <= 1.0:
            raise ValueError("Fill fraction must be in [0, 1], got {}".format(fill_fraction))

        if effective_rate < 0 or reserved_rate < 0:
            raise ValueError("Rates cannot be negative")

        a, b = endpoints

        return super(LinkStateRecord, cls).__new__(
            cls,
            link_id,
            (a, b),
            float(effective_rate),
            float(fill_fraction),
            float(reserved_rate),
            status,
        )

    @property
    def is_up(self):  # type: () -> bool
        return self.status == UP

    @property
    def usable_rate(self):  # type: () -> float
        if not self.is_up:
            return 0.0

        return self.effective_rate

    @property
    def residual_rate(self):  # type: () -> float
        return self.usable_rate - self.reserved_rate

    def other_end(self, node):  # type: (str) -> str
        a, b = self.endpoints
        if node == a:
            return b

        if node == b:
            return a

        raise ValueError("Node {} is not an endpoint of link {}".format(node, self.link_id))
