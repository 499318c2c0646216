from collections import namedtuple
from typing import Optional

from qkdnet.constants import DEFAULT_R_REF
from qkdnet.constants import DEFAULT_W_CAP
from qkdnet.constants import DEFAULT_W_LOAD

from .link_state import LinkStateRecord


class CostWeights(namedtuple("CostWeights", "w_load w_cap r_ref")):

    __slots__ = ()

    def __new__(
        cls, w_load=DEFAULT_W_LOAD, w_cap=DEFAULT_W_CAP, r_ref=DEFAULT_R_REF
    ):  # type: (float, float, float) -> CostWeights
        if w_load < 0 or w_cap < 0:
            raise ValueError("Cost weights cannot be negative")

        if not r_ref > 0:
            raise ValueError("Reference rate must be positive")

        return super(CostWeights, cls).__new__(cls, w_load, w_cap, r_ref)


def link_cost(record, weights=None):  # type: (LinkStateRecord, CostWeights) -> Optional[float]
    """
    Routing cost of a link, or None when the link cannot be used.

    Emptier key stores and lower residual rates cost more, which spreads
    load over paths that are not necessarily the shortest:

        1 + w_load * (1 - fill) + w_cap * r_ref / residual
    """
    if weights is None:
        weights = CostWeights()

    residual = record.residual_rate
    if not record.is_up or residual <= 0:
        return None

    return (
        1.0
        + weights.w_load * (1.0 - record.fill_fraction)
        + weights.w_cap * (weights.r_ref / residual)
    )
