from __future__ import absolute_import

from typing import Any
from typing import Dict
from typing import Optional

import numpy as np

from .__version__ import __version__
from .config import Config
from .constants import TRACE_CIRCUIT
from .constants import TRACE_FRAME
from .constants import TRACE_NONE
from .exceptions import InsufficientKey
from .exceptions import InvalidLinkProfile
from .exceptions import QkdnetException
from .exceptions import UnknownBlock
from .keystore import KeyBlock
from .keystore import KeyStore
from .link import LinkProfile
from .link import effective_link_rate
from .link import single_channel_rate
from .sim import Metrics
from .sim import Scenario
from .sim import Simulator
from .sim import ValidationError
from .sim import from_dict as _from_dict
from .sim import load as _load


def link_profile(
    r0,  # type: float
    lambda_qkd,  # type: float
    d_max,  # type: float
    length,  # type: float
    num_quantum_channels=1,  # type: int
    qber=0.0,  # type: float
    **kwargs  # type: Any
):  # type: (...) -> LinkProfile
    """
    Creates a QBB link profile.
    """
    return LinkProfile(
        r0,
        lambda_qkd,
        d_max,
        length,
        num_quantum_channels=num_quantum_channels,
        qber=qber,
        **kwargs
    )


def key_store(link_id, capacity_bits=None, fill=0, seed=0):  # type: (str, Optional[int], int, int) -> KeyStore
    """
    Creates a key store, optionally holding fill bits of key material
    drawn from a generator seeded with seed.
    """
    store = KeyStore(link_id) if capacity_bits is None else KeyStore(link_id, capacity_bits)
    if fill:
        store.deposit(fill, np.random.default_rng(seed))

    return store


def load(path):  # type: (str) -> Scenario
    """
    Loads and validates a scenario file.
    """
    return _load(path)


def scenario(document):  # type: (Dict[str, Any]) -> Scenario
    """
    Validates a scenario document already parsed from JSON.
    """
    return _from_dict(document)


def run(scenario_or_document, seed=None):  # type: (Any, Optional[int]) -> Metrics
    """
    Runs a scenario, given as a Scenario, a document or a file path,
    and returns its metrics.
    """
    if isinstance(scenario_or_document, Scenario):
        target = scenario_or_document
    elif isinstance(scenario_or_document, dict):
        target = _from_dict(scenario_or_document)
    else:
        target = _load(scenario_or_document)

    if seed is not None:
        target = target.with_seed(seed)

    return Simulator(target).run()
