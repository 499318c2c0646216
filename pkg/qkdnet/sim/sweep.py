"""
Parameter sweeps: one isolated run per (value, seed) combination.
"""
import copy
import csv
import logging
import math

from collections import OrderedDict
from concurrent.futures import ProcessPoolExecutor
from typing import IO
from typing import Any
from typing import Callable
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

from qkdnet.config import DEFAULTS

from .engine import Simulator
from .exceptions import UnknownParameter
from .scenario import from_dict


logger = logging.getLogger(__name__)

LINK_FIELDS = (
    "r0",
    "lambda_qkd",
    "d_max",
    "length",
    "num_quantum_channels",
    "qber",
    "qber_threshold",
    "capacity_bits",
)

COLUMNS = (
    "parameter",
    "value",
    "seed",
    "mean_key_rate",
    "min_key_rate",
    "max_key_rate",
    "consumed_bits",
    "circuits_established",
    "rejections",
    "teardowns",
    "delivered_bits",
    "delivered_rate",
    "drops",
    "reroutes",
    "control_key_bits",
)

_INTEGER_FIELDS = frozenset(["num_quantum_channels", "capacity_bits"])


def parse_range(text):  # type: (str) -> List[float]
    """
    Inclusive range "start:stop:step".

    >>> parse_range("0:0.2:0.05")
    [0.0, 0.05, 0.1, 0.15, 0.2]
    """
    try:
        start, stop, step = (float(part) for part in text.split(":"))
    except ValueError:
        raise ValueError('Invalid range "{}", expected start:stop:step'.format(text))

    if step <= 0 or stop < start:
        raise ValueError('Invalid range "{}"'.format(text))

    count = int(math.floor((stop - start) / step + 1e-9)) + 1

    return [round(start + i * step, 10) for i in range(count)]


def setter(document, name):  # type: (dict, str) -> Callable[[dict, Any], None]
    """
    Resolves a parameter name to a function writing it into a
    scenario document.

    Accepted names: a config tunable ("admission_factor" or
    "config.admission_factor"), a field of every link ("link.length"),
    a field of one link ("links.A-B.length") and "duration".
    """
    if name == "duration":

        def set_duration(doc, value):
            doc["duration"] = value

        return set_duration

    parts = name.split(".")
    if len(parts) == 1 or (len(parts) == 2 and parts[0] == "config"):
        key = parts[-1]
        if key not in DEFAULTS:
            raise UnknownParameter(name)

        def set_config(doc, value):
            doc.setdefault("config", {})[key] = value

        return set_config

    if len(parts) == 2 and parts[0] == "link":
        field = parts[1]
        if field not in LINK_FIELDS:
            raise UnknownParameter(name)

        def set_links(doc, value):
            for link in doc["topology"]["links"]:
                link[field] = _cast(field, value)

        return set_links

    if len(parts) >= 3 and parts[0] == "links":
        link_id = ".".join(parts[1:-1])
        field = parts[-1]
        ids = [link.get("id") for link in document.get("topology", {}).get("links", [])]
        if field not in LINK_FIELDS or link_id not in ids:
            raise UnknownParameter(name)

        def set_link(doc, value):
            for link in doc["topology"]["links"]:
                if link["id"] == link_id:
                    link[field] = _cast(field, value)

        return set_link

    raise UnknownParameter(name)


def _cast(field, value):  # type: (str, Any) -> Any
    if field in _INTEGER_FIELDS:
        return int(value)

    return value


def run_point(args):  # type: (Tuple[dict, str, Any, int]) -> Dict[str, Any]
    """
    One run of a sweep, self-contained so that it can execute in
    another process.
    """
    document, name, value, seed = args
    document = dict(document, seed=seed)

    scenario = from_dict(document)
    metrics = Simulator(scenario).run()

    rates = [
        link["generated_bits"] / scenario.duration for link in metrics.links.values()
    ] or [0.0]
    network = metrics.network
    circuits = metrics.circuits.values()

    return OrderedDict(
        [
            ("parameter", name),
            ("value", value),
            ("seed", seed),
            ("mean_key_rate", sum(rates) / len(rates)),
            ("min_key_rate", min(rates)),
            ("max_key_rate", max(rates)),
            ("consumed_bits", network["consumed_bits"]),
            ("circuits_established", network["circuits_established"]),
            ("rejections", sum(network["rejections"].values())),
            ("teardowns", network["teardowns"]),
            ("delivered_bits", network["delivered_bits"]),
            ("delivered_rate", network["delivered_bits"] / scenario.duration),
            ("drops", network["drops"]),
            ("reroutes", sum(circuit["reroutes"] for circuit in circuits)),
            ("control_key_bits", network["control_key_bits"]),
        ]
    )


def sweep(
    document,  # type: dict
    name,  # type: str
    values,  # type: Sequence[Any]
    seeds=None,  # type: Optional[Sequence[int]]
    jobs=1,  # type: int
):  # type: (...) -> List[Dict[str, Any]]
    """
    Runs the scenario once per (value, seed), values outermost.

    Without seeds every value runs once with seed 0.
    """
    apply = setter(document, name)
    seeds = list(seeds) if seeds else [0]

    points = []
    for value in values:
        variant = copy.deepcopy(document)
        apply(variant, value)
        from_dict(variant)
        points.extend((variant, name, value, seed) for seed in seeds)

    logger.info("Sweeping %s over %d run(s), %d job(s)", name, len(points), jobs)
    if jobs > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(run_point, points))

    return [run_point(point) for point in points]


def write_csv(rows, stream):  # type: (Sequence[Dict[str, Any]], IO[str]) -> None
    writer = csv.DictWriter(stream, fieldnames=COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
