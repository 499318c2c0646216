"""
Command implementations behind the console application.

Exit statuses are stable: 0 on success, 1 when the scenario or a
sweep parameter is invalid, 2 on I/O errors.
"""
import io
import json
import logging
import os

from collections import namedtuple
from typing import Callable
from typing import Optional
from typing import Sequence

import pendulum

from .constants import TRACE_LEVELS
from .constants import TRACE_NONE
from .sim import Simulator
from .sim import TraceSink
from .sim import ValidationError
from .sim import load
from .sim.sweep import sweep
from .sim.sweep import write_csv


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_IO = 2

METRICS_FILE = "metrics.json"
TRACE_FILE = "trace.jsonl"
SWEEP_FILE = "sweep.csv"

Echo = Callable[[str], None]


def _silent(text):  # type: (str) -> None
    pass


class RunConfig(namedtuple("RunConfig", "scenario out seed trace sample_interval")):
    """
    What a run reads, where it writes and how much it records.
    """

    __slots__ = ()

    def __new__(
        cls,
        scenario,  # type: str
        out,  # type: str
        seed=None,  # type: Optional[int]
        trace=TRACE_NONE,  # type: str
        sample_interval=None,  # type: Optional[float]
    ):  # type: (...) -> RunConfig
        if trace not in TRACE_LEVELS:
            raise ValueError(
                'Invalid trace level "{}", expected one of {}'.format(
                    trace, ", ".join(TRACE_LEVELS)
                )
            )

        if sample_interval is not None and sample_interval < 0:
            raise ValueError("The sample interval cannot be negative")

        return super(RunConfig, cls).__new__(
            cls, scenario, out, seed, trace, sample_interval
        )


def cmd_run(config, echo=_silent, error=_silent):  # type: (RunConfig, Echo, Echo) -> int
    started = pendulum.now()
    try:
        scenario = load(config.scenario)
    except ValidationError as e:
        error("Invalid scenario {}: {}".format(config.scenario, e))

        return EXIT_INVALID
    except OSError as e:
        error("Cannot read {}: {}".format(config.scenario, e))

        return EXIT_IO

    if config.seed is not None:
        scenario = scenario.with_seed(config.seed)

    if config.sample_interval is not None:
        scenario.config = scenario.config._replace(sample_interval=config.sample_interval)

    for warning in scenario.warnings:
        echo("Warning: {}".format(warning))

    try:
        os.makedirs(config.out, exist_ok=True)
        trace_stream = None
        if config.trace != TRACE_NONE:
            trace_stream = io.open(
                os.path.join(config.out, TRACE_FILE), "w", encoding="utf-8"
            )

        try:
            simulator = Simulator(
                scenario, sink=TraceSink(config.trace, stream=trace_stream)
            )
            metrics = simulator.run()
        finally:
            if trace_stream is not None:
                trace_stream.close()

        with io.open(os.path.join(config.out, METRICS_FILE), "w", encoding="utf-8") as f:
            f.write(metrics.to_json())
            f.write("\n")
    except OSError as e:
        error("Cannot write results to {}: {}".format(config.out, e))

        return EXIT_IO

    network = metrics.network
    echo(
        "{} circuit(s) established, {} rejected, {} bits delivered".format(
            network["circuits_established"],
            sum(network["rejections"].values()),
            network["delivered_bits"],
        )
    )
    echo(
        "Results written to {} in {}".format(
            config.out, (pendulum.now() - started).in_words()
        )
    )

    return EXIT_OK


def cmd_validate(path, echo=_silent, error=_silent):  # type: (str, Echo, Echo) -> int
    try:
        scenario = load(path)
    except ValidationError as e:
        error("Invalid scenario {}: {}".format(path, e))

        return EXIT_INVALID
    except OSError as e:
        error("Cannot read {}: {}".format(path, e))

        return EXIT_IO

    for warning in scenario.warnings:
        echo("Warning: {}".format(warning))

    echo("OK")

    return EXIT_OK


def cmd_sweep(
    path,  # type: str
    parameter,  # type: str
    values,  # type: Sequence[float]
    seeds=None,  # type: Optional[Sequence[int]]
    out=".",  # type: str
    jobs=1,  # type: int
    echo=_silent,  # type: Echo
    error=_silent,  # type: Echo
):  # type: (...) -> int
    started = pendulum.now()
    try:
        with io.open(path, encoding="utf-8") as f:
            document = json.load(f)
    except ValueError as e:
        error("Invalid scenario {}: not a JSON document ({})".format(path, e))

        return EXIT_INVALID
    except OSError as e:
        error("Cannot read {}: {}".format(path, e))

        return EXIT_IO

    try:
        rows = sweep(document, parameter, values, seeds=seeds, jobs=jobs)
    except ValidationError as e:
        error(str(e))

        return EXIT_INVALID

    try:
        os.makedirs(out, exist_ok=True)
        with io.open(os.path.join(out, SWEEP_FILE), "w", encoding="utf-8") as f:
            write_csv(rows, f)
    except OSError as e:
        error("Cannot write results to {}: {}".format(out, e))

        return EXIT_IO

    echo(
        "{} run(s) written to {} in {}".format(
            len(rows), os.path.join(out, SWEEP_FILE), (pendulum.now() - started).in_words()
        )
    )

    return EXIT_OK
