"""
Discrete-event loop of the simulator, built on simpy.

Everything happens in one simpy environment; simpy orders simultaneous
events by insertion, which makes every run with the same scenario and
seed process the very same event sequence.
"""
import itertools
import logging

from collections import Counter
from typing import Callable
from typing import Iterator
from typing import Optional

import simpy

from qkdnet.constants import TRACE_NONE
from qkdnet.forwarding import GUARANTEED
from qkdnet.forwarding import VirtualCircuit
from qkdnet.helpers import round_time
from qkdnet.routing import LinkStateRecord

from .events import ADVERTISEMENT
from .events import APP_REQUEST
from .events import ATTACK
from .events import CHANNEL_CHANGE
from .events import DEMAND
from .events import EMISSION
from .events import KEYGEN_TICK
from .events import METRIC_SAMPLE
from .events import RESTORE
from .events import ROUTING_SNAPSHOT
from .events import Event
from .events import TraceSink
from .metrics import Metrics
from .network import Network
from .scenario import BURST
from .scenario import CHANNELS
from .scenario import EAVESDROP
from .scenario import POISSON
from .scenario import DemandSpec
from .scenario import Scenario


logger = logging.getLogger(__name__)

_EPSILON = 1e-12


class Simulator(object):
    """
    Runs one scenario.

    >>> metrics = Simulator(scenario).run()
    >>> metrics.network["delivered_bits"]
    """

    def __init__(
        self, scenario, trace_level=TRACE_NONE, sink=None
    ):  # type: (Scenario, str, Optional[TraceSink]) -> None
        self.scenario = scenario
        self.config = scenario.config
        self.duration = scenario.duration
        self.env = simpy.Environment()
        self.sink = sink if sink is not None else TraceSink(trace_level)
        self.current = Event(0.0, -1, "start")
        self.event_counts = Counter()

        self._ordinals = itertools.count()
        self._last_tick = 0.0
        self._done = False

        self.network = Network(scenario, self, self.sink)

    @property
    def now(self):  # type: () -> float
        return self.env.now

    def call_later(self, delay, kind, handler, *args):  # type: (float, str, Callable, ...) -> None
        event = self.env.timeout(max(0.0, delay))
        event.callbacks.append(lambda _: self._dispatch(kind, handler, *args))

    def run(self):  # type: () -> Metrics
        if self._done:
            raise RuntimeError("A simulator runs once")

        logger.info("Running %s with seed %d", self.scenario, self.scenario.seed)
        self._schedule()
        self.env.run(until=self.duration)

        # The last tick falls on the end of the run.
        self._step(KEYGEN_TICK)
        self.network.keygen(self.duration - self._last_tick)
        self._done = True

        if self.config.check_invariants:
            self.network.check_invariants()

        return self.network.metrics(self.duration, self.event_counts)

    def inject_attack(self, link_id, qber, at=None):  # type: (str, float, Optional[float]) -> Optional[LinkStateRecord]
        """
        Sets the QBER of a link, now or at a later time.

        At or above the link's threshold the link goes down, loses its
        pending raw key and the change is flooded to every node.
        """
        if link_id not in self.network.profiles:
            raise KeyError("Unknown link {}".format(link_id))

        if at is not None:
            self.call_later(at - self.now, ATTACK, self.network.inject_attack, link_id, qber)

            return None

        self._step(ATTACK)

        return self.network.inject_attack(link_id, qber)

    def start_traffic(self, circuit, demand):  # type: (VirtualCircuit, DemandSpec) -> None
        if circuit.service.kind == GUARANTEED:
            self.env.process(self._contract(circuit))
        else:
            self.env.process(self._requests(circuit, demand))

    def _dispatch(self, kind, handler, *args):  # type: (str, Callable, ...) -> None
        self._step(kind)
        handler(*args)

    def _step(self, kind):  # type: (str) -> Event
        time = round_time(self.env.now)
        if self.config.check_invariants and time < self.current.time:
            raise AssertionError(
                "Event at {} processed after {}".format(time, self.current)
            )

        self.current = Event(time, next(self._ordinals), kind)
        self.event_counts[kind] += 1

        return self.current

    def _schedule(self):  # type: () -> None
        network = self.network
        for demand in self.scenario.demands:
            self.call_later(demand.time, DEMAND, network.demand, demand)

        for attack in self.scenario.attacks:
            if attack.kind == EAVESDROP:
                self.call_later(
                    attack.time, ATTACK, network.inject_attack, attack.link_id, attack.value
                )
            elif attack.kind == CHANNELS:
                self.call_later(
                    attack.time, CHANNEL_CHANGE, network.set_channels, attack.link_id, attack.value
                )
            else:
                self.call_later(attack.time, RESTORE, network.restore, attack.link_id)

        self.env.process(self._keygen())

        config = self.config
        if config.advertise_interval > 0:
            self.env.process(
                self._every(config.advertise_interval, ADVERTISEMENT, network.advertise)
            )

        if config.sample_interval > 0:
            self.env.process(self._every(config.sample_interval, METRIC_SAMPLE, network.sample))

        if config.routing_snapshot_interval > 0:
            self.env.process(
                self._every(
                    config.routing_snapshot_interval,
                    ROUTING_SNAPSHOT,
                    network.snapshot_routing,
                )
            )

    def _at(self, t):  # type: (float) -> simpy.Timeout
        return self.env.timeout(max(0.0, t - self.env.now))

    def _keygen(self):  # type: () -> Iterator[simpy.Event]
        tick = self.config.keygen_tick
        for n in itertools.count(1):
            at = n * tick
            if at >= self.duration - _EPSILON:
                return

            yield self._at(at)
            self._step(KEYGEN_TICK)
            self.network.keygen(at - self._last_tick)
            self._last_tick = at

    def _every(self, interval, kind, handler):  # type: (float, str, Callable) -> Iterator[simpy.Event]
        for n in itertools.count(1):
            at = n * interval
            if at >= self.duration:
                return

            yield self._at(at)
            self._dispatch(kind, handler)

    def _contract(self, circuit):  # type: (VirtualCircuit) -> Iterator[simpy.Event]
        """
        Paces a guaranteed circuit: bits_per_period / key_block_length
        session keys per period, evenly spaced.
        """
        service = circuit.service
        interval = circuit.key_block_length * service.period / service.bits_per_period
        start = self.env.now
        for n in itertools.count(1):
            at = start + n * interval
            if at >= self.duration:
                return

            yield self._at(at)
            if circuit.is_closed:
                return

            self._dispatch(EMISSION, self.network.emit, circuit)

    def _requests(self, circuit, demand):  # type: (VirtualCircuit, DemandSpec) -> Iterator[simpy.Event]
        """
        Session-key requests of a best-effort application, measured from
        the moment its circuit is first active. Without a traffic pattern
        the application asks at its contracted average rate.
        """
        for at in self._request_times(circuit, demand):
            if at >= self.duration:
                return

            yield self._at(at)
            if circuit.is_closed:
                return

            self._dispatch(APP_REQUEST, self.network.app_request, circuit)

    def _request_times(self, circuit, demand):  # type: (VirtualCircuit, DemandSpec) -> Iterator[float]
        start = self.env.now
        traffic = demand.traffic or {"kind": "periodic", "interval": 1.0 / circuit.service.lambda_k}

        if traffic["kind"] == BURST:
            for offset in sorted(traffic["times"]):
                yield start + offset

            return

        if traffic["kind"] == POISSON:
            rng = self.network.streams.arrivals(demand.demand_id)
            at = start
            while True:
                at += rng.exponential(1.0 / traffic["rate"])
                yield at

        for n in itertools.count(1):
            yield start + n * traffic["interval"]
