import json

from collections import namedtuple
from typing import IO
from typing import Any
from typing import Dict
from typing import List
from typing import Optional

from qkdnet.constants import TRACE_CIRCUIT
from qkdnet.constants import TRACE_FRAME
from qkdnet.constants import TRACE_LEVELS
from qkdnet.constants import TRACE_NONE


KEYGEN_TICK = "keygen_tick"
APP_REQUEST = "app_request"
PACKET_ARRIVAL = "packet_arrival"
LINK_STATE_FLOOD = "link_state_flood"
ATTACK = "attack"
RESTORE = "restore"
METRIC_SAMPLE = "metric_sample"
CHANNEL_CHANGE = "channel_change"
DEMAND = "demand"
ACTIVATION = "activation"
EMISSION = "emission"
STOP = "stop"
ADVERTISEMENT = "advertisement"
ROUTING_SNAPSHOT = "routing_snapshot"


class Event(namedtuple("Event", "time ordinal kind")):
    """
    A processed simulation event. Events are handled in increasing
    (time, ordinal) order and ordinals are never reused.
    """

    __slots__ = ()


# Trace record kinds and the level they need.
_LEVELS = {
    "frame": TRACE_FRAME,
    "delivery": TRACE_FRAME,
    "drop": TRACE_FRAME,
}


class TraceSink(object):
    """
    Collects trace records as JSON lines.

    Records are written to the given stream if any, and kept in memory
    otherwise.
    """

    def __init__(self, level=TRACE_CIRCUIT, stream=None):  # type: (str, Optional[IO[str]]) -> None
        if level not in TRACE_LEVELS:
            raise ValueError('Unknown trace level "{}"'.format(level))

        self.level = level
        self._stream = stream
        self.records = []  # type: List[Dict[str, Any]]

    def wants(self, kind):  # type: (str) -> bool
        if self.level == TRACE_NONE:
            return False

        return _LEVELS.get(kind, TRACE_CIRCUIT) == TRACE_CIRCUIT or self.level == TRACE_FRAME

    def emit(self, event, kind, **fields):  # type: (Event, str, **Any) -> None
        if not self.wants(kind):
            return

        record = {"t": event.time, "ordinal": event.ordinal, "kind": kind}
        record.update(fields)

        if self._stream is not None:
            self._stream.write(json.dumps(record, sort_keys=True))
            self._stream.write("\n")
        else:
            self.records.append(record)
