from .admission import INSUFFICIENT_CAPACITY
from .admission import NO_PATH
from .admission import Admission
from .admission import Rejection
from .admission import ReservationLedger
from .admission import Teardown
from .admission import auth_overhead_fraction
from .admission import reroute
from .circuit import ACTIVE
from .circuit import CLOSED
from .circuit import CONFORMING
from .circuit import ESTABLISHED
from .circuit import ESTABLISHING
from .circuit import NON_CONFORMING
from .circuit import REJECTED
from .circuit import REROUTED
from .circuit import REROUTING
from .circuit import TEARDOWN
from .circuit import KeyPacket
from .circuit import Notification
from .circuit import TokenBucket
from .circuit import VirtualCircuit
from .circuit import police
from .relay import Transit
from .relay import enqueue
from .relay import open_transit
from .relay import relay_hop
from .relay import seal
from .request import BEST_EFFORT
from .request import FORWARD_CIRCUIT
from .request import FORWARD_DESTINATION
from .request import GUARANTEED
from .request import BestEffort
from .request import GuaranteedRate
from .request import PathRequest
from .scheduler import PacketQueue
from .scheduler import QueuedPacket
from .scheduler import schedule
