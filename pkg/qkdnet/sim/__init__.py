from .engine import Simulator
from .events import Event
from .events import TraceSink
from .exceptions import UnknownParameter
from .exceptions import ValidationError
from .metrics import Metrics
from .scenario import Scenario
from .scenario import from_dict
from .scenario import load
from .streams import Streams
from .sweep import parse_range
from .sweep import sweep
