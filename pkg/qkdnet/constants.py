# Link model
DEFAULT_QBER_THRESHOLD = 0.11
MAX_QBER = 0.5

# Key stores
DEFAULT_KEYSTORE_CAPACITY = 10 ** 8
DEFAULT_INITIAL_FILL_BITS = 0

# Q3P link layer
DEFAULT_AUTH_TAG_KEY_BITS = 128
MIN_AUTH_TAG_KEY_BITS = 8
MAX_AUTH_TAG_KEY_BITS = 512
DEFAULT_MAX_FRAME_PAYLOAD_BITS = 8192
DEFAULT_FLOW_CONTROL_WINDOW = 64
DEFAULT_CHANNEL_LATENCY = 0.001
CONTROL_CIRCUIT = "control"

# Routing
DEFAULT_W_LOAD = 1.0
DEFAULT_W_CAP = 1.0
DEFAULT_R_REF = 1e4
DEFAULT_K_PATHS = 2
DEFAULT_FLOOD_DELAY = 0.05
DEFAULT_ADVERTISE_INTERVAL = 1.0
DEFAULT_ROUTING_SNAPSHOT_INTERVAL = 0.0

# Admission
DEFAULT_ADMISSION_FACTOR = 0.9

# Simulation
DEFAULT_KEYGEN_TICK = 0.01
DEFAULT_SAMPLE_INTERVAL = 1.0
TIME_PRECISION = 9

# Priorities, lower departs first.
PRIORITY_GUARANTEED = 0
PRIORITY_BEST_EFFORT = 1

# Trace verbosity
TRACE_NONE = "none"
TRACE_CIRCUIT = "circuit"
TRACE_FRAME = "frame"
TRACE_LEVELS = (TRACE_NONE, TRACE_CIRCUIT, TRACE_FRAME)
