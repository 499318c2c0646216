from .cost import CostWeights
from .cost import link_cost
from .link_state import DOWN
from .link_state import UP
from .link_state import LinkStateRecord
from .service import RoutingService
from .table import Route
from .table import RoutingTable
from .table import best_path
from .table import compute_routes
