from .application import Application
from .application import main
