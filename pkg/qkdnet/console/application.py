from cleo import Application as BaseApplication

from qkdnet.__version__ import __version__

from .commands.run import RunCommand
from .commands.sweep import SweepCommand
from .commands.validate import ValidateCommand


class Application(BaseApplication):
    def __init__(self):  # type: () -> None
        super(Application, self).__init__("qkdnet", __version__)

        for command in (RunCommand(), ValidateCommand(), SweepCommand()):
            self.add(command)


def main():  # type: () -> int
    return Application().run()
