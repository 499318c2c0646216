from qkdnet.runner import EXIT_INVALID
from qkdnet.runner import cmd_validate

from .command import Command


class ValidateCommand(Command):
    """
    Checks a scenario without running it.

    validate
        {--scenario= : Scenario file (JSON).}
    """

    def execute_command(self):  # type: () -> int
        scenario = self.option("scenario")
        if not scenario:
            self._error("The --scenario option is required")

            return EXIT_INVALID

        return cmd_validate(scenario, echo=self._echo, error=self._error)
