from qkdnet.constants import TRACE_NONE
from qkdnet.runner import EXIT_INVALID
from qkdnet.runner import RunConfig
from qkdnet.runner import cmd_run

from .command import Command


class RunCommand(Command):
    """
    Runs a scenario and writes its metrics.

    run
        {--scenario= : Scenario file (JSON).}
        {--seed= : Overrides the scenario seed.}
        {--out=results : Output directory.}
        {--trace=none : Trace level: none, circuit or frame.}
        {--sample-interval= : Metric sample interval in seconds, 0 disables sampling.}
    """

    def execute_command(self):  # type: () -> int
        scenario = self.option("scenario")
        if not scenario:
            self._error("The --scenario option is required")

            return EXIT_INVALID

        try:
            seed = self.option("seed")
            interval = self.option("sample-interval")
            config = RunConfig(
                scenario,
                self.option("out"),
                seed=None if seed is None else int(seed),
                trace=self.option("trace") or TRACE_NONE,
                sample_interval=None if interval is None else float(interval),
            )
        except ValueError as e:
            self._error(str(e))

            return EXIT_INVALID

        return cmd_run(config, echo=self._echo, error=self._error)
