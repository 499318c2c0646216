from qkdnet.runner import EXIT_INVALID
from qkdnet.runner import cmd_sweep
from qkdnet.sim import parse_range

from .command import Command


class SweepCommand(Command):
    """
    Runs a scenario over a range of parameter values.

    sweep
        {--scenario= : Scenario file (JSON).}
        {--param= : Parameter to vary, e.g. link.length, links.A-B.qber or admission_factor.}
        {--values= : Comma-separated values.}
        {--range= : Inclusive range start:stop:step.}
        {--seeds= : Comma-separated seeds, 0 by default.}
        {--out=results : Output directory.}
        {--jobs=1 : Number of runs executed in parallel.}
    """

    def execute_command(self):  # type: () -> int
        scenario = self.option("scenario")
        parameter = self.option("param")
        if not scenario or not parameter:
            self._error("The --scenario and --param options are required")

            return EXIT_INVALID

        try:
            values = self._values()
            seeds = [int(seed) for seed in _split(self.option("seeds"))]
            jobs = int(self.option("jobs"))
        except ValueError as e:
            self._error(str(e))

            return EXIT_INVALID

        if not values:
            self._error("Give the values to sweep with --values or --range")

            return EXIT_INVALID

        return cmd_sweep(
            scenario,
            parameter,
            values,
            seeds=seeds,
            out=self.option("out"),
            jobs=max(1, jobs),
            echo=self._echo,
            error=self._error,
        )

    def _values(self):
        if self.option("range"):
            return parse_range(self.option("range"))

        return [_number(value) for value in _split(self.option("values"))]


def _split(text):
    if not text:
        return []

    return [part.strip() for part in text.split(",") if part.strip()]


def _number(text):
    try:
        return int(text)
    except ValueError:
        return float(text)
