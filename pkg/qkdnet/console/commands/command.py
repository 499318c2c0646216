import logging

from cleo import Command as BaseCommand


class Command(BaseCommand):
    """
    Base command: routes library logging to the console
    according to the requested verbosity.
    """

    def handle(self):  # type: () -> int
        self._configure_logging()

        return self.execute_command()

    def execute_command(self):  # type: () -> int
        raise NotImplementedError()

    def _echo(self, text):  # type: (str) -> None
        self.line(text)

    def _error(self, text):  # type: (str) -> None
        self.line_error(text, style="error")

    def _configure_logging(self):  # type: () -> None
        level = logging.WARNING
        if self.io.is_debug():
            level = logging.DEBUG
        elif self.io.is_very_verbose():
            level = logging.INFO

        logger = logging.getLogger("qkdnet")
        logger.setLevel(level)
        if not logger.handlers:
            handler = logging.StreamHandler()
            handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
            logger.addHandler(handler)
