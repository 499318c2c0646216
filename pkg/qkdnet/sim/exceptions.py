from qkdnet.exceptions import QkdnetException


class ValidationError(QkdnetException, ValueError):
    """
    A malformed scenario. path locates the offending field,
    for instance "topology.links[2].endpoints".
    """

    message = "{}: {}"

    def __init__(self, path, reason):
        self.path = path
        self.reason = reason

        super(ValidationError, self).__init__(self.message.format(path or "<root>", reason))

    def __reduce__(self):
        return self.__class__, (self.path, self.reason)


class UnknownParameter(ValidationError):

    message = 'Unknown sweep parameter "{}": {}'

    def __init__(self, name, reason="no such config or link field"):
        self.name = name

        super(UnknownParameter, self).__init__(name, reason)

    def __reduce__(self):
        return self.__class__, (self.name, self.reason)
