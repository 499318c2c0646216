class QkdnetException(Exception):

    pass


class InsufficientKey(QkdnetException):

    message = "Key store {} holds {} bits, {} requested."

    def __init__(self, link_id, available, requested):
        self.link_id = link_id
        self.available = available
        self.requested = requested

        super(InsufficientKey, self).__init__(
            self.message.format(link_id, available, requested)
        )


class UnknownBlock(QkdnetException):

    message = "Key block {} was never issued by key store {} or was already claimed."

    def __init__(self, block_id, link_id):
        super(UnknownBlock, self).__init__(self.message.format(block_id, link_id))


class InvalidLinkProfile(ValueError):

    message = "Invalid link profile: {}"

    def __init__(self, reason):
        super(InvalidLinkProfile, self).__init__(self.message.format(reason))
