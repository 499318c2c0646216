from qkdnet.exceptions import QkdnetException


class Q3pError(QkdnetException):

    pass


class LengthMismatch(Q3pError, ValueError):

    message = "One-time pad needs a key as long as the message ({} != {})."

    def __init__(self, message_length, key_length):
        super(LengthMismatch, self).__init__(
            self.message.format(message_length, key_length)
        )


class AuthFailure(Q3pError):

    message = "Authentication tag mismatch for frame {} on link {}."

    def __init__(self, frame_id, link_id):
        self.frame_id = frame_id
        self.link_id = link_id

        super(AuthFailure, self).__init__(self.message.format(frame_id, link_id))


class WindowFull(Q3pError):

    message = "Channel {} has {} of {} frames in flight, {} more requested."

    def __init__(self, link_id, in_flight, window, requested):
        super(WindowFull, self).__init__(
            self.message.format(link_id, in_flight, window, requested)
        )


class OutOfOrderFrame(Q3pError):

    message = "Frame {} received on link {} while expecting frame {}."

    def __init__(self, frame_id, link_id, expected):
        super(OutOfOrderFrame, self).__init__(
            self.message.format(frame_id, link_id, expected)
        )
