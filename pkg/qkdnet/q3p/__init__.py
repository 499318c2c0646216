from .channel import Channel
from .channel import ChannelState
from .channel import Reassembler
from .exceptions import AuthFailure
from .exceptions import LengthMismatch
from .exceptions import OutOfOrderFrame
from .exceptions import Q3pError
from .exceptions import WindowFull
from .frame import Q3pFrame
from .otp import auth_tag
from .otp import otp_encrypt
