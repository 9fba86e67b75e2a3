"""Subcarrier-wave QKD link model: QBER and secure key rate under the collective beam-splitting attack."""

__version__ = "0.1.0"

from .errors import InvalidParameterError, UndefinedQBERError
from .states import SystemParams, SidebandState
from .detection import DetectorModel, SNSPD, APD
from .bsee import BseeChannel, binary_entropy, capacity, channel_from_system, qber
from .attack import holevo_cbs
from .keyrate import ECModel, Protocol, optimal_mu, secure_rate, sideband_mu

__all__ = [
    "InvalidParameterError",
    "UndefinedQBERError",
    "SystemParams",
    "SidebandState",
    "DetectorModel",
    "SNSPD",
    "APD",
    "BseeChannel",
    "binary_entropy",
    "capacity",
    "channel_from_system",
    "qber",
    "holevo_cbs",
    "ECModel",
    "Protocol",
    "optimal_mu",
    "secure_rate",
    "sideband_mu",
]
