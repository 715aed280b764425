"""Bounds on the parameters of continuous spontaneous localization."""

from .cslcore import STANDARD_LAMBDA, STANDARD_RC, CslParams, MassConfig, heating_rate, reduction_rate
from .results import ChannelResult
from .units import CONST, Qty, q

__version__ = "0.1.0"

__all__ = [
    "CONST",
    "ChannelResult",
    "CslParams",
    "MassConfig",
    "Qty",
    "STANDARD_LAMBDA",
    "STANDARD_RC",
    "heating_rate",
    "q",
    "reduction_rate",
]
