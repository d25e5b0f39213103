"""Cumulant-closure machinery: generic moment equations and model builders."""

from .algebra import MomentPoly, OpPoly, closure3, closure4, closure_expectation, mode_op
from .moments import MomentState, MomentSystem
from .network import (
    NetworkTrajectory,
    multimode_linearized,
    network_system,
    phog_network_system,
    s_minus_weights,
    single_mode_system,
    two_mode_system,
)
from .single_mode import LinearizedTrajectory, single_mode_linearized

__all__ = [
    "MomentPoly",
    "OpPoly",
    "closure3",
    "closure4",
    "closure_expectation",
    "mode_op",
    "MomentState",
    "MomentSystem",
    "NetworkTrajectory",
    "multimode_linearized",
    "network_system",
    "phog_network_system",
    "s_minus_weights",
    "single_mode_system",
    "two_mode_system",
    "LinearizedTrajectory",
    "single_mode_linearized",
]
