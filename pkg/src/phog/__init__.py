"""Simulation toolkit for a dissipatively coupled nonlinear waveguide network.

The package implements the full model hierarchy of the device: exact
Lindblad propagation of the network and its reduced models, diagonal
photon-number dynamics, closed-form moment theory, cumulant-linearized
moment systems, Monte Carlo wavefunction trajectories, classical coupled
pulse propagation, and a feasibility calculator, all driven by a scenario
CLI (``phog``).
"""

from .device import (
    OPTIMAL_RATIO,
    DegenerateDeviceError,
    DeviceParams,
    DerivedRates,
    collective_amplitudes,
    derived_rates,
    device_for_scaled_run,
    optimal_coupling_ratio,
    signal_amplitudes,
)

__version__ = "0.1.0"

__all__ = [
    "OPTIMAL_RATIO",
    "DegenerateDeviceError",
    "DeviceParams",
    "DerivedRates",
    "collective_amplitudes",
    "derived_rates",
    "device_for_scaled_run",
    "optimal_coupling_ratio",
    "signal_amplitudes",
    "__version__",
]
