"""Model builders for the cumulant-linearized moment dynamics.

Covers the full dissipatively coupled network (signal modes, hub, tail),
the reduced two-mode model in the collective basis, and the single-mode
model with its nonlinear jump operators.  All of them compile to the same
:class:`~phog.cumulant.moments.MomentSystem` machinery.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..device import DeviceParams, DerivedRates, derived_rates
from .algebra import OpPoly, mode_op
from .moments import MomentState, MomentSystem

__all__ = [
    "network_system",
    "phog_network_system",
    "two_mode_system",
    "single_mode_system",
    "s_minus_weights",
    "NetworkTrajectory",
    "multimode_linearized",
]


def network_system(
    coupling: np.ndarray,
    kerr: np.ndarray,
    loss: np.ndarray,
    labels: tuple[str, ...] | None = None,
) -> MomentSystem:
    """Moment system for linearly coupled Kerr modes with linear loss.

    ``coupling`` is the symmetric matrix of evanescent couplings g_kl,
    ``kerr`` the per-mode Kerr constants U_k, ``loss`` the per-mode linear
    loss rates.  Only third- and fourth-order closures arise here since
    every jump operator is linear.
    """
    coupling = np.asarray(coupling, dtype=float)
    m = coupling.shape[0]
    if coupling.shape != (m, m) or np.max(np.abs(coupling - coupling.T)) > 0:
        raise ValueError("coupling matrix must be square and symmetric")
    kerr = np.broadcast_to(np.asarray(kerr, dtype=float), (m,))
    loss = np.broadcast_to(np.asarray(loss, dtype=float), (m,))

    ham = OpPoly()
    for i in range(m):
        for j in range(i + 1, m):
            if coupling[i, j] != 0.0:
                ham = ham + coupling[i, j] * (
                    mode_op(i, True) @ mode_op(j) + mode_op(j, True) @ mode_op(i)
                )
    for i in range(m):
        if kerr[i] != 0.0:
            ham = ham + (0.5 * kerr[i]) * (
                mode_op(i, True) @ mode_op(i, True) @ mode_op(i) @ mode_op(i)
            )
    channels = [(loss[i], mode_op(i)) for i in range(m) if loss[i] > 0]
    return MomentSystem(m, ham, channels, labels)


def phog_network_system(device: DeviceParams) -> MomentSystem:
    """Full-network moment system: modes (a, b, c0, c1..cN)."""
    n = device.tail_length
    m = 3 + n
    coupling = np.zeros((m, m))
    coupling[0, 2] = coupling[2, 0] = device.g_a
    coupling[1, 2] = coupling[2, 1] = device.g_b
    for j, g in enumerate(device.tail_couplings):
        coupling[2 + j, 3 + j] = coupling[3 + j, 2 + j] = g
    labels = ("a", "b", "c0") + tuple(f"c{j + 1}" for j in range(n))
    return network_system(
        coupling, device.kerr_U, np.full(m, device.gamma1), labels
    )


def s_minus_weights(device: DeviceParams, n_modes: int) -> np.ndarray:
    """Weights of the antisymmetric collective mode in network mode order."""
    w = np.zeros(n_modes, dtype=complex)
    g = device.G
    w[0] = -device.g_b / g
    w[1] = device.g_a / g
    return w


def two_mode_system(rates: DerivedRates) -> MomentSystem:
    """Two-mode model in the collective basis, modes (s+, s-)."""
    sp, sm = 0, 1
    n_plus = mode_op(sp, True) @ mode_op(sp)
    n_minus = mode_op(sm, True) @ mode_op(sm)
    ham = (
        rates.sigma1 * (n_plus @ n_plus + n_minus @ n_minus)
        + rates.sigma2 * (n_plus @ n_minus)
        + rates.sigma3 * (n_plus + n_minus)
    )
    hop = mode_op(sp, True) @ mode_op(sm)
    h_int = rates.sigma4 * (hop @ hop)
    one = OpPoly({(): 1.0})
    h_int = h_int + rates.sigma5 * (hop @ (n_minus - n_plus - one))
    ham = ham + h_int + h_int.adjoint()
    channels = [
        (rates.Gamma + rates.gamma1, mode_op(sp)),
        (rates.gamma1, mode_op(sm)),
    ]
    return MomentSystem(2, ham, channels, ("s+", "s-"))


def single_mode_system(
    gamma1: float,
    gamma2: float,
    gamma3: float,
    sigma1: float,
    sigma3: float,
) -> MomentSystem:
    """Single collective mode with linear, two-photon and NCL channels.

    The nonlinear jump operators raise the closure order to six; this is
    the independently derived counterpart of the printed linearized
    system.
    """
    s = mode_op(0)
    n = mode_op(0, True) @ mode_op(0)
    ham = sigma1 * (n @ n) + sigma3 * n
    channels = [
        (gamma1, s),
        (gamma2, s @ s),
        (gamma3, n @ s),
    ]
    return MomentSystem(1, ham, channels, ("s-",))


@dataclass
class NetworkTrajectory:
    """Collective-mode observables of a linearized network run."""

    t: np.ndarray
    n_minus: np.ndarray
    q_minus: np.ndarray
    states: list[MomentState]


def multimode_linearized(
    device: DeviceParams,
    initial_amplitudes,
    t_grid: np.ndarray,
    rtol: float = 1e-8,
    atol: float = 1e-10,
) -> NetworkTrajectory:
    """Evolve the full network from coherent amplitudes per mode.

    Returns the antisymmetric-mode photon number and Mandel Q along the
    propagation, computed through the collective transform and the
    fourth-order closure.
    """
    system = phog_network_system(device)
    alphas = np.asarray(initial_amplitudes, dtype=complex)
    if alphas.size != system.n_modes:
        raise ValueError(
            f"expected {system.n_modes} amplitudes, got {alphas.size}"
        )
    initial = MomentState.coherent(system.labels, alphas)
    states = system.integrate(initial, t_grid, rtol=rtol, atol=atol)
    w = s_minus_weights(device, system.n_modes)
    n_minus = np.array([s.collective_photon(w) for s in states])
    q_minus = np.array(
        [
            s.collective_mandel_q(w) if n > 1e-12 else np.nan
            for s, n in zip(states, n_minus)
        ]
    )
    return NetworkTrajectory(
        t=np.asarray(t_grid, dtype=float),
        n_minus=n_minus,
        q_minus=q_minus,
        states=states,
    )
