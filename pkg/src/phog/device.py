"""Device parameters and the derived rates of the model hierarchy.

The waveguide network couples two signal modes ``a`` and ``b`` to a hub
guide ``c0`` which leaks into a chain of tail guides.  Everything the
reduced models need -- the collective coupling ``G``, the fast-mode decay
``Gamma``, the two-photon loss ``gamma2``, the nonlinear coherent loss
``gamma3`` and the Kerr-induced coefficients ``sigma1``..``sigma5`` -- is
computed here in closed form.  All rates are per unit propagation length
(1/m); dimensionless figure-style runs simply measure every rate in units
of a chosen scale rate ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

__all__ = [
    "OPTIMAL_RATIO",
    "DeviceParams",
    "DerivedRates",
    "DegenerateDeviceError",
    "derived_rates",
    "optimal_coupling_ratio",
    "collective_amplitudes",
    "signal_amplitudes",
    "device_for_scaled_run",
]

#: Coupling ratio g_b/g_a that maximises the nonlinear coherent loss rate.
OPTIMAL_RATIO = math.sqrt(2.0) - 1.0


class DegenerateDeviceError(ValueError):
    """Raised when both signal couplings vanish (G = 0)."""


@dataclass(frozen=True)
class DeviceParams:
    """Physical couplings and loss rates of the waveguide network.

    Parameters
    ----------
    g_a, g_b : float
        Couplings of the signal modes to the hub guide [1/m]; ``g_a > 0``.
    kerr_U : float
        Self-Kerr constant ``U`` of each guide [1/m].
    gamma1 : float
        Linear (scattering) loss rate common to every guide [1/m].
    gamma_c : float or None
        Effective decay rate of the hub mode into the tail [1/m].  When
        ``None`` the standard tail estimate ``4*G`` is used.
    tail_couplings : tuple of float
        Nearest-neighbour couplings ``g_1..g_N`` along the tail [1/m].
    tail_length : int or None
        Number of tail guides ``N``; defaults to ``len(tail_couplings)``.
    """

    g_a: float
    g_b: float
    kerr_U: float = 0.0
    gamma1: float = 0.0
    gamma_c: float | None = None
    tail_couplings: tuple[float, ...] = ()
    tail_length: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "tail_couplings", tuple(self.tail_couplings))
        if self.tail_length is None:
            object.__setattr__(self, "tail_length", len(self.tail_couplings))
        if self.g_a <= 0:
            raise ValueError(f"g_a must be positive, got {self.g_a}")
        for name in ("g_b", "kerr_U", "gamma1"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.gamma_c is not None and self.gamma_c < 0:
            raise ValueError("gamma_c must be nonnegative")
        if any(g < 0 for g in self.tail_couplings):
            raise ValueError("tail couplings must be nonnegative")
        if self.tail_length != len(self.tail_couplings):
            raise ValueError(
                f"tail_length={self.tail_length} but "
                f"{len(self.tail_couplings)} tail couplings were given"
            )

    @property
    def G(self) -> float:
        """Collective coupling sqrt(g_a^2 + g_b^2)."""
        return math.hypot(self.g_a, self.g_b)

    @property
    def ratio(self) -> float:
        """Coupling ratio x = g_b / g_a."""
        return self.g_b / self.g_a

    def gamma_c_effective(self) -> float:
        """Tail decay rate, defaulting to the reservoir estimate 4*G."""
        return 4.0 * self.G if self.gamma_c is None else self.gamma_c


@dataclass(frozen=True)
class DerivedRates:
    """Closed-form rates of the reduced two- and single-mode models.

    ``Gamma`` is the decay rate of the fast symmetric collective mode,
    ``gamma2``/``gamma3`` the effective two-photon and nonlinear coherent
    loss rates of the surviving antisymmetric mode, and ``sigma1``..
    ``sigma5`` the coefficients of the residual Kerr Hamiltonian.  Units
    follow the device (1/m or multiples of a scale rate).
    """

    G: float
    Gamma: float
    gamma2: float
    gamma3: float
    sigma1: float
    sigma2: float
    sigma3: float
    sigma4: float
    sigma5: float
    gamma1: float = 0.0
    gamma_total: float = field(default=0.0)  # hub-mode decay gamma1 + gamma_c


def derived_rates(device: DeviceParams) -> DerivedRates:
    """Compute every derived rate and coefficient from the device couplings.

    Raises
    ------
    DegenerateDeviceError
        If both couplings vanish, which leaves no collective mode.
    """
    g_a, g_b, U = device.g_a, device.g_b, device.kerr_U
    G = device.G
    if G == 0.0:
        raise DegenerateDeviceError("g_a = g_b = 0 leaves no collective mode")
    gamma = device.gamma1 + device.gamma_c_effective()
    if gamma <= 0.0:
        raise DegenerateDeviceError(
            "hub-mode decay gamma1 + gamma_c must be positive"
        )
    Gamma = 4.0 * G**2 / gamma
    denom = G**8 * (Gamma + device.gamma1)
    gagb = g_a * g_b
    gamma2 = 4.0 * U**2 * gagb**4 / denom
    gamma3 = 4.0 * U**2 * gagb**2 * (g_a**2 - g_b**2) ** 2 / denom
    sigma1 = U * (g_a**4 + g_b**4) / (2.0 * G**4)
    sigma2 = 4.0 * U * gagb**2 / G**4
    sigma3 = sigma2 / 4.0 - U / 2.0
    sigma4 = sigma2 / 4.0
    sigma5 = U * gagb * (g_a**2 - g_b**2) / G**4
    return DerivedRates(
        G=G,
        Gamma=Gamma,
        gamma2=gamma2,
        gamma3=gamma3,
        sigma1=sigma1,
        sigma2=sigma2,
        sigma3=sigma3,
        sigma4=sigma4,
        sigma5=sigma5,
        gamma1=device.gamma1,
        gamma_total=gamma,
    )


def optimal_coupling_ratio() -> float:
    """Coupling ratio sqrt(2) - 1 that maximises gamma3 at fixed g_a."""
    return OPTIMAL_RATIO


def collective_amplitudes(
    alpha_a: complex, alpha_b: complex, g_a: float, g_b: float
) -> tuple[complex, complex]:
    """Map signal-mode amplitudes to the (symmetric, antisymmetric) pair.

    ``s_plus = (g_a*alpha_a + g_b*alpha_b)/G`` decays fast;
    ``s_minus = (g_a*alpha_b - g_b*alpha_a)/G`` hosts the nonclassical
    state.  The map is unitary: ``|s+|^2 + |s-|^2 = |a|^2 + |b|^2``.
    """
    G = math.hypot(g_a, g_b)
    if G == 0.0:
        raise DegenerateDeviceError("g_a = g_b = 0 leaves no collective mode")
    s_plus = (g_a * alpha_a + g_b * alpha_b) / G
    s_minus = (g_a * alpha_b - g_b * alpha_a) / G
    return s_plus, s_minus


def signal_amplitudes(
    s_plus: complex, s_minus: complex, g_a: float, g_b: float
) -> tuple[complex, complex]:
    """Inverse of :func:`collective_amplitudes`."""
    G = math.hypot(g_a, g_b)
    if G == 0.0:
        raise DegenerateDeviceError("g_a = g_b = 0 leaves no collective mode")
    alpha_a = (g_a * s_plus - g_b * s_minus) / G
    alpha_b = (g_b * s_plus + g_a * s_minus) / G
    return alpha_a, alpha_b


def device_for_scaled_run(
    kerr_U: float,
    Gamma: float,
    gamma1: float = 0.0,
    ratio: float = OPTIMAL_RATIO,
) -> DeviceParams:
    """Build a device realising given (U, Gamma, gamma1) in scale-rate units.

    Figure-style runs prescribe the symmetric-mode decay ``Gamma`` rather
    than the couplings.  Choosing the tail estimate ``gamma_c = 4*G`` and
    solving ``Gamma = 4*G^2/(gamma1 + 4*G)`` for ``G`` fixes a consistent
    coupling magnitude for any requested ratio.
    """
    if Gamma <= 0:
        raise ValueError("Gamma must be positive")
    G = 0.5 * (Gamma + math.sqrt(Gamma**2 + Gamma * gamma1))
    g_a = G / math.hypot(1.0, ratio)
    return DeviceParams(
        g_a=g_a,
        g_b=ratio * g_a,
        kerr_U=kerr_U,
        gamma1=gamma1,
        gamma_c=4.0 * G,
    )
