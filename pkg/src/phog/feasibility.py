"""Device feasibility: platform parameters to model rates and figures of merit.

Translates waveguide-platform data (nonlinear index or fiber-style
nonlinear coefficient, loss in dB, pulse duration) into the Kerr constant
``U`` and linear loss ``gamma1`` of the model, then chains through the
derived rates to the universal parameters: the photon budget at the
loss-tolerance boundary Y = 1, the corresponding pulse energy, and the
squeezing Q(X) reachable over a given device length.

Three platform presets ship as editable JSON data.  Following the
published estimate, the hub-mode total decay defaults to ``4*G``, so the
symmetric-mode decay evaluates to ``G`` itself; pass ``gamma_c`` to
override.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from importlib import resources

from scipy.constants import c as C_LIGHT
from scipy.constants import hbar as HBAR

from .analytics import q_of_x, universal_params
from .device import OPTIMAL_RATIO, DeviceParams, DerivedRates, derived_rates

__all__ = [
    "PlatformSpec",
    "FeasibilityReport",
    "kerr_constant",
    "loss_rate",
    "feasibility_device",
    "feasibility_report",
    "load_preset",
    "preset_names",
]


@dataclass(frozen=True)
class PlatformSpec:
    """Optical platform data; exactly one nonlinearity route must be given.

    Either the pair (``n2_m2_per_W``, ``A_eff_m2``) or the fiber-style
    coefficient ``gamma_nl_per_W_m`` describes the Kerr response.
    """

    name: str
    lambda_m: float
    n_eff: float
    T_eff_s: float
    loss_db_per_m: float
    n2_m2_per_W: float | None = None
    A_eff_m2: float | None = None
    gamma_nl_per_W_m: float | None = None
    default_length_m: float | None = None

    def __post_init__(self) -> None:
        bulk_route = self.n2_m2_per_W is not None and self.A_eff_m2 is not None
        fiber_route = self.gamma_nl_per_W_m is not None
        if bulk_route == fiber_route:
            raise ValueError(
                "give exactly one of (n2, A_eff) or gamma_nl for the "
                "nonlinearity"
            )
        for field_name in ("lambda_m", "n_eff", "T_eff_s"):
            if getattr(self, field_name) <= 0:
                raise ValueError(f"{field_name} must be positive")
        if self.loss_db_per_m < 0:
            raise ValueError("loss must be nonnegative")

    @property
    def omega(self) -> float:
        """Carrier angular frequency [rad/s]."""
        return 2.0 * math.pi * C_LIGHT / self.lambda_m

    @property
    def photon_energy_J(self) -> float:
        return HBAR * self.omega


def kerr_constant(platform: PlatformSpec) -> float:
    """Kerr constant U [1/m] from either nonlinearity route.

    Bulk route: ``U = 2 hbar w (w / V_eff) (n2 / n_eff)`` with
    ``V_eff = A_eff * c * T_eff`` (pulse length in vacuum).  Fiber route:
    ``U = 2 hbar w gamma_nl / (T_eff n_eff)``.  The two agree identically
    when ``gamma_nl = w n2 / (c A_eff)``.
    """
    w = platform.omega
    if platform.gamma_nl_per_W_m is not None:
        return 2.0 * HBAR * w * platform.gamma_nl_per_W_m / (
            platform.T_eff_s * platform.n_eff
        )
    v_eff = platform.A_eff_m2 * C_LIGHT * platform.T_eff_s
    return 2.0 * HBAR * w * (w / v_eff) * (platform.n2_m2_per_W / platform.n_eff)


def loss_rate(loss_db_per_m: float) -> float:
    """Linear power loss in dB/m converted to the field rate gamma1 [1/m]."""
    if loss_db_per_m < 0:
        raise ValueError("loss must be nonnegative")
    return math.log(10.0) / 10.0 * loss_db_per_m


def feasibility_device(
    platform: PlatformSpec,
    g_a: float,
    ratio: float = OPTIMAL_RATIO,
    gamma_c: float | None = None,
) -> DeviceParams:
    """Device realisation on a platform; hub total decay defaults to 4*G."""
    u = kerr_constant(platform)
    gamma1 = loss_rate(platform.loss_db_per_m)
    g = g_a * math.hypot(1.0, ratio)
    if gamma_c is None:
        # published reservoir estimate for the hub mode's total decay
        gamma_c = max(4.0 * g - gamma1, 0.0)
    return DeviceParams(
        g_a=g_a, g_b=ratio * g_a, kerr_U=u, gamma1=gamma1, gamma_c=gamma_c
    )


@dataclass
class FeasibilityReport:
    """Full design chain for one platform and device length."""

    platform: str
    length_m: float
    g_a: float
    ratio: float
    kerr_U: float
    gamma1: float
    Gamma: float
    gamma2: float
    gamma3: float
    n0_at_y1: float
    pulse_energy_J: float
    X: float
    Y: float
    predicted_q: float

    def as_dict(self) -> dict:
        return asdict(self)

    def lines(self) -> list[str]:
        e_pj = self.pulse_energy_J * 1e12
        return [
            f"platform           : {self.platform}",
            f"device length      : {self.length_m * 1e3:.3g} mm",
            f"g_a / g_b          : {self.g_a:.4g} / {self.ratio * self.g_a:.4g} 1/m",
            f"Kerr U             : {self.kerr_U:.4g} 1/m",
            f"gamma1             : {self.gamma1:.4g} 1/m",
            f"Gamma (s+ decay)   : {self.Gamma:.4g} 1/m",
            f"gamma2 / gamma3    : {self.gamma2:.4g} / {self.gamma3:.4g} 1/m",
            f"n0 at Y=1          : {self.n0_at_y1:.4g} photons",
            f"pulse energy (Y=1) : {e_pj:.4g} pJ",
            f"X over the device  : {self.X:.4g}",
            f"predicted Mandel Q : {self.predicted_q:.4g}",
        ]


def feasibility_report(
    platform: PlatformSpec,
    g_a: float,
    length_m: float | None = None,
    ratio: float = OPTIMAL_RATIO,
    gamma_c: float | None = None,
    n0: float | None = None,
) -> FeasibilityReport:
    """Chain platform -> device -> rates -> universal parameters -> Q.

    ``n0`` defaults to the Y = 1 photon budget ``sqrt(gamma1/gamma3)``.
    """
    if length_m is None:
        length_m = platform.default_length_m
        if length_m is None:
            raise ValueError("no device length given and preset has no default")
    device = feasibility_device(platform, g_a, ratio, gamma_c)
    rates: DerivedRates = derived_rates(device)
    if rates.gamma3 <= 0:
        raise ValueError("gamma3 = 0: symmetric coupling has no NCL")
    n0_y1 = math.sqrt(rates.gamma1 / rates.gamma3) if rates.gamma1 > 0 else float("inf")
    n_used = n0 if n0 is not None else n0_y1
    up = universal_params(rates.gamma1, rates.gamma3, n_used, length_m)
    return FeasibilityReport(
        platform=platform.name,
        length_m=length_m,
        g_a=g_a,
        ratio=ratio,
        kerr_U=device.kerr_U,
        gamma1=rates.gamma1,
        Gamma=rates.Gamma,
        gamma2=rates.gamma2,
        gamma3=rates.gamma3,
        n0_at_y1=n0_y1,
        pulse_energy_J=n_used * platform.photon_energy_J,
        X=up.X,
        Y=up.Y,
        predicted_q=q_of_x(up.X),
    )


def _load_preset_data() -> dict:
    text = resources.files("phog.data").joinpath("platform_presets.json").read_text()
    return json.loads(text)


def preset_names() -> list[str]:
    return sorted(_load_preset_data())


def load_preset(name: str) -> PlatformSpec:
    """Load one of the shipped platform presets by name."""
    data = _load_preset_data()
    if name not in data:
        raise KeyError(f"unknown preset {name!r}; have {sorted(data)}")
    return PlatformSpec(**data[name])
