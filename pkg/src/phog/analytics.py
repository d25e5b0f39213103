"""Closed-form and moment-ODE theory for the single-mode model.

Two dimensionless groups organise the dynamics: ``X = gamma3 * n0^2 * t``
sets the reachable photon-number squeezing and ``Y = gamma1/(gamma3 n0^2)``
the tolerable linear loss.  In the continuous (Gaussian) approximation the
mean and Mandel parameter obey

    <n>(X) = n0 / sqrt(1 + 2X)
    Q(X)   = (4/5) * ((1 + 2X)^(-5/2) - 1)

so Q falls from 0 to the pure-NCL floor of -4/5.  The normalized central
moments zeta2 = <dn^2>/mu and zeta3 = <dn^3>/mu follow closed leading-order
equations whose fixed points give the stationary Q and skewness for each
loss channel.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

__all__ = [
    "UniversalParams",
    "MomentSet",
    "ZetaTrajectory",
    "q_of_x",
    "n_of_x",
    "q_ode",
    "universal_params",
    "zeta_moment_odes",
    "zeta2_fixed_point",
    "zeta3_fixed_point",
]


@dataclass(frozen=True)
class UniversalParams:
    """Dimensionless design parameters of a device run."""

    X: float
    Y: float

    def __post_init__(self) -> None:
        if self.X < 0 or self.Y < 0:
            raise ValueError("X and Y must be nonnegative")


def universal_params(
    gamma1: float, gamma3: float, n0: float, t_fix: float
) -> UniversalParams:
    """X = gamma3 n0^2 t_fix and Y = gamma1/(gamma3 n0^2)."""
    if gamma3 <= 0:
        raise ValueError("Y undefined for gamma3 = 0")
    scale = gamma3 * n0**2
    return UniversalParams(X=scale * t_fix, Y=gamma1 / scale)


def q_of_x(x):
    """Mandel parameter of the pure-NCL Gaussian solution; Q(0)=0, Q(inf)=-4/5."""
    x = np.asarray(x, dtype=float)
    q = 0.8 * ((1.0 + 2.0 * x) ** (-2.5) - 1.0)
    return float(q) if q.ndim == 0 else q


def n_of_x(n0: float, x):
    """Mean photon number of the pure-NCL continuous solution."""
    x = np.asarray(x, dtype=float)
    n = n0 / np.sqrt(1.0 + 2.0 * x)
    return float(n) if n.ndim == 0 else n


def q_ode(
    gamma1: float,
    gamma2: float,
    gamma3: float,
    n_path,
    q0: float,
    t_grid: np.ndarray,
    rtol: float = 1e-10,
) -> np.ndarray:
    """Integrate dQ/dt = -g1 Q - 2 g2 <n> (3Q+1) - g3 <n>^2 (5Q+4).

    ``n_path`` is either a callable t -> <n>(t) or a pair of arrays
    ``(t, n)`` interpolated linearly.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if callable(n_path):
        n_of_t = n_path
    else:
        t_ref, n_ref = (np.asarray(a, dtype=float) for a in n_path)
        n_of_t = lambda t: np.interp(t, t_ref, n_ref)  # noqa: E731

    def rhs(t, y):
        n = n_of_t(t)
        return [
            -gamma1 * y[0]
            - 2.0 * gamma2 * n * (3.0 * y[0] + 1.0)
            - gamma3 * n**2 * (5.0 * y[0] + 4.0)
        ]

    sol = solve_ivp(
        rhs, (t_grid[0], t_grid[-1]), [q0], t_eval=t_grid, rtol=rtol, atol=1e-14
    )
    if not sol.success:
        raise RuntimeError(f"Q integration failed: {sol.message}")
    return sol.y[0]


@dataclass
class MomentSet:
    """Normalized central moments of the photon-number distribution."""

    mu: float
    zeta2: float
    zeta3: float
    zeta4: float = float("nan")

    def __post_init__(self) -> None:
        if self.mu < 0:
            raise ValueError("mu must be nonnegative")
        if self.zeta2 < 0:
            raise ValueError("zeta2 must be nonnegative")

    @property
    def q(self) -> float:
        return self.zeta2 - 1.0

    @property
    def skewness(self) -> float:
        return self.zeta3 / (np.sqrt(self.mu) * self.zeta2**1.5)

    @property
    def excess_kurtosis(self) -> float:
        return self.zeta4 / (np.sqrt(self.mu) * self.zeta2**2)

    @classmethod
    def coherent(cls, n0: float) -> "MomentSet":
        return cls(mu=n0, zeta2=1.0, zeta3=1.0, zeta4=1.0 / np.sqrt(n0))


def zeta2_fixed_point(gamma1: float, gamma2: float, gamma3: float, mu: float) -> float:
    """Stationary zeta2 at frozen mu: 1, 2/3 and 1/5 for the pure channels."""
    num = gamma1 + 4.0 * gamma2 * mu + gamma3 * mu**2
    den = gamma1 + 6.0 * gamma2 * mu + 5.0 * gamma3 * mu**2
    return num / den


def zeta3_fixed_point(
    gamma1: float, gamma2: float, gamma3: float, mu: float, zeta2: float
) -> float:
    """Stationary zeta3 at frozen (mu, zeta2) from the leading-order equation."""
    num = (
        gamma1 * (3.0 * zeta2 - 1.0)
        + 4.0 * gamma2 * mu * (-2.0 + 6.0 * zeta2 - 3.0 * zeta2**2)
        + gamma3 * mu**2 * (-1.0 + 9.0 * zeta2 - 18.0 * zeta2**2)
    )
    den = 2.0 * gamma1 + 10.0 * gamma2 * mu + 8.0 * gamma3 * mu**2
    return num / den


@dataclass
class ZetaTrajectory:
    """Solution of the leading-order (mu, zeta2, zeta3) system."""

    t: np.ndarray
    mu: np.ndarray
    zeta2: np.ndarray
    zeta3: np.ndarray
    zeta2_asymptote: np.ndarray
    zeta3_asymptote: np.ndarray
    low_mu_warning: bool

    @property
    def q(self) -> np.ndarray:
        return self.zeta2 - 1.0

    @property
    def skewness(self) -> np.ndarray:
        return self.zeta3 / (np.sqrt(self.mu) * self.zeta2**1.5)

    def moments(self, k: int) -> MomentSet:
        return MomentSet(mu=self.mu[k], zeta2=self.zeta2[k], zeta3=self.zeta3[k])


def zeta_moment_odes(
    initial: MomentSet,
    gamma1: float,
    gamma2: float,
    gamma3: float,
    t_grid: np.ndarray,
    mu_validity: float = 20.0,
    rtol: float = 1e-10,
) -> ZetaTrajectory:
    """Integrate the leading-order moment system for mu >> 1.

    The mean couples to zeta2, zeta3 through the Gaussian closure
    <n^2> = mu^2 + zeta2 mu and <n^3> = mu^3 + 3 zeta2 mu^2 + zeta3 mu;
    the zeta equations keep only their printed leading-order terms.
    """
    t_grid = np.asarray(t_grid, dtype=float)

    def rhs(t, y):
        mu, z2, z3 = y
        mu = max(mu, 0.0)
        n2 = mu**2 + z2 * mu
        n3 = mu**3 + 3.0 * z2 * mu**2 + z3 * mu
        dmu = (
            -gamma1 * mu
            - 2.0 * gamma2 * (n2 - mu)
            - gamma3 * (n3 - 2.0 * n2 + mu)
        )
        dz2 = (
            gamma1 * (1.0 - z2)
            + 2.0 * gamma2 * (2.0 - 3.0 * z2) * mu
            + gamma3 * (1.0 - 5.0 * z2) * mu**2
        )
        dz3 = (
            gamma1 * (-1.0 + 3.0 * z2 - 2.0 * z3)
            + 2.0 * gamma2 * (-4.0 + 12.0 * z2 - 6.0 * z2**2 - 5.0 * z3) * mu
            + gamma3 * (-1.0 + 9.0 * z2 - 18.0 * z2**2 - 8.0 * z3) * mu**2
        )
        return [dmu, dz2, dz3]

    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        [initial.mu, initial.zeta2, initial.zeta3],
        t_eval=t_grid,
        rtol=rtol,
        atol=1e-12,
        method="LSODA",
    )
    if not sol.success:
        raise RuntimeError(f"moment integration failed: {sol.message}")
    mu, z2, z3 = sol.y
    low_mu = bool(np.any(mu < mu_validity))
    if low_mu:
        warnings.warn(
            f"mean photon number dropped below {mu_validity}; "
            "the large-mu moment closure is unreliable there",
            stacklevel=2,
        )
    z2f = np.array([zeta2_fixed_point(gamma1, gamma2, gamma3, m) for m in mu])
    z3f = np.array(
        [
            zeta3_fixed_point(gamma1, gamma2, gamma3, m, z)
            for m, z in zip(mu, z2f)
        ]
    )
    return ZetaTrajectory(
        t=t_grid,
        mu=mu,
        zeta2=z2,
        zeta3=z3,
        zeta2_asymptote=z2f,
        zeta3_asymptote=z3f,
        low_mu_warning=low_mu,
    )
