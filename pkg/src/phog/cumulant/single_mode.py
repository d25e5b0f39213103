"""Closed linearized moment equations for the single collective mode.

The primary path integrates the published closed system for
(<s>, <s^dag>, <s^2>, <s^dag^2>, <n>) verbatim; the conjugate-moment
equations are taken as the Hermitian conjugates of their partners, which
is what the structure clearly intends.  A second path, selected with
``variant="derived"``, uses the generic cumulant engine instead.  The two
differ in the sign of the two-photon-loss contribution to the first-moment
equation (printed ``+gamma2`` versus ``-gamma2`` from the adjoint
dissipator); the exact diagonal solver arbitrates between them in the
acceptance suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .moments import MomentState
from .network import single_mode_system

__all__ = ["LinearizedTrajectory", "single_mode_linearized"]


@dataclass
class LinearizedTrajectory:
    """Moments and Mandel Q of a linearized single-mode run."""

    t: np.ndarray
    mean: np.ndarray  # <s>
    pair: np.ndarray  # <s^2>
    n_mean: np.ndarray  # <n>
    q: np.ndarray
    variant: str


def _coefficients(gamma1, gamma2, gamma3, sigma1, sigma3, variant):
    g2_sign = 1.0 if variant == "printed" else -1.0
    c1 = -gamma1 / 2.0 + 1j * (sigma1 + sigma3)
    c2 = g2_sign * gamma2 - gamma3 + 2j * sigma1
    c3 = -gamma1 - gamma2 - gamma3 + 4j * sigma1 + 2j * sigma3
    c4 = -2.0 * gamma2 - 5.0 * gamma3 + 4j * sigma1
    c5 = -2.0 * gamma2 - gamma3
    return c1, c2, c3, c4, c5


def _printed_rhs(y, gamma1, gamma3, c1, c2, c3, c4, c5):
    m, p, big_m, big_p, n = y
    # <s^dag s^2>, <s^dag s^3>, <s^dag^2 s^2> via the published closures
    dm = (
        c1 * m
        + c2 * (p * big_m + 2.0 * m * n - 2.0 * p * m**2)
        - 0.5
        * gamma3
        * (
            6.0 * p * n * big_m
            + 3.0 * m * big_p * big_m
            + 6.0 * m * n**2
            - 2.0 * big_p * m**3
            - 12.0 * n * p * m**2
            - 6.0 * big_m * p**2 * m
            + 6.0 * p**2 * m**3
        )
    )
    dbig_m = (
        c3 * big_m
        + c4 * (3.0 * n * big_m - 2.0 * p * m**3)
        - gamma3
        * (
            3.0 * big_p * big_m**2
            + 12.0 * n**2 * big_m
            - 2.0 * big_p * m**4
            - 12.0 * big_m * p**2 * m**2
            - 16.0 * n * p * m**3
            + 16.0 * p**2 * m**4
        )
    )
    dn = (
        -gamma1 * n
        + c5 * (big_p * big_m + 2.0 * n**2 - 2.0 * p**2 * m**2)
        - gamma3
        * (
            9.0 * big_p * n * big_m
            + 6.0 * n**3
            - 6.0 * big_p * p * m**3
            - 18.0 * n * p**2 * m**2
            - 6.0 * big_m * p**3 * m
            + 16.0 * p**3 * m**3
        )
    )
    # conjugate partners evolve as the Hermitian conjugates
    dp = np.conjugate(
        c1 * p.conjugate()
        + c2
        * (
            m.conjugate() * big_p.conjugate()
            + 2.0 * p.conjugate() * n.conjugate()
            - 2.0 * m.conjugate() * p.conjugate() ** 2
        )
        - 0.5
        * gamma3
        * (
            6.0 * m.conjugate() * n.conjugate() * big_p.conjugate()
            + 3.0 * p.conjugate() * big_m.conjugate() * big_p.conjugate()
            + 6.0 * p.conjugate() * n.conjugate() ** 2
            - 2.0 * big_m.conjugate() * p.conjugate() ** 3
            - 12.0 * n.conjugate() * m.conjugate() * p.conjugate() ** 2
            - 6.0 * big_p.conjugate() * m.conjugate() ** 2 * p.conjugate()
            + 6.0 * m.conjugate() ** 2 * p.conjugate() ** 3
        )
    )
    dbig_p = np.conjugate(
        c3 * big_p.conjugate()
        + c4
        * (
            3.0 * n.conjugate() * big_p.conjugate()
            - 2.0 * m.conjugate() * p.conjugate() ** 3
        )
        - gamma3
        * (
            3.0 * big_m.conjugate() * big_p.conjugate() ** 2
            + 12.0 * n.conjugate() ** 2 * big_p.conjugate()
            - 2.0 * big_m.conjugate() * p.conjugate() ** 4
            - 12.0 * big_p.conjugate() * m.conjugate() ** 2 * p.conjugate() ** 2
            - 16.0 * n.conjugate() * m.conjugate() * p.conjugate() ** 3
            + 16.0 * m.conjugate() ** 2 * p.conjugate() ** 4
        )
    )
    return np.array([dm, dp, dbig_m, dbig_p, dn])


def _q_raw(m, p, big_m, big_p, n):
    """Mandel Q from raw moments via the fourth-order closure.

    <s^dag2 s^2> ~ <s^dag2><s^2> + 2<n>^2 - 2|<s>|^4, so Q reduces to
    (<s^dag2><s^2> + <n>^2 - 2|<s>|^4)/<n>.
    """
    top = np.real(big_p * big_m) + np.real(n) ** 2 - 2.0 * np.abs(m) ** 4
    return top / np.real(n)


def single_mode_linearized(
    gamma1: float,
    gamma2: float,
    gamma3: float,
    sigma1: float,
    sigma3: float,
    alpha0: complex,
    t_grid: np.ndarray,
    variant: str = "printed",
    rtol: float = 1e-12,
    atol: float = 1e-12,
) -> LinearizedTrajectory:
    """Evolve coherent initial moments through the closed linearized system.

    ``variant="printed"`` integrates the published equations verbatim
    (raw moments, tight tolerances to survive the bright-state
    cancellations in Q); ``variant="derived"`` uses the engine-generated
    central-moment system.
    """
    if abs(alpha0) == 0:
        raise ValueError("linearization requires a nonzero amplitude")
    t_grid = np.asarray(t_grid, dtype=float)
    if variant == "derived":
        system = single_mode_system(gamma1, gamma2, gamma3, sigma1, sigma3)
        states = system.integrate(
            MomentState.coherent(("s-",), [alpha0]), t_grid, rtol=1e-10, atol=1e-12
        )
        w = np.array([1.0 + 0.0j])
        n_mean = np.array([s.collective_photon(w) for s in states])
        q = np.array([s.collective_mandel_q(w) for s in states])
        mean = np.array([s.means[0] for s in states])
        pair = np.array([s.raw_pair()[0, 0] for s in states])
        return LinearizedTrajectory(t_grid, mean, pair, n_mean, q, variant)
    if variant != "printed":
        raise ValueError(f"unknown variant {variant!r}")

    coeffs = _coefficients(gamma1, gamma2, gamma3, sigma1, sigma3, variant)
    c1, c2, c3, c4, c5 = coeffs
    alpha0 = complex(alpha0)
    y0 = np.array(
        [
            alpha0,
            np.conjugate(alpha0),
            alpha0**2,
            np.conjugate(alpha0) ** 2,
            abs(alpha0) ** 2,
        ],
        dtype=complex,
    )

    def rhs(t, y):
        return _printed_rhs(
            y.view(complex), gamma1, gamma3, c1, c2, c3, c4, c5
        ).view(np.float64)

    sol = solve_ivp(
        rhs,
        (t_grid[0], t_grid[-1]),
        y0.view(np.float64),
        t_eval=t_grid,
        rtol=rtol,
        atol=atol,
        method="DOP853",
    )
    if not sol.success:
        raise RuntimeError(f"linearized integration failed: {sol.message}")
    ys = sol.y.T.copy().view(complex)
    mean, p, big_m, big_p, n = ys.T
    q = _q_raw(mean, p, big_m, big_p, n)
    return LinearizedTrajectory(
        t=t_grid,
        mean=mean,
        pair=big_m,
        n_mean=np.real(n),
        q=np.real(q),
        variant=variant,
    )
