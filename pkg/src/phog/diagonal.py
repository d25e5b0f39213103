"""Diagonal photon-number dynamics of the single-mode model.

With linear loss (rate ``gamma1``), two-photon loss (``gamma2``) and
nonlinear coherent loss (``gamma3``), the populations obey a closed
birth-death system

    dp_n/dt = -(g1*n + g2*n(n-1) + g3*n(n-1)^2) p_n
              + (g1*(n+1) + g3*(n+1)*n^2) p_{n+1}
              + g2*(n+1)(n+2) p_{n+2}

which conserves total probability exactly.  The residual Kerr term of
the master equation is diagonal in n and drops out of these populations.
This solver doubles as the independent oracle for the moment theory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.integrate import solve_ivp
from scipy.sparse.linalg import splu

from .fock import PhotonNumberDist, adequate_dim, mandel_q

__all__ = [
    "TruncationOverflowError",
    "DiagonalTrajectory",
    "evolve_pn",
    "q_trajectory",
    "coherent_pn",
]


class TruncationOverflowError(RuntimeError):
    """Probability mass reached the top of the truncated ladder."""


def coherent_pn(n_mean: float, n_max: int | None = None) -> np.ndarray:
    """Poissonian photon-number distribution of a coherent state."""
    if n_max is None:
        n_max = adequate_dim(n_mean)
    from scipy.special import gammaln

    n = np.arange(n_max + 1, dtype=float)
    if n_mean == 0:
        p = np.zeros(n_max + 1)
        p[0] = 1.0
        return p
    logp = n * np.log(n_mean) - gammaln(n + 1.0) - n_mean
    return np.exp(logp)


def _loss_rates(n: np.ndarray, gamma1: float, gamma2: float, gamma3: float):
    f1 = n
    f2 = n * (n - 1.0)
    f3 = n * (n - 1.0) ** 2
    return gamma1 * f1, gamma2 * f2, gamma3 * f3


def _generator(n_max: int, gamma1: float, gamma2: float, gamma3: float) -> sp.csr_matrix:
    """Sparse generator A with dp/dt = A p (banded, offsets 0, +1, +2)."""
    n = np.arange(n_max + 1, dtype=float)
    r1, r2, r3 = _loss_rates(n, gamma1, gamma2, gamma3)
    out_rate = r1 + r2 + r3
    main = -out_rate
    upper1 = (r1 + r3)[1:]
    upper2 = r2[2:]
    return sp.diags(
        [main, upper1, upper2], offsets=[0, 1, 2], format="csr"
    )


def evolve_pn(
    p0: np.ndarray,
    gamma1: float,
    gamma2: float,
    gamma3: float,
    t_grid: np.ndarray,
    rtol: float = 1e-8,
    atol: float = 1e-12,
    method: str = "RK45",
    dt: float | None = None,
) -> np.ndarray:
    """Integrate the population system; returns p at each grid time.

    ``method`` is a scipy explicit adaptive Runge-Kutta name, or
    ``"implicit_midpoint"`` for the fixed-step fallback (the generator is
    constant, so one sparse LU factorization serves the whole run).
    Rows are clipped at zero for reporting only.
    """
    p0 = np.asarray(p0, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")
    if min(gamma1, gamma2, gamma3) < 0:
        raise ValueError("rates must be nonnegative")
    n_max = p0.size - 1
    gen = _generator(n_max, gamma1, gamma2, gamma3)

    if method == "implicit_midpoint":
        if dt is None:
            dt = (t_grid[-1] - t_grid[0]) / 4000.0
        out = _implicit_midpoint(gen, p0, t_grid, dt)
    else:
        sol = solve_ivp(
            lambda t, p: gen @ p,
            (t_grid[0], t_grid[-1]),
            p0,
            t_eval=t_grid,
            method=method,
            rtol=rtol,
            atol=atol,
        )
        if not sol.success:
            raise RuntimeError(f"population integration failed: {sol.message}")
        out = sol.y.T

    total = out.sum(axis=1)
    if np.max(np.abs(total - p0.sum())) > 1e-9:
        raise RuntimeError(
            f"probability drifted by {np.max(np.abs(total - p0.sum())):.2e}"
        )
    if n_max >= 1 and np.max(np.abs(out[:, n_max - 1])) > 1e-10:
        raise TruncationOverflowError(
            "probability mass reached the truncation boundary; enlarge n_max"
        )
    return np.clip(out, 0.0, None)


def _implicit_midpoint(gen, p0, t_grid, dt):
    """Fixed-step implicit midpoint; exact LU reuse for the constant system."""
    n = p0.size
    eye = sp.identity(n, format="csc")
    lhs = splu((eye - 0.5 * dt * gen).tocsc())
    rhs = (eye + 0.5 * dt * gen).tocsr()
    out = np.empty((t_grid.size, n))
    p = p0.copy()
    t = t_grid[0]
    out[0] = p
    for k in range(1, t_grid.size):
        target = t_grid[k]
        while t < target - 1e-15 * max(1.0, abs(target)):
            step = min(dt, target - t)
            if abs(step - dt) > 1e-15 * dt:
                lhs_step = splu((eye - 0.5 * step * gen).tocsc())
                p = lhs_step.solve((eye + 0.5 * step * gen) @ p)
            else:
                p = lhs.solve(rhs @ p)
            t += step
        out[k] = p
    return out


@dataclass
class DiagonalTrajectory:
    """Photon-number statistics of a diagonal run on a time grid."""

    t: np.ndarray
    n_mean: np.ndarray
    q: np.ndarray
    skewness: np.ndarray
    excess_kurtosis: np.ndarray
    pn: np.ndarray  # populations, shape (len(t), n_max+1)

    @property
    def zeta2(self) -> np.ndarray:
        return self.q + 1.0

    def final_dist(self) -> PhotonNumberDist:
        return PhotonNumberDist(self.pn[-1])


def q_trajectory(
    n0: float,
    gamma1: float,
    gamma2: float,
    gamma3: float,
    t_grid: np.ndarray,
    n_max: int | None = None,
    p0: np.ndarray | None = None,
    **kwargs,
) -> DiagonalTrajectory:
    """Evolve a coherent input and extract moments at each sample time."""
    if p0 is None:
        p0 = coherent_pn(n0, n_max)
    pn = evolve_pn(p0, gamma1, gamma2, gamma3, t_grid, **kwargs)
    n = np.arange(p0.size, dtype=float)
    mean = pn @ n
    dn = n[None, :] - mean[:, None]
    var = np.einsum("tn,tn->t", pn, dn**2)
    m3 = np.einsum("tn,tn->t", pn, dn**3)
    m4 = np.einsum("tn,tn->t", pn, dn**4)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.where(mean > 0, var / np.where(mean > 0, mean, 1.0) - 1.0, np.nan)
        skew = m3 / var**1.5
        exkurt = m4 / var**2 - 3.0
    return DiagonalTrajectory(
        t=np.asarray(t_grid, dtype=float),
        n_mean=mean,
        q=q,
        skewness=skew,
        excess_kurtosis=exkurt,
        pn=pn,
    )
