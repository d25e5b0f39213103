"""Moment-equation generator for cumulant-linearized dynamics.

Given a Hamiltonian and a set of Lindblad channels over M bosonic modes,
the builder derives the closed equations of motion for all first moments
and all *central* second moments (pair moments <dx_i dx_j> and number
moments <dx_i^dag dx_j>) by applying the adjoint master equation to each
tracked operator, closing third and higher expectations with the Gaussian
cumulant rule, and subtracting the mean-field product terms symbolically
so the compiled right-hand side never suffers the raw-moment
cancellations.  The symbolic build happens once per model; evaluation is
vectorized with numpy gathers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import (
    Atom,
    MomentPoly,
    OpPoly,
    closure_expectation,
    mode_op,
)

__all__ = ["MomentState", "MomentSystem"]


@dataclass
class MomentState:
    """First moments plus central second moments of a multi-mode state.

    ``pair[i, j] = <dx_i dx_j>`` (symmetric) and
    ``number[i, j] = <dx_i^dag dx_j>`` (Hermitian).  Raw moments follow by
    adding the mean-field products back.
    """

    labels: tuple[str, ...]
    means: np.ndarray
    pair: np.ndarray
    number: np.ndarray

    @classmethod
    def coherent(cls, labels, alphas) -> "MomentState":
        alphas = np.asarray(alphas, dtype=complex)
        m = alphas.size
        return cls(
            labels=tuple(labels),
            means=alphas,
            pair=np.zeros((m, m), dtype=complex),
            number=np.zeros((m, m), dtype=complex),
        )

    @property
    def n_modes(self) -> int:
        return self.means.size

    def raw_pair(self) -> np.ndarray:
        """Raw second moments <x_i x_j>."""
        return self.pair + np.outer(self.means, self.means)

    def raw_number(self) -> np.ndarray:
        """Raw normally ordered moments <x_i^dag x_j>."""
        return self.number + np.outer(self.means.conj(), self.means)

    def mean_photon(self, mode: int) -> float:
        return float(np.real(self.number[mode, mode] + abs(self.means[mode]) ** 2))

    def collective(self, weights) -> tuple[complex, complex, complex]:
        """Central moments (mean, <ds^2>, <ds^dag ds>) of s = sum_i w_i x_i."""
        w = np.asarray(weights, dtype=complex)
        mean = complex(w @ self.means)
        pair = complex(w @ self.pair @ w)
        num = complex(w.conj() @ self.number @ w)
        return mean, pair, num

    def collective_photon(self, weights) -> float:
        mean, _, num = self.collective(weights)
        return float(np.real(num) + abs(mean) ** 2)

    def collective_mandel_q(self, weights) -> float:
        """Mandel Q of a collective mode via the fourth-order closure."""
        mean, pair, num = self.collective(weights)
        n = np.real(num) + abs(mean) ** 2
        if n <= 0:
            raise ValueError("Mandel Q undefined: <n> = 0")
        top = (
            abs(pair) ** 2
            + 2.0 * np.real(pair.conjugate() * mean**2)
            + np.real(num) ** 2
            + 2.0 * np.real(num) * abs(mean) ** 2
        )
        return float(top / n)

    def validate(self, tol: float = 1e-9) -> None:
        if np.max(np.abs(self.pair - self.pair.T)) > tol:
            raise ValueError("pair moments not symmetric")
        if np.max(np.abs(self.number - self.number.conj().T)) > tol:
            raise ValueError("number moments not Hermitian")
        occ = np.real(np.diag(self.raw_number()))
        if occ.min() < -tol:
            raise ValueError(f"negative occupation {occ.min():.2e}")


class MomentSystem:
    """Compiled cumulant-linearized moment equations for one model."""

    def __init__(
        self,
        n_modes: int,
        hamiltonian: OpPoly,
        channels: list[tuple[float, OpPoly]],
        labels: tuple[str, ...] | None = None,
    ):
        self.n_modes = n_modes
        self.labels = tuple(labels) if labels else tuple(f"x{i}" for i in range(n_modes))
        self.hamiltonian = hamiltonian
        self.channels = [(float(r), op) for r, op in channels]
        self._build()

    # -- index layout -------------------------------------------------
    # values: [means (M), pair (i<=j), number (i<=j)], all complex

    def _pidx(self, i: int, j: int) -> int:
        assert i <= j
        m = self.n_modes
        return i * m - i * (i - 1) // 2 + (j - i)

    @property
    def n_pairs(self) -> int:
        m = self.n_modes
        return m * (m + 1) // 2

    @property
    def n_values(self) -> int:
        return self.n_modes + 2 * self.n_pairs

    def _atom_index(self, atom: Atom) -> int:
        kind = atom[0]
        if kind == "m":
            _, i, conj = atom
            base = i
        elif kind == "s":
            _, i, j, conj = atom
            base = self.n_modes + self._pidx(i, j)
        else:
            _, i, j, conj = atom
            base = self.n_modes + self.n_pairs + self._pidx(i, j)
        return base + (self.n_values if conj else 0)

    # -- symbolic build -------------------------------------------------

    def _adjoint_rhs(self, tracked: OpPoly) -> MomentPoly:
        """d<T>/dt as a closed moment polynomial."""
        t_modes = tracked.modes()
        rhs = OpPoly()
        ham_local = OpPoly._raw(
            {
                w: c
                for w, c in self.hamiltonian.terms.items()
                if any(mode in t_modes for mode, _ in w)
            }
        )
        rhs = rhs + 1j * (ham_local @ tracked - tracked @ ham_local)
        for rate, lop in self.channels:
            if rate == 0.0 or not (lop.modes() & t_modes):
                continue
            ldag = lop.adjoint()
            ldl = ldag @ lop
            rhs = rhs + rate * (
                ldag @ tracked @ lop
                - 0.5 * (ldl @ tracked)
                - 0.5 * (tracked @ ldl)
            )
        return closure_expectation(rhs)

    def _build(self) -> None:
        m = self.n_modes
        mean_rhs = [self._adjoint_rhs(mode_op(i)) for i in range(m)]

        equations: list[MomentPoly] = list(mean_rhs)
        for i in range(m):
            for j in range(i, m):
                raw = self._adjoint_rhs(mode_op(i) @ mode_op(j))
                central = MomentPoly(raw.terms)
                central.add_scaled(mean_rhs[i].times_atom(("m", j, False)), -1.0)
                central.add_scaled(mean_rhs[j].times_atom(("m", i, False)), -1.0)
                equations.append(central)
        for i in range(m):
            for j in range(i, m):
                raw = self._adjoint_rhs(mode_op(i, True) @ mode_op(j))
                central = MomentPoly(raw.terms)
                central.add_scaled(
                    mean_rhs[i].conjugate().times_atom(("m", j, False)), -1.0
                )
                central.add_scaled(
                    mean_rhs[j].times_atom(("m", i, True)), -1.0
                )
                equations.append(central)

        # compile: group terms by number of atom factors
        groups: dict[int, list[tuple[int, complex, tuple[int, ...]]]] = {}
        for target, poly in enumerate(equations):
            for key, coeff in poly.terms.items():
                idxs = tuple(self._atom_index(a) for a in key)
                groups.setdefault(len(idxs), []).append((target, coeff, idxs))
        self._compiled = []
        for length, terms in sorted(groups.items()):
            targets = np.array([t for t, _, _ in terms], dtype=np.intp)
            coeffs = np.array([c for _, c, _ in terms], dtype=complex)
            factors = (
                np.array([f for _, _, f in terms], dtype=np.intp).reshape(-1, length)
                if length
                else np.zeros((len(terms), 0), dtype=np.intp)
            )
            self._compiled.append((targets, coeffs, factors))
        self.n_terms = sum(len(t[0]) for t in self._compiled)

    # -- numeric evaluation ---------------------------------------------

    def rhs(self, values: np.ndarray) -> np.ndarray:
        """Time derivative of the packed complex value vector."""
        w = np.concatenate([values, values.conj()])
        out = np.zeros(self.n_values, dtype=complex)
        for targets, coeffs, factors in self._compiled:
            prod = coeffs.copy()
            for col in range(factors.shape[1]):
                prod *= w[factors[:, col]]
            np.add.at(out.real, targets, prod.real)
            np.add.at(out.imag, targets, prod.imag)
        return out

    def pack(self, state: MomentState) -> np.ndarray:
        m = self.n_modes
        vals = np.zeros(self.n_values, dtype=complex)
        vals[:m] = state.means
        for i in range(m):
            for j in range(i, m):
                vals[m + self._pidx(i, j)] = state.pair[i, j]
                vals[m + self.n_pairs + self._pidx(i, j)] = state.number[i, j]
        return vals

    def unpack(self, values: np.ndarray) -> MomentState:
        m = self.n_modes
        means = values[:m].copy()
        pair = np.zeros((m, m), dtype=complex)
        number = np.zeros((m, m), dtype=complex)
        for i in range(m):
            for j in range(i, m):
                pair[i, j] = pair[j, i] = values[m + self._pidx(i, j)]
                number[i, j] = values[m + self.n_pairs + self._pidx(i, j)]
                number[j, i] = number[i, j].conjugate()
        return MomentState(self.labels, means, pair, number)

    def integrate(
        self,
        initial: MomentState,
        t_grid: np.ndarray,
        rtol: float = 1e-8,
        atol: float = 1e-10,
        method: str = "RK45",
    ) -> list[MomentState]:
        """Integrate the moment equations, sampling on ``t_grid``."""
        t_grid = np.asarray(t_grid, dtype=float)
        y0 = self.pack(initial).view(np.float64)

        def rhs_real(t, y):
            return self.rhs(y.view(complex)).view(np.float64)

        sol = solve_ivp(
            rhs_real,
            (t_grid[0], t_grid[-1]),
            y0,
            t_eval=t_grid,
            rtol=rtol,
            atol=atol,
            method=method,
        )
        if not sol.success:
            raise RuntimeError(f"moment integration failed: {sol.message}")
        return [self.unpack(sol.y[:, k].copy().view(complex)) for k in range(t_grid.size)]
