"""Truncated Fock-space linear algebra.

Operators are sparse matrices over a tensor-product basis with a fixed
mode order; states are dense vectors or density matrices.  The module
also provides photon-number statistics (Mandel Q, skewness, kurtosis),
two-mode covariance matrices in the convention where the vacuum
quadrature variance is 1/2, and the Gaussian logarithmic negativity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

__all__ = [
    "TruncationError",
    "FockOperator",
    "DensityMatrix",
    "PhotonNumberDist",
    "CovarianceMatrix",
    "annihilation",
    "creation",
    "number",
    "identity",
    "embed",
    "coherent_state",
    "coherent_dm",
    "fock_state",
    "adequate_dim",
    "photon_number_dist",
    "mandel_q",
    "partial_trace",
    "covariance_from_state",
    "covariance_from_moments",
    "log_negativity",
    "two_mode_rotation",
]


class TruncationError(ValueError):
    """Raised when a truncated Hilbert space is too small for a state."""


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class FockOperator:
    """A sparse operator over the tensor-product Fock basis.

    The matrix dimension equals ``prod(mode_dims)`` with the first mode
    varying slowest (standard Kronecker order).
    """

    mode_dims: tuple[int, ...]
    mat: sp.csr_matrix

    def __post_init__(self) -> None:
        object.__setattr__(self, "mode_dims", tuple(self.mode_dims))
        dim = int(np.prod(self.mode_dims))
        if self.mat.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {self.mat.shape} inconsistent with "
                f"mode dims {self.mode_dims}"
            )

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def dag(self) -> "FockOperator":
        return FockOperator(self.mode_dims, self.mat.conj().T.tocsr())

    def to_dense(self) -> np.ndarray:
        return self.mat.toarray()

    def expect(self, state: "np.ndarray | DensityMatrix") -> complex:
        """Expectation value on a ket vector or a density matrix."""
        if isinstance(state, DensityMatrix):
            return complex((self.mat @ state.mat).diagonal().sum())
        vec = np.asarray(state)
        return complex(np.vdot(vec, self.mat @ vec))

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        self._check_compatible(other)
        return FockOperator(self.mode_dims, (self.mat @ other.mat).tocsr())

    def __add__(self, other: "FockOperator") -> "FockOperator":
        self._check_compatible(other)
        return FockOperator(self.mode_dims, (self.mat + other.mat).tocsr())

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        self._check_compatible(other)
        return FockOperator(self.mode_dims, (self.mat - other.mat).tocsr())

    def __mul__(self, scalar: complex) -> "FockOperator":
        return FockOperator(self.mode_dims, (self.mat * scalar).tocsr())

    __rmul__ = __mul__

    def __neg__(self) -> "FockOperator":
        return self * (-1.0)

    def _check_compatible(self, other: "FockOperator") -> None:
        if self.mode_dims != other.mode_dims:
            raise ValueError(
                f"incompatible mode dims {self.mode_dims} vs {other.mode_dims}"
            )


def annihilation(dim: int) -> FockOperator:
    """Single-mode annihilation operator, <n-1|a|n> = sqrt(n)."""
    if dim < 2:
        raise ValueError("annihilation needs dim >= 2")
    data = np.sqrt(np.arange(1, dim, dtype=float))
    return FockOperator((dim,), sp.diags(data, offsets=1, format="csr").astype(complex))


def creation(dim: int) -> FockOperator:
    return annihilation(dim).dag()


def number(dim: int) -> FockOperator:
    if dim < 2:
        raise ValueError("number needs dim >= 2")
    return FockOperator(
        (dim,), sp.diags(np.arange(dim, dtype=float), format="csr").astype(complex)
    )


def identity(mode_dims: int | tuple[int, ...]) -> FockOperator:
    dims = (mode_dims,) if isinstance(mode_dims, int) else tuple(mode_dims)
    dim = int(np.prod(dims))
    return FockOperator(dims, sp.identity(dim, format="csr", dtype=complex))


def embed(op: FockOperator, mode_index: int, mode_dims: tuple[int, ...]) -> FockOperator:
    """Place a single-mode operator at ``mode_index`` of a multi-mode space."""
    dims = tuple(mode_dims)
    if not 0 <= mode_index < len(dims):
        raise IndexError(f"mode index {mode_index} out of range for {dims}")
    if op.mode_dims != (dims[mode_index],):
        raise ValueError(
            f"operator dim {op.mode_dims} does not match mode {mode_index} "
            f"of {dims}"
        )
    mat = sp.identity(1, format="csr", dtype=complex)
    for k, d in enumerate(dims):
        factor = op.mat if k == mode_index else sp.identity(d, format="csr", dtype=complex)
        mat = sp.kron(mat, factor, format="csr")
    return FockOperator(dims, mat)


# ---------------------------------------------------------------------------
# states


def adequate_dim(n_mean: float) -> int:
    """Truncation rule for coherent occupancy: n + 8*sqrt(n) + 10."""
    return int(math.ceil(n_mean + 8.0 * math.sqrt(max(n_mean, 0.0)) + 10.0))


def fock_state(k: int, dim: int) -> np.ndarray:
    if not 0 <= k < dim:
        raise ValueError(f"Fock index {k} outside dim {dim}")
    vec = np.zeros(dim, dtype=complex)
    vec[k] = 1.0
    return vec


def coherent_state(alpha: complex, dim: int) -> np.ndarray:
    """Normalized truncated coherent state vector.

    Raises
    ------
    TruncationError
        When ``|alpha|^2 + 8|alpha| > dim`` (truncation inadequate).
    """
    n_mean = abs(alpha) ** 2
    if n_mean + 8.0 * math.sqrt(n_mean) > dim:
        raise TruncationError(
            f"dim={dim} too small for coherent state with <n>={n_mean:.3g}"
        )
    if alpha == 0:
        return fock_state(0, dim)
    from scipy.special import gammaln

    n = np.arange(dim)
    # log-domain amplitudes to stay finite at large n
    logmag = n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1.0) - 0.5 * n_mean
    vec = np.exp(logmag) * np.exp(1j * n * np.angle(alpha))
    return vec / np.linalg.norm(vec)


def coherent_dm(alpha: complex, dim: int) -> "DensityMatrix":
    vec = coherent_state(alpha, dim)
    return DensityMatrix((dim,), np.outer(vec, vec.conj()))


@dataclass
class DensityMatrix:
    """Dense density matrix with its mode dimensions.

    Trace and Hermiticity are monitored, never silently repaired.
    """

    mode_dims: tuple[int, ...]
    mat: np.ndarray

    def __post_init__(self) -> None:
        self.mode_dims = tuple(self.mode_dims)
        self.mat = np.asarray(self.mat, dtype=complex)
        dim = int(np.prod(self.mode_dims))
        if self.mat.shape != (dim, dim):
            raise ValueError("matrix shape inconsistent with mode dims")

    @classmethod
    def from_vector(cls, mode_dims: tuple[int, ...], vec: np.ndarray) -> "DensityMatrix":
        vec = np.asarray(vec, dtype=complex)
        return cls(tuple(mode_dims), np.outer(vec, vec.conj()))

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def trace(self) -> float:
        return float(np.real(np.trace(self.mat)))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.mat - self.mat.conj().T)))

    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(0.5 * (self.mat + self.mat.conj().T))[0])

    def validate(self, check_eigenvalues: bool = False) -> None:
        if self.hermiticity_error() > 1e-10:
            raise ValueError(
                f"density matrix not Hermitian ({self.hermiticity_error():.2e})"
            )
        if abs(self.trace() - 1.0) > 1e-8:
            raise ValueError(f"trace {self.trace()} drifted from 1")
        if check_eigenvalues and self.min_eigenvalue() < -1e-8:
            raise ValueError(
                f"density matrix not positive ({self.min_eigenvalue():.2e})"
            )

    def expect(self, op: FockOperator) -> complex:
        return op.expect(self)


# ---------------------------------------------------------------------------
# photon-number statistics


@dataclass
class PhotonNumberDist:
    """Photon-number probabilities p(0)..p(n_max) with moment accessors."""

    p: np.ndarray

    def __post_init__(self) -> None:
        self.p = np.asarray(self.p, dtype=float)
        if self.p.ndim != 1:
            raise ValueError("p must be a vector")

    def validate(self) -> None:
        if self.p.min() < -1e-10:
            raise ValueError(f"negative probability {self.p.min():.2e}")
        total = self.p.sum()
        if not (1.0 - 1e-6 <= total <= 1.0 + 1e-9):
            raise ValueError(f"probabilities sum to {total}")

    @property
    def leakage(self) -> float:
        """Truncation deficit 1 - sum(p)."""
        return float(1.0 - self.p.sum())

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.p.size, dtype=float)

    def moment(self, k: int) -> float:
        return float(np.sum(self.n**k * self.p))

    @property
    def mean(self) -> float:
        return self.moment(1)

    @property
    def mandel_q(self) -> float:
        return mandel_q(self)

    def central_moment(self, k: int) -> float:
        return float(np.sum((self.n - self.mean) ** k * self.p))

    @property
    def variance(self) -> float:
        return self.central_moment(2)

    @property
    def skewness(self) -> float:
        var = self.variance
        if var <= 0:
            raise ValueError("skewness undefined for zero variance")
        return self.central_moment(3) / var**1.5

    @property
    def excess_kurtosis(self) -> float:
        var = self.variance
        if var <= 0:
            raise ValueError("kurtosis undefined for zero variance")
        return self.central_moment(4) / var**2 - 3.0


def mandel_q(dist: "PhotonNumberDist | np.ndarray") -> float:
    """Mandel Q = <n(n-1)>/<n> - <n>; 0 for coherent, -1 for Fock states."""
    p = dist.p if isinstance(dist, PhotonNumberDist) else np.asarray(dist, dtype=float)
    n = np.arange(p.size, dtype=float)
    mean = float(np.sum(n * p))
    if mean <= 0.0:
        raise ValueError("Mandel Q undefined: <n> = 0")
    nn1 = float(np.sum(n * (n - 1.0) * p))
    return nn1 / mean - mean


def photon_number_dist(rho: DensityMatrix, mode: int = 0) -> PhotonNumberDist:
    """Photon-number distribution of one mode (partial trace then diagonal)."""
    reduced = partial_trace(rho, (mode,))
    return PhotonNumberDist(np.real(np.diag(reduced.mat)))


def partial_trace(rho: DensityMatrix, keep_modes: tuple[int, ...]) -> DensityMatrix:
    """Trace out every mode not listed in ``keep_modes`` (order preserved)."""
    keep = tuple(keep_modes)
    dims = rho.mode_dims
    n_modes = len(dims)
    if any(not 0 <= m < n_modes for m in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"bad mode set {keep} for {n_modes} modes")
    if tuple(sorted(keep)) != keep:
        raise ValueError("keep_modes must be sorted ascending")
    tensor = rho.mat.reshape(dims + dims)
    traced = [m for m in range(n_modes) if m not in keep]
    for m in sorted(traced, reverse=True):
        tensor = np.trace(tensor, axis1=m, axis2=m + tensor.ndim // 2)
    new_dims = tuple(dims[m] for m in keep)
    d = int(np.prod(new_dims))
    return DensityMatrix(new_dims, tensor.reshape(d, d))


# ---------------------------------------------------------------------------
# Gaussian measures


@dataclass
class CovarianceMatrix:
    """Quadrature covariance matrix, vacuum variance 1/2.

    Quadratures are ordered (q1, p1, q2, p2, ...) with
    q = (x + x^dag)/sqrt(2) and p = i (x^dag - x)/sqrt(2).
    """

    sigma: np.ndarray
    mean: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        self.sigma = np.asarray(self.sigma, dtype=float)
        if self.sigma.ndim != 2 or self.sigma.shape[0] != self.sigma.shape[1]:
            raise ValueError("sigma must be square")
        if self.sigma.shape[0] % 2:
            raise ValueError("sigma must be 2M x 2M")
        if self.mean is None:
            self.mean = np.zeros(self.sigma.shape[0])
        self.mean = np.asarray(self.mean, dtype=float)

    @property
    def n_modes(self) -> int:
        return self.sigma.shape[0] // 2

    def symmetry_error(self) -> float:
        return float(np.max(np.abs(self.sigma - self.sigma.T)))

    def validate(self, tol: float = 1e-8) -> None:
        if self.symmetry_error() > 1e-10:
            raise ValueError("covariance matrix not symmetric")
        # physicality: sigma + i Omega/2 >= 0
        omega = symplectic_form(self.n_modes)
        eigmin = np.linalg.eigvalsh(self.sigma + 0.5j * omega).min()
        if eigmin < -tol:
            raise ValueError(f"unphysical covariance matrix (eig {eigmin:.2e})")


def symplectic_form(n_modes: int) -> np.ndarray:
    j = np.array([[0.0, 1.0], [-1.0, 0.0]])
    omega = np.zeros((2 * n_modes, 2 * n_modes))
    for k in range(n_modes):
        omega[2 * k : 2 * k + 2, 2 * k : 2 * k + 2] = j
    return omega


def symplectic_eigenvalues(sigma: np.ndarray) -> np.ndarray:
    omega = symplectic_form(sigma.shape[0] // 2)
    eig = np.linalg.eigvals(1j * omega @ sigma)
    lams = np.sort(np.abs(eig))
    # eigenvalues come in +/- pairs; keep one from each
    return lams[::2][: sigma.shape[0] // 2]


def covariance_from_moments(
    means: np.ndarray, pair: np.ndarray, num: np.ndarray
) -> CovarianceMatrix:
    """Covariance matrix from central mode moments.

    Parameters
    ----------
    means : complex array, shape (M,)
        First moments <x_i>.
    pair : complex array, shape (M, M)
        Central pair moments <dx_i dx_j> (symmetric).
    num : complex array, shape (M, M)
        Central normally ordered moments <dx_i^dag dx_j> (Hermitian).
    """
    means = np.asarray(means, dtype=complex)
    pair = np.asarray(pair, dtype=complex)
    num = np.asarray(num, dtype=complex)
    m = means.size
    sigma = np.zeros((2 * m, 2 * m))
    for i in range(m):
        for j in range(m):
            s, c = pair[i, j], num[i, j]
            delta = 0.5 if i == j else 0.0
            sigma[2 * i, 2 * j] = np.real(s) + np.real(c) + delta
            sigma[2 * i + 1, 2 * j + 1] = -np.real(s) + np.real(c) + delta
            sigma[2 * i, 2 * j + 1] = np.imag(s) + np.imag(c)
            sigma[2 * i + 1, 2 * j] = np.imag(s) - np.imag(c)
    mean_vec = np.zeros(2 * m)
    mean_vec[0::2] = np.sqrt(2.0) * np.real(means)
    mean_vec[1::2] = np.sqrt(2.0) * np.imag(means)
    return CovarianceMatrix(0.5 * (sigma + sigma.T), mean_vec)


def covariance_from_state(
    rho: DensityMatrix, modes: tuple[int, ...] = (0, 1)
) -> CovarianceMatrix:
    """Covariance matrix of designated modes from an exact state."""
    dims = rho.mode_dims
    ops = [embed(annihilation(dims[m]), m, dims) for m in modes]
    means = np.array([op.expect(rho) for op in ops])
    m = len(ops)
    pair = np.zeros((m, m), dtype=complex)
    num = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            pair[i, j] = (ops[i] @ ops[j]).expect(rho) - means[i] * means[j]
            num[i, j] = (ops[i].dag() @ ops[j]).expect(rho) - np.conj(means[i]) * means[j]
    return covariance_from_moments(means, pair, num)


def log_negativity(cov: CovarianceMatrix, base: float | None = None) -> float:
    """Logarithmic negativity of a two-mode Gaussian state.

    ``N = max(0, -log(lam/lam_vac))`` with ``lam`` the smallest symplectic
    eigenvalue of the partially transposed covariance matrix and
    ``lam_vac = 1/2`` in this convention.  Natural log by default.
    """
    if cov.n_modes != 2:
        raise ValueError("log negativity requires a two-mode covariance matrix")
    flip = np.diag([1.0, 1.0, 1.0, -1.0])
    sigma_pt = flip @ cov.sigma @ flip
    lam = symplectic_eigenvalues(sigma_pt).min()
    value = max(0.0, -math.log(max(lam, 1e-300) / 0.5))
    if base is not None:
        value /= math.log(base)
    return value


def two_mode_rotation(theta: float, mode_dims: tuple[int, int]) -> np.ndarray:
    """Unitary mixing two modes: x0 -> cos(t) x0 - sin(t) x1 (Heisenberg).

    Exact on every total-photon-number subspace fully contained in the
    truncation, since the generator conserves total photon number.
    """
    d0, d1 = mode_dims
    a0 = embed(annihilation(d0), 0, mode_dims).mat
    a1 = embed(annihilation(d1), 1, mode_dims).mat
    gen = theta * (a1.conj().T @ a0 - a0.conj().T @ a1)
    import scipy.linalg

    return scipy.linalg.expm(gen.toarray())
