"""Tests for truncated Fock-space operators, states and Gaussian measures."""

import math

import numpy as np
import pytest
import scipy.linalg

from phog.fock import (
    CovarianceMatrix,
    DensityMatrix,
    PhotonNumberDist,
    TruncationError,
    annihilation,
    coherent_dm,
    coherent_state,
    covariance_from_moments,
    covariance_from_state,
    creation,
    embed,
    fock_state,
    identity,
    log_negativity,
    mandel_q,
    number,
    partial_trace,
    photon_number_dist,
    symplectic_eigenvalues,
    two_mode_rotation,
)


class TestOperators:
    def test_annihilation_matrix_elements(self):
        a = annihilation(3)
        psi = a.mat @ fock_state(2, 3)
        assert np.allclose(psi, math.sqrt(2.0) * fock_state(1, 3))

    def test_commutator_on_interior(self):
        dim = 8
        a = annihilation(dim)
        comm = (a @ a.dag() - a.dag() @ a).to_dense()
        interior = np.diag(comm)[: dim - 1]
        assert np.allclose(interior, 1.0)

    def test_number_operator(self):
        n = number(6)
        assert np.allclose(np.diag(n.to_dense()), np.arange(6))
        a = annihilation(6)
        assert np.allclose((a.dag() @ a).to_dense(), n.to_dense())

    def test_embed_distinct_modes_commute(self):
        dims = (3, 4, 2)
        a0 = embed(annihilation(3), 0, dims)
        n1 = embed(number(4), 1, dims)
        comm = (a0 @ n1 - n1 @ a0).to_dense()
        assert np.max(np.abs(comm)) < 1e-14

    def test_embed_index_out_of_range(self):
        with pytest.raises(IndexError):
            embed(annihilation(3), 3, (3, 3))


class TestStates:
    def test_vacuum(self):
        vec = coherent_state(0.0, 5)
        assert np.allclose(vec, fock_state(0, 5))

    def test_coherent_mean_photon(self):
        alpha = 1.7 + 0.4j
        dim = 40
        vec = coherent_state(alpha, dim)
        n = number(dim)
        assert n.expect(vec).real == pytest.approx(abs(alpha) ** 2, abs=1e-8)

    def test_coherent_is_poissonian(self):
        rho = coherent_dm(math.sqrt(10.0), 64)
        dist = photon_number_dist(rho, 0)
        assert abs(dist.mandel_q) < 1e-6

    def test_truncation_guard(self):
        with pytest.raises(TruncationError):
            coherent_state(3.0, 10)


class TestPhotonStatistics:
    def test_fock_state_q(self):
        for k in (1, 3, 5):
            p = np.zeros(8)
            p[k] = 1.0
            assert mandel_q(p) == pytest.approx(-1.0)

    def test_thermal_q(self):
        # geometric distribution with <n> = 2 has Q = <n> = 2
        nbar = 2.0
        n = np.arange(400)
        p = (nbar / (1 + nbar)) ** n / (1 + nbar)
        assert mandel_q(p) == pytest.approx(2.0, abs=1e-6)

    def test_undefined_q(self):
        p = np.zeros(4)
        p[0] = 1.0
        with pytest.raises(ValueError):
            mandel_q(p)

    def test_q_lower_bound_random(self):
        rng = np.random.default_rng(3)
        for _ in range(200):
            p = rng.random(rng.integers(2, 30))
            p /= p.sum()
            assert mandel_q(p) >= -1.0 - 1e-12

    def test_dist_validation(self):
        dist = PhotonNumberDist(np.array([0.5, 0.5]))
        dist.validate()
        with pytest.raises(ValueError):
            PhotonNumberDist(np.array([0.4, 0.4])).validate()


class TestPartialTrace:
    def test_product_state(self):
        va = coherent_state(0.8, 9)
        vb = fock_state(2, 5)
        rho = DensityMatrix.from_vector((9, 5), np.kron(va, vb))
        reduced = partial_trace(rho, (0,))
        assert np.allclose(reduced.mat, np.outer(va, va.conj()), atol=1e-12)
        assert reduced.trace() == pytest.approx(1.0, abs=1e-12)

    def test_trace_preserved(self):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        rho = m @ m.conj().T
        rho /= np.trace(rho)
        dm = DensityMatrix((3, 4), rho)
        for keep in [(0,), (1,), (0, 1)]:
            assert partial_trace(dm, keep).trace() == pytest.approx(1.0, abs=1e-12)

    def test_bell_like_state_reduction(self):
        # (|2,0> + |0,2> - sqrt(2)|1,1>)/2 traced to the first mode
        dims = (3, 3)
        vec = np.zeros(9, dtype=complex)
        vec[2 * 3 + 0] = 0.5
        vec[0 * 3 + 2] = 0.5
        vec[1 * 3 + 1] = -math.sqrt(2.0) / 2.0
        rho = DensityMatrix.from_vector(dims, vec)
        dist = photon_number_dist(rho, 0)
        assert np.allclose(dist.p, [0.25, 0.5, 0.25], atol=1e-12)
        # single- to two-photon ratio of the ideal state is exactly 2
        assert dist.p[1] / dist.p[2] == pytest.approx(2.0, abs=1e-12)


class TestCovariance:
    def test_vacuum(self):
        rho = DensityMatrix.from_vector((4, 4), np.kron(fock_state(0, 4), fock_state(0, 4)))
        cov = covariance_from_state(rho)
        assert np.allclose(cov.sigma, 0.5 * np.eye(4), atol=1e-12)
        cov.validate()

    def test_coherent_same_sigma_shifted_mean(self):
        va = coherent_state(0.9 + 0.2j, 14)
        vb = coherent_state(-0.3j, 14)
        rho = DensityMatrix.from_vector((14, 14), np.kron(va, vb))
        cov = covariance_from_state(rho)
        assert np.allclose(cov.sigma, 0.5 * np.eye(4), atol=1e-8)
        expected_mean = np.array(
            [
                math.sqrt(2) * 0.9,
                math.sqrt(2) * 0.2,
                0.0,
                -math.sqrt(2) * 0.3,
            ]
        )
        assert np.allclose(cov.mean, expected_mean, atol=1e-8)

    @staticmethod
    def _two_mode_squeezed(r, dim):
        a0 = embed(annihilation(dim), 0, (dim, dim)).mat.toarray()
        a1 = embed(annihilation(dim), 1, (dim, dim)).mat.toarray()
        gen = r * (a0 @ a1 - a0.conj().T @ a1.conj().T)
        u = scipy.linalg.expm(gen)
        vac = np.kron(fock_state(0, dim), fock_state(0, dim))
        return DensityMatrix.from_vector((dim, dim), u @ vac)

    def test_two_mode_squeezed_symplectic_eigenvalue(self):
        r = 0.5
        rho = self._two_mode_squeezed(r, 24)
        cov = covariance_from_state(rho)
        flip = np.diag([1.0, 1.0, 1.0, -1.0])
        lam = symplectic_eigenvalues(flip @ cov.sigma @ flip).min()
        assert lam == pytest.approx(0.5 * math.exp(-2 * r), rel=1e-4)

    def test_log_negativity_two_mode_squeezed(self):
        r = 0.5
        rho = self._two_mode_squeezed(r, 24)
        cov = covariance_from_state(rho)
        assert log_negativity(cov) == pytest.approx(2 * r, rel=1e-4)
        assert log_negativity(cov, base=2) == pytest.approx(2 * r / math.log(2), rel=1e-4)

    def test_log_negativity_separable(self):
        va = coherent_state(1.2, 16)
        vb = coherent_state(0.4, 16)
        rho = DensityMatrix.from_vector((16, 16), np.kron(va, vb))
        assert log_negativity(covariance_from_state(rho)) == pytest.approx(0.0, abs=1e-6)

    def test_non_two_mode_rejected(self):
        with pytest.raises(ValueError):
            log_negativity(CovarianceMatrix(0.5 * np.eye(2)))

    def test_covariance_from_moments_vacuum(self):
        cov = covariance_from_moments(
            np.zeros(2, complex), np.zeros((2, 2), complex), np.zeros((2, 2), complex)
        )
        assert np.allclose(cov.sigma, 0.5 * np.eye(4))


class TestModeRotation:
    def test_rotation_maps_coherent_amplitudes(self):
        dims = (18, 18)
        theta = 0.6
        va = coherent_state(1.1, dims[0])
        vb = coherent_state(-0.4, dims[1])
        vec = np.kron(va, vb)
        u = two_mode_rotation(theta, dims)
        rotated = DensityMatrix.from_vector(dims, u @ vec)
        a0 = embed(annihilation(dims[0]), 0, dims)
        a1 = embed(annihilation(dims[1]), 1, dims)
        m0 = a0.expect(rotated)
        m1 = a1.expect(rotated)
        c, s = math.cos(theta), math.sin(theta)
        assert m0 == pytest.approx(c * 1.1 - s * (-0.4), abs=1e-7)
        assert m1 == pytest.approx(s * 1.1 + c * (-0.4), abs=1e-7)

    def test_ideal_pair_state_marginal(self):
        # |2>_- |0>_+ rotated by 45 degrees gives the entangled pair state
        dims = (5, 5)
        vec = np.kron(fock_state(0, 5), fock_state(2, 5))  # modes (s+, s-)
        u = two_mode_rotation(math.pi / 4, dims)
        rho = DensityMatrix.from_vector(dims, u @ vec)
        dist = photon_number_dist(rho, 0)
        assert dist.p[1] / dist.p[2] == pytest.approx(2.0, abs=1e-10)
