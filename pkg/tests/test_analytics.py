"""Tests for the closed-form and moment-ODE theory."""

import numpy as np
import pytest

from phog.analytics import (
    MomentSet,
    UniversalParams,
    n_of_x,
    q_of_x,
    q_ode,
    universal_params,
    zeta2_fixed_point,
    zeta3_fixed_point,
    zeta_moment_odes,
)
from phog.device import device_for_scaled_run, derived_rates
from phog.diagonal import q_trajectory


class TestQofX:
    def test_boundaries(self):
        assert q_of_x(0.0) == pytest.approx(0.0)
        assert q_of_x(1e9) == pytest.approx(-0.8, abs=1e-6)

    def test_known_value(self):
        assert q_of_x(0.33) == pytest.approx(-0.5746, abs=5e-4)
        assert q_of_x(0.33) < -0.5  # enough squeezing at the quoted X

    def test_monotone_decreasing_and_bounded(self):
        xs = np.linspace(0.0, 50.0, 400)
        qs = q_of_x(xs)
        assert np.all(np.diff(qs) < 0)
        assert np.all(qs <= 0.0)
        assert np.all(qs > -0.8)

    def test_mean_law(self):
        assert n_of_x(400.0, 0.0) == pytest.approx(400.0)
        assert n_of_x(400.0, 1.5) == pytest.approx(400.0 / 2.0)


class TestUniversalParams:
    def test_bulk_glass_numbers(self):
        up = universal_params(
            gamma1=11.5129, gamma3=8e-18, n0=1.2e9, t_fix=0.03
        )
        assert up.X == pytest.approx(0.35, abs=0.03)

    def test_y_boundary(self):
        g1, g3 = 2.0, 1e-4
        n0 = np.sqrt(g1 / g3)
        up = universal_params(g1, g3, n0, 1.0)
        assert up.Y == pytest.approx(1.0, rel=1e-12)

    def test_fig3_y_below_one(self):
        r = derived_rates(device_for_scaled_run(kerr_U=2.0, Gamma=432.0, gamma1=10.0))
        up = universal_params(10.0, r.gamma3, 900.0, 1.0)
        assert up.Y < 1.0

    def test_gamma3_zero_rejected(self):
        with pytest.raises(ValueError):
            universal_params(1.0, 0.0, 100.0, 1.0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            UniversalParams(X=-1.0, Y=0.0)


class TestQOde:
    def test_linear_loss_only_keeps_coherent(self):
        t = np.linspace(0.0, 3.0, 20)
        q = q_ode(1.0, 0.0, 0.0, lambda t: 100.0, 0.0, t)
        assert np.max(np.abs(q)) < 1e-12

    def test_two_photon_fixed_point(self):
        t = np.linspace(0.0, 100.0, 30)
        q = q_ode(0.0, 1e-2, 0.0, lambda t: 50.0, 0.0, t)
        assert q[-1] == pytest.approx(-1.0 / 3.0, abs=1e-6)

    def test_ncl_with_mean_path_matches_q_of_x(self):
        g3, n0 = 1e-5, 300.0
        x_max = 2.0
        t = np.linspace(0.0, x_max / (g3 * n0**2), 40)
        x = g3 * n0**2 * t
        q = q_ode(0.0, 0.0, g3, lambda tt: n_of_x(n0, g3 * n0**2 * tt), 0.0, t)
        assert np.max(np.abs(q - q_of_x(x))) < 1e-8


class TestZetaOdes:
    def test_pure_linear_fixed_points(self):
        assert zeta2_fixed_point(1.0, 0.0, 0.0, 500.0) == pytest.approx(1.0)
        assert zeta3_fixed_point(1.0, 0.0, 0.0, 500.0, 1.0) == pytest.approx(1.0)

    def test_pure_two_photon_fixed_points(self):
        z2 = zeta2_fixed_point(0.0, 1.0, 0.0, 500.0)
        assert z2 == pytest.approx(2.0 / 3.0)
        # the printed zeta3 equation has its fixed point at 4/15; the exact
        # diagonal solver confirms this value (the paper's in-text 2/30 does
        # not satisfy the paper's own equation)
        assert zeta3_fixed_point(0.0, 1.0, 0.0, 500.0, z2) == pytest.approx(4.0 / 15.0)

    def test_pure_ncl_fixed_points(self):
        z2 = zeta2_fixed_point(0.0, 0.0, 1.0, 500.0)
        assert z2 == pytest.approx(0.2)
        assert zeta3_fixed_point(0.0, 0.0, 1.0, 500.0, z2) == pytest.approx(0.01)
        # skewness 0.11/sqrt(mu) at the NCL fixed point
        skew = 0.01 / 0.2**1.5
        assert skew == pytest.approx(0.1118, abs=1e-3)

    def test_ode_reaches_fixed_points(self):
        g3, n0 = 1e-7, 2000.0
        t = np.linspace(0.0, 3.0 / (g3 * n0**2), 50)
        traj = zeta_moment_odes(MomentSet.coherent(n0), 0.0, 0.0, g3, t)
        # quasi-static tracking of the asymptote once equilibrated
        assert traj.zeta2[-1] == pytest.approx(traj.zeta2_asymptote[-1], abs=0.05)
        assert traj.zeta2[-1] == pytest.approx(0.2, abs=0.05)

    def test_ode_matches_diagonal_oracle(self):
        r = derived_rates(device_for_scaled_run(kerr_U=2.0, Gamma=432.0, gamma1=0.0))
        n0 = 400.0
        t = np.linspace(0.0, 1.0 / (r.gamma3 * n0**2), 25)
        traj = zeta_moment_odes(MomentSet.coherent(n0), 0.0, r.gamma2, r.gamma3, t)
        exact = q_trajectory(n0, 0.0, r.gamma2, r.gamma3, t)
        assert np.max(np.abs(traj.mu - exact.n_mean) / n0) < 0.01
        assert np.max(np.abs(traj.q - exact.q)) < 0.03

    def test_low_mu_warning(self):
        with pytest.warns(UserWarning):
            zeta_moment_odes(
                MomentSet.coherent(30.0), 0.0, 0.0, 1e-3, np.linspace(0.0, 50.0, 10)
            )

    def test_moment_set_accessors(self):
        ms = MomentSet(mu=400.0, zeta2=0.2, zeta3=0.01, zeta4=0.1)
        assert ms.q == pytest.approx(-0.8)
        assert ms.skewness == pytest.approx(0.01 / (20.0 * 0.2**1.5))
        with pytest.raises(ValueError):
            MomentSet(mu=-1.0, zeta2=1.0, zeta3=1.0)
