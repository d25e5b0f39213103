"""Tests for the platform feasibility calculator."""

import math

import pytest

from phog.feasibility import (
    PlatformSpec,
    feasibility_report,
    kerr_constant,
    load_preset,
    loss_rate,
    preset_names,
)


class TestKerrConstant:
    def test_bulk_glass_value(self):
        platform = load_preset("bulk-glass")
        assert kerr_constant(platform) == pytest.approx(8.5e-8, rel=0.03)

    def test_fiber_value(self):
        platform = load_preset("fiber")
        # frozen from the fiber formula with the preset numbers
        assert kerr_constant(platform) == pytest.approx(2.886e-8, rel=1e-3)

    def test_routes_agree_when_consistent(self):
        from scipy.constants import c

        bulk = load_preset("bulk-glass")
        gamma_nl = bulk.omega * bulk.n2_m2_per_W / (c * bulk.A_eff_m2)
        fiberlike = PlatformSpec(
            name="consistency",
            lambda_m=bulk.lambda_m,
            n_eff=bulk.n_eff,
            T_eff_s=bulk.T_eff_s,
            loss_db_per_m=bulk.loss_db_per_m,
            gamma_nl_per_W_m=gamma_nl,
        )
        assert kerr_constant(fiberlike) == pytest.approx(
            kerr_constant(bulk), rel=1e-9
        )

    def test_doubling_a_eff_halves_u(self):
        bulk = load_preset("bulk-glass")
        doubled = PlatformSpec(
            name="big",
            lambda_m=bulk.lambda_m,
            n_eff=bulk.n_eff,
            T_eff_s=bulk.T_eff_s,
            loss_db_per_m=bulk.loss_db_per_m,
            n2_m2_per_W=bulk.n2_m2_per_W,
            A_eff_m2=2.0 * bulk.A_eff_m2,
        )
        assert kerr_constant(doubled) == pytest.approx(
            kerr_constant(bulk) / 2.0, rel=1e-12
        )

    def test_route_exclusivity_enforced(self):
        with pytest.raises(ValueError):
            PlatformSpec(
                name="bad",
                lambda_m=1e-6,
                n_eff=1.5,
                T_eff_s=1e-13,
                loss_db_per_m=1.0,
            )


class TestLossRate:
    def test_half_db_per_cm(self):
        assert loss_rate(50.0) == pytest.approx(11.51, abs=0.01)

    def test_fiber_loss(self):
        assert loss_rate(3.5e-3) == pytest.approx(8.06e-4, rel=1e-3)

    def test_zero(self):
        assert loss_rate(0.0) == 0.0


class TestFeasibilityReport:
    def test_bulk_glass_chain(self):
        report = feasibility_report(load_preset("bulk-glass"), g_a=200.0, length_m=0.03)
        assert report.gamma3 == pytest.approx(8e-18, rel=0.10)
        assert report.n0_at_y1 == pytest.approx(1.2e9, rel=0.10)
        assert report.pulse_energy_J == pytest.approx(224e-12, rel=0.10)
        assert 0.32 <= report.X <= 0.36
        assert report.predicted_q < -0.5

    def test_fiber_chain(self):
        report = feasibility_report(load_preset("fiber"), g_a=200.0)
        assert report.gamma3 == pytest.approx(9.2e-19, rel=0.10)
        assert report.n0_at_y1 == pytest.approx(3e7, rel=0.10)
        assert report.pulse_energy_J < 10e-12

    def test_nanowire_chain(self):
        report = feasibility_report(load_preset("nanowire"), g_a=200.0, length_m=0.003)
        assert report.gamma3 == pytest.approx(7.75e-11, rel=0.05)
        assert 1.2e6 <= report.n0_at_y1 <= 1.3e6
        assert report.X == pytest.approx(0.345, abs=0.02)
        assert report.pulse_energy_J < 0.3e-12

    def test_scaling_consistency(self):
        # X = gamma3 n0^2 L exactly, and n0(Y=1) ~ 1/sqrt(gamma3)
        platform = load_preset("bulk-glass")
        rep = feasibility_report(platform, g_a=200.0, length_m=0.03)
        assert rep.X == pytest.approx(rep.gamma3 * rep.n0_at_y1**2 * 0.03, rel=1e-12)
        assert rep.n0_at_y1 == pytest.approx(
            math.sqrt(rep.gamma1 / rep.gamma3), rel=1e-12
        )

    def test_presets_available(self):
        assert preset_names() == ["bulk-glass", "fiber", "nanowire"]
        with pytest.raises(KeyError):
            load_preset("diamond")
