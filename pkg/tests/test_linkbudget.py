"""Tests for link budget, coverage and interference footprint analysis."""

import math

import numpy as np
import pytest

from busloss.geometry import Point3, SeatSpec, BusLayout, default_layout, link_distance
from busloss.linkbudget import (
    LinkBudgetConfig,
    empirical_coverage,
    interference_footprint,
    link_snr,
    noise_floor_dbm,
    seat_sweep,
    shannon_rate,
)
from busloss.models import (
    HeightClass,
    PathLossModel,
    Region,
    builtin_registry,
    coverage_probability,
    mean_path_loss,
)

CONFIG = LinkBudgetConfig(
    tx_power_dbm=10.0, g_tx_dbi=2.0, g_rx_dbi=2.0,
    bandwidth_hz=2.16e9, noise_figure_db=7.0, snr_threshold_db=5.0,
)


def two_seat_layout(sigma=0.0):
    """Two seats mirrored about the aisle: identical link geometry."""
    layout = BusLayout(
        length_m=12.80, width_m=2.55, rx=Point3(0.5, 1.275, 2.0),
        seats=[
            SeatSpec(1, 4.0, 1.0, 0.5, Region.A),
            SeatSpec(2, 4.0, 1.55, 0.5, Region.A),
        ],
    )
    models = {
        (Region.A, HeightClass.UPPER): PathLossModel(
            82.86, 2.03, sigma, region=Region.A, height=HeightClass.UPPER
        )
    }
    return layout, models


class TestNoiseFloor:
    def test_one_hertz_reference(self):
        config = LinkBudgetConfig(bandwidth_hz=1.0, noise_figure_db=0.0)
        assert noise_floor_dbm(config) == pytest.approx(-174.0)

    def test_ay_channel(self):
        assert noise_floor_dbm(CONFIG) == pytest.approx(-73.655, abs=0.005)

    def test_doubling_bandwidth(self):
        a = noise_floor_dbm(LinkBudgetConfig(bandwidth_hz=1e9))
        b = noise_floor_dbm(LinkBudgetConfig(bandwidth_hz=2e9))
        assert b - a == pytest.approx(3.0103, abs=1e-4)


class TestLinkSnr:
    def test_reference_budget(self):
        assert link_snr(CONFIG, 103.16) == pytest.approx(-15.5045, abs=0.001)

    def test_loss_linearity(self):
        assert link_snr(CONFIG, 100.0) - link_snr(CONFIG, 103.0) == pytest.approx(3.0)

    def test_zero_crossing(self):
        pl = CONFIG.tx_power_dbm + CONFIG.g_tx_dbi + CONFIG.g_rx_dbi - noise_floor_dbm(CONFIG)
        assert link_snr(CONFIG, pl) == pytest.approx(0.0)


class TestShannonRate:
    def test_unit_bandwidth(self):
        assert shannon_rate(0.0, 1.0) == pytest.approx(1.0)

    def test_vanishing_snr(self):
        assert shannon_rate(-300.0, 1e9) == pytest.approx(0.0, abs=1e-9)

    def test_twenty_db(self):
        assert shannon_rate(20.0, 2.16e9) == pytest.approx(14.3817e9, rel=1e-4)

    def test_bad_bandwidth(self):
        with pytest.raises(ValueError):
            shannon_rate(0.0, 0.0)


class TestSeatSweep:
    def test_report_counts(self):
        layout = default_layout()
        registry = builtin_registry()
        assert len(seat_sweep(layout, registry, CONFIG, HeightClass.UPPER)) == 30
        assert len(seat_sweep(layout, registry, CONFIG, HeightClass.LOWER)) == 22

    def test_equal_distance_equal_report(self):
        layout, models = two_seat_layout()
        a, b = seat_sweep(layout, models, CONFIG, HeightClass.UPPER)
        assert a.distance_m == b.distance_m
        assert a.snr_db == b.snr_db
        assert a.rate_bps == b.rate_bps

    def test_snr_decreases_with_distance_within_group(self):
        layout = default_layout()
        reports = seat_sweep(layout, builtin_registry(), CONFIG, HeightClass.UPPER)
        group_a = sorted(
            (r for r in reports if layout.seat(r.seat_id).group == Region.A),
            key=lambda r: r.distance_m,
        )
        snrs = [r.snr_db for r in group_a]
        assert all(x >= y for x, y in zip(snrs, snrs[1:]))

    def test_coverage_matches_analytic(self):
        layout = default_layout()
        registry = builtin_registry()
        pl_max = (CONFIG.tx_power_dbm + CONFIG.g_tx_dbi + CONFIG.g_rx_dbi
                  - noise_floor_dbm(CONFIG) - CONFIG.snr_threshold_db)
        for r in seat_sweep(layout, registry, CONFIG, HeightClass.UPPER):
            model = registry[(layout.seat(r.seat_id).group, HeightClass.UPPER)]
            assert r.coverage_prob == pytest.approx(
                coverage_probability(model, r.distance_m, pl_max)
            )

    def test_use_all_model(self):
        layout = default_layout()
        registry = builtin_registry()
        reports = seat_sweep(layout, registry, CONFIG, HeightClass.UPPER, use_all_model=True)
        model = registry[(Region.ALL, HeightClass.UPPER)]
        for r in reports:
            assert r.mean_pl_db == pytest.approx(mean_path_loss(model, r.distance_m))


class TestInterferenceFootprint:
    def test_single_seat_equals_snr_distribution(self):
        layout, models = two_seat_layout(sigma=0.0)
        (summary,) = interference_footprint(
            layout, models, CONFIG, [1], HeightClass.UPPER, seed=0, n_draws=100
        )
        d = link_distance(layout, 1, HeightClass.UPPER)
        pl = mean_path_loss(models[(Region.A, HeightClass.UPPER)], d)
        # lone transmitter: SINR is plain SNR
        assert summary.mean_db == pytest.approx(link_snr(CONFIG, pl), abs=1e-9)
        assert summary.median_db == pytest.approx(summary.mean_db, abs=1e-9)

    def test_two_equal_interferers_closed_form(self):
        layout, models = two_seat_layout(sigma=0.0)
        summaries = interference_footprint(
            layout, models, CONFIG, [1, 2], HeightClass.UPPER, seed=1, n_draws=50
        )
        d = link_distance(layout, 1, HeightClass.UPPER)
        pl = mean_path_loss(models[(Region.A, HeightClass.UPPER)], d)
        s_mw = 10 ** ((CONFIG.tx_power_dbm + 4.0 - pl) / 10.0)
        n_mw = 10 ** (noise_floor_dbm(CONFIG) / 10.0)
        expected = 10 * math.log10(s_mw / (n_mw + s_mw))
        for s in summaries:
            assert s.mean_db == pytest.approx(expected, abs=1e-9)
        assert expected < link_snr(CONFIG, pl)
        assert expected < 0.0  # equal signal and interference caps SINR below 0 dB

    def test_sinr_below_snr_with_interferers(self):
        layout = BusLayout(
            length_m=12.80, width_m=2.55, rx=Point3(0.5, 1.275, 2.0),
            seats=[
                SeatSpec(1, 3.0, 0.45, 0.5, Region.A),
                SeatSpec(2, 6.0, 1.55, 0.5, Region.A),
                SeatSpec(3, 9.5, 2.10, 0.5, Region.A),
            ],
        )
        models = {
            (Region.A, HeightClass.UPPER): PathLossModel(
                82.86, 2.03, 0.0, region=Region.A, height=HeightClass.UPPER
            )
        }
        summaries = interference_footprint(
            layout, models, CONFIG, [1, 2, 3], HeightClass.UPPER, seed=3, n_draws=10
        )
        for s in summaries:
            d = link_distance(layout, s.seat_id, HeightClass.UPPER)
            model = models[(Region.A, HeightClass.UPPER)]
            assert s.mean_db < link_snr(CONFIG, mean_path_loss(model, d))

    def test_interferer_at_noise_level_costs_3db(self):
        # adding an interferer exactly as strong as the noise halves SINR
        layout, models = two_seat_layout(sigma=0.0)
        d = link_distance(layout, 1, HeightClass.UPPER)
        pl = mean_path_loss(models[(Region.A, HeightClass.UPPER)], d)
        n_mw = 10 ** (noise_floor_dbm(CONFIG) / 10.0)
        s_mw = 10 ** ((CONFIG.tx_power_dbm + 4.0 - pl) / 10.0)
        with_interferer = 10 * math.log10(s_mw / (n_mw + n_mw))
        without = 10 * math.log10(s_mw / n_mw)
        assert without - with_interferer == pytest.approx(3.0103, abs=1e-4)

    def test_seed_determinism(self):
        layout = default_layout()
        registry = builtin_registry()
        kwargs = dict(active_seats=[2, 12], height=HeightClass.UPPER, seed=9, n_draws=500)
        a = interference_footprint(layout, registry, CONFIG, **kwargs)
        b = interference_footprint(layout, registry, CONFIG, **kwargs)
        assert [(s.mean_db, s.median_db, s.p05_db) for s in a] == [
            (s.mean_db, s.median_db, s.p05_db) for s in b
        ]

    def test_sigma_zero_independent_of_draws(self):
        layout, models = two_seat_layout(sigma=0.0)
        few = interference_footprint(layout, models, CONFIG, [1, 2], HeightClass.UPPER, seed=0, n_draws=1)
        many = interference_footprint(layout, models, CONFIG, [1, 2], HeightClass.UPPER, seed=99, n_draws=1000)
        for f, m in zip(few, many):
            assert f.mean_db == pytest.approx(m.mean_db, abs=1e-12)

    def test_frozen_shadowing_collapses_distribution(self):
        layout = default_layout()
        registry = builtin_registry()
        summaries = interference_footprint(
            layout, registry, CONFIG, [1, 15], HeightClass.UPPER,
            seed=5, n_draws=200, frozen_shadowing=True,
        )
        for s in summaries:
            assert s.p05_db == pytest.approx(s.median_db, abs=1e-9)


class TestEmpiricalCoverage:
    def test_sigma_zero_above_threshold(self):
        layout, models = two_seat_layout(sigma=0.0)
        config = LinkBudgetConfig(tx_power_dbm=60.0, snr_threshold_db=5.0)
        cov = empirical_coverage(layout, models, config, HeightClass.UPPER, seed=0, n_draws=10)
        assert set(cov.values()) == {1.0}

    def test_threshold_minus_inf(self):
        layout, models = two_seat_layout(sigma=3.0)
        config = LinkBudgetConfig(snr_threshold_db=-math.inf)
        cov = empirical_coverage(layout, models, config, HeightClass.UPPER, seed=0, n_draws=100)
        assert set(cov.values()) == {1.0}

    def test_converges_to_analytic(self):
        layout = default_layout()
        registry = builtin_registry()
        n_draws = 200_000
        cov = empirical_coverage(layout, registry, CONFIG, HeightClass.LOWER, seed=17, n_draws=n_draws)
        pl_max = (CONFIG.tx_power_dbm + 4.0 - noise_floor_dbm(CONFIG) - CONFIG.snr_threshold_db)
        for seat_id, fraction in cov.items():
            model = registry[(layout.seat(seat_id).group, HeightClass.LOWER)]
            d = link_distance(layout, seat_id, HeightClass.LOWER)
            p = coverage_probability(model, d, pl_max)
            margin = 3 * math.sqrt(p * (1 - p) / n_draws) + 0.002
            assert abs(fraction - p) <= margin


class TestConfigValidation:
    def test_bad_bandwidth(self):
        with pytest.raises(ValueError):
            LinkBudgetConfig(bandwidth_hz=0.0)

    def test_negative_noise_figure(self):
        with pytest.raises(ValueError):
            LinkBudgetConfig(noise_figure_db=-1.0)
