"""Link budget and interference footprint analysis over the bus layout.

Per-seat SNR, Shannon rate and coverage from the fitted path loss models,
plus Monte-Carlo SINR when several transmitters share the channel. All
power combining happens in linear watts; only the reported figures are dB.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .geometry import BusLayout, link_distance, seats_in_group
from .models import (
    HeightClass,
    PathLossModel,
    Region,
    coverage_probability,
    is_extrapolated,
    mean_path_loss,
)

THERMAL_NOISE_DBM_PER_HZ = -174.0  # 290 K reference

ModelMap = Mapping[tuple[Region, HeightClass], PathLossModel]


@dataclass(frozen=True)
class LinkBudgetConfig:
    """Budget inputs. Only the 2 dBi antenna gains come from the measured
    system; the remaining defaults are 802.11ay-style placeholders."""

    tx_power_dbm: float = 10.0
    g_tx_dbi: float = 2.0
    g_rx_dbi: float = 2.0
    bandwidth_hz: float = 2.16e9
    noise_figure_db: float = 7.0
    snr_threshold_db: float = 5.0

    def __post_init__(self) -> None:
        if not self.bandwidth_hz > 0:
            raise ValueError("bandwidth_hz must be > 0")
        if self.noise_figure_db < 0:
            raise ValueError("noise_figure_db must be >= 0")


@dataclass
class SeatReport:
    """Link budget outcome for one transmitter position."""

    seat_id: int
    height: HeightClass
    distance_m: float
    mean_pl_db: float
    snr_db: float
    rate_bps: float
    coverage_prob: float
    extrapolated: bool = False


@dataclass
class FootprintSummary:
    """SINR distribution summary for one active transmitter."""

    seat_id: int
    mean_db: float
    median_db: float
    p05_db: float


def noise_floor_dbm(config: LinkBudgetConfig) -> float:
    """Thermal noise power over the receive bandwidth plus the noise figure."""
    return (
        THERMAL_NOISE_DBM_PER_HZ
        + 10.0 * math.log10(config.bandwidth_hz)
        + config.noise_figure_db
    )


def link_snr(config: LinkBudgetConfig, pl_db: float) -> float:
    """SNR in dB for a link with the given path loss."""
    return (
        config.tx_power_dbm
        + config.g_tx_dbi
        + config.g_rx_dbi
        - pl_db
        - noise_floor_dbm(config)
    )


def shannon_rate(snr_db: float, bandwidth_hz: float) -> float:
    """Shannon capacity in bit/s."""
    if not bandwidth_hz > 0:
        raise ValueError("bandwidth_hz must be > 0")
    return bandwidth_hz * math.log2(1.0 + 10.0 ** (snr_db / 10.0))


def _select_model(
    models: ModelMap, region: Region, height: HeightClass, use_all_model: bool
) -> PathLossModel:
    if use_all_model:
        return models[(Region.ALL, height)]
    return models[(region, height)]


def seat_sweep(
    layout: BusLayout,
    models: ModelMap,
    config: LinkBudgetConfig,
    height: HeightClass,
    use_all_model: bool = False,
) -> list[SeatReport]:
    """Link budget for every eligible seat at the given height class.

    Coverage is the analytic probability that path loss stays below the
    budget margin implied by the SNR threshold.
    """
    pl_max = (
        config.tx_power_dbm
        + config.g_tx_dbi
        + config.g_rx_dbi
        - noise_floor_dbm(config)
        - config.snr_threshold_db
    )
    reports = []
    for seat_id in seats_in_group(layout, Region.ALL, height):
        seat = layout.seat(seat_id)
        model = _select_model(models, seat.group, height, use_all_model)
        d = link_distance(layout, seat_id, height)
        pl = mean_path_loss(model, d)
        snr = link_snr(config, pl)
        reports.append(
            SeatReport(
                seat_id=seat_id,
                height=height,
                distance_m=d,
                mean_pl_db=pl,
                snr_db=snr,
                rate_bps=shannon_rate(snr, config.bandwidth_hz),
                coverage_prob=coverage_probability(model, d, pl_max),
                extrapolated=is_extrapolated(d),
            )
        )
    return reports


def _link_arrays(
    layout: BusLayout,
    models: ModelMap,
    height: HeightClass,
    seat_ids: Sequence[int],
    use_all_model: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Per-link (mean path loss, sigma) arrays for the given seats."""
    means, sigmas = [], []
    for seat_id in seat_ids:
        seat = layout.seat(seat_id)
        model = _select_model(models, seat.group, height, use_all_model)
        d = link_distance(layout, seat_id, height)
        means.append(mean_path_loss(model, d))
        sigmas.append(model.sigma_db)
    return np.array(means), np.array(sigmas)


def interference_footprint(
    layout: BusLayout,
    models: ModelMap,
    config: LinkBudgetConfig,
    active_seats: Sequence[int],
    height: HeightClass,
    seed: int,
    n_draws: int,
    use_all_model: bool = False,
    frozen_shadowing: bool = False,
) -> list[FootprintSummary]:
    """Monte-Carlo SINR at the access point with all active seats transmitting.

    Every active link's shadowing is drawn independently per draw (or once
    for all draws with frozen_shadowing). All transmitters share the channel,
    so each seat's signal competes with the sum of the others plus noise.
    """
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")
    if not active_seats:
        raise ValueError("need at least one active seat")
    means, sigmas = _link_arrays(layout, models, height, active_seats, use_all_model)

    rng = np.random.default_rng(seed)
    if frozen_shadowing:
        shadow = np.broadcast_to(
            sigmas * rng.standard_normal(len(active_seats)), (n_draws, len(active_seats))
        )
    else:
        shadow = sigmas * rng.standard_normal((n_draws, len(active_seats)))
    pl_db = means + shadow

    rx_dbm = config.tx_power_dbm + config.g_tx_dbi + config.g_rx_dbi - pl_db
    rx_mw = 10.0 ** (rx_dbm / 10.0)
    noise_mw = 10.0 ** (noise_floor_dbm(config) / 10.0)
    total_mw = rx_mw.sum(axis=1, keepdims=True)
    sinr_db = 10.0 * np.log10(rx_mw / (noise_mw + total_mw - rx_mw))

    return [
        FootprintSummary(
            seat_id=seat_id,
            mean_db=float(np.mean(sinr_db[:, i])),
            median_db=float(np.median(sinr_db[:, i])),
            p05_db=float(np.percentile(sinr_db[:, i], 5.0)),
        )
        for i, seat_id in enumerate(active_seats)
    ]


def empirical_coverage(
    layout: BusLayout,
    models: ModelMap,
    config: LinkBudgetConfig,
    height: HeightClass,
    seed: int,
    n_draws: int,
    use_all_model: bool = False,
) -> dict[int, float]:
    """Fraction of shadowing draws whose SNR clears the threshold, per seat."""
    if n_draws < 1:
        raise ValueError("n_draws must be >= 1")
    seat_ids = seats_in_group(layout, Region.ALL, height)
    means, sigmas = _link_arrays(layout, models, height, seat_ids, use_all_model)

    rng = np.random.default_rng(seed)
    pl_db = means + sigmas * rng.standard_normal((n_draws, len(seat_ids)))
    snr_db = (
        config.tx_power_dbm
        + config.g_tx_dbi
        + config.g_rx_dbi
        - pl_db
        - noise_floor_dbm(config)
    )
    fractions = np.mean(snr_db >= config.snr_threshold_db, axis=0)
    return {seat_id: float(fractions[i]) for i, seat_id in enumerate(seat_ids)}


def config_from_dict(obj: dict) -> LinkBudgetConfig:
    defaults = LinkBudgetConfig()
    return LinkBudgetConfig(
        tx_power_dbm=float(obj.get("tx_power_dbm", defaults.tx_power_dbm)),
        g_tx_dbi=float(obj.get("g_tx_dbi", defaults.g_tx_dbi)),
        g_rx_dbi=float(obj.get("g_rx_dbi", defaults.g_rx_dbi)),
        bandwidth_hz=float(obj.get("bandwidth_hz", defaults.bandwidth_hz)),
        noise_figure_db=float(obj.get("noise_figure_db", defaults.noise_figure_db)),
        snr_threshold_db=float(obj.get("snr_threshold_db", defaults.snr_threshold_db)),
    )


def reports_to_csv(reports: Sequence[SeatReport]) -> str:
    """Seat sweep CSV: seat,height,distance_m,mean_pl_db,snr_db,rate_bps,coverage."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["seat", "height", "distance_m", "mean_pl_db", "snr_db", "rate_bps", "coverage"]
    )
    for r in reports:
        writer.writerow(
            [
                r.seat_id,
                r.height.value,
                f"{r.distance_m:.4f}",
                f"{r.mean_pl_db:.4f}",
                f"{r.snr_db:.4f}",
                f"{r.rate_bps:.1f}",
                f"{r.coverage_prob:.6f}",
            ]
        )
    return buf.getvalue()


def report_to_dict(r: SeatReport) -> dict:
    return {
        "seat": r.seat_id,
        "height": r.height.value,
        "distance_m": r.distance_m,
        "mean_pl_db": r.mean_pl_db,
        "snr_db": r.snr_db,
        "rate_bps": r.rate_bps,
        "coverage": r.coverage_prob,
        "extrapolated": r.extrapolated,
    }


def footprint_to_csv(summaries: Sequence[FootprintSummary]) -> str:
    """Footprint CSV with percentile columns."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seat", "sinr_mean_db", "sinr_median_db", "sinr_p05_db"])
    for s in summaries:
        writer.writerow(
            [s.seat_id, f"{s.mean_db:.4f}", f"{s.median_db:.4f}", f"{s.p05_db:.4f}"]
        )
    return buf.getvalue()


def footprint_to_dict(s: FootprintSummary) -> dict:
    return {
        "seat": s.seat_id,
        "sinr_mean_db": s.mean_db,
        "sinr_median_db": s.median_db,
        "sinr_p05_db": s.p05_db,
    }
