"""Per-seat link budget over the default bus layout.

Every eligible seat gets mean path loss, SNR, Shannon rate and the analytic
probability of clearing the SNR threshold under shadow fading.
"""

from busloss import (
    HeightClass,
    LinkBudgetConfig,
    builtin_registry,
    default_layout,
    seat_sweep,
)

layout = default_layout()
config = LinkBudgetConfig(
    tx_power_dbm=10.0,      # wearable-class transmit power (not from measurements)
    bandwidth_hz=2.16e9,    # one 60 GHz channel
    noise_figure_db=7.0,
    snr_threshold_db=5.0,
)

for height in (HeightClass.UPPER, HeightClass.LOWER):
    reports = seat_sweep(layout, builtin_registry(), config, height)
    print(f"\n{height.value} positions ({len(reports)} seats):")
    print(f"{'seat':>4} {'d [m]':>7} {'PL [dB]':>8} {'SNR [dB]':>9} "
          f"{'rate [Gbps]':>12} {'coverage':>9}")
    for r in reports[::5]:
        print(
            f"{r.seat_id:>4} {r.distance_m:7.2f} {r.mean_pl_db:8.2f} "
            f"{r.snr_db:9.2f} {r.rate_bps / 1e9:12.3f} {r.coverage_prob:9.3f}"
        )
    worst = min(reports, key=lambda r: r.coverage_prob)
    print(f"  worst seat: {worst.seat_id} at {worst.distance_m:.2f} m, "
          f"coverage {worst.coverage_prob:.3f}")
