"""Monte-Carlo interference footprint: several seats transmitting at once.

All active transmitters share one channel, so each link's SINR at the
access point degrades as more seats become active. Shadowing is drawn
independently per link and per draw.
"""

from busloss import (
    HeightClass,
    LinkBudgetConfig,
    builtin_registry,
    default_layout,
    empirical_coverage,
    interference_footprint,
)

layout = default_layout()
registry = builtin_registry()
config = LinkBudgetConfig()

for active in ([14], [14, 2], [14, 2, 22, 30]):
    summaries = interference_footprint(
        layout, registry, config, active, HeightClass.UPPER,
        seed=7, n_draws=50_000,
    )
    label = ",".join(str(s) for s in active)
    print(f"\nactive seats [{label}]:")
    for s in summaries:
        print(f"  seat {s.seat_id:>2}: mean SINR {s.mean_db:7.2f} dB, "
              f"median {s.median_db:7.2f} dB, 5th pct {s.p05_db:7.2f} dB")

print("\nempirical coverage (no interferers, 100k draws, threshold "
      f"{config.snr_threshold_db} dB):")
coverage = empirical_coverage(
    layout, registry, config, HeightClass.UPPER, seed=3, n_draws=100_000
)
sample = {seat: coverage[seat] for seat in (1, 14, 30)}
for seat, frac in sample.items():
    print(f"  seat {seat:>2}: {frac:.3f}")
