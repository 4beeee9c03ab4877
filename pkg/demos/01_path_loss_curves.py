"""Evaluate the shipped path loss models along the bus and compare to free space.

The in-vehicle loss sits well above the free-space baseline at every
distance, and the upper (head-height) positions attenuate faster with
distance than the lower (seat-height) ones.
"""

import numpy as np

from busloss import HeightClass, Region, builtin_model, fspl, mean_path_loss

CARRIER_HZ = 60e9

lower = builtin_model(Region.ALL, HeightClass.LOWER)
upper = builtin_model(Region.ALL, HeightClass.UPPER)

print(f"{'d [m]':>6} {'lower [dB]':>11} {'upper [dB]':>11} {'free space [dB]':>16}")
for d in np.arange(1.0, 12.5, 1.0):
    print(
        f"{d:6.1f} {mean_path_loss(lower, d):11.2f} "
        f"{mean_path_loss(upper, d):11.2f} {fspl(d, CARRIER_HZ):16.2f}"
    )

print()
print("Per-region spread at 8 m (upper positions):")
for region in (Region.A, Region.B, Region.C, Region.D):
    model = builtin_model(region, HeightClass.UPPER)
    print(f"  region {region.value}: {mean_path_loss(model, 8.0):.2f} dB"
          f"  (sigma {model.sigma_db:.2f} dB)")
