"""Reduce a power delay profile to a (distance, path loss) sample.

Builds a small synthetic PDP with a dominant first component and a few
weaker reflections, integrates the components within the noise window,
and converts received power to path loss with the link calibration.
"""

import numpy as np

from busloss import (
    HeightClass,
    LinkCalibration,
    MeasurementSet,
    PdpRecord,
    aggregate_measurement,
    delay_to_distance,
    integrate_pdp,
    peak_component,
)

# direct path at 13.5 ns plus two reflections and one bin below the window
pdp = PdpRecord(
    delays_ns=np.array([13.5, 19.0, 27.5, 41.0]),
    powers_db=np.array([-99.4, -112.0, -117.5, -131.0]),
)

cal = LinkCalibration(radiated_power_db=0.0, g_tx_dbi=2.0, g_rx_dbi=2.0,
                      noise_threshold_db=25.0)

delay, power = peak_component(pdp)
print(f"peak component: {power:.1f} dB at {delay:.1f} ns "
      f"-> {delay_to_distance(delay):.2f} m")
print(f"integrated rx power (25 dB window): {integrate_pdp(pdp):.2f} dB")

# ten repeated sweeps with small power jitter, averaged in the linear domain
rng = np.random.default_rng(0)
sweeps = [
    PdpRecord(pdp.delays_ns, pdp.powers_db + rng.normal(0, 0.5, len(pdp)))
    for _ in range(10)
]
mset = MeasurementSet(seat=14, height=HeightClass.UPPER, sweeps=sweeps)
distance, loss = aggregate_measurement(mset, cal)
print(f"aggregated over 10 sweeps: d = {distance:.2f} m, path loss = {loss:.2f} dB")
