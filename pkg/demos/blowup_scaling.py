"""Blow-up of the semilinear heat equation, desk scale.

Runs u_t = u_xx + u^3 on [-1, 1] to a max value of 1e12 with adaptive
refinement, then checks the three scaling laws against their predicted
exponents.  Takes a few seconds.
"""

import numpy as np

from stsolve import loglog_slope, parse_config, run

cfg = parse_config(
    """
problem = semilinear_heat
scheme = rkl2
p = 3
n_intervals = 256
threshold = 1e12
"""
)

result = run(cfg)
rep = result.report
print(f"terminated: {rep.termination_reason} at max u = {rep.final_value:.3e}")
print(f"steps: {rep.steps}, refinements: {rep.refinement_count}, "
      f"wall: {rep.wall_time_s:.2f} s")

tau = result.time_to_end()
values = result.series.column("value")
hw = result.series.column("half_width")
dvdt = result.series.column("dvdt")

ok = tau > 0
lo = tau[ok].min() * 30
window = (lo, lo * 1e6)

slope, _ = loglog_slope(tau[ok], values[ok], window)
print(f"max-value law:   slope {slope:+.4f}   (predicted -1/(p-1) = -0.5)")

mask = ok & (tau >= lo) & (tau <= lo * 1e4) & np.isfinite(hw) & (hw > 0)
slope, _ = loglog_slope(hw[mask] ** 2, values[mask], (0, np.inf))
print(f"half-width law:  slope {slope:+.4f}   (predicted -1/(p-1) = -0.5)")

mask = ok & (tau >= lo) & (tau <= lo * 1e6) & np.isfinite(dvdt) & (dvdt > 0)
slope, _ = loglog_slope(values[mask], dvdt[mask], (0, np.inf))
print(f"growth law:      slope {slope:+.4f}   (predicted p = 3)")
