"""Exact-rational monotonicity certificates.

For each scheme family, certifies in exact arithmetic that every stencil
coefficient of one superstep is nonnegative at sampled CFL fractions
including the endpoint of the monotone range, and shows a counterexample
just beyond it.
"""

from fractions import Fraction as F

from stsolve import FAMILIES
from stsolve.monotone import ENDPOINT, verify_monotone

for family in FAMILIES:
    worst = None
    for s in range(1, 33):
        cert = verify_monotone(family, s, [F(1, 16), F(1, 8), ENDPOINT])
        assert cert.ok, (family, s, cert.violations)
        m = min(r.min_coefficient for r in cert.samples)
        if worst is None or m < worst:
            worst = m
    print(f"{family}: all stencils nonnegative for s <= 32; "
          f"smallest coefficient seen = {worst}")

beyond = verify_monotone("rkl1", 2, [F(17, 64)])
bad = beyond.violations[0]
print(f"\njust beyond the monotone range (x = 17/64 > 1/4): "
      f"coefficient {bad.min_coefficient} at offset {bad.min_offset} -- "
      f"the comparison principle fails outside the certified interval")
