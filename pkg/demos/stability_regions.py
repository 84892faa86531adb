"""Stability polynomials of the four schemes.

Samples R_s(z) over each family's stability interval and verifies |R_s| <= 1,
then prints the monotone/stable CFL limits as functions of the stage count.
Optionally plots the polynomials when matplotlib is available.
"""

import numpy as np

from stsolve import FAMILIES, SchemeSpec, cfl_limit, stability_interval, stability_polynomial_value

s = 9
print(f"CFL limits c = dt*lambda/4 at s = {s}:")
for family in FAMILIES:
    print(f"  {family}: c_max = {cfl_limit(family, s):.3f}, "
          f"stability interval z in [{stability_interval(SchemeSpec(family, s))[0]:.1f}, 0]")

for family in FAMILIES:
    spec = SchemeSpec(family, s)
    zmin, zmax = stability_interval(spec)
    z = np.linspace(zmin, zmax, 2000)
    r = stability_polynomial_value(spec, z)
    print(f"{family}: max |R_s| over the interval = {np.abs(r).max():.15f}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 5))
    for family in FAMILIES:
        spec = SchemeSpec(family, s)
        zmin, _ = stability_interval(spec)
        z = np.linspace(zmin * 1.02, 0, 2000)
        ax.plot(z, stability_polynomial_value(spec, z), label=family)
    ax.axhline(1.0, color="k", lw=0.5)
    ax.axhline(-1.0, color="k", lw=0.5)
    ax.set_xlabel("z = dt * lambda")
    ax.set_ylabel("R_s(z)")
    ax.set_title(f"Stability polynomials, s = {s}")
    ax.legend()
    fig.tight_layout()
    out = __file__.replace(".py", ".png")
    fig.savefig(out, dpi=120)
    print(f"wrote {out}")
except ImportError:
    print("matplotlib not installed; skipping the plot")
