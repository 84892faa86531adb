"""Diagnostics of the approach to the singularity: half-width, log-log slope
fits, similarity-collapse profiles, cone slope, and the pinch-rate law.

All log-log fits use natural logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .grid import Field

# Far-field slope of the physically selected pinch-off similarity profile:
# tan of the 46.0444 degree cone half-angle.
CONE_ANGLE_DEG = 46.0444
CONE_SLOPE = math.tan(math.radians(CONE_ANGLE_DEG))

# |d(min r)/dt| = PINCH_RATE_CONSTANT / (min r)^3 in the self-similar regime.
PINCH_RATE_CONSTANT = 0.060575684


@dataclass
class DiagnosticsRecord:
    time: float
    value: float            # max (blow-up) or min (pinch-off) of the field
    half_width: float       # nan when undefined / not applicable
    dvdt: float             # forward-difference time derivative at x = 0
    cone_slope: float       # nan for the semilinear problem
    level: int              # refinement count at snapshot time


@dataclass
class DiagnosticsSeries:
    records: list[DiagnosticsRecord] = field(default_factory=list)

    def append(self, rec: DiagnosticsRecord) -> None:
        # ties allowed: the float projection of the exact run time saturates
        # once T - t falls below eps * t near the singularity
        if self.records and rec.time < self.records[-1].time:
            raise ValueError("snapshot times must be non-decreasing")
        self.records.append(rec)

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records], dtype=np.float64)

    def __len__(self) -> int:
        return len(self.records)


def half_width(f: Field) -> float:
    """Smallest x > 0 where the natural cubic spline through the field
    equals half its maximum; nan when there is no crossing.
    """
    v = f.values
    vmax = float(v.max())
    target = 0.5 * vmax
    x = f.grid.nodes
    c = f.grid.center_index
    spline = CubicSpline(x, v, bc_type="natural")
    # walk segments rightward from the center; spline interpolates nodes, so
    # a sign change of (v - target) brackets the smallest crossing
    prev = v[c] - target
    if prev <= 0.0:
        return float("nan")
    for i in range(c + 1, x.size):
        cur = v[i] - target
        if cur <= 0.0:
            return float(brentq(lambda t: spline(t) - target, x[i - 1], x[i]))
        prev = cur
    return float("nan")


def loglog_slope(xs, ys, window: tuple[float, float]) -> tuple[float, float]:
    """Least-squares line through (ln xs, ln ys) for xs inside [lo, hi].

    Returns (slope, intercept); requires at least 5 strictly positive points
    in the window.
    """
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    lo, hi = window
    mask = (xs >= lo) & (xs <= hi) & np.isfinite(xs) & np.isfinite(ys)
    if np.any((xs[mask] <= 0) | (ys[mask] <= 0)):
        raise ValueError("log-log fit requires positive data in the window")
    if mask.sum() < 5:
        raise ValueError(f"log-log fit needs >= 5 points in window, got {int(mask.sum())}")
    slope, intercept = np.polyfit(np.log(xs[mask]), np.log(ys[mask]), 1)
    return float(slope), float(intercept)


def reference_profile(eta, p: float):
    """Time-independent rescaled blow-up profile (1 + eta^2 (2^(p-1)-1))^(-1/(p-1))."""
    eta = np.asarray(eta, dtype=np.float64)
    return (1.0 + eta * eta * (2.0 ** (p - 1.0) - 1.0)) ** (-1.0 / (p - 1.0))


def collapse_profile(f: Field) -> tuple[np.ndarray, np.ndarray]:
    """Similarity variables (eta = x / x_half, u / max u) for one snapshot."""
    xh = half_width(f)
    if not np.isfinite(xh):
        raise ValueError("half-width undefined; collapse profile unavailable")
    return f.grid.nodes / xh, f.values / float(f.values.max())


@dataclass
class ConeSlopeResult:
    value: float
    spread: float
    low_confidence: bool


def cone_slope(
    f: Field,
    fit_window: tuple[float, float] | None = None,
    window_lo: float = 5.0,
    window_hi: float = 50.0,
) -> ConeSlopeResult:
    """Plateau of |dr/dz| (forward differences) in an annulus around the tip.

    The default window |z| in [5 min r, 50 min r] excludes the rounded tip
    (inner scale ~ min r) and the far field.  A relative spread above 20%
    flags the estimate low-confidence.
    """
    v = f.values
    z = f.grid.nodes
    rmin = float(v.min())
    if fit_window is None:
        fit_window = (window_lo * rmin, window_hi * rmin)
    lo, hi = fit_window
    slopes = np.abs(np.diff(v) / np.diff(z))
    mid = np.abs(0.5 * (z[:-1] + z[1:]))
    mask = (mid >= lo) & (mid <= hi)
    if mask.sum() < 2:
        return ConeSlopeResult(value=float("nan"), spread=float("inf"), low_confidence=True)
    sel = slopes[mask]
    value = float(np.median(sel))
    if value <= 0.0:
        return ConeSlopeResult(value=0.0, spread=float("inf"), low_confidence=True)
    spread = float((sel.max() - sel.min()) / value)
    return ConeSlopeResult(value=value, spread=spread, low_confidence=spread > 0.20)


def pinch_rate_fit(series: DiagnosticsSeries, window: tuple[float, float]) -> tuple[float, float]:
    """Fit ln |d(min r)/dt| against ln(min r) over a min-r window.

    In the self-similar regime the slope is -3 and the intercept is
    ln(PINCH_RATE_CONSTANT).  The dvdt column must hold the per-step forward
    differences recorded by the run loop.
    """
    mins = series.column("value")
    rates = np.abs(series.column("dvdt"))
    ok = np.isfinite(rates) & (rates > 0)
    return loglog_slope(mins[ok], rates[ok], window)
