"""Symmetric nested 1-D meshes with exact dyadic coordinates, and fields on them.

Node coordinates are kept in two forms: floats for numerics, and integer
"ticks" over a power-of-two denominator (node = a * tick / denom).  All
refinement midpoints are dyadic, so node identity across grids and the
uniform-spacing test are exact integer comparisons, never float tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import NonFiniteFieldError, ResolutionFloorError

DIRICHLET = "dirichlet_zero"
PERIODIC = "periodic"

# Default refinement floor: spacings below 2^-40 of the domain width lose
# too much relative resolution in the solution values near the center.
DEFAULT_FLOOR_SCALE = 2.0**-40

_MAX_DENOM = 2**60  # int64 tick headroom


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True, eq=False)
class Grid1D:
    """Non-uniform nested symmetric mesh on [-a, a].

    Parameters
    ----------
    a : float
        Domain half-width; the domain is [-a, a].
    bc : str
        One of DIRICHLET ("dirichlet_zero") or PERIODIC.  Periodic grids
        store n nodes (the +a endpoint is identified with -a); Dirichlet
        grids store both endpoints.
    ticks : np.ndarray
        Strictly increasing int64 numerators; node = a * tick / denom.
    denom : int
        Power-of-two denominator shared by all ticks.
    levels : np.ndarray
        Per-node refinement level (0 for the initial uniform mesh).
    """

    a: float
    bc: str
    ticks: np.ndarray
    denom: int
    levels: np.ndarray

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError(f"domain half-width must be positive, got {self.a}")
        if self.bc not in (DIRICHLET, PERIODIC):
            raise ValueError(f"unknown boundary condition {self.bc!r}")
        if not _is_power_of_two(self.denom):
            raise ValueError(f"denominator must be a power of two, got {self.denom}")
        ticks = np.asarray(self.ticks, dtype=np.int64)
        levels = np.asarray(self.levels, dtype=np.int64)
        object.__setattr__(self, "ticks", ticks)
        object.__setattr__(self, "levels", levels)
        if ticks.ndim != 1 or ticks.size < 3:
            raise ValueError("grid needs at least 3 nodes")
        if levels.shape != ticks.shape:
            raise ValueError("levels and ticks must have equal length")
        d = np.diff(ticks)
        if np.any(d <= 0):
            raise ValueError("nodes must be strictly increasing")
        # symmetry: tick set closed under negation (periodic endpoint -denom
        # has its mirror identified with itself)
        tick_set = set(int(t) for t in ticks)
        for t in tick_set:
            if -t not in tick_set and not (self.bc == PERIODIC and t == -self.denom):
                raise ValueError("node set is not symmetric about 0")
        # adjacent spacing ratios restricted to {1/2, 1, 2}
        gaps = self._tick_gaps(ticks)
        r = gaps[1:] * 2 == gaps[:-1]
        r |= gaps[1:] == gaps[:-1]
        r |= gaps[1:] == gaps[:-1] * 2
        if not np.all(r):
            raise ValueError("adjacent spacing ratio outside {1/2, 1, 2}")

    def _tick_gaps(self, ticks: np.ndarray) -> np.ndarray:
        if self.bc == PERIODIC:
            wrap = (int(ticks[0]) + 2 * self.denom) - int(ticks[-1])
            return np.concatenate([np.diff(ticks), [wrap]])
        return np.diff(ticks)

    @cached_property
    def nodes(self) -> np.ndarray:
        """Node coordinates; a * (exact dyadic), one rounding per node."""
        return self.a * (self.ticks / self.denom)

    @cached_property
    def spacings(self) -> np.ndarray:
        """Interval widths from exact tick differences.

        Dirichlet: length n-1.  Periodic: length n, the last entry being the
        wrap-around gap from the last node back to -a.
        """
        return self.a * (self._tick_gaps(self.ticks) / self.denom)

    @property
    def n_nodes(self) -> int:
        return int(self.ticks.size)

    @cached_property
    def center_index(self) -> int:
        i = int(np.searchsorted(self.ticks, 0))
        if i >= self.ticks.size or self.ticks[i] != 0:
            raise ValueError("symmetric grid has no node at x = 0")
        return i

    @property
    def min_spacing(self) -> float:
        return float(self.spacings.min())

    def node_key(self) -> dict[int, int]:
        """Map tick -> node index (exact membership tests across grids)."""
        return {int(t): i for i, t in enumerate(self.ticks)}

    def to_csv(self, path) -> None:
        """Debug serialization: one (coordinate, level) row per node."""
        with open(path, "w") as fh:
            fh.write("coordinate,level\n")
            for x, lev in zip(self.nodes, self.levels):
                fh.write(f"{x:.17g},{int(lev)}\n")


@dataclass(frozen=True, eq=False)
class Field:
    """Solution values on a grid at one instant.

    Values are validated finite on construction: NaN/Inf is a detected
    blow-up signal and raises NonFiniteFieldError rather than propagating
    silently.
    """

    grid: Grid1D
    values: np.ndarray
    time: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (self.grid.n_nodes,):
            raise ValueError(
                f"values length {values.shape} does not match node count {self.grid.n_nodes}"
            )
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise NonFiniteFieldError(f"non-finite value at node {bad} (t={self.time})")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)

    @property
    def center_value(self) -> float:
        return float(self.values[self.grid.center_index])


def uniform_grid(a: float, n_intervals: int, bc: str = DIRICHLET) -> Grid1D:
    """Uniform symmetric grid with n_intervals (a power of two >= 4) cells.

    Dirichlet grids carry n_intervals+1 nodes including both endpoints;
    periodic grids carry n_intervals nodes with +a identified with -a.
    """
    n = int(n_intervals)
    if n != n_intervals or not _is_power_of_two(n) or n < 4:
        raise ValueError(f"n_intervals must be a power of two >= 4, got {n_intervals}")
    if a <= 0:
        raise ValueError(f"domain half-width must be positive, got {a}")
    denom = n // 2
    if bc == PERIODIC:
        ticks = np.arange(-denom, denom, dtype=np.int64)
    else:
        ticks = np.arange(-denom, denom + 1, dtype=np.int64)
    levels = np.zeros_like(ticks)
    return Grid1D(a=float(a), bc=bc, ticks=ticks, denom=denom, levels=levels)


def _finest_region_bound(g: Grid1D) -> int:
    """Tick of the right edge of the contiguous finest region around 0.

    For a fully uniform grid the finest region is the whole domain.
    """
    gaps = np.diff(g.ticks)
    m = int(gaps.min())
    if np.all(gaps == m):
        return g.denom
    c = g.center_index
    # expand right from the interval starting at the center node
    hi = c
    while hi < gaps.size and gaps[hi] == m:
        hi += 1
    lo = c - 1
    while lo >= 0 and gaps[lo] == m:
        lo -= 1
    t_right = int(g.ticks[hi])
    t_left = int(g.ticks[lo + 1])
    if t_right != -t_left:
        raise ValueError("finest region is not symmetric about 0")
    return t_right


def refine_middle_half(g: Grid1D, min_spacing: float | None = None) -> Grid1D:
    """Bisect every interval whose midpoint lies in the middle half of the
    current finest region, producing the next nested grid.

    Raises ResolutionFloorError if the new finest spacing would drop below
    ``min_spacing`` (default 2^-40 of the domain width).
    """
    if min_spacing is None:
        min_spacing = DEFAULT_FLOOR_SCALE * (2.0 * g.a)
    gaps = np.diff(g.ticks)
    m = int(gaps.min())
    new_h = g.a * (m / g.denom) / 2.0
    if new_h < min_spacing:
        raise ResolutionFloorError(
            f"resolution floor reached: next spacing {new_h:.3e} < floor {min_spacing:.3e}"
        )
    if g.denom * 2 > _MAX_DENOM:
        raise ResolutionFloorError("resolution floor reached: tick denominator exhausted")

    bound = _finest_region_bound(g)
    new_level = int(g.levels.max()) + 1

    old = g.ticks
    ticks_out: list[int] = []
    levels_out: list[int] = []
    for i in range(old.size - 1):
        t0, t1 = int(old[i]), int(old[i + 1])
        ticks_out.append(2 * t0)
        levels_out.append(int(g.levels[i]))
        # midpoint tick in the doubled scale; inside the middle half iff
        # |t0 + t1| <= bound (i.e. |mid| <= bound/2 in the original scale)
        if abs(t0 + t1) <= bound:
            ticks_out.append(t0 + t1)
            levels_out.append(new_level)
    ticks_out.append(2 * int(old[-1]))
    levels_out.append(int(g.levels[-1]))
    return Grid1D(
        a=g.a,
        bc=g.bc,
        ticks=np.asarray(ticks_out, dtype=np.int64),
        denom=g.denom * 2,
        levels=np.asarray(levels_out, dtype=np.int64),
    )


def transfer(f: Field, g_new: Grid1D) -> Field:
    """Move a field onto a refinement of its grid.

    Values on shared nodes are copied bit-exactly (tick identity); new nodes
    are filled by cubic spline interpolation through the old values (natural
    ends for Dirichlet grids, periodic closure for periodic grids).
    """
    g_old = f.grid
    if g_new.bc != g_old.bc or g_new.a != g_old.a:
        raise ValueError("target grid must share domain and boundary condition")
    if g_new.denom % g_old.denom != 0:
        raise ValueError("target grid is not a dyadic refinement of the source")
    scale = g_new.denom // g_old.denom

    key = {int(t) * scale: i for i, t in enumerate(g_old.ticks)}
    values = np.empty(g_new.n_nodes)
    new_mask = np.zeros(g_new.n_nodes, dtype=bool)
    matched = 0
    for j, t in enumerate(g_new.ticks):
        i = key.get(int(t))
        if i is None:
            new_mask[j] = True
        else:
            values[j] = f.values[i]
            matched += 1
    if matched != g_old.n_nodes:
        raise ValueError("target grid is missing nodes of the source grid")

    if np.any(new_mask):
        if g_old.bc == PERIODIC:
            x = np.append(g_old.nodes, g_old.a)
            y = np.append(f.values, f.values[0])
            spline = CubicSpline(x, y, bc_type="periodic")
        else:
            spline = CubicSpline(g_old.nodes, f.values, bc_type="natural")
        values[new_mask] = spline(g_new.nodes[new_mask])
    return Field(grid=g_new, values=values, time=f.time)
