"""Spatial discretizations exposed as right-hand-side evaluators.

An evaluator is a callable ``rhs(grid, values) -> rates`` plus a
``max_eigenvalue(grid, values)`` bound used only for stage selection.
"""

from __future__ import annotations

import numpy as np

from .errors import PinchOffError
from .grid import PERIODIC, Field, Grid1D

# Largest-magnitude symbol of the double-step flux Laplacian applied to the
# fourth-order linearization is (64/27)/h^4; the stage-selection bound
# carries an extra safety factor of 2 on top of it.
_FOURTH_ORDER_SYMBOL = 64.0 / 27.0
_SAFETY = 2.0


def _second_difference(vm, v0, vp, hm, hp):
    """Non-uniform central second derivative, exact on quadratics.

    On locally uniform spacing this reduces bit-for-bit to the classical
    (1, -2, 1)/h^2 stencil.
    """
    uniform = hm == hp
    classical = (vp - 2.0 * v0 + vm) / (hp * hp)
    general = (hm * (vp - v0) + hp * (vm - v0)) / (0.5 * (hm + hp) * hm * hp)
    return np.where(uniform, classical, general)


class HeatLaplacian:
    """alpha * u_xx on a non-uniform grid.

    Dirichlet rates are zeroed so pinned boundary values stay fixed;
    periodic grids use wrap-around neighbors.
    """

    def __init__(self, alpha: float):
        if alpha < 0:
            raise ValueError(f"diffusivity must be non-negative, got {alpha}")
        self.alpha = float(alpha)

    def __call__(self, grid: Grid1D, values: np.ndarray) -> np.ndarray:
        if grid.n_nodes < 3:
            raise ValueError("laplacian needs at least 3 nodes")
        v = np.asarray(values)
        sp = grid.spacings
        if grid.bc == PERIODIC:
            hp = sp
            hm = np.roll(sp, 1)
            vp = np.roll(v, -1)
            vm = np.roll(v, 1)
            return self.alpha * _second_difference(vm, v, vp, hm, hp)
        rates = np.zeros_like(v)
        rates[1:-1] = self.alpha * _second_difference(
            v[:-2], v[1:-1], v[2:], sp[:-1], sp[1:]
        )
        return rates

    def max_eigenvalue(self, grid: Grid1D, values: np.ndarray | None = None) -> float:
        h = grid.min_spacing
        return 4.0 * self.alpha / (h * h)


class SemilinearReaction:
    """The u^p source term (used explicitly by the semi-implicit baseline)."""

    def __init__(self, p: float):
        if p <= 1:
            raise ValueError(f"reaction exponent must exceed 1, got {p}")
        self.p = float(p)

    def __call__(self, grid: Grid1D, values: np.ndarray) -> np.ndarray:
        return np.asarray(values) ** self.p


class _SurfGeometry:
    """Per-grid constants of the flux stencil, built once per mesh."""

    def __init__(self, grid: Grid1D):
        sp = grid.spacings  # length n, last entry is the wrap gap
        hm = np.roll(sp, 1)
        hp = sp
        self.hm = hm
        self.hp = hp
        # only level-interface nodes need the non-uniform second difference
        self.irregular = np.flatnonzero(hm != hp)
        self.inv_hp2 = 1.0 / (hp * hp)
        self.inv_den1 = 1.0 / (hm + hp)
        self.inv_den2 = 1.0 / (0.5 * (hm + hp) * hm * hp)
        self.inv_dist_p2 = 1.0 / (sp + np.roll(sp, -1))          # x_{m+2} - x_m
        self.inv_dist_m2 = 1.0 / (np.roll(sp, 1) + np.roll(sp, 2))  # x_m - x_{m-2}
        h = np.minimum(hm, hp)
        self.inv_h2 = 1.0 / (h * h)
        self.inv_h4 = self.inv_h2 * self.inv_h2


class SurfaceDiffusionRhs:
    """Flux-form axisymmetric surface-diffusion right-hand side.

    On uniform regions the rates reduce to the standard double-step flux
    stencil with central first/second differences; at refinement-level
    interfaces the divided differences use the true non-uniform distances
    and the local average half-spacing.
    """

    def __init__(self, pinch_threshold: float = 0.0):
        self.pinch_threshold = float(pinch_threshold)
        self._grid = None
        self._geo: _SurfGeometry | None = None

    def _geometry(self, grid: Grid1D) -> _SurfGeometry:
        if grid.bc != PERIODIC:
            raise ValueError("surface diffusion requires a periodic grid")
        if self._grid is not grid:
            self._grid = grid
            self._geo = _SurfGeometry(grid)
        return self._geo

    def _check_positive(self, values: np.ndarray) -> None:
        vmin = values.min()
        if self.pinch_threshold > 0.0 and vmin <= self.pinch_threshold:
            bad = int(np.flatnonzero(values <= self.pinch_threshold)[0])
            raise PinchOffError(bad)
        if vmin <= 0.0:
            bad = int(np.flatnonzero(values <= 0.0)[0])
            raise ValueError(f"surface diffusion requires positive radii (node {bad})")

    def _curvature(self, geo: _SurfGeometry, v: np.ndarray):
        vp = np.roll(v, -1)
        vm = np.roll(v, 1)
        dr = (vp - vm) * geo.inv_den1
        d2r = (vp - 2.0 * v + vm) * geo.inv_hp2
        idx = geo.irregular
        if idx.size:
            d2r[idx] = (
                geo.hm[idx] * (vp[idx] - v[idx]) + geo.hp[idx] * (vm[idx] - v[idx])
            ) * geo.inv_den2[idx]
        one_p = 1.0 + dr * dr
        return dr, d2r, one_p

    def __call__(self, grid: Grid1D, values: np.ndarray) -> np.ndarray:
        v = np.asarray(values)
        self._check_positive(v)
        geo = self._geometry(grid)
        dr, d2r, one_p = self._curvature(geo, v)
        root = np.sqrt(one_p)
        inv_root = 1.0 / root
        mean_curv = inv_root / v - d2r * (inv_root / one_p)
        flux_coeff = v * inv_root

        grad_p = (np.roll(mean_curv, -2) - mean_curv) * geo.inv_dist_p2
        grad_m = (mean_curv - np.roll(mean_curv, 2)) * geo.inv_dist_m2
        flux_diff = np.roll(flux_coeff, -1) * grad_p - np.roll(flux_coeff, 1) * grad_m
        # 1/(2 v h_loc) with h_loc the local average half-spacing (hm+hp)/2
        return flux_diff * (geo.inv_den1 / v)

    def max_eigenvalue(self, grid: Grid1D, values: np.ndarray) -> float:
        """Frozen-coefficient upper bound on the stiffest eigenvalue.

        Fourth-order part: (64/27) / ((1+r_z^2)^2 h^4) per node, doubled for
        safety; plus a second-order contribution ~ 1/(r^2 (1+r_z^2) h^2).
        """
        v = np.asarray(values)
        self._check_positive(v)
        geo = self._geometry(grid)
        _, _, one_p = self._curvature(geo, v)
        k4 = 1.0 / (one_p * one_p)
        k2 = 1.0 / (v * v * one_p)
        bound = _SAFETY * (_FOURTH_ORDER_SYMBOL * k4 * geo.inv_h4 + k2 * geo.inv_h2)
        return float(bound.max())


def laplacian_nonuniform(f: Field, alpha: float) -> np.ndarray:
    """Per-node rates of alpha * u_xx for a field."""
    return HeatLaplacian(alpha)(f.grid, f.values)


def surface_diffusion_rhs(f: Field, pinch_threshold: float = 0.0) -> np.ndarray:
    """Per-node rates of the axisymmetric surface-diffusion operator."""
    return SurfaceDiffusionRhs(pinch_threshold)(f.grid, f.values)


def max_eigenvalue_estimate(f: Field, rhs) -> float:
    """Upper bound on the stiffest eigenvalue of the linearized operator."""
    return float(rhs.max_eigenvalue(f.grid, f.values))
