"""Error norms against the analytic wave, gradient probes and log-log slope fits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analytic import AnalyticProfile
from .fv import FieldState, Grid1D


@dataclass(frozen=True)
class ErrorReport:
    l2_downstream: float
    l2_upstream: float
    l2_full: float
    linf: float
    rel_err_field: np.ndarray
    shock_cell: int
    te_l2_full: float = 0.0
    te_linf: float = 0.0
    rhoe_l2_full: float = 0.0

    def as_dict(self) -> dict:
        return {
            "l2_downstream": self.l2_downstream, "l2_upstream": self.l2_upstream,
            "l2_full": self.l2_full, "linf": self.linf, "shock_cell": self.shock_cell,
            "te_l2_full": self.te_l2_full, "te_linf": self.te_linf, "rhoe_l2_full": self.rhoe_l2_full,
        }


def shock_cell(grid: Grid1D, position: float) -> int:
    """0-based index of the cell containing ``position`` (clipped to the grid)."""
    return int(min(max(np.floor(position / grid.dx), 0), grid.n_cells - 1))


def error_split(field: FieldState, profile: AnalyticProfile, grid: Grid1D) -> ErrorReport:
    """dx-weighted L2 errors on pe, split at the shock cell (counted downstream)."""
    g = profile.states.gamma
    x = grid.centers
    pe_ex, te_ex = profile.sample(x, field.time)
    pe = field.pressure(g)
    te = field.temperature(g)
    err = pe - pe_ex
    js = shock_cell(grid, profile.shock_position(field.time))
    down = np.arange(grid.n_cells) <= js
    dx = grid.dx
    l2d = float(np.sqrt(dx * np.sum(err[down] ** 2)))
    l2u = float(np.sqrt(dx * np.sum(err[~down] ** 2)))
    rel = err / pe_ex
    te_err = te - te_ex
    rhoe_err = field.u1 - pe_ex / te_ex
    return ErrorReport(
        l2_downstream=l2d, l2_upstream=l2u, l2_full=float(np.sqrt(dx * np.sum(err**2))),
        linf=float(np.max(np.abs(rel))), rel_err_field=rel, shock_cell=js,
        te_l2_full=float(np.sqrt(dx * np.sum(te_err**2))),
        te_linf=float(np.max(np.abs(te_err / te_ex))),
        rhoe_l2_full=float(np.sqrt(dx * np.sum(rhoe_err**2))),
    )


def plateau_deviation(field: FieldState, profile: AnalyticProfile, grid: Grid1D,
                      start: float = 0.7, stop: float = 0.17, scale: float | None = None) -> float:
    """Mean relative deviation of pe from the left state over a window behind the shock.

    The window is [s - start*scale, s - stop*scale] with ``scale`` defaulting to
    the distance travelled by the shock; it must not reach the left boundary.
    """
    s = profile.shock_position(field.time)
    if scale is None:
        scale = s - profile.x0
    x = grid.centers
    mask = (x > s - start * scale) & (x < s - stop * scale)
    if not mask.any():
        raise ValueError("plateau window contains no cells")
    pe = field.pressure(profile.states.gamma)[mask]
    return float(np.mean(pe) / profile.states.left_electron.pe - 1.0)


def gradient_centered(values, dx: float) -> np.ndarray:
    """Centred differences inside, first-order one-sided at the two ends."""
    v = np.asarray(values, dtype=float)
    if v.size < 3:
        raise ValueError("need at least 3 cells")
    return np.gradient(v, dx, edge_order=1)


@dataclass(frozen=True)
class SlopeFit:
    slopes: tuple
    breakpoint: float | None
    intercepts: tuple
    sse: float


def _line(lx, ly):
    coef, res, *_ = np.polyfit(lx, ly, 1, full=True)
    sse = float(res[0]) if res.size else 0.0
    return float(coef[0]), float(coef[1]), sse


def slope_fit(points, regimes: int = 2, min_points: int = 3) -> SlopeFit:
    """Least-squares log-log slopes; with two regimes the breakpoint minimises the total residual.

    ``points`` is a sequence of (abscissa, value) pairs with positive entries.
    The reported breakpoint is the first abscissa of the second regime.
    """
    pts = sorted((float(a), float(b)) for a, b in points)
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if np.any(x <= 0) or np.any(y <= 0):
        raise ValueError("log-log fit needs positive data")
    if np.unique(x).size < 2:
        raise ValueError("degenerate abscissae")
    lx, ly = np.log(x), np.log(y)
    if regimes == 1:
        if x.size < 2:
            raise ValueError("need at least 2 points")
        s, c, sse = _line(lx, ly)
        return SlopeFit(slopes=(s,), breakpoint=None, intercepts=(c,), sse=sse)
    if x.size < 2 * min_points:
        raise ValueError(f"need at least {2 * min_points} points for a two-regime fit")
    best = None
    for k in range(min_points, x.size - min_points + 1):
        if np.unique(x[:k]).size < 2 or np.unique(x[k:]).size < 2:
            continue
        s1, c1, e1 = _line(lx[:k], ly[:k])
        s2, c2, e2 = _line(lx[k:], ly[k:])
        if best is None or e1 + e2 < best[0]:
            best = (e1 + e2, k, s1, s2, c1, c2)
    if best is None:
        raise ValueError("degenerate abscissae")
    sse, k, s1, s2, c1, c2 = best
    return SlopeFit(slopes=(s1, s2), breakpoint=float(x[k]), intercepts=(c1, c2), sse=sse)


def nodes_per_length(length: float, grid: Grid1D) -> float:
    return length / grid.dx
