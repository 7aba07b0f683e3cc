"""Parameter sweeps and optimizations over signal strength and loss rates.

Loss-rate searches run in log coordinates: a coarse log grid picks the start
point and a bounded Nelder-Mead simplex refines it. The 1D surviving-ratio
search brackets on a log grid and finishes with golden-section search.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import optimize

from .gaussian import ln_ctmg, ln_tmsv_closed_form
from .params import DerivedParams
from .scattering import efficiency_closed_form, efficiency

OBJECTIVES = ("efficiency", "ln")


@dataclass
class SweepResult:
    """Grid axes plus per-point outputs, flattened in row-major grid order."""

    axes: dict[str, np.ndarray]
    values: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return list(self.axes) + list(self.values)

    def rows(self):
        grids = np.meshgrid(*self.axes.values(), indexing="ij")
        cols = [g.ravel() for g in grids] + [np.ravel(v) for v in self.values.values()]
        return zip(*cols)


@dataclass
class OptimumReport:
    argmax: tuple[float, ...]
    value: float
    auxiliary: dict = field(default_factory=dict)
    iterations: int = 0
    tolerance: float = 0.0
    converged: bool = True
    at_boundary: bool = False


def log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    if not (0 < lo < hi) or points < 2:
        raise ValueError(f"need 0 < lo < hi and points >= 2, got ({lo}, {hi}, {points})")
    return np.geomspace(lo, hi, points)


def surviving_ratio(dp: DerivedParams, n_s: float, omega: float = 0.0) -> float:
    """LN of the converted state over LN of the input TMSV (0 at n_s = 0)."""
    ref = ln_tmsv_closed_form(n_s)
    return ln_ctmg(dp, n_s, omega) / ref if ref > 0 else 0.0


def sweep_ln_vs_ns(dp: DerivedParams, ns_grid, omega: float = 0.0) -> SweepResult:
    ns = np.asarray(ns_grid, dtype=float)
    ln_in = np.array([ln_tmsv_closed_form(n) for n in ns])
    ln_out = np.array([ln_ctmg(dp, n, omega) for n in ns])
    ratio = np.divide(ln_out, ln_in, out=np.zeros_like(ln_out), where=ln_in > 0)
    return SweepResult(
        axes={"ns": ns},
        values={"ln_tmsv": ln_in, "ln_ctmg": ln_out, "ratio": ratio},
        metadata={"omega_hz": omega},
    )


def maximize_surviving_ratio(
    dp: DerivedParams,
    bracket: tuple[float, float] = (1e-3, 1e3),
    points: int = 241,
    omega: float = 0.0,
    xtol: float = 1e-9,
) -> OptimumReport:
    lo, hi = bracket
    grid = np.log(log_grid(lo, hi, points))
    f = lambda t: -surviving_ratio(dp, math.exp(t), omega)
    vals = np.array([f(t) for t in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == len(grid) - 1:
        n = float(math.exp(grid[i]))
        return OptimumReport((n,), float(-vals[i]), {"ln_ctmg": ln_ctmg(dp, n, omega)},
                             iterations=0, tolerance=float(grid[1] - grid[0]), at_boundary=True)
    res = optimize.minimize_scalar(
        f, bracket=(grid[i - 1], grid[i], grid[i + 1]), method="golden", options={"xtol": xtol}
    )
    n = float(math.exp(res.x))
    return OptimumReport(
        (n,),
        float(-res.fun),
        {"ln_ctmg": ln_ctmg(dp, n, omega), "ln_tmsv": ln_tmsv_closed_form(n)},
        iterations=int(res.nit),
        tolerance=xtol,
        converged=bool(res.success),
    )


def _objective(dp: DerivedParams, objective: str, n_s: float, omega: float) -> Callable:
    if objective == "efficiency":
        return lambda go, ge: float(efficiency(dp.with_input_losses(go, ge), omega))
    if objective == "ln":
        return lambda go, ge: ln_ctmg(dp.with_input_losses(go, ge), n_s, omega)
    raise ValueError(f"unknown objective {objective!r}; expected one of {OBJECTIVES}")


def sweep_loss_rates(
    dp: DerivedParams,
    gamma_o_grid,
    gamma_e_grid,
    objective: str = "efficiency",
    n_s: float = 1.0,
    omega: float = 0.0,
) -> SweepResult:
    f = _objective(dp, objective, n_s, omega)
    go = np.asarray(gamma_o_grid, dtype=float)
    ge = np.asarray(gamma_e_grid, dtype=float)
    out = np.array([[f(a, b) for b in ge] for a in go])
    meta = {"objective": objective, "omega_hz": omega}
    if objective == "ln":
        meta["ns"] = n_s
    return SweepResult({"gamma_o_hz": go, "gamma_e_hz": ge}, {objective: out}, meta)


def maximize_log_plane(
    f: Callable[[float, float], float],
    bounds: tuple[tuple[float, float], tuple[float, float]],
    points: int = 61,
    fatol: float = 1e-12,
    xatol: float = 1e-10,
    maxiter: int = 5000,
) -> OptimumReport:
    """Maximize ``f(x, y)`` over a positive box, searching in (ln x, ln y)."""
    (x0, x1), (y0, y1) = bounds
    xs = np.log(log_grid(x0, x1, points))
    ys = np.log(log_grid(y0, y1, points))
    g = lambda t: -f(math.exp(t[0]), math.exp(t[1]))
    grid = np.array([[g((a, b)) for b in ys] for a in xs])
    i, j = np.unravel_index(int(np.argmin(grid)), grid.shape)
    res = optimize.minimize(
        g,
        np.array([xs[i], ys[j]]),
        method="Nelder-Mead",
        bounds=[(xs[0], xs[-1]), (ys[0], ys[-1])],
        options={"xatol": xatol, "fatol": fatol, "maxiter": maxiter},
    )
    best = res.x if res.fun <= grid[i, j] else np.array([xs[i], ys[j]])
    edge = any(
        math.isclose(v, lim, abs_tol=1e-9)
        for v, lims in zip(best, ((xs[0], xs[-1]), (ys[0], ys[-1])))
        for lim in lims
    )
    return OptimumReport(
        (float(math.exp(best[0])), float(math.exp(best[1]))),
        float(-min(res.fun, grid[i, j])),
        iterations=int(res.nit),
        tolerance=fatol,
        converged=bool(res.success),
        at_boundary=edge,
    )


DEFAULT_LOSS_BOUNDS = ((1e4, 1e10), (1e4, 1e10))


def maximize_ln_over_loss_rates(
    dp: DerivedParams,
    n_s: float = 1.0,
    bounds=DEFAULT_LOSS_BOUNDS,
    omega: float = 0.0,
    points: int = 61,
) -> OptimumReport:
    rep = maximize_log_plane(_objective(dp, "ln", n_s, omega), bounds, points)
    at = dp.with_input_losses(*rep.argmax)
    rep.auxiliary = {"efficiency": efficiency_closed_form(at), "ns": n_s}
    return rep


def maximize_efficiency_numeric(
    dp: DerivedParams, bounds=DEFAULT_LOSS_BOUNDS, points: int = 61
) -> OptimumReport:
    return maximize_log_plane(_objective(dp, "efficiency", 0.0, 0.0), bounds, points)
