"""Parameter sweeps: CHSH-vs-bin-size curves, violation maps, entanglement
maps and equal-entanglement contour traversals.

All operations return ``(columns, rows)`` where rows are tuples in a
canonical sort order (r, then T, then l), independent of evaluation order,
so downstream CSV output is byte-reproducible.  Points whose series
tolerance cannot be certified are emitted with status ``accuracy`` and NaN
values rather than dropped.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .bell import DEFAULT_LGRID, LGrid, bell_optimize_l, bell_unbinned
from .errors import AccuracyError, InvalidInputError
from .gaussian import TmstParams, log_negativity, tmst_state
from .pseudospin import (
    DEFAULT_CONTROL,
    Binned,
    OperatorChoice,
    SeriesControl,
    Unbinned,
    binned_correlators,
)

__all__ = [
    "GridSpec",
    "ContourSpec",
    "sweep_b_vs_l",
    "violation_map",
    "violation_boundary_r",
    "en_map_and_contours",
    "contour_radius",
]


@dataclass(frozen=True)
class GridSpec:
    """Sweep grid: squeezing values, temperatures, bin-size grid, operator."""

    r_values: Sequence[float]
    t_values: Sequence[float]
    l_grid: LGrid = DEFAULT_LGRID
    operator: OperatorChoice = field(default_factory=Unbinned)
    ctrl: SeriesControl = DEFAULT_CONTROL

    def __post_init__(self):
        if len(self.r_values) == 0 or len(self.t_values) == 0:
            raise InvalidInputError("r_values and t_values must be nonempty")
        if any(r < 0 for r in self.r_values):
            raise InvalidInputError("squeezing values must be >= 0")
        if any(t < 0 for t in self.t_values):
            raise InvalidInputError("temperatures must be >= 0")


@dataclass(frozen=True)
class ContourSpec:
    """Equal-entanglement contour request: levels and T sampling density."""

    en_levels: Sequence[float] = (0.5, 1.0, 1.5, 2.0)
    t_samples: int = 16

    def __post_init__(self):
        if len(self.en_levels) == 0 or any(v <= 0 for v in self.en_levels):
            raise InvalidInputError("entanglement levels must be > 0")
        if list(self.en_levels) != sorted(self.en_levels):
            raise InvalidInputError("entanglement levels must be ascending")
        if self.t_samples < 2:
            raise InvalidInputError("t_samples must be >= 2")


def _pmap(fn, items, threads):
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# B vs l curves
# ---------------------------------------------------------------------------

SWEEP_COLUMNS = ("r", "t", "l", "szz", "sxx", "b", "est_error", "status")


def sweep_b_vs_l(p_base: TmstParams, grid: GridSpec, threads: int = 1):
    """CHSH value against bin size for every (r, T) in the grid.

    Returns (SWEEP_COLUMNS, rows) sorted by (r, t, l).
    """
    ls = grid.l_grid.values()
    points = [(r, t, l) for r in grid.r_values for t in grid.t_values for l in ls]

    def one(point):
        r, t, l = point
        p = TmstParams(r=r, phi=p_base.phi, T=t,
                       omega_a=p_base.omega_a, omega_b=p_base.omega_b)
        try:
            cs = binned_correlators(p, l, grid.ctrl)
            b = 2.0 * math.hypot(cs.szz, cs.sxx)
            return (r, t, l, cs.szz, cs.sxx, b, cs.est_error, "ok")
        except AccuracyError as exc:
            est = exc.estimate if exc.estimate is not None else math.inf
            return (r, t, l, math.nan, math.nan, math.nan, est, "accuracy")

    rows = _pmap(one, points, threads)
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    return SWEEP_COLUMNS, rows


# ---------------------------------------------------------------------------
# violation maps
# ---------------------------------------------------------------------------

MAP_COLUMNS = ("r", "t", "b_opt", "l_opt", "violated", "est_error", "status")


def violation_map(grid: GridSpec, threads: int = 1):
    """CHSH violation over the (r, T) grid for the selected operator family.

    For ``Binned`` the value is optimized over bin size and ``l_opt`` is
    reported; for ``Unbinned`` the closed form is used and ``l_opt`` is NaN.
    """
    if not isinstance(grid.operator, (Binned, Unbinned)):
        raise InvalidInputError("violation map supports Binned or Unbinned")
    optimized = isinstance(grid.operator, Binned)
    points = [(r, t) for r in grid.r_values for t in grid.t_values]

    def one(point):
        r, t = point
        p = TmstParams(r=r, T=t)
        if optimized:
            try:
                res = bell_optimize_l(p, grid.l_grid, grid.ctrl)
                return (r, t, res.b_value, res.l_opt, int(res.violated),
                        res.correlators.est_error, "ok")
            except AccuracyError as exc:
                est = exc.estimate if exc.estimate is not None else math.inf
                return (r, t, math.nan, math.nan, 0, est, "accuracy")
        res = bell_unbinned(p)
        return (r, t, res.b_value, math.nan, int(res.violated), 0.0, "ok")

    rows = _pmap(one, points, threads)
    rows.sort(key=lambda row: (row[0], row[1]))
    return MAP_COLUMNS, rows


def violation_boundary_r(t: float, r_lo: float = 0.5, r_hi: float = 2.0,
                         tol: float = 1e-3,
                         grid: LGrid = DEFAULT_LGRID,
                         ctrl: SeriesControl = DEFAULT_CONTROL) -> float:
    """Bisect the bin-optimized CHSH boundary b = 2 in r at fixed T."""

    def excess(r):
        return bell_optimize_l(TmstParams(r=r, T=t), grid, ctrl).b_value - 2.0

    f_lo, f_hi = excess(r_lo), excess(r_hi)
    if f_lo > 0 or f_hi < 0:
        raise InvalidInputError(
            f"boundary not bracketed: b(r_lo)-2={f_lo:.3g}, b(r_hi)-2={f_hi:.3g}"
        )
    while r_hi - r_lo > tol:
        mid = 0.5 * (r_lo + r_hi)
        if excess(mid) > 0:
            r_hi = mid
        else:
            r_lo = mid
    return 0.5 * (r_lo + r_hi)


# ---------------------------------------------------------------------------
# entanglement maps and contours
# ---------------------------------------------------------------------------

EN_COLUMNS = ("r", "t", "en")
CONTOUR_COLUMNS = ("level", "t", "r", "b_opt", "l_opt", "reached")


def _en(r: float, t: float) -> float:
    return log_negativity(tmst_state(TmstParams(r=r, T=t)))


def contour_radius(level: float, t: float, r_max: float = 8.0,
                   tol: float = 1e-6) -> Optional[float]:
    """Solve E_N(r, T) = level for r by bisection (E_N increases with r).

    Returns None when the level is unreachable below r_max.
    """
    lo, hi = 0.0, r_max
    if _en(hi, t) < level:
        return None
    while True:
        mid = 0.5 * (lo + hi)
        val = _en(mid, t)
        if abs(val - level) <= tol:
            return mid
        if val < level:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            return mid


def en_map_and_contours(grid: GridSpec, spec: ContourSpec, threads: int = 1):
    """Entanglement map plus equal-entanglement contour traversals.

    Returns ((EN_COLUMNS, en_rows), (CONTOUR_COLUMNS, contour_rows)).
    Contour rows carry the bin-optimized CHSH value along each contour;
    unreachable levels are emitted with reached = 0 and NaN values.
    """
    en_rows = [(r, t, _en(r, t)) for r in grid.r_values for t in grid.t_values]
    en_rows.sort(key=lambda row: (row[0], row[1]))

    # bisection precondition: E_N strictly increasing in r at fixed T
    for t in list(grid.t_values)[:: max(1, len(grid.t_values) // 4)]:
        vals = [_en(r, t) for r in grid.r_values]
        pairs = [(a, b) for a, b in zip(vals, vals[1:])]
        if any(b <= a for a, b in pairs if not (a == 0.0 and b == 0.0)):
            raise InvalidInputError(
                "entanglement is not increasing in r on this grid"
            )

    t_lo, t_hi = min(grid.t_values), max(grid.t_values)
    ts = [t_lo + (t_hi - t_lo) * i / (spec.t_samples - 1)
          for i in range(spec.t_samples)]
    r_max = max(grid.r_values)
    points = [(level, t) for level in spec.en_levels for t in ts]

    def one(point):
        level, t = point
        r = contour_radius(level, t, r_max=r_max)
        if r is None:
            return (level, t, math.nan, math.nan, math.nan, 0)
        res = bell_optimize_l(TmstParams(r=r, T=t), grid.l_grid, grid.ctrl)
        return (level, t, r, res.b_value, res.l_opt, 1)

    contour_rows = _pmap(one, points, threads)
    contour_rows.sort(key=lambda row: (row[0], row[1]))
    return (EN_COLUMNS, en_rows), (CONTOUR_COLUMNS, contour_rows)
