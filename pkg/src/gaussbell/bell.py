"""CHSH values from pseudospin correlators and optimization over bin size.

With measurement angles fixed at their optimum (theta1 = 0, theta1' = pi/2,
theta2 = -theta2'), the CHSH expectation reduces to

    B = 2 sqrt(<Sz Sz>^2 + <Sx Sx>^2),   theta2 = atan2(<Sx Sx>, <Sz Sz>).

The curve B(l) for the binned operators is generically bimodal: a plateau
approaching 2 as l -> 0 and a finite-l bump; the optimizer therefore
refines every local maximum of the coarse grid, not just the global one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .errors import InvalidInputError
from .gaussian import TmstParams
from .pseudospin import (
    DEFAULT_CONTROL,
    CorrelatorSet,
    SeriesControl,
    binned_correlators,
    szz_large_l_asymptote,
    unbinned_correlators,
)

__all__ = [
    "TSIRELSON",
    "BellResult",
    "LGrid",
    "bell_value",
    "bell_binned",
    "bell_unbinned",
    "bell_optimize_l",
    "bell_large_l_asymptote",
    "chen_bound",
    "grouped_bell_closed_form",
    "fock_bound_check",
    "FockBoundCheck",
]

TSIRELSON = 2.0 * math.sqrt(2.0)


@dataclass(frozen=True)
class BellResult:
    """A CHSH evaluation: value, optimal angle, violation flag, inputs."""

    b_value: float
    theta2_opt: float
    violated: bool
    tsirelson_gap: float
    correlators: CorrelatorSet
    l_opt: Optional[float] = None

    def __post_init__(self):
        if not (-1e-6 <= self.b_value <= TSIRELSON + 1e-6):
            raise InvalidInputError(f"CHSH value {self.b_value} out of range")
        if self.violated != (self.b_value > 2.0):
            raise InvalidInputError("violation flag inconsistent with value")


@dataclass(frozen=True)
class LGrid:
    """Log-spaced bin-size grid with optional golden-section refinement."""

    log10_l_min: float = -2.0
    log10_l_max: float = 2.0
    points: int = 81
    refine: bool = True

    def __post_init__(self):
        if self.points < 2:
            raise InvalidInputError("grid needs at least 2 points")
        if not self.log10_l_min < self.log10_l_max:
            raise InvalidInputError("log10_l_min must be < log10_l_max")

    def values(self):
        step = (self.log10_l_max - self.log10_l_min) / (self.points - 1)
        return [10.0 ** (self.log10_l_min + i * step) for i in range(self.points)]


DEFAULT_LGRID = LGrid()


def bell_value(szz: float, sxx: float):
    """(B, theta2) from the two correlators; (0, 0) for the degenerate origin."""
    if not (math.isfinite(szz) and math.isfinite(sxx)):
        raise InvalidInputError("correlators must be finite")
    if abs(szz) > 1.0 + 1e-6 or abs(sxx) > 1.0 + 1e-6:
        raise InvalidInputError("correlators must lie in [-1, 1]")
    if szz == 0.0 and sxx == 0.0:
        return 0.0, 0.0
    return 2.0 * math.hypot(szz, sxx), math.atan2(sxx, szz)


def _result(szz, sxx, est_error, l_opt=None, correlators=None):
    b, theta2 = bell_value(szz, sxx)
    cs = correlators or CorrelatorSet(szz=szz, sxx=sxx, est_error=est_error)
    return BellResult(
        b_value=b,
        theta2_opt=theta2,
        violated=b > 2.0,
        tsirelson_gap=TSIRELSON - b,
        correlators=cs,
        l_opt=l_opt,
    )


def bell_binned(p: TmstParams, l: float,
                ctrl: SeriesControl = DEFAULT_CONTROL) -> BellResult:
    """CHSH value of the binned pseudospins at a single bin size."""
    cs = binned_correlators(p, l, ctrl)
    return _result(cs.szz, cs.sxx, cs.est_error, l_opt=l, correlators=cs)


def bell_unbinned(p: TmstParams) -> BellResult:
    """CHSH value of the sign/reflection pseudospins (closed form)."""
    szz, sxx = unbinned_correlators(p)
    return _result(szz, sxx, 0.0)


def bell_large_l_asymptote(p: TmstParams) -> float:
    """Closed-form l -> infinity limit of the binned CHSH value.

    Equals (4/pi) arctan(sinh 2r): the x-correlator dies and the z-correlator
    becomes the sign-operator correlation, which depends on the squeezing
    only.  Always <= 2, so arbitrarily coarse binning never violates.
    """
    return 2.0 * szz_large_l_asymptote(p.r)


_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)


def _golden_max(f: Callable[[float], float], lo: float, hi: float,
                rel_tol: float):
    """Golden-section maximum of f over [lo, hi] in log10-l coordinates."""
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    best_x, best_f = (c, fc) if fc >= fd else (d, fd)
    # stop once the bracket is narrower than the relative l tolerance
    width_target = math.log10(1.0 + rel_tol)
    while (b - a) > width_target:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
            x_new, f_new = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
            x_new, f_new = d, fd
        if f_new > best_f:
            best_x, best_f = x_new, f_new
    return best_x, best_f


def bell_optimize_l(p: TmstParams, grid: LGrid = DEFAULT_LGRID,
                    ctrl: SeriesControl = DEFAULT_CONTROL) -> BellResult:
    """Maximize the binned CHSH value over bin size.

    Coarse scan over the log-spaced grid, then golden-section refinement
    around every local maximum (the curve is bimodal near the violation
    threshold).  Ties within 1e-12 resolve to the smallest l.
    """
    ls = grid.values()
    cache: dict[float, BellResult] = {}

    def eval_at(l: float) -> BellResult:
        if l not in cache:
            cache[l] = bell_binned(p, l, ctrl)
        return cache[l]

    values = [eval_at(l).b_value for l in ls]
    candidates = list(zip(ls, values))
    if grid.refine:
        logs = [math.log10(l) for l in ls]

        def f(x: float) -> float:
            return eval_at(10.0 ** x).b_value

        n = len(ls)
        for i in range(n):
            left = values[i - 1] if i > 0 else -math.inf
            right = values[i + 1] if i < n - 1 else -math.inf
            if values[i] >= left and values[i] >= right:
                lo = logs[max(0, i - 1)]
                hi = logs[min(n - 1, i + 1)]
                x_best, f_best = _golden_max(f, lo, hi, rel_tol=1e-4)
                candidates.append((10.0 ** x_best, f_best))
    best_b = max(b for _, b in candidates)
    l_opt = min(l for l, b in candidates if b >= best_b - 1e-12)
    res = eval_at(l_opt)
    return BellResult(
        b_value=res.b_value,
        theta2_opt=res.theta2_opt,
        violated=res.violated,
        tsirelson_gap=res.tsirelson_gap,
        correlators=res.correlators,
        l_opt=l_opt,
    )


# ---------------------------------------------------------------------------
# number-basis closed forms and the pseudospin CHSH bound
# ---------------------------------------------------------------------------

def chen_bound(r: float) -> float:
    """Upper bound 2 sqrt(1 + tanh^2 2r) on the squeezed-vacuum CHSH value
    over all su(2) pseudospin triples; saturated by the number-parity
    operators."""
    if r < 0:
        raise InvalidInputError("r must be >= 0")
    return 2.0 * math.sqrt(1.0 + math.tanh(2.0 * r) ** 2)


def grouped_bell_closed_form(r: float, d: int) -> float:
    """Closed-form squeezed-vacuum CHSH value for d-grouped Fock pseudospins."""
    if r < 0:
        raise InvalidInputError("r must be >= 0")
    if d < 1:
        raise InvalidInputError("d must be >= 1")
    t = math.tanh(r) ** (2 * d)
    return 2.0 * math.sqrt(t * t + 6.0 * t + 1.0) / (1.0 + t)


class FockBoundCheck(NamedTuple):
    bound: float
    chen_b: float
    grouped_b: Callable[[int], float]


def fock_bound_check(r: float) -> FockBoundCheck:
    """(bound, number-parity value, d -> grouped value) at squeezing r.

    The number-parity value saturates the bound; grouped_b(1) coincides
    with it.
    """
    return FockBoundCheck(
        bound=chen_bound(r),
        chen_b=chen_bound(r),
        grouped_b=lambda d: grouped_bell_closed_form(r, d),
    )
