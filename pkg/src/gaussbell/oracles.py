"""Independent ground-truth engines used to validate the series correlators.

Three routes that share no code with the lattice series:

* truncated-Fock-space matrix computations for the number-basis pseudospins;
* Monte-Carlo sampling of the Gaussian Wigner function (a genuine
  probability density for Gaussian states, sampling covariance sigma/2);
* brute-force bin quadrature of the position marginal with the momentum
  integrals done in closed form (Gaussian characteristic functions).

The Monte-Carlo x-estimator follows from rewriting the ladder-operator
correlators as plain expectations under W: substituting w = q +- l/2 maps
both bin families onto the half-shifted even bins A(w) (indicator of
[2nl + l/2, 2nl + 3l/2)), and the leftover plane-wave phases combine to
4 cos(l p1) cos(l p2).  Hence

    <Sx Sx> = E_W[ 4 A(q1) A(q2) cos(l p1) cos(l p2) ]
    <Sy Sy> = E_W[ 4 A(q1) A(q2) sin(l p1) sin(l p2) ]
    <Sz Sz> = E_W[ sign_l(q1) sign_l(q2) ]

which is validated against the quadrature route in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import erf

from .errors import AccuracyError, InvalidInputError
from .gaussian import TmstParams, nu_thermal, tmst_state

__all__ = [
    "FockTruncation",
    "McControl",
    "fock_operators_chen",
    "fock_operators_grouped",
    "tmsv_amplitudes",
    "fock_bell_chen",
    "fock_bell_grouped",
    "mc_correlators",
    "mc_pseudospin",
    "quadrature_correlators",
    "quadrature_syy",
    "auto_bins",
    "taylor_expm",
]


# ---------------------------------------------------------------------------
# truncated Fock space
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FockTruncation:
    """Per-mode Fock cutoff; states 0..n_max are kept."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 1:
            raise InvalidInputError("n_max must be >= 1")

    def check(self, r: float, tol: float = 1e-10):
        """Require the squeezed-vacuum weight beyond the cutoff to be tiny.

        The discarded norm is tanh(r)^{2 (n_max + 1)}.
        """
        t = math.tanh(r)
        loss = t ** (2 * (self.n_max + 1)) if t > 0 else 0.0
        if loss > tol:
            raise AccuracyError(
                f"Fock truncation n_max={self.n_max} keeps only "
                f"1 - {loss:.2e} of the squeezed vacuum at r={r}",
                estimate=loss,
            )
        return loss


def fock_operators_chen(n_max: int):
    """Number-parity pseudospin triple (s_z, s_x, s_y) on the truncated space.

    s_z flips sign between even and odd Fock states; s_x, s_y couple the
    pairs (2n, 2n+1).
    """
    dim = n_max + 1
    n = np.arange(dim)
    s_z = np.diag(np.where(n % 2 == 1, 1.0, -1.0)).astype(complex)
    s_x = np.zeros((dim, dim), dtype=complex)
    s_y = np.zeros((dim, dim), dtype=complex)
    for k in range(0, dim - 1, 2):
        s_x[k, k + 1] = s_x[k + 1, k] = 1.0
        s_y[k + 1, k] = -1j
        s_y[k, k + 1] = 1j
    return s_z, s_x, s_y


def fock_operators_grouped(d: int, n_max: int):
    """Pseudospin triple grouping d consecutive Fock states per parity cell."""
    if d < 1:
        raise InvalidInputError("group size d must be >= 1")
    dim = n_max + 1
    n = np.arange(dim)
    s_z = np.diag(np.where((n // d) % 2 == 1, -1.0, 1.0)).astype(complex)
    s_x = np.zeros((dim, dim), dtype=complex)
    s_y = np.zeros((dim, dim), dtype=complex)
    block = 0
    while 2 * d * block < dim:
        base = 2 * d * block
        for k in range(d):
            i, j = base + k, base + k + d
            if j >= dim:
                break
            s_x[i, j] = s_x[j, i] = 1.0
            s_y[i, j] = -1j
            s_y[j, i] = 1j
        block += 1
    return s_z, s_x, s_y


def tmsv_amplitudes(r: float, n_max: int):
    """Schmidt amplitudes tanh^n(r)/cosh(r) of the squeezed vacuum."""
    n = np.arange(n_max + 1)
    return np.tanh(r) ** n / np.cosh(r)


def _pair_expectation(A, B, c):
    """<psi| A (x) B |psi> for |psi> = sum_n c_n |n, n> with real c."""
    val = c @ (A * B) @ c
    return complex(val)


def fock_bell_chen(r: float, trunc: FockTruncation) -> float:
    """CHSH value for the number-parity pseudospins on the squeezed vacuum."""
    trunc.check(r)
    s_z, s_x, _ = fock_operators_chen(trunc.n_max)
    c = tmsv_amplitudes(r, trunc.n_max)
    szz = _pair_expectation(s_z, s_z, c).real
    sxx = _pair_expectation(s_x, s_x, c).real
    return 2.0 * math.hypot(szz, sxx)


def fock_bell_grouped(r: float, d: int, trunc: FockTruncation) -> float:
    """CHSH value for the d-grouped Fock pseudospins on the squeezed vacuum."""
    trunc.check(r)
    s_z, s_x, _ = fock_operators_grouped(d, trunc.n_max)
    c = tmsv_amplitudes(r, trunc.n_max)
    szz = _pair_expectation(s_z, s_z, c).real
    sxx = _pair_expectation(s_x, s_x, c).real
    return 2.0 * math.hypot(szz, sxx)


# ---------------------------------------------------------------------------
# Monte-Carlo Wigner sampling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class McControl:
    """Monte-Carlo sample budget and reproducibility contract.

    samples  total draws (>= 1e4)
    seed     Philox stream seed (counter-based generator; recorded in outputs)
    batch    draws per batch; standard errors come from batch means
    """

    samples: int = 1_000_000
    seed: int = 0
    batch: int = 50_000

    def __post_init__(self):
        if self.samples < 10_000:
            raise InvalidInputError("samples must be >= 10_000")
        if self.batch < 1000 or self.batch > self.samples:
            raise InvalidInputError("batch must be in [1000, samples]")


def _bin_sign(q, l):
    return 1.0 - 2.0 * (np.floor(q / l).astype(np.int64) % 2)


def _half_shifted_indicator(q, l):
    return (np.floor((q - 0.5 * l) / l).astype(np.int64) % 2) == 0


def mc_pseudospin(p: TmstParams, l: float, mc: McControl,
                  observables=("szz", "sxx")):
    """Monte-Carlo estimates {name: (mean, stderr)} of pseudospin correlators.

    Supported names: szz, sxx, syy, zx, yz, xy.
    """
    if p.phi != 0.0:
        raise InvalidInputError("Monte-Carlo estimators assume phi = 0")
    if not math.isfinite(l) or l <= 0:
        raise InvalidInputError("bin size l must be finite and > 0")
    sigma = tmst_state(p).cov
    try:
        chol = np.linalg.cholesky(0.5 * sigma)
    except np.linalg.LinAlgError as exc:
        raise InvalidInputError("covariance is not positive definite") from exc
    rng = np.random.Generator(np.random.Philox(mc.seed))
    n_batches = math.ceil(mc.samples / mc.batch)
    means = {name: [] for name in observables}
    remaining = mc.samples
    for _ in range(n_batches):
        size = min(mc.batch, remaining)
        remaining -= size
        xi = rng.standard_normal((size, 4)) @ chol.T
        q1, q2, p1, p2 = xi.T
        sz1, sz2 = _bin_sign(q1, l), _bin_sign(q2, l)
        a1 = _half_shifted_indicator(q1, l)
        a2 = _half_shifted_indicator(q2, l)
        for name in observables:
            if name == "szz":
                vals = sz1 * sz2
            elif name == "sxx":
                vals = 4.0 * a1 * a2 * np.cos(l * p1) * np.cos(l * p2)
            elif name == "syy":
                vals = 4.0 * a1 * a2 * np.sin(l * p1) * np.sin(l * p2)
            elif name == "zx":
                vals = 2.0 * sz1 * a2 * np.cos(l * p2)
            elif name == "yz":
                vals = 2.0 * a1 * sz2 * np.sin(l * p1)
            elif name == "xy":
                vals = 4.0 * a1 * a2 * np.cos(l * p1) * np.sin(l * p2)
            else:
                raise InvalidInputError(f"unknown observable {name!r}")
            means[name].append(float(vals.mean()))
    out = {}
    for name, m in means.items():
        m = np.asarray(m)
        se = float(m.std(ddof=1) / math.sqrt(len(m))) if len(m) > 1 else math.inf
        out[name] = (float(m.mean()), se)
    return out


def mc_correlators(p: TmstParams, l: float, mc: McControl):
    """(szz, sxx, stderr_szz, stderr_sxx) by Wigner sampling."""
    est = mc_pseudospin(p, l, mc, observables=("szz", "sxx"))
    szz, se_z = est["szz"]
    sxx, se_x = est["sxx"]
    return szz, sxx, se_z, se_x


# ---------------------------------------------------------------------------
# brute-force bin quadrature
# ---------------------------------------------------------------------------

def auto_bins(p: TmstParams, l: float, n_sigma: float = 9.0) -> int:
    """Bin window covering n_sigma position standard deviations."""
    nu = nu_thermal(p.omega_a, p.T)
    std = math.sqrt(0.5 * nu * math.cosh(2.0 * p.r))
    return int(math.ceil(n_sigma * std / l)) + 2


def _marginal_scalars(p: TmstParams):
    nu = nu_thermal(p.omega_a, p.T)
    c, s = math.cosh(2.0 * p.r), math.sinh(2.0 * p.r)
    var = 0.5 * nu * c
    rho = s / c
    return nu, var, rho


def _outer_panels(bins, l, shifted):
    if shifted:
        return [(2.0 * k * l + 0.5 * l, 2.0 * k * l + 1.5 * l, 1.0)
                for k in range(-bins, bins)]
    return [(k * l, (k + 1) * l, 1.0 - 2.0 * (k % 2)) for k in range(-bins, bins)]


def _pair_quadrature(p: TmstParams, l, bins, shifted, n_nodes):
    """E[f(q1) f(q2)] with f = bin sign (shifted False) or the half-shifted
    even-bin indicator (True), via outer per-bin panels and inner conditional
    erf sums."""
    nu, var, rho = _marginal_scalars(p)
    s_cond = math.sqrt((1.0 - rho * rho) * var)
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w
    total = 0.0
    if shifted:
        lo_edges = 2.0 * l * np.arange(-bins, bins) + 0.5 * l
    else:
        edges = l * np.arange(-bins, bins + 1)
        signs = 1.0 - 2.0 * (np.arange(-bins, bins) % 2)
    for lo, hi, sign in _outer_panels(bins, l, shifted):
        q1 = lo + (hi - lo) * x
        ww = (hi - lo) * w
        dens = np.exp(-q1 * q1 / (2.0 * var)) / math.sqrt(2.0 * math.pi * var)
        mu = rho * q1
        if shifted:
            z_hi = (lo_edges[None, :] + l - mu[:, None]) / (math.sqrt(2.0) * s_cond)
            z_lo = (lo_edges[None, :] - mu[:, None]) / (math.sqrt(2.0) * s_cond)
            cond = 0.5 * np.sum(erf(z_hi) - erf(z_lo), axis=1)
        else:
            cdf = 0.5 * (1.0 + erf((edges[None, :] - mu[:, None])
                                   / (math.sqrt(2.0) * s_cond)))
            cond = np.diff(cdf, axis=1) @ signs
        total += float(np.sum(ww * dens * sign * cond))
    return total


def _refined_pair_quadrature(p, l, bins, shifted, target):
    prev = _pair_quadrature(p, l, bins, shifted, 16)
    for n_nodes in (24, 36, 54, 81):
        cur = _pair_quadrature(p, l, bins, shifted, n_nodes)
        if abs(cur - prev) <= target:
            return cur, abs(cur - prev)
        prev = cur
    return prev, abs(cur - prev)


def _phase_constants(p: TmstParams, l):
    nu = nu_thermal(p.omega_a, p.T)
    pj = math.exp(-0.5 * l * l * nu * math.exp(-2.0 * p.r))
    pk = math.exp(-0.5 * l * l * nu * math.exp(2.0 * p.r))
    return pj, pk


def quadrature_correlators(p: TmstParams, l: float, bins: int):
    """(szz, sxx) by brute-force bin quadrature, absolute target 1e-7.

    The momentum integrals are Gaussian characteristic functions evaluated
    in closed form; the position bin integrals use per-bin Gauss-Legendre
    panels against conditional erf sums over ``bins`` bins per side.
    """
    if p.phi != 0.0:
        raise InvalidInputError("quadrature correlators assume phi = 0")
    if p.omega_a != p.omega_b:
        raise InvalidInputError("quadrature correlators require equal frequencies")
    if not math.isfinite(l) or l <= 0:
        raise InvalidInputError("bin size l must be finite and > 0")
    if bins < 1:
        raise InvalidInputError("bins must be >= 1")
    nu, var, _ = _marginal_scalars(p)
    coverage = bins * l / math.sqrt(var)
    if coverage < 8.0:
        raise AccuracyError(
            f"bin budget exhausted: {bins} bins of size {l} cover only "
            f"{coverage:.1f} position standard deviations (need >= 8)",
            estimate=math.erfc(coverage / math.sqrt(2.0)),
        )
    szz, err_z = _refined_pair_quadrature(p, l, bins, False, 5e-9)
    aa, err_a = _refined_pair_quadrature(p, l, bins, True, 5e-9)
    pj, pk = _phase_constants(p, l)
    sxx = 2.0 * aa * (pj + pk)
    if err_z + 2.0 * err_a > 1e-7:
        raise AccuracyError(
            "quadrature correlators did not reach the 1e-7 target",
            estimate=err_z + 2.0 * err_a,
        )
    return szz, sxx


def quadrature_syy(p: TmstParams, l: float, bins: int) -> float:
    """<Sy Sy> by the same quadrature route (phase weight Pk - Pj)."""
    if p.phi != 0.0:
        raise InvalidInputError("quadrature correlators assume phi = 0")
    aa, _ = _refined_pair_quadrature(p, l, bins, True, 5e-9)
    pj, pk = _phase_constants(p, l)
    return 2.0 * aa * (pk - pj)


# ---------------------------------------------------------------------------
# independent matrix exponential (cross-check for the symplectic generator)
# ---------------------------------------------------------------------------

def taylor_expm(M: np.ndarray, order: int = 20) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential, independent of scipy."""
    M = np.asarray(M, dtype=float)
    norm = np.max(np.abs(M))
    squarings = max(0, int(math.ceil(math.log2(max(norm, 1e-300)))) + 1)
    A = M / (2.0 ** squarings)
    out = np.eye(M.shape[0])
    term = np.eye(M.shape[0])
    for k in range(1, order + 1):
        term = term @ A / k
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out
