"""Covariance-matrix algebra for two-mode Gaussian states.

Conventions (used everywhere in this package):

* quadrature ordering ``(q1, q2, p1, p2)``, natural units (hbar = k_B = 1);
* covariance normalized so the vacuum is the identity,
  ``sigma_ij = <xi_i xi_j + xi_j xi_i> - 2 <xi_i><xi_j>``;
* Wigner function ``W(xi) = exp(-(xi-mu)^T sigma^-1 (xi-mu)) / (pi^2 sqrt(det sigma))``,
  i.e. the sampling covariance of W as a probability density is ``sigma / 2``;
* logarithmic negativity in base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import InvalidInputError, NumericalDomainError

__all__ = [
    "OMEGA",
    "MODE_BLOCK_PERM",
    "GaussianState",
    "TmstParams",
    "nu_thermal",
    "symplectic_from_hamiltonian",
    "squeezing_hamiltonian",
    "squeezing_symplectic",
    "thermal_state",
    "tmst_state",
    "wigner_eval",
    "log_negativity",
    "pt_symplectic_eigenvalues",
    "symplectic_check",
]

# Symplectic form in (q1, q2, p1, p2) ordering: Omega = [[0, -I], [I, 0]].
OMEGA = np.array(
    [
        [0.0, 0.0, -1.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ]
)

# Permutation taking (q1, q2, p1, p2) to the mode-block ordering
# (q1, p1, q2, p2) used for partial-transpose bookkeeping.
MODE_BLOCK_PERM = np.array([0, 2, 1, 3])


def _as_matrix(m, name="matrix"):
    arr = np.asarray(m, dtype=float)
    if arr.shape != (4, 4):
        raise InvalidInputError(f"{name} must be 4x4, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


def _as_vector(v, name="vector"):
    arr = np.asarray(v, dtype=float)
    if arr.shape != (4,):
        raise InvalidInputError(f"{name} must have 4 entries, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class GaussianState:
    """Two-mode Gaussian state: covariance matrix plus displacement.

    ``cov`` must be symmetric (tolerance 1e-12).  Physicality (all
    symplectic eigenvalues >= 1 - 1e-9) is checked on construction.
    """

    cov: np.ndarray
    disp: np.ndarray

    def __init__(self, cov, disp=None, check_physical=True):
        cov = _as_matrix(cov, "covariance")
        # symmetry to 1e-12 at unit scale; floating-point products of large
        # symplectic factors are only symmetric to relative rounding error
        sym_tol = 1e-12 * max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > sym_tol:
            raise InvalidInputError("covariance matrix is not symmetric")
        cov = 0.5 * (cov + cov.T)
        disp = np.zeros(4) if disp is None else _as_vector(disp, "displacement")
        if check_physical:
            # physicality as the Hermitian condition cov + i Omega >= 0:
            # unlike the symplectic spectrum of strongly squeezed matrices,
            # a Hermitian eigenproblem is perfectly conditioned, with
            # absolute error ~ eps * ||cov||
            w_min = float(np.linalg.eigvalsh(cov + 1j * OMEGA).min())
            tol = 1e-9 * max(1.0, float(np.max(np.abs(cov))))
            if w_min < -tol:
                raise NumericalDomainError(
                    f"unphysical covariance: min eig(cov + i Omega) = {w_min}"
                )
        object.__setattr__(self, "cov", cov)
        object.__setattr__(self, "disp", disp)


@dataclass(frozen=True)
class TmstParams:
    """Parameters of a two-mode squeezed thermal state.

    r       squeezing magnitude (>= 0)
    phi     squeezing angle in radians
    T       temperature (>= 0; T = 0 is handled exactly, never by a limit)
    omega_a, omega_b   mode frequencies (> 0)
    """

    r: float
    phi: float = 0.0
    T: float = 0.0
    omega_a: float = 1.0
    omega_b: float = 1.0

    def __post_init__(self):
        for name in ("r", "phi", "T", "omega_a", "omega_b"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"{name} must be finite")
        if self.r < 0:
            raise InvalidInputError("squeezing r must be >= 0")
        if self.T < 0:
            raise InvalidInputError("temperature T must be >= 0")
        if self.omega_a <= 0 or self.omega_b <= 0:
            raise InvalidInputError("mode frequencies must be > 0")

    @property
    def nu_a(self):
        return nu_thermal(self.omega_a, self.T)

    @property
    def nu_b(self):
        return nu_thermal(self.omega_b, self.T)


def nu_thermal(omega, T):
    """Thermal covariance scale coth(omega / 2T), with exact T = 0 limit.

    Uses the overflow-safe form 1 + 2/(e^{omega/T} - 1) and returns exactly
    1.0 once omega/T is large enough that the correction underflows.
    """
    if omega <= 0:
        raise InvalidInputError("omega must be > 0")
    if T < 0:
        raise InvalidInputError("temperature T must be >= 0")
    if T == 0:
        return 1.0
    x = omega / T
    if x > 700.0:
        return 1.0
    return 1.0 + 2.0 / math.expm1(x)


def symplectic_check(S, tol=1e-10):
    """Max entrywise residual of S Omega S^T - Omega."""
    S = _as_matrix(S, "symplectic matrix")
    return float(np.max(np.abs(S @ OMEGA @ S.T - OMEGA)))


def symplectic_eigenvalues(cov):
    """Symplectic spectrum of a covariance matrix (two values, each doubled)."""
    ev = np.linalg.eigvals(OMEGA @ cov)
    n = np.sort(np.abs(ev.imag))
    return np.array([n[2], n[3]])


def symplectic_from_hamiltonian(F):
    """Symplectic matrix exp(Omega^-1 Fbar) generated by the quadratic form F.

    F is symmetrized internally; the exponential uses scipy's
    scaling-and-squaring Pade implementation.
    """
    F = _as_matrix(F, "Hamiltonian matrix")
    F_bar = 0.5 * (F + F.T)
    # Omega^-1 = -Omega
    return expm(-OMEGA @ F_bar)


def squeezing_hamiltonian(r, phi=0.0):
    """Quadratic-form matrix generating two-mode squeezing.

    Block structure r * [[-sin(phi) sx, cos(phi) sx], [cos(phi) sx, sin(phi) sx]]
    with sx the 2x2 exchange matrix; feeding it to
    :func:`symplectic_from_hamiltonian` reproduces :func:`squeezing_symplectic`.
    """
    if not math.isfinite(r) or not math.isfinite(phi):
        raise InvalidInputError("r and phi must be finite")
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])
    return r * np.block(
        [[-math.sin(phi) * sx, math.cos(phi) * sx],
         [math.cos(phi) * sx, math.sin(phi) * sx]]
    )


def squeezing_symplectic(r, phi=0.0):
    """Closed-form two-mode squeezing symplectic matrix."""
    if not math.isfinite(r) or not math.isfinite(phi):
        raise InvalidInputError("r and phi must be finite")
    ch, sh = math.cosh(r), math.sinh(r)
    c, s = math.cos(phi) * sh, math.sin(phi) * sh
    return np.array(
        [
            [ch, c, 0.0, s],
            [c, ch, s, 0.0],
            [0.0, s, ch, -c],
            [s, 0.0, -c, ch],
        ]
    )


def thermal_state(omega_a, omega_b, T):
    """Product thermal state diag(nu_a, nu_b, nu_a, nu_b)."""
    nu_a = nu_thermal(omega_a, T)
    nu_b = nu_thermal(omega_b, T)
    return GaussianState(np.diag([nu_a, nu_b, nu_a, nu_b]))


def tmst_state(p: TmstParams) -> GaussianState:
    """Two-mode squeezed thermal state, sigma = S_sq sigma_T S_sq^T, disp = 0."""
    S = squeezing_symplectic(p.r, p.phi)
    sigma_t = thermal_state(p.omega_a, p.omega_b, p.T).cov
    return GaussianState(S @ sigma_t @ S.T)


def wigner_eval(state: GaussianState, xi) -> float:
    """Wigner function of a Gaussian state at phase-space point xi."""
    xi = _as_vector(xi, "phase-space point")
    sigma = state.cov
    det = np.linalg.det(sigma)
    if not np.isfinite(det) or det <= 0:
        raise NumericalDomainError(f"covariance not invertible (det = {det})")
    d = xi - state.disp
    try:
        y = np.linalg.solve(sigma, d)
    except np.linalg.LinAlgError as exc:
        raise NumericalDomainError("singular covariance matrix") from exc
    return float(np.exp(-d @ y) / (np.pi**2 * np.sqrt(det)))


def _pt_invariants(state: GaussianState):
    """(Delta, det sigma) of the partially transposed covariance."""
    m = state.cov[np.ix_(MODE_BLOCK_PERM, MODE_BLOCK_PERM)]
    a = np.linalg.det(m[:2, :2])
    b = np.linalg.det(m[2:, 2:])
    c = np.linalg.det(m[:2, 2:])
    delta = a + b - 2.0 * c
    return delta, np.linalg.det(state.cov)


def pt_symplectic_eigenvalues(state: GaussianState):
    """Symplectic eigenvalues (n-, n+) of the partially transposed covariance."""
    delta, det = _pt_invariants(state)
    disc = delta * delta - 4.0 * det
    if disc < -1e-9:
        raise NumericalDomainError(
            f"negative partial-transpose discriminant {disc}: unphysical input"
        )
    root = math.sqrt(max(disc, 0.0))
    n_plus_sq = 0.5 * (delta + root)
    if n_plus_sq <= 0:
        raise NumericalDomainError("unphysical partial-transpose spectrum")
    # n-^2 = det(sigma)/n+^2 avoids the catastrophic cancellation of
    # (delta - root)/2 when the eigenvalues are far apart
    n_minus_sq = max(det, 0.0) / n_plus_sq
    return math.sqrt(n_minus_sq), math.sqrt(n_plus_sq)


def log_negativity(state: GaussianState) -> float:
    """Logarithmic negativity E_N = max(0, -log2 n-), base 2 throughout."""
    n_minus, _ = pt_symplectic_eigenvalues(state)
    if n_minus == 0.0:
        raise NumericalDomainError("degenerate partial-transpose eigenvalue 0")
    return max(0.0, -math.log2(n_minus))
